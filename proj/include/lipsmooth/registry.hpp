#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipsmooth/approx.hpp"
#include "lipsmooth/box.hpp"
#include "lipsmooth/vec.hpp"

namespace lipsmooth {

// Catalog entry with an exact Lipschitz constant and sound range bounds
// (f(box) is contained in [range_lo, range_hi]).
struct RegistryFunction {
    std::string name;
    ScalarFn evaluator;
    double exact_lip = 0.0;
    double range_lo = 0.0;
    double range_hi = 0.0;
    std::string notes;
};

// Sampled honesty check: random pairs plus short axis steps inside `box`
// must never produce a quotient above exact_lip * (1 + 1e-9); violations
// throw std::logic_error naming the entry.
void verify_registry_entry(const RegistryFunction& fn, const IntervalBox& box,
                           std::uint64_t seed);

// Default catalog on `box`: dist_point, dist_set, coord_max, norm, sawtooth
// (all Lip = 1 exactly) and a seeded random piecewise-affine max with a
// computed constant.  Every entry is verified at construction.
std::vector<RegistryFunction> default_registry(const IntervalBox& box,
                                               std::uint64_t seed = 2026);

// Lookup by name; throws std::invalid_argument listing the known names.
const RegistryFunction& registry_lookup(const std::vector<RegistryFunction>& reg,
                                        const std::string& name);

}  // namespace lipsmooth
