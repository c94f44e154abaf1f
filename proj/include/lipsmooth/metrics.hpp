#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipsmooth/approx.hpp"
#include "lipsmooth/box.hpp"

namespace lipsmooth {

// Max quotient |g(x)-g(y)| / ||x-y|| over seeded random pairs (half of them
// long, half short directional steps) and over axis-neighbor pairs of a
// lattice with about `samples` nodes.  This is a LOWER bound on Lip(g):
// acceptance gates compare it against claimed upper bounds, never the other
// way around.  Requires samples >= 2.
double empirical_lipschitz(const ScalarFn& g, const IntervalBox& region, int samples,
                           std::uint64_t seed);

// Max of |f - g| over a lattice with spacing about grid_h (endpoints always
// included).  Requires grid_h > 0.
double sup_error(const ScalarFn& f, const ScalarFn& g, const IntervalBox& region,
                 double grid_h);

// One measured quantity with the bound it is gated against.
struct MetricRow {
    std::string stage;
    std::string metric;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Shortest round-trip decimal form (std::to_chars); used everywhere a double
// is serialized so identical runs produce byte-identical files.
std::string format_double(double v);

// Header "stage,metric,value,bound,pass" followed by one row per metric.
void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows);

}  // namespace lipsmooth
