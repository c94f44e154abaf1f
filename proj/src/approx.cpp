#include "lipsmooth/approx.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "lipsmooth/preiss.hpp"
#include "lipsmooth/space.hpp"

namespace lipsmooth {

double core_lip_constant() { return 8020012.0; }

Approximant approx_bounded_core(const ScalarFn& f, const SupPartitionConfig& cfg,
                                const IntervalBox& box, const std::vector<Vec>& probes) {
    auto shared = std::make_shared<const SupPartitionConfig>(cfg);
    auto values = std::make_shared<Vec>();
    values->reserve(shared->points.size());
    for (const Vec& p : shared->points) values->push_back(f(p));

    Approximant a;
    a.evaluator = [shared, values](const Vec& x) {
        const Vec ph = phi_all(*shared, x);
        Vec num(ph.size());
        for (size_t j = 0; j < ph.size(); ++j) num[j] = (*values)[j] * ph[j];
        return preiss_norm(num) / preiss_norm(ph);
    };
    a.claimed_sup_error = 8.0;
    a.claimed_lip = core_lip_constant() * cfg.sf.lip() / cfg.r;
    a.valid_region.box = box;
    a.valid_region.probes = probes;
    a.valid_region.covered.reserve(probes.size());
    size_t hits = 0;
    for (const Vec& p : probes) {
        const bool ok = preiss_norm(phi_all(*shared, p)) >= 1.0;
        a.valid_region.covered.push_back(ok ? 1 : 0);
        hits += ok ? 1 : 0;
    }
    a.valid_region.fraction =
        probes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(probes.size());
    return a;
}

Approximant approx_unit(const ScalarFn& f, double eta, const IntervalBox& box,
                        std::size_t partition_points, double range_bound) {
    const double floor = 8.0 / (range_bound - 1.0);
    if (eta < floor) {
        throw std::invalid_argument("approx_unit: eta below the representable floor " +
                                    std::to_string(floor) + " for range bound " +
                                    std::to_string(range_bound));
    }
    const double s = 8.0 / eta;
    IntervalBox scaled;
    scaled.lo.resize(box.dim());
    scaled.hi.resize(box.dim());
    for (size_t i = 0; i < box.dim(); ++i) {
        scaled.lo[i] = s * box.lo[i];
        scaled.hi[i] = s * box.hi[i];
    }
    ScalarFn F = [f, s](const Vec& u) { return 1.0 + s * f((1.0 / s) * u); };

    SpaceConfig sc{box.dim(), scaled, 1};
    SupPartitionConfig cfg = build_sup_partition(point_sequence(sc, partition_points), 1.0, 0.1,
                                                 SeparatingFunction::euclidean(1));
    std::vector<Vec> scaled_probes;
    scaled_probes.reserve(64);
    {
        SpaceConfig pc{box.dim(), scaled, 1};
        for (const Vec& p : point_sequence(pc, 64)) scaled_probes.push_back(p);
    }
    const Approximant core = approx_bounded_core(F, cfg, scaled, scaled_probes);

    Approximant a;
    ScalarFn inner_eval = core.evaluator;
    a.evaluator = [inner_eval, s](const Vec& x) { return (inner_eval(s * x) - 1.0) / s; };
    a.claimed_sup_error = eta;
    a.claimed_lip = core.claimed_lip;
    a.valid_region.box = box;
    a.valid_region.covered = core.valid_region.covered;
    a.valid_region.fraction = core.valid_region.fraction;
    a.valid_region.probes.reserve(core.valid_region.probes.size());
    for (const Vec& p : core.valid_region.probes) {
        a.valid_region.probes.push_back((1.0 / s) * p);
    }
    return a;
}

Approximant rescale(const std::function<Approximant(const ScalarFn&)>& inner, const ScalarFn& f,
                    double L, double eps) {
    if (!(L > 0.0)) throw std::invalid_argument("rescale: L must be positive");
    if (!(eps > 0.0 && eps <= 2.0)) throw std::invalid_argument("rescale: eps must be in (0, 2]");
    const double in_scale = eps / (2.0 * L);   // argument map of F
    const double out_scale = 0.5 * eps;        // value map of g
    ScalarFn F = [f, in_scale, eps](const Vec& u) { return (2.0 / eps) * f(in_scale * u); };
    Approximant G = inner(F);

    Approximant a;
    ScalarFn geval = G.evaluator;
    a.evaluator = [geval, in_scale, out_scale](const Vec& x) {
        return out_scale * geval((1.0 / in_scale) * x);
    };
    a.claimed_sup_error = out_scale * G.claimed_sup_error;
    a.claimed_lip = G.claimed_lip * L;
    a.valid_region.box = G.valid_region.box;
    a.valid_region.covered = G.valid_region.covered;
    a.valid_region.fraction = G.valid_region.fraction;
    a.valid_region.probes.reserve(G.valid_region.probes.size());
    for (const Vec& p : G.valid_region.probes) a.valid_region.probes.push_back(in_scale * p);
    for (size_t i = 0; i < a.valid_region.box.lo.size(); ++i) {
        a.valid_region.box.lo[i] *= in_scale;
        a.valid_region.box.hi[i] *= in_scale;
    }
    return a;
}

}  // namespace lipsmooth
