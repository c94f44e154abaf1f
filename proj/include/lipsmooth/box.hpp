#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "lipsmooth/vec.hpp"

namespace lipsmooth {

// Axis-aligned box given by per-coordinate closed intervals [lo[i], hi[i]].
struct IntervalBox {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }

    bool contains(const Vec& x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }

    // sup-norm distance from x to the box (0 inside).
    double dist_inf(const Vec& x) const {
        double d = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            double di = std::max({lo[i] - x[i], x[i] - hi[i], 0.0});
            d = std::max(d, di);
        }
        return d;
    }

    // Box expanded by t in every direction.
    IntervalBox expanded(double t) const {
        IntervalBox b = *this;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            b.lo[i] -= t;
            b.hi[i] += t;
        }
        return b;
    }

    static IntervalBox cube(std::size_t d, double lo_v, double hi_v) {
        return IntervalBox{Vec(d, lo_v), Vec(d, hi_v)};
    }
};

}  // namespace lipsmooth
