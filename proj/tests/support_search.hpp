#pragma once

// Test-only perturbation-grid search for the 1D stability support,
// independent of stsp_1d's closed form. Along a fixed sign-corner ray the
// support-change indicator need not be monotone in the radius (the
// zero-solution pocket opens and closes again once y crosses the origin), so
// the first change is located by a fine geometric scan and only then refined
// by bisection inside one grid cell.

#include "lassocond/oracle1d.hpp"
#include "lassocond/rng.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lassocond::testing {

inline double stsp_bruteforce(const Instance1D& inst, int directions, std::uint64_t seed) {
    SupportSet base = support_1d(inst);
    double best = std::numeric_limits<double>::infinity();
    const int dim = inst.N() + 1;
    const double r_lo = 1e-7, r_hi = 8.0, ratio = 1.03;

    for (int d = 0; d < directions; ++d) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(d));
        std::vector<double> sgn(static_cast<size_t>(dim));
        for (auto& s : sgn) s = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        auto changed = [&](double r) {
            Instance1D p = inst;
            p.y += sgn[0] * r;
            for (int i = 0; i < inst.N(); ++i) p.a(i) += sgn[static_cast<size_t>(i + 1)] * r;
            try {
                return support_1d(p) != base;
            } catch (const TieError&) {
                return true;
            }
        };

        double prev = 0.0;
        double first_hit = -1.0;
        for (double r = r_lo; r <= r_hi && r < best; r *= ratio) {
            if (changed(r)) {
                first_hit = r;
                break;
            }
            prev = r;
        }
        if (first_hit < 0) continue;
        double lo = prev, hi = first_hit;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            (changed(mid) ? hi : lo) = mid;
        }
        best = std::min(best, hi);
    }
    return best;
}

}  // namespace lassocond::testing
