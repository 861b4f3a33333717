#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pmroot/pm_function.hpp"

namespace fixtures {

using pmroot::PMFunction;

// Canonical maps used across the suite (also shipped under fixtures/ as JSON).

inline PMFunction f1() {
    return PMFunction::validate({0, 1}, {0, 0.5, 0.6, 0.7, 0.8, 1.0},
                                {0.10, 0.30, 0.05, 0.40, 0.00, 0.45});
}

inline PMFunction f2() {
    return PMFunction::validate({0, 1}, {0, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 1.0},
                                {0.50, 0.40, 0.58, 0.45, 0.55, 0.42, 0.60, 0.50});
}

inline PMFunction f3() {
    return PMFunction::validate({0, 1}, {0, 0.5, 0.7, 1.0}, {0.10, 0.40, 0.00, 0.30});
}

inline PMFunction tent() { return PMFunction::validate({0, 1}, {0, 0.5, 1}, {0, 1, 0}); }

inline PMFunction lin() { return PMFunction::validate({0, 1}, {0, 1}, {0.5, 1.0}); }

inline PMFunction identity01() { return pmroot::identity_map(0, 1); }

// First-lap variants hitting the other endpoint-value cases: f1_case1 has
// fixed c_0 with F(c_2) = c_0 and M = c_1; f1_case2 has fixed c_1 = F(c_3).
inline PMFunction f1_case1() {
    return PMFunction::validate({0, 1}, {0, 0.5, 0.6, 0.7, 0.8, 1.0},
                                {0.00, 0.30, 0.00, 0.40, 0.00, 0.50});
}

inline PMFunction f1_case2() {
    return PMFunction::validate({0, 1}, {0, 0.5, 0.6, 0.7, 0.8, 1.0},
                                {0.10, 0.50, 0.05, 0.50, 0.00, 0.45});
}

// Middle-lap variants of f2 for the non-generic endpoint cases.
inline PMFunction f2_case1() {
    return PMFunction::validate({0, 1}, {0, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 1.0},
                                {0.50, 0.40, 0.60, 0.45, 0.60, 0.42, 0.60, 0.50});
}

inline PMFunction f2_case2() {
    return PMFunction::validate({0, 1}, {0, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 1.0},
                                {0.50, 0.40, 0.58, 0.40, 0.55, 0.40, 0.60, 0.50});
}

// Decreasing-class corner chains (the non-strict inequality variants).
inline PMFunction f2_mdc1() {
    return PMFunction::validate({0, 1}, {0, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 1.0},
                                {0.50, 0.40, 0.55, 0.45, 0.55, 0.40, 0.60, 0.50});
}

inline PMFunction f2_mdc3() {
    return PMFunction::validate({0, 1}, {0, 0.15, 0.3, 0.4, 0.6, 0.7, 0.85, 1.0},
                                {0.50, 0.40, 0.60, 0.45, 0.55, 0.45, 0.60, 0.50});
}

// Middle-lap map with a four-pocket left chain (s = 3). Its pocket between
// c_1 and c_3 has max 0.52 above F(c_{k+2}) = 0.44, so it separates the
// min-based pocket conditions from a literal double-max reading.
inline PMFunction mid_s3() {
    return PMFunction::validate(
        {0, 1}, {0, 0.06, 0.12, 0.18, 0.24, 0.30, 0.36, 0.42, 0.58, 0.66, 0.80, 1.0},
        {0.56, 0.44, 0.52, 0.44, 0.56, 0.42, 0.56, 0.46, 0.54, 0.44, 0.55, 0.50});
}

/// Deterministic random valid PM self-maps of [0,1] with up to `max_pts`
/// breakpoints; breakpoint gaps and ordinate jumps are bounded below so the
/// maps stay numerically well conditioned under iteration.
class RandomPM {
public:
    explicit RandomPM(unsigned seed) : rng_(seed) {}

    PMFunction next(int max_pts = 8) {
        std::uniform_int_distribution<int> npts(2, max_pts);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const int n = npts(rng_);
        std::vector<double> xs{0.0}, ys;
        while (static_cast<int>(xs.size()) < n - 1) {
            const double x = unif(rng_);
            bool ok = x > 0.02 && x < 0.98;
            for (double prev : xs) ok = ok && std::abs(x - prev) > 0.02;
            if (ok) xs.push_back(x);
        }
        xs.push_back(1.0);
        std::sort(xs.begin(), xs.end());
        ys.push_back(unif(rng_));
        for (int i = 1; i < n; ++i) {
            double y = unif(rng_);
            while (std::abs(y - ys.back()) < 0.05) y = unif(rng_);
            ys.push_back(y);
        }
        return PMFunction::validate({0, 1}, std::move(xs), std::move(ys));
    }

private:
    std::mt19937 rng_;
};

} // namespace fixtures
