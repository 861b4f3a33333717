#pragma once

#include <array>
#include <vector>

#include "pmroot/errors.hpp"

namespace pmroot {

class PMFunction;

/// Strictly increasing continuous piecewise-linear map on a compact interval.
/// Closed under restriction of a PM function to a lap (up to orientation) and
/// exactly invertible, which is what the orbit extension needs.
class MonotonePL {
public:
    /// xs strictly increasing, ys strictly increasing, equal lengths >= 2.
    MonotonePL(std::vector<double> xs, std::vector<double> ys);

    double lo() const { return xs_.front(); }
    double hi() const { return xs_.back(); }
    double value_lo() const { return ys_.front(); }
    double value_hi() const { return ys_.back(); }

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }
    double eval_inverse(double y) const;

    /// Isolated fixed points in ascending order, endpoints included.
    /// Throws NonIsolatedFixedPoints when a whole piece equals the identity.
    std::vector<double> fixed_points() const;

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

    /// Sub-polyline on [u, v] (u, v inside the current interval).
    MonotonePL restrict(double u, double v) const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// Restriction of F to lap `lap_index`, oriented as an increasing map.
/// Throws WrongLap when the lap is decreasing.
MonotonePL restrict_to_lap(const PMFunction& F, int lap_index);

/// Monotone interpolation seed: a PL backbone through strictly monotone
/// control points with an optional per-leg quadratic reparametrisation
/// (bend in (-1,1); 0 is plain linear interpolation). Exactly invertible.
class Seed {
public:
    Seed(std::vector<double> us, std::vector<double> vs, double bend = 0.0);

    static Seed linear(double u0, double u1, double v0, double v1) {
        return Seed({u0, u1}, {v0, v1}, 0.0);
    }

    double eval(double u) const;
    double operator()(double u) const { return eval(u); }
    double eval_inverse(double v) const;

    bool increasing() const { return increasing_; }
    double bend() const { return bend_; }
    const std::vector<double>& us() const { return us_; }
    const std::vector<double>& vs() const { return vs_; }

private:
    std::vector<double> us_;
    std::vector<double> vs_;
    double bend_ = 0.0;
    bool increasing_ = true;
};

/// How kernels parameterise their free seed.
struct SeedSpec {
    double bend = 0.0; // 0 = linear
};

} // namespace pmroot
