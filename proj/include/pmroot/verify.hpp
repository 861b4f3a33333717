#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmroot/engines.hpp"
#include "pmroot/pm_function.hpp"

namespace pmroot {

/// Anything verify can drive: a pointwise evaluator plus the piece layout
/// needed for junction and monotonicity checks.
struct EvaluableView {
    std::function<double(double)> fn;
    std::vector<double> boundaries; // interior piece boundaries, ascending
    /// Closed-interval evaluation of piece i (pieces split at `boundaries`).
    std::function<double(int, double)> piece;
};

EvaluableView make_view(const RootFunction& f);
EvaluableView make_view(const PMFunction& f);

struct VerificationReport {
    double sup_residual = 0.0;
    double residual_argmax = 0.0;
    int residual_grid = 0;
    std::vector<std::pair<double, double>> junction_gaps; // (boundary, gap)
    double max_junction_gap = 0.0;
    std::vector<bool> piece_monotone_ok;
    bool monotone_ok = true;
    int root_forts = 0;
    HeightReport root_height;
    bool k_defined = false;
    bool f_image_in_K = false;
    bool f2_image_in_K = false;
    std::optional<int> claimed_height;
    bool height_ok = true; // resampled stabilization and range inclusion agree with the claim
    int eval_failures = 0;
    double first_failure_at = 0.0;
    double tol = 1e-8;
    bool passed = false;
};

/// Oracle-independent check of a claimed square root: residual of f(f(x))
/// against F on a uniform grid plus all breakpoints, junction gaps, piecewise
/// strict monotonicity, fort count and height of a dense PL resampling, and
/// the characteristic-interval inclusions. Throws EvaluationFailure when the
/// kernel orbit cap is exceeded at a grid point.
VerificationReport verify_root(const PMFunction& F, const EvaluableView& f, int grid = 5001,
                               double tol = 1e-8, std::optional<int> claimed_height = std::nullopt);

inline VerificationReport verify_root(const PMFunction& F, const RootFunction& f, int grid = 5001,
                                      double tol = 1e-8) {
    return verify_root(F, make_view(f), grid, tol, 2);
}

/// Uniform samples merged with the view's piece boundaries, ascending x.
std::vector<std::pair<double, double>> sample_table(const EvaluableView& g,
                                                    std::array<double, 2> domain, int points);

/// CSV with header "x,y", 17 significant digits.
std::string to_csv(const std::vector<std::pair<double, double>>& rows);

} // namespace pmroot
