#include "pmroot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pmroot {

EvaluableView make_view(const RootFunction& f) {
    EvaluableView v;
    v.fn = [f](double x) { return f.eval(x); };
    v.boundaries = f.piece_boundaries();
    v.piece = [f](int i, double x) { return f.eval_piece(i, x); };
    return v;
}

EvaluableView make_view(const PMFunction& f) {
    EvaluableView v;
    v.fn = [f](double x) { return f.eval(x); };
    v.boundaries = f.forts().positions;
    v.piece = [f](int, double x) { return f.eval(x); };
    return v;
}

namespace {

std::vector<double> merged_grid(const PMFunction& F, const EvaluableView& f, int grid) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(grid) + F.xs().size() + f.boundaries.size());
    const double a = F.a(), b = F.b();
    for (int i = 0; i < grid; ++i)
        xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(grid - 1));
    xs.insert(xs.end(), F.xs().begin(), F.xs().end());
    xs.insert(xs.end(), f.boundaries.begin(), f.boundaries.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

/// Dense PL resampling of f, for fort counting and height checks.
PMFunction resample(const PMFunction& F, const EvaluableView& f, int points) {
    const double a = F.a(), b = F.b();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(points) + f.boundaries.size());
    for (int i = 0; i < points; ++i)
        xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    xs.insert(xs.end(), f.boundaries.begin(), f.boundaries.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> gx, gy;
    gx.reserve(xs.size());
    gy.reserve(xs.size());
    for (double x : xs) {
        const double y = std::clamp(f.fn(x), a, b);
        if (!gy.empty() && y == gy.back()) continue; // avoid flat steps
        gx.push_back(x);
        gy.push_back(y);
    }
    if (gx.back() != b) {
        if (gy.back() == std::clamp(f.fn(b), a, b)) {
            gx.back() = b;
        } else {
            gx.push_back(b);
            gy.push_back(std::clamp(f.fn(b), a, b));
        }
    }
    return PMFunction::validate({a, b}, std::move(gx), std::move(gy));
}

} // namespace

VerificationReport verify_root(const PMFunction& F, const EvaluableView& f, int grid, double tol,
                               std::optional<int> claimed_height) {
    VerificationReport rep;
    rep.tol = tol;
    rep.claimed_height = claimed_height;
    const double a = F.a(), b = F.b();

    std::array<double, 2> K{0, 0};
    try {
        const auto ci = characteristic_interval(F);
        K = ci.bounds;
        rep.k_defined = true;
    } catch (const PmError&) {
        rep.k_defined = false;
    }

    const auto xs = merged_grid(F, f, grid);
    rep.residual_grid = static_cast<int>(xs.size());
    double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
    double f2min = fmin, f2max = -fmin;
    for (double x : xs) {
        double fx, ffx;
        try {
            fx = f.fn(x);
            ffx = f.fn(std::clamp(fx, a, b));
        } catch (const PmError& e) {
            if (e.code() == ErrorCode::OrbitCapExceeded)
                fail(ErrorCode::EvaluationFailure,
                     "orbit cap exceeded at grid point x = " + std::to_string(x));
            if (rep.eval_failures == 0) rep.first_failure_at = x;
            ++rep.eval_failures;
            rep.sup_residual = std::numeric_limits<double>::infinity();
            continue;
        }
        fmin = std::min(fmin, fx);
        fmax = std::max(fmax, fx);
        f2min = std::min(f2min, ffx);
        f2max = std::max(f2max, ffx);
        const double r = std::abs(ffx - F.eval(x));
        if (r > rep.sup_residual) {
            rep.sup_residual = r;
            rep.residual_argmax = x;
        }
    }

    for (std::size_t i = 0; i < f.boundaries.size(); ++i) {
        const double c = f.boundaries[i];
        double gap = 0.0;
        try {
            gap = std::abs(f.piece(static_cast<int>(i), c) - f.piece(static_cast<int>(i) + 1, c));
        } catch (const PmError&) {
            gap = std::numeric_limits<double>::infinity();
        }
        rep.junction_gaps.emplace_back(c, gap);
        rep.max_junction_gap = std::max(rep.max_junction_gap, gap);
    }

    // Strict monotonicity per piece.
    std::vector<double> cuts{a};
    cuts.insert(cuts.end(), f.boundaries.begin(), f.boundaries.end());
    cuts.push_back(b);
    const int per_piece = 257;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        bool ok = true;
        try {
            double prev = f.fn(cuts[p]);
            double second = f.fn(cuts[p] + (cuts[p + 1] - cuts[p]) / per_piece);
            const bool up = second > prev;
            for (int i = 1; i <= per_piece; ++i) {
                const double x = cuts[p] + (cuts[p + 1] - cuts[p]) * static_cast<double>(i) /
                                               static_cast<double>(per_piece);
                const double y = f.fn(x);
                if (up ? !(y > prev) : !(y < prev)) {
                    ok = false;
                    break;
                }
                prev = y;
            }
        } catch (const PmError&) {
            ok = false;
        }
        rep.piece_monotone_ok.push_back(ok);
        rep.monotone_ok = rep.monotone_ok && ok;
    }

    if (rep.eval_failures == 0) {
        try {
            const PMFunction fr = resample(F, f, 10000);
            rep.root_forts = fr.fort_count();
            rep.root_height = height(fr, 8, 2000000);
        } catch (const PmError&) {
            rep.root_height = HeightReport{};
            rep.root_height.cap = 8;
        }
    }

    constexpr double inc_tol = 1e-12;
    if (rep.k_defined && rep.eval_failures == 0) {
        rep.f_image_in_K = fmin >= K[0] - inc_tol && fmax <= K[1] + inc_tol;
        rep.f2_image_in_K = f2min >= K[0] - inc_tol && f2max <= K[1] + inc_tol;
    }

    if (claimed_height) {
        const bool stab_ok = rep.root_height.is_finite() && *rep.root_height.value == *claimed_height;
        const bool incl_ok = *claimed_height != 2 || (!rep.f_image_in_K && rep.f2_image_in_K);
        rep.height_ok = stab_ok && incl_ok;
    }

    rep.passed = rep.eval_failures == 0 && rep.sup_residual <= tol && rep.max_junction_gap <= tol &&
                 rep.monotone_ok && rep.height_ok;
    return rep;
}

std::vector<std::pair<double, double>> sample_table(const EvaluableView& g,
                                                    std::array<double, 2> domain, int points) {
    if (points < 2) fail(ErrorCode::PreconditionFailed, "need at least two sample points");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(points) + g.boundaries.size());
    for (int i = 0; i < points; ++i)
        xs.push_back(domain[0] + (domain[1] - domain[0]) * static_cast<double>(i) /
                                     static_cast<double>(points - 1));
    xs.insert(xs.end(), g.boundaries.begin(), g.boundaries.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::pair<double, double>> rows;
    rows.reserve(xs.size());
    for (double x : xs) rows.emplace_back(x, g.fn(x));
    return rows;
}

std::string to_csv(const std::vector<std::pair<double, double>>& rows) {
    std::string out = "x,y\n";
    char buf[96];
    for (const auto& [x, y] : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, y);
        out += buf;
    }
    return out;
}

} // namespace pmroot
