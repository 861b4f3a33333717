#include "pmroot/pm_function.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstring>
#include <sstream>

namespace pmroot {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsortedAbscissae: return "UnsortedAbscissae";
        case ErrorCode::FlatSegment: return "FlatSegment";
        case ErrorCode::NonSelfMap: return "NonSelfMap";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::RangeMismatch: return "RangeMismatch";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NoCharacteristicInterval: return "NoCharacteristicInterval";
        case ErrorCode::OutOfLapRange: return "OutOfLapRange";
        case ErrorCode::WrongLap: return "WrongLap";
        case ErrorCode::NoPattern: return "NoPattern";
        case ErrorCode::NotReversing: return "NotReversing";
        case ErrorCode::EvenFixedPointCount: return "EvenFixedPointCount";
        case ErrorCode::NonIsolatedFixedPoints: return "NonIsolatedFixedPoints";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::AnchorOutOfRange: return "AnchorOutOfRange";
        case ErrorCode::OrbitCapExceeded: return "OrbitCapExceeded";
        case ErrorCode::MultipleInteriorFixedPoints: return "MultipleInteriorFixedPoints";
        case ErrorCode::ConditionsNotMet: return "ConditionsNotMet";
        case ErrorCode::RangeViolation: return "RangeViolation";
        case ErrorCode::AssemblyAmbiguous: return "AssemblyAmbiguous";
        case ErrorCode::NoApplicableTheorem: return "NoApplicableTheorem";
        case ErrorCode::EvaluationFailure: return "EvaluationFailure";
        case ErrorCode::RecipeMismatch: return "RecipeMismatch";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

PMFunction PMFunction::validate(std::array<double, 2> domain, std::vector<double> xs,
                                std::vector<double> ys) {
    const double a = domain[0], b = domain[1];
    if (!(a < b)) fail(ErrorCode::UnsortedAbscissae, "domain must satisfy a < b");
    if (xs.size() < 2 || xs.size() != ys.size())
        fail(ErrorCode::UnsortedAbscissae, "need equal-length lists with at least two breakpoints");
    if (xs.front() != a || xs.back() != b)
        fail(ErrorCode::UnsortedAbscissae, "abscissae must start at a and end at b");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1]))
            fail(ErrorCode::UnsortedAbscissae,
                 "abscissae not strictly increasing at index " + std::to_string(i));
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!std::isfinite(ys[i]) || ys[i] < a || ys[i] > b)
            fail(ErrorCode::NonSelfMap,
                 "ordinate " + std::to_string(ys[i]) + " at index " + std::to_string(i) +
                     " lies outside [a,b]");
    }
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
        if (ys[i] == ys[i + 1])
            fail(ErrorCode::FlatSegment,
                 "equal consecutive ordinates at index " + std::to_string(i));

    PMFunction f;
    f.domain_ = domain;
    f.xs_ = std::move(xs);
    f.ys_ = std::move(ys);
    // Slope signs are exact: flat segments were rejected above.
    for (std::size_t i = 1; i + 1 < f.xs_.size(); ++i) {
        const bool up_before = f.ys_[i] > f.ys_[i - 1];
        const bool up_after = f.ys_[i + 1] > f.ys_[i];
        if (up_before != up_after) {
            f.forts_.positions.push_back(f.xs_[i]);
            f.fort_breakpoint_idx_.push_back(static_cast<int>(i));
        }
    }
    return f;
}

double PMFunction::c(int i) const {
    const int v = forts_.count();
    if (i < 0 || i > v + 1) fail(ErrorCode::OutOfDomain, "fort index out of range");
    if (i == 0) return a();
    if (i == v + 1) return b();
    return forts_.positions[static_cast<std::size_t>(i - 1)];
}

int PMFunction::lap_containing(double x) const {
    if (x < a() || x > b()) fail(ErrorCode::OutOfDomain, "point outside domain");
    const auto& p = forts_.positions;
    auto it = std::lower_bound(p.begin(), p.end(), x);
    return static_cast<int>(it - p.begin());
}

int PMFunction::lap_direction(int i) const {
    const int v = forts_.count();
    if (i < 0 || i > v) fail(ErrorCode::OutOfDomain, "lap index out of range");
    const int j = (i == 0) ? 0 : fort_breakpoint_idx_[static_cast<std::size_t>(i - 1)];
    return ys_[static_cast<std::size_t>(j + 1)] > ys_[static_cast<std::size_t>(j)] ? 1 : -1;
}

double PMFunction::eval(double x) const {
    if (!(x >= a() && x <= b())) fail(ErrorCode::OutOfDomain, "eval point outside domain");
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (j + 1 >= xs_.size()) j = xs_.size() - 2;
    if (x == xs_[j]) return ys_[j];
    if (x == xs_[j + 1]) return ys_[j + 1];
    const double t = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
    double y = ys_[j] * (1.0 - t) + ys_[j + 1] * t;
    const double lo = std::min(ys_[j], ys_[j + 1]);
    const double hi = std::max(ys_[j], ys_[j + 1]);
    return std::clamp(y, lo, hi);
}

std::array<double, 2> PMFunction::range() const {
    auto [lo, hi] = std::minmax_element(ys_.begin(), ys_.end());
    return {*lo, *hi};
}

double PMFunction::lap_inverse(int lap_index, double y) const {
    const int v = forts_.count();
    if (lap_index < 0 || lap_index > v) fail(ErrorCode::OutOfLapRange, "no such lap");
    const std::size_t i0 =
        lap_index == 0 ? 0 : static_cast<std::size_t>(fort_breakpoint_idx_[lap_index - 1]);
    const std::size_t i1 = lap_index == v ? xs_.size() - 1
                                          : static_cast<std::size_t>(fort_breakpoint_idx_[lap_index]);
    const bool increasing = ys_[i0 + 1] > ys_[i0];
    const double lo = increasing ? ys_[i0] : ys_[i1];
    const double hi = increasing ? ys_[i1] : ys_[i0];
    constexpr double slack = 1e-12;
    if (y < lo - slack || y > hi + slack)
        fail(ErrorCode::OutOfLapRange, "value " + std::to_string(y) + " outside lap image");
    y = std::clamp(y, lo, hi);
    // Piece scan within the lap; ordinates are monotone along it.
    for (std::size_t j = i0; j < i1; ++j) {
        const double ya = ys_[j], yb = ys_[j + 1];
        if (y == ya) return xs_[j];
        if (y == yb) return xs_[j + 1];
        const bool inside = increasing ? (ya < y && y < yb) : (yb < y && y < ya);
        if (inside) {
            const double t = (y - ya) / (yb - ya);
            return xs_[j] + t * (xs_[j + 1] - xs_[j]);
        }
    }
    if (increasing) return y <= ys_[i0] ? xs_[i0] : xs_[i1];
    return y >= ys_[i0] ? xs_[i0] : xs_[i1];
}

std::vector<double> PMFunction::preimages(double y) const {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
        const double ya = ys_[j], yb = ys_[j + 1];
        if (y == ya) {
            out.push_back(xs_[j]);
        } else if ((ya < y && y < yb) || (yb < y && y < ya)) {
            const double t = (y - ya) / (yb - ya);
            out.push_back(xs_[j] + t * (xs_[j + 1] - xs_[j]));
        }
    }
    if (!ys_.empty() && y == ys_.back()) out.push_back(xs_.back());
    std::sort(out.begin(), out.end());
    const double tol = 1e-14 * width();
    std::vector<double> dedup;
    for (double x : out)
        if (dedup.empty() || x - dedup.back() > tol) dedup.push_back(x);
    return dedup;
}

PMFunction identity_map(double a, double b) {
    return PMFunction::validate({a, b}, {a, b}, {a, b});
}

PMFunction compose(const PMFunction& F, const PMFunction& G, std::size_t breakpoint_budget,
                   bool* lossy) {
    if (lossy) *lossy = false;
    const auto rg = G.range();
    if (rg[0] < F.a() || rg[1] > F.b())
        fail(ErrorCode::RangeMismatch, "range of inner map leaves domain of outer map");

    const auto& gx = G.xs();
    const auto& gy = G.ys();
    const auto& fx = F.xs();

    // Breakpoints: G's own plus preimages under G of F's interior breakpoints.
    struct Node {
        double x;
        double y;     // exact G(x) when known
        bool exact_y; // true for G breakpoints and preimages of F breakpoints
    };
    std::vector<Node> nodes;
    nodes.reserve(gx.size());
    for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
        nodes.push_back({gx[i], gy[i], true});
        const double ya = gy[i], yb = gy[i + 1];
        const double lo = std::min(ya, yb), hi = std::max(ya, yb);
        auto first = std::upper_bound(fx.begin(), fx.end(), lo);
        auto last = std::lower_bound(fx.begin(), fx.end(), hi);
        if (first < last && nodes.size() + static_cast<std::size_t>(last - first) > breakpoint_budget)
            fail(ErrorCode::BudgetExceeded, "composition breakpoint budget exceeded");
        std::vector<Node> piece;
        for (auto it = first; it != last; ++it) {
            const double bkp = *it;
            const double t = (bkp - ya) / (yb - ya);
            const double xp = gx[i] + t * (gx[i + 1] - gx[i]);
            if (xp > gx[i] && xp < gx[i + 1]) piece.push_back({xp, bkp, true});
        }
        std::sort(piece.begin(), piece.end(), [](const Node& a, const Node& b) { return a.x < b.x; });
        nodes.insert(nodes.end(), piece.begin(), piece.end());
        if (nodes.size() > breakpoint_budget)
            fail(ErrorCode::BudgetExceeded, "composition breakpoint budget exceeded");
    }
    nodes.push_back({gx.back(), gy.back(), true});

    const double xtol = 1e-14 * G.width();
    std::vector<double> cx, cy;
    cx.reserve(nodes.size());
    cy.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!cx.empty() && nodes[i].x - cx.back() <= xtol) {
            if (lossy && nodes[i].x != cx.back()) *lossy = true;
            if (i + 1 < nodes.size()) continue;
            while (!cx.empty() && nodes[i].x - cx.back() <= xtol) {
                cx.pop_back();
                cy.pop_back();
            }
        }
        cx.push_back(nodes[i].x);
        cy.push_back(F.eval(nodes[i].exact_y ? nodes[i].y : G.eval(nodes[i].x)));
    }
    // Collapse numerically flat steps so the composite stays a valid PM map.
    std::vector<double> qx, qy;
    qx.reserve(cx.size());
    qy.reserve(cy.size());
    for (std::size_t i = 0; i < cx.size(); ++i) {
        if (!qy.empty() && cy[i] == qy.back()) {
            if (lossy) *lossy = true;
            if (i + 1 < cx.size()) continue;
            while (!qy.empty() && cy[i] == qy.back()) {
                qx.pop_back();
                qy.pop_back();
            }
        }
        qx.push_back(cx[i]);
        qy.push_back(cy[i]);
    }
    return PMFunction::validate({G.a(), G.b()}, std::move(qx), std::move(qy));
}

PMFunction iterate(const PMFunction& F, int n, std::size_t breakpoint_budget) {
    if (n < 1) fail(ErrorCode::OutOfDomain, "iterate order must be >= 1");
    PMFunction acc = F;
    for (int i = 1; i < n; ++i) acc = compose(F, acc, breakpoint_budget);
    return acc;
}

std::string HeightReport::to_string() const {
    if (value) return std::to_string(*value);
    return "infinite(cap=" + std::to_string(cap) + ")";
}

std::optional<CharInterval> find_covering_lap(const PMFunction& F) {
    const auto rg = F.range();
    constexpr double tol = 1e-12;
    for (int i = 0; i < F.lap_count(); ++i) {
        const auto lp = F.lap(i);
        if (rg[0] >= lp[0] - tol && rg[1] <= lp[1] + tol) return CharInterval{i, lp};
    }
    return std::nullopt;
}

namespace {

// Cross-check of a finite height m >= 1: m must be the smallest positive j
// such that range(F^j) fits inside a single lap of F^j.
bool inclusion_agrees(const std::vector<PMFunction>& iterates, int m) {
    for (int j = 1; j <= m && j < static_cast<int>(iterates.size()); ++j) {
        const bool covered = find_covering_lap(iterates[static_cast<std::size_t>(j - 1)]).has_value();
        if (covered != (j == m)) return false;
    }
    return true;
}

} // namespace

HeightReport height(const PMFunction& F, int cap, std::size_t breakpoint_budget) {
    HeightReport rep;
    rep.cap = cap;
    rep.fort_counts.push_back(0); // N(F^0) = N(identity)
    std::vector<PMFunction> iterates;
    iterates.push_back(F);
    rep.fort_counts.push_back(F.fort_count());
    if (rep.fort_counts[0] == rep.fort_counts[1]) {
        rep.value = 0;
        return rep;
    }
    bool chain_lossy = false;
    for (int i = 2; i <= cap; ++i) {
        try {
            bool lossy = false;
            iterates.push_back(compose(F, iterates.back(), breakpoint_budget, &lossy));
            chain_lossy = chain_lossy || lossy;
        } catch (const PmError& e) {
            if (e.code() == ErrorCode::BudgetExceeded) {
                rep.budget_exhausted = true;
                return rep;
            }
            if (chain_lossy) {
                // the collapsed composite degenerated outright
                rep.saturated = true;
                return rep;
            }
            throw;
        }
        rep.fort_counts.push_back(iterates.back().fort_count());
        const int prev = rep.fort_counts[static_cast<std::size_t>(i - 1)];
        const int next = rep.fort_counts[static_cast<std::size_t>(i)];
        if (next < prev) {
            // Fort counts of exact iterates never decrease; a computed drop
            // proves the collapsed composites are artifacts.
            if (!chain_lossy)
                throw std::logic_error(
                    "internal: fort count decreased on a numerically faithful chain at iterate " +
                    std::to_string(i));
            rep.saturated = true;
            return rep;
        }
        if (next == prev) {
            if (inclusion_agrees(iterates, i - 1)) {
                rep.value = i - 1;
                return rep;
            }
            // A faithful chain must agree: treat disagreement as a defect.
            // A lossy chain has artifact counts: no finite height certified.
            if (!chain_lossy)
                throw std::logic_error(
                    "internal: stabilization height disagrees with range-inclusion "
                    "characterization at iterate " +
                    std::to_string(i - 1));
            rep.saturated = true;
            return rep;
        }
    }
    return rep;
}

CharInterval characteristic_interval(const PMFunction& F, int height_cap) {
    const auto h = height(F, height_cap);
    if (!h.is_finite() || *h.value > 1)
        fail(ErrorCode::NoCharacteristicInterval,
             "height " + h.to_string() + " exceeds 1; no lap covers the range");
    if (*h.value == 0) return CharInterval{0, {F.a(), F.b()}};
    auto lap = find_covering_lap(F);
    if (!lap)
        throw std::logic_error("internal: height 1 but no lap covers the range");
    return *lap;
}

PMFunction mirror_conjugate(const PMFunction& F) {
    const double s = F.a() + F.b();
    const std::size_t n = F.xs().size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = s - F.xs()[n - 1 - i];
        ys[i] = s - F.ys()[n - 1 - i];
    }
    return PMFunction::validate({F.a(), F.b()}, std::move(xs), std::move(ys));
}

std::uint64_t content_hash(const PMFunction& F) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double d) {
        const auto bits = std::bit_cast<std::uint64_t>(d);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(F.a());
    mix(F.b());
    for (double x : F.xs()) mix(x);
    for (double y : F.ys()) mix(y);
    return h;
}

} // namespace pmroot
