#include "pmroot/engines.hpp"

#include <algorithm>
#include <cmath>

namespace pmroot {

namespace {

constexpr double kJunctionTol = 1e-11;
constexpr double kRangeTol = 1e-12;

double kernel_eval(const KernelVariant& k, double x) {
    return std::visit([&](const auto& ker) { return ker.eval(x); }, k);
}

double kernel_eval_inverse(const KernelVariant& k, double y) {
    return std::visit([&](const auto& ker) { return ker.eval_inverse(y); }, k);
}

std::array<double, 2> kernel_image(const KernelVariant& k) {
    return std::visit(
        [](const auto& ker) {
            return std::array<double, 2>{ker.image_lo(), ker.image_hi()};
        },
        k);
}

/// Value range of the first-generation piece kernel^{-1} . F on lap `lap`.
std::array<double, 2> gen1_range(const PMFunction& F, const KernelVariant& k, int lap) {
    const double v1 = kernel_eval_inverse(k, F.eval(F.c(lap)));
    const double v2 = kernel_eval_inverse(k, F.eval(F.c(lap + 1)));
    return {std::min(v1, v2), std::max(v1, v2)};
}

std::array<double, 2> f_image_on(const PMFunction& F, double lo, double hi) {
    double mn = F.eval(lo), mx = mn;
    const double vhi = F.eval(hi);
    mn = std::min(mn, vhi);
    mx = std::max(mx, vhi);
    for (std::size_t i = 0; i < F.xs().size(); ++i)
        if (F.xs()[i] > lo && F.xs()[i] < hi) {
            mn = std::min(mn, F.ys()[i]);
            mx = std::max(mx, F.ys()[i]);
        }
    return {mn, mx};
}

bool contains(const std::array<double, 2>& outer, const std::array<double, 2>& inner) {
    return inner[0] >= outer[0] - kRangeTol && inner[1] <= outer[1] + kRangeTol;
}

} // namespace

const char* to_string(Theorem t) {
    switch (t) {
        case Theorem::T21: return "T21";
        case Theorem::T22: return "T22";
        case Theorem::T23: return "T23";
        case Theorem::T24: return "T24";
    }
    return "T21";
}

double RootFunction::eval(double x) const {
    if (mirrored_) return reflect_sum_ - eval_inner(reflect_sum_ - x);
    return eval_inner(x);
}

double RootFunction::eval_inner(double x) const {
    constexpr double slack = 1e-12;
    if (x < inner_.a() - slack || x > inner_.b() + slack)
        fail(ErrorCode::OutOfDomain, "root eval outside domain");
    x = std::clamp(x, inner_.a(), inner_.b());
    return eval_piece_inner(inner_.lap_containing(x), x);
}

double RootFunction::eval_piece_inner(int lap_index, double x) const {
    const LapPiece& piece = pieces_[static_cast<std::size_t>(lap_index)];
    switch (piece.kind) {
        case PieceKind::Kernel: return kernel_eval(kernel_, x);
        case PieceKind::KernelInv: return kernel_eval_inverse(kernel_, inner_.eval(x));
        case PieceKind::LapInv:
            return inner_.lap_inverse(piece.via_lap, kernel_eval(kernel_, inner_.eval(x)));
    }
    fail(ErrorCode::EvaluationFailure, "unknown piece kind");
}

double RootFunction::eval_piece(int lap_index, double x) const {
    if (!mirrored_) return eval_piece_inner(lap_index, x);
    const int inner_lap = inner_.lap_count() - 1 - lap_index;
    return reflect_sum_ - eval_piece_inner(inner_lap, reflect_sum_ - x);
}

std::vector<double> RootFunction::piece_boundaries() const {
    std::vector<double> out = inner_.forts().positions;
    if (mirrored_) {
        for (double& x : out) x = reflect_sum_ - x;
        std::reverse(out.begin(), out.end());
    }
    return out;
}

std::array<double, 2> RootFunction::domain() const { return {inner_.a(), inner_.b()}; }

std::array<double, 2> RootFunction::K_bounds() const {
    const auto lp = inner_.lap(k_lap_);
    if (!mirrored_) return lp;
    return {reflect_sum_ - lp[1], reflect_sum_ - lp[0]};
}

RootFunction RootFunction::assemble(PMFunction inner, int k_lap, KernelVariant kernel,
                                    std::vector<LapPiece> pieces, Theorem source, bool mirrored,
                                    std::optional<FortPattern> pattern, KernelOptions opts,
                                    bool validate) {
    RootFunction f(std::move(inner), std::move(kernel));
    f.k_lap_ = k_lap;
    f.pieces_ = std::move(pieces);
    f.source_ = source;
    f.mirrored_ = mirrored;
    f.reflect_sum_ = f.inner_.a() + f.inner_.b();
    f.pattern_ = std::move(pattern);
    f.opts_ = opts;
    if (static_cast<int>(f.pieces_.size()) != f.inner_.lap_count())
        fail(ErrorCode::RangeViolation, "piece list does not cover every lap");
    if (!validate) return f;

    // Range admissibility of every non-kernel piece.
    const auto kimg = kernel_image(f.kernel_);
    for (int i = 0; i < f.inner_.lap_count(); ++i) {
        const LapPiece& piece = f.pieces_[static_cast<std::size_t>(i)];
        const auto lp = f.inner_.lap(i);
        const auto img = f_image_on(f.inner_, lp[0], lp[1]);
        if (piece.kind == PieceKind::KernelInv && !contains(kimg, img))
            fail(ErrorCode::RangeViolation,
                 "lap " + std::to_string(i) + " image escapes the kernel image");
        if (piece.kind == PieceKind::LapInv &&
            !contains(gen1_range(f.inner_, f.kernel_, piece.via_lap), img))
            fail(ErrorCode::RangeViolation, "lap " + std::to_string(i) +
                                                " image escapes the range of the lap-" +
                                                std::to_string(piece.via_lap) + " inverse map");
    }
    // Junction continuity at every fort.
    for (int i = 0; i + 1 < f.inner_.lap_count(); ++i) {
        const double c = f.inner_.c(i + 1);
        const double left = f.eval_piece_inner(i, c);
        const double right = f.eval_piece_inner(i + 1, c);
        if (std::abs(left - right) > kJunctionTol)
            fail(ErrorCode::RangeViolation,
                 "junction mismatch at c_" + std::to_string(i + 1) + ": " + std::to_string(left) +
                     " vs " + std::to_string(right));
    }
    return f;
}

RootFunction construct_t21(const PMFunction& F, const KernelOptions& opts) {
    ConditionReport rep = match_t21(F);
    if (rep.theorem_case == TheoremCase::None)
        fail(ErrorCode::ConditionsNotMet, "first-lap increasing case: " + rep.first_failed_clause);
    const int v = F.fort_count();
    const int u = *rep.u_index;
    const double Fc2 = F.eval(F.c(2)), Fc3 = F.eval(F.c(3));

    std::optional<double> la, ra;
    if (rep.theorem_case != TheoremCase::T21_case1) la = Fc2;
    if (rep.theorem_case != TheoremCase::T21_case2) ra = Fc3;
    IncreasingKernel ker = inc_root_general(restrict_to_lap(F, 0), la, ra, opts);

    std::vector<LapPiece> pieces(static_cast<std::size_t>(v + 1));
    pieces[0] = {PieceKind::Kernel, -1};
    pieces[1] = {PieceKind::KernelInv, -1};
    pieces[2] = {PieceKind::KernelInv, -1};
    for (int i = 3; i <= u - 1 && i <= v; ++i) pieces[static_cast<std::size_t>(i)] = {PieceKind::LapInv, 1};
    for (int i = u; i <= v; ++i) pieces[static_cast<std::size_t>(i)] = {PieceKind::LapInv, 2};
    return RootFunction::assemble(F, 0, std::move(ker), std::move(pieces), Theorem::T21, false,
                                  std::nullopt, opts);
}

namespace {

LapPiece piece_for(PocketMap m, int k) {
    switch (m) {
        case PocketMap::KMinus1: return {PieceKind::LapInv, k - 1};
        case PocketMap::K: return {PieceKind::KernelInv, -1};
        case PocketMap::KPlus1: return {PieceKind::LapInv, k + 1};
    }
    return {PieceKind::KernelInv, -1};
}

void assign_pockets(std::vector<LapPiece>& pieces, const FortPattern& pat, int k) {
    for (int j = 0; j + 1 < static_cast<int>(pat.left_seq.size()); ++j) {
        const int hi = pat.left_seq[static_cast<std::size_t>(j)];
        const int lo = pat.left_seq[static_cast<std::size_t>(j + 1)];
        for (int i = lo; i <= hi - 1; ++i)
            pieces[static_cast<std::size_t>(i)] = piece_for(pat.left_schedule[static_cast<std::size_t>(j)], k);
    }
    for (int j = 0; j + 1 < static_cast<int>(pat.right_seq.size()); ++j) {
        const int lo = pat.right_seq[static_cast<std::size_t>(j)];
        const int hi = pat.right_seq[static_cast<std::size_t>(j + 1)];
        for (int i = lo; i <= hi - 1; ++i)
            pieces[static_cast<std::size_t>(i)] = piece_for(pat.right_schedule[static_cast<std::size_t>(j)], k);
    }
}

} // namespace

RootFunction construct_t22(const PMFunction& F, const KernelOptions& opts, PatternMode mode) {
    auto [rep, pat] = match_t22(F, mode);
    if (rep.theorem_case == TheoremCase::None || !pat)
        fail(ErrorCode::ConditionsNotMet, "middle-lap increasing case: " + rep.first_failed_clause);
    const int k = rep.k_lap;
    const int v = F.fort_count();
    const double A = F.eval(F.c(k - 1)), B = F.eval(F.c(k + 2));

    std::optional<double> la, ra;
    if (rep.theorem_case != TheoremCase::T22_case2) la = B;
    if (rep.theorem_case != TheoremCase::T22_case1) ra = A;
    IncreasingKernel ker = inc_root_general(restrict_to_lap(F, k), la, ra, opts);

    std::vector<LapPiece> pieces(static_cast<std::size_t>(v + 1));
    pieces[static_cast<std::size_t>(k)] = {PieceKind::Kernel, -1};
    pieces[static_cast<std::size_t>(k - 1)] = {PieceKind::KernelInv, -1};
    pieces[static_cast<std::size_t>(k + 1)] = {PieceKind::KernelInv, -1};
    assign_pockets(pieces, *pat, k);
    return RootFunction::assemble(F, k, std::move(ker), std::move(pieces), Theorem::T22, false,
                                  std::move(pat), opts);
}

RootFunction construct_t23(const PMFunction& F, const KernelOptions& opts) {
    ConditionReport rep = match_t23(F);
    if (rep.theorem_case == TheoremCase::None)
        fail(ErrorCode::ConditionsNotMet, "first-lap decreasing case: " + rep.first_failed_clause);
    const int v = F.fort_count();
    const auto K = characteristic_interval(F);
    const double yL = F.eval(F.c(1)); // root value at c_0
    const double xR = F.c(0);         // root value at c_1
    DecreasingKernel ker = dec_root_on_K(F, K, yL, xR, opts);

    std::vector<LapPiece> pieces(static_cast<std::size_t>(v + 1));
    pieces[0] = {PieceKind::Kernel, -1};
    pieces[1] = {PieceKind::KernelInv, -1};
    for (int i = 2; i <= v; ++i) pieces[static_cast<std::size_t>(i)] = {PieceKind::LapInv, 1};
    return RootFunction::assemble(F, 0, std::move(ker), std::move(pieces), Theorem::T23, false,
                                  std::nullopt, opts);
}

RootFunction construct_t24(const PMFunction& F, const KernelOptions& opts, PatternMode mode) {
    auto [rep, pat] = match_t24(F, mode);
    if (rep.theorem_case == TheoremCase::None || !pat)
        fail(ErrorCode::ConditionsNotMet, "middle-lap decreasing case: " + rep.first_failed_clause);
    const int k = rep.k_lap;
    const int v = F.fort_count();
    const double A = F.eval(F.c(k - 1)), B = F.eval(F.c(k + 2));
    const auto K = characteristic_interval(F);
    DecreasingKernel ker = dec_root_on_K(F, K, /*y_left=*/A, /*x_right=*/B, opts);
    KernelVariant kernel{std::move(ker)};

    std::vector<LapPiece> pieces(static_cast<std::size_t>(v + 1));
    pieces[static_cast<std::size_t>(k)] = {PieceKind::Kernel, -1};
    pieces[static_cast<std::size_t>(k - 1)] = {PieceKind::KernelInv, -1};
    pieces[static_cast<std::size_t>(k + 1)] = {PieceKind::KernelInv, -1};

    // The proof fixes the pocket schedule only for the increasing kernel;
    // here each pocket's map is pinned by range admissibility plus junction
    // continuity with the already-assembled neighbor, the increasing-case
    // schedule serving as the candidate ordering. Ambiguity is surfaced.
    PMFunction inner = F;
    auto piece_value_at = [&](const LapPiece& piece, double x) {
        switch (piece.kind) {
            case PieceKind::Kernel: return kernel_eval(kernel, x);
            case PieceKind::KernelInv: return kernel_eval_inverse(kernel, inner.eval(x));
            case PieceKind::LapInv:
                return inner.lap_inverse(piece.via_lap, kernel_eval(kernel, inner.eval(x)));
        }
        fail(ErrorCode::EvaluationFailure, "unknown piece kind");
    };
    auto range_of = [&](PocketMap m) {
        if (m == PocketMap::K) return kernel_image(kernel);
        return gen1_range(inner, kernel, m == PocketMap::KMinus1 ? k - 1 : k + 1);
    };
    auto resolve_pocket = [&](int j, double lo, double hi, double junction, int neighbor_lap,
                              PocketMap prior) {
        const double neighbor_value =
            piece_value_at(pieces[static_cast<std::size_t>(neighbor_lap)], junction);
        const auto img = f_image_on(inner, lo, hi);
        std::vector<PocketMap> order{prior};
        for (PocketMap m : {PocketMap::KMinus1, PocketMap::K, PocketMap::KPlus1})
            if (m != prior) order.push_back(m);
        std::vector<PocketMap> eligible;
        for (PocketMap m : order) {
            if (!contains(range_of(m), img)) continue;
            const double val = piece_value_at(piece_for(m, k), junction);
            if (std::abs(val - neighbor_value) > kJunctionTol) continue;
            eligible.push_back(m);
        }
        if (eligible.empty())
            fail(ErrorCode::RangeViolation,
                 "pocket " + std::to_string(j) + " admits no inverse map");
        if (eligible.size() > 1) {
            std::string names;
            for (PocketMap m : eligible) names += std::string(" ") + to_string(m);
            fail(ErrorCode::AssemblyAmbiguous,
                 "pocket " + std::to_string(j) + " admits several inverse maps:" + names);
        }
        return eligible.front();
    };

    FortPattern resolved = *pat;
    resolved.left_schedule.clear();
    resolved.right_schedule.clear();
    for (int j = 0; j + 1 < static_cast<int>(pat->left_seq.size()); ++j) {
        const int hi = pat->left_seq[static_cast<std::size_t>(j)];
        const int lo = pat->left_seq[static_cast<std::size_t>(j + 1)];
        const PocketMap m = resolve_pocket(j, F.c(lo), F.c(hi), F.c(hi), hi,
                                           pat->left_schedule[static_cast<std::size_t>(j)]);
        resolved.left_schedule.push_back(m);
        for (int i = lo; i <= hi - 1; ++i)
            pieces[static_cast<std::size_t>(i)] = piece_for(m, k);
    }
    for (int j = 0; j + 1 < static_cast<int>(pat->right_seq.size()); ++j) {
        const int lo = pat->right_seq[static_cast<std::size_t>(j)];
        const int hi = pat->right_seq[static_cast<std::size_t>(j + 1)];
        const PocketMap m = resolve_pocket(j, F.c(lo), F.c(hi), F.c(lo), lo - 1,
                                           pat->right_schedule[static_cast<std::size_t>(j)]);
        resolved.right_schedule.push_back(m);
        for (int i = lo; i <= hi - 1; ++i)
            pieces[static_cast<std::size_t>(i)] = piece_for(m, k);
    }
    return RootFunction::assemble(F, k, std::move(kernel), std::move(pieces), Theorem::T24, false,
                                  std::move(resolved), opts);
}

RootFunction construct_auto(const PMFunction& F, RootPreference preferred,
                            const KernelOptions& opts, PatternMode mode) {
    const auto h = height(F);
    if (!h.is_finite() || *h.value != 1)
        fail(ErrorCode::NoApplicableTheorem,
             "height is " + h.to_string() + "; the constructions need height 1");
    const auto lap = find_covering_lap(F);
    if (!lap) throw std::logic_error("internal: height 1 but no lap covers the range");
    const CharInterval K = *lap;

    if (K.lap_index == F.lap_count() - 1 && F.lap_count() > 1) {
        // Last-lap characteristic interval: work on the reflected map and
        // conjugate the result back.
        PMFunction G = mirror_conjugate(F);
        RootFunction g = construct_auto(G, preferred, opts, mode);
        return RootFunction::assemble(G, g.k_lap(), KernelVariant(g.kernel()),
                                      std::vector<LapPiece>(g.pieces()), g.source(), true,
                                      g.pattern(), opts);
    }

    std::vector<Theorem> order;
    if (K.lap_index == 0) {
        if (preferred == RootPreference::Increasing) order = {Theorem::T21};
        else if (preferred == RootPreference::Decreasing) order = {Theorem::T23};
        else order = {Theorem::T21, Theorem::T23};
    } else {
        if (preferred == RootPreference::Increasing) order = {Theorem::T22};
        else if (preferred == RootPreference::Decreasing) order = {Theorem::T24};
        else order = {Theorem::T22, Theorem::T24};
    }

    std::string diagnostics;
    for (Theorem t : order) {
        try {
            switch (t) {
                case Theorem::T21: return construct_t21(F, opts);
                case Theorem::T22: return construct_t22(F, opts, mode);
                case Theorem::T23: return construct_t23(F, opts);
                case Theorem::T24: return construct_t24(F, opts, mode);
            }
        } catch (const PmError& e) {
            diagnostics += std::string(diagnostics.empty() ? "" : "; ") + to_string(t) + ": " +
                           e.what();
        }
    }
    fail(ErrorCode::NoApplicableTheorem, diagnostics);
}

} // namespace pmroot
