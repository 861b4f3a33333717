#include "pmroot/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pmroot/monotone_pl.hpp"

namespace pmroot {

namespace {

bool eq(double x, double y) { return std::abs(x - y) <= kCondTol; }
bool lt(double x, double y) { return x < y && !eq(x, y); }
bool gt(double x, double y) { return x > y && !eq(x, y); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string chain3(double a, const char* r1, double b, const char* r2, double c) {
    return num(a) + " " + r1 + " " + num(b) + " " + r2 + " " + num(c);
}

/// Extremes of F over [lo, hi] where lo and hi are breakpoints of F.
std::pair<double, double> extremes_on(const PMFunction& F, double lo, double hi) {
    double mn = F.eval(lo), mx = mn;
    const double vhi = F.eval(hi);
    mn = std::min(mn, vhi);
    mx = std::max(mx, vhi);
    for (std::size_t i = 0; i < F.xs().size(); ++i) {
        const double x = F.xs()[i];
        if (x > lo && x < hi) {
            mn = std::min(mn, F.ys()[i]);
            mx = std::max(mx, F.ys()[i]);
        }
    }
    return {mn, mx};
}

MonotonePL increasing_restriction(const PMFunction& F, std::array<double, 2> bounds) {
    std::vector<double> xs{bounds[0]}, ys{F.eval(bounds[0])};
    for (std::size_t i = 0; i < F.xs().size(); ++i)
        if (F.xs()[i] > bounds[0] && F.xs()[i] < bounds[1]) {
            xs.push_back(F.xs()[i]);
            ys.push_back(F.ys()[i]);
        }
    xs.push_back(bounds[1]);
    ys.push_back(F.eval(bounds[1]));
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
        if (!(ys[i] < ys[i + 1]))
            fail(ErrorCode::PreconditionFailed, "map must be strictly increasing on the interval");
    return MonotonePL(std::move(xs), std::move(ys));
}

} // namespace

const char* to_string(TheoremCase c) {
    switch (c) {
        case TheoremCase::None: return "None";
        case TheoremCase::T21_case1: return "T21_case1";
        case TheoremCase::T21_case2: return "T21_case2";
        case TheoremCase::T21_case3: return "T21_case3";
        case TheoremCase::T22_case1: return "T22_case1";
        case TheoremCase::T22_case2: return "T22_case2";
        case TheoremCase::T22_case3: return "T22_case3";
        case TheoremCase::T23: return "T23";
        case TheoremCase::T24_case1: return "T24_case1";
        case TheoremCase::T24_case2: return "T24_case2";
        case TheoremCase::T24_case3: return "T24_case3";
    }
    return "None";
}

const char* to_string(PocketMap m) {
    switch (m) {
        case PocketMap::KMinus1: return "kMinus1";
        case PocketMap::K: return "k";
        case PocketMap::KPlus1: return "kPlus1";
    }
    return "k";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Existence: return "Existence";
        case Verdict::Nonexistence: return "Nonexistence";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

bool check_kplus(const PMFunction& F) {
    const auto K = characteristic_interval(F);
    if (F.fort_count() == 0) return F.lap_direction(0) > 0;
    return F.lap_direction(K.lap_index) > 0;
}

KPlusZeroResult check_kplus0(const PMFunction& F) {
    const auto K = characteristic_interval(F);
    KPlusZeroResult res;
    for (double endpoint : {K.bounds[0], K.bounds[1]}) {
        if (eq(F.eval(endpoint), endpoint)) continue; // fixed endpoint may be attained
        for (double x : F.preimages(endpoint)) res.witnesses.push_back(x);
    }
    std::sort(res.witnesses.begin(), res.witnesses.end());
    res.holds = res.witnesses.empty();
    return res;
}

namespace {

ConditionReport base_report(const PMFunction& F, const CharInterval& K) {
    ConditionReport rep;
    rep.k_lap = K.lap_index;
    rep.k_plus = check_kplus(F);
    auto kz = check_kplus0(F);
    rep.k_plus_zero = kz.holds;
    rep.k_plus_zero_witnesses = std::move(kz.witnesses);
    rep.max_range = F.range()[1];
    return rep;
}

} // namespace

ConditionReport match_t21(const PMFunction& F) {
    const auto K = characteristic_interval(F);
    if (K.lap_index != 0)
        fail(ErrorCode::WrongLap, "characteristic interval is not the first lap");
    ConditionReport rep = base_report(F, K);
    if (!rep.k_plus) {
        rep.first_failed_clause = "(K+) fails: F decreasing on the characteristic interval";
        return rep;
    }
    const int v = F.fort_count();
    if (v < 3) {
        rep.first_failed_clause = "needs at least 3 forts so that some c_u, u >= 4, exists";
        return rep;
    }
    const double c0 = F.c(0), c1 = F.c(1);
    const double Fc0 = F.eval(c0), Fc1 = F.eval(c1), Fc2 = F.eval(F.c(2)), Fc3 = F.eval(F.c(3));
    const double M = rep.max_range;

    std::optional<int> u;
    for (int i = 4; i <= v + 1; ++i)
        if (eq(F.eval(F.c(i)), c0)) {
            u = i;
            break;
        }
    if (!u) {
        rep.first_failed_clause = "no u in {4,...,v+1} with F(c_u) = c_0";
        return rep;
    }
    rep.u_index = u;
    const auto [mn_u, mx_u] = extremes_on(F, c0, F.c(*u));
    (void)mn_u;
    if (!eq(Fc3, mx_u)) {
        rep.first_failed_clause =
            "F(c_3) = " + num(Fc3) + " is not the maximum " + num(mx_u) + " over [c_0, c_u]";
        return rep;
    }

    if (eq(Fc2, c0) && eq(Fc0, c0) && lt(Fc1, Fc3) && lt(Fc3, c1) && eq(c1, M)) {
        rep.theorem_case = TheoremCase::T21_case1;
        rep.matched_clauses = {"F(c_2) = c_0 = F(c_0): " + num(Fc2) + " = " + num(c0),
                               chain3(Fc1, "<", Fc3, "<", c1) + " = M"};
        return rep;
    }
    if (lt(c0, Fc2) && lt(Fc2, Fc0) && eq(Fc3, c1) && eq(Fc1, c1)) {
        rep.theorem_case = TheoremCase::T21_case2;
        rep.matched_clauses = {chain3(c0, "<", Fc2, "<", Fc0),
                               "F(c_3) = c_1 = F(c_1): " + num(Fc3) + " = " + num(c1)};
        return rep;
    }
    if (lt(c0, Fc2) && lt(Fc2, Fc0) && lt(Fc1, Fc3) && lt(Fc3, c1)) {
        rep.theorem_case = TheoremCase::T21_case3;
        rep.matched_clauses = {chain3(c0, "<", Fc2, "<", Fc0), chain3(Fc1, "<", Fc3, "<", c1)};
        return rep;
    }
    rep.first_failed_clause = "no endpoint-value case holds: F(c_0)=" + num(Fc0) +
                              ", F(c_1)=" + num(Fc1) + ", F(c_2)=" + num(Fc2) +
                              ", F(c_3)=" + num(Fc3) + ", M=" + num(M);
    return rep;
}

namespace {

struct PatternSearch {
    const PMFunction& F;
    double A; // F(c_{k-1})
    double B; // F(c_{k+2})
    PatternMode mode;
    bool left; // searching the left chain

    double junction_value(int position) const {
        const int r = position % 4;
        if (left) return (r == 0 || r == 1) ? A : B;
        return (r == 0 || r == 1) ? B : A;
    }

    bool pocket_ok(int j, double lo, double hi) const {
        const auto [mn, mx] = extremes_on(F, lo, hi);
        const int r = j % 4;
        bool need_max_A = false, need_min_B = false;
        if (left) {
            need_max_A = (r == 0 || r == 1 || r == 3);
            need_min_B = (r == 1 || r == 2 || r == 3);
        } else {
            need_min_B = (r == 0 || r == 1 || r == 3);
            need_max_A = (r == 1 || r == 2 || r == 3);
        }
        if (mode == PatternMode::Strict) {
            if (need_max_A && !eq(mx, A)) return false;
            if (need_min_B && !eq(mn, B)) return false;
            return true;
        }
        if (need_max_A && !(mx <= A + kCondTol)) return false;
        if (need_min_B && !(mn >= B - kCondTol)) return false;
        return true;
    }

    // seq holds c-indices from the start (k-1 or k+2) outward.
    bool dfs(std::vector<int>& seq, int terminal_index) const {
        const int j = static_cast<int>(seq.size()) - 1; // pocket index being closed
        const int cur = seq.back();
        const double required = junction_value(j + 1);
        if (left) {
            for (int cand = cur - 1; cand >= 1; --cand) {
                if (!eq(F.eval(F.c(cand)), required)) continue;
                if (!pocket_ok(j, F.c(cand), F.c(cur))) continue;
                seq.push_back(cand);
                if (dfs(seq, terminal_index)) return true;
                seq.pop_back();
            }
            if (pocket_ok(j, F.c(terminal_index), F.c(cur))) {
                seq.push_back(terminal_index);
                return true;
            }
            return false;
        }
        const int v = F.fort_count();
        for (int cand = cur + 1; cand <= v; ++cand) {
            if (!eq(F.eval(F.c(cand)), required)) continue;
            if (!pocket_ok(j, F.c(cur), F.c(cand))) continue;
            seq.push_back(cand);
            if (dfs(seq, terminal_index)) return true;
            seq.pop_back();
        }
        if (pocket_ok(j, F.c(cur), F.c(terminal_index))) {
            seq.push_back(terminal_index);
            return true;
        }
        return false;
    }
};

PocketMap left_schedule_for(int j) {
    switch (j % 4) {
        case 0: return PocketMap::KPlus1;
        case 1: return PocketMap::K;
        case 2: return PocketMap::KMinus1;
        default: return PocketMap::K;
    }
}

PocketMap right_schedule_for(int j) {
    switch (j % 4) {
        case 0: return PocketMap::KMinus1;
        case 1: return PocketMap::K;
        case 2: return PocketMap::KPlus1;
        default: return PocketMap::K;
    }
}

FortPattern search_pattern(const PMFunction& F, int k, PatternMode mode) {
    const int v = F.fort_count();
    const double A = F.eval(F.c(k - 1));
    const double B = F.eval(F.c(k + 2));
    FortPattern pat;
    pat.strict_mode = (mode == PatternMode::Strict);

    pat.left_seq = {k - 1};
    if (k - 1 > 0) {
        PatternSearch search{F, A, B, mode, true};
        if (!search.dfs(pat.left_seq, 0))
            fail(ErrorCode::NoPattern, "no admissible decreasing fort sequence on the left");
    }
    pat.right_seq = {k + 2};
    if (k + 2 < v + 1) {
        PatternSearch search{F, A, B, mode, false};
        if (!search.dfs(pat.right_seq, v + 1))
            fail(ErrorCode::NoPattern, "no admissible increasing fort sequence on the right");
    }
    for (int j = 0; j + 1 < static_cast<int>(pat.left_seq.size()); ++j)
        pat.left_schedule.push_back(left_schedule_for(j));
    for (int j = 0; j + 1 < static_cast<int>(pat.right_seq.size()); ++j)
        pat.right_schedule.push_back(right_schedule_for(j));
    return pat;
}

/// Shared lap-position and regime gates for the middle-lap matchers.
/// Returns the endpoint chain values; leaves theorem_case None on failure.
struct MiddleLapContext {
    CharInterval K;
    ConditionReport rep;
    int k = -1;
    double ck, ck1, A, B, Fck, Fck1;
    bool gates_ok = false;
};

MiddleLapContext middle_lap_context(const PMFunction& F) {
    MiddleLapContext ctx{characteristic_interval(F), {}, -1, 0, 0, 0, 0, 0, 0, false};
    const int v = F.fort_count();
    if (ctx.K.lap_index < 1 || ctx.K.lap_index > v - 1)
        fail(ErrorCode::WrongLap, "characteristic interval must be a middle lap");
    ctx.rep = base_report(F, ctx.K);
    ctx.k = ctx.K.lap_index;
    ctx.rep.k_lap = ctx.k;
    if (!ctx.rep.k_plus) {
        ctx.rep.first_failed_clause = "(K+) fails: F decreasing on the characteristic interval";
        return ctx;
    }
    if (ctx.rep.k_plus_zero) {
        ctx.rep.first_failed_clause =
            "(K+0) holds: endpoints of K are never attained improperly; outside this regime";
        return ctx;
    }
    ctx.ck = F.c(ctx.k);
    ctx.ck1 = F.c(ctx.k + 1);
    ctx.A = F.eval(F.c(ctx.k - 1));
    ctx.B = F.eval(F.c(ctx.k + 2));
    ctx.Fck = F.eval(ctx.ck);
    ctx.Fck1 = F.eval(ctx.ck1);
    ctx.gates_ok = true;
    return ctx;
}

} // namespace

std::pair<ConditionReport, std::optional<FortPattern>> match_t22(const PMFunction& F,
                                                                 PatternMode mode) {
    MiddleLapContext ctx = middle_lap_context(F);
    ConditionReport rep = std::move(ctx.rep);
    if (!ctx.gates_ok) return {rep, std::nullopt};
    const double ck = ctx.ck, ck1 = ctx.ck1, A = ctx.A, B = ctx.B, Fck = ctx.Fck,
                 Fck1 = ctx.Fck1;

    if (lt(ck, B) && lt(B, Fck) && eq(A, ck1) && eq(Fck1, ck1)) {
        rep.theorem_case = TheoremCase::T22_case1;
        rep.matched_clauses = {chain3(ck, "<", B, "<", Fck),
                               "F(c_{k-1}) = c_{k+1} = F(c_{k+1}): " + num(A) + " = " + num(ck1)};
    } else if (eq(ck, Fck) && eq(Fck, B) && lt(Fck1, A) && lt(A, ck1)) {
        rep.theorem_case = TheoremCase::T22_case2;
        rep.matched_clauses = {"c_k = F(c_k) = F(c_{k+2}): " + num(ck) + " = " + num(B),
                               chain3(Fck1, "<", A, "<", ck1)};
    } else if (lt(ck, B) && lt(B, Fck) && lt(Fck1, A) && lt(A, ck1)) {
        rep.theorem_case = TheoremCase::T22_case3;
        rep.matched_clauses = {chain3(ck, "<", B, "<", Fck), chain3(Fck1, "<", A, "<", ck1)};
    } else {
        rep.first_failed_clause = "no endpoint-value case holds: F(c_k)=" + num(Fck) +
                                  ", F(c_{k+1})=" + num(Fck1) + ", F(c_{k-1})=" + num(A) +
                                  ", F(c_{k+2})=" + num(B);
        return {rep, std::nullopt};
    }
    FortPattern pat = search_pattern(F, ctx.k, mode);
    return {rep, pat};
}

ConditionReport match_t23(const PMFunction& F) {
    const auto K = characteristic_interval(F);
    if (K.lap_index != 0)
        fail(ErrorCode::WrongLap, "characteristic interval is not the first lap");
    ConditionReport rep = base_report(F, K);
    if (!rep.k_plus) {
        rep.first_failed_clause = "(K+) fails: F decreasing on the characteristic interval";
        return rep;
    }
    if (F.fort_count() < 1) {
        rep.first_failed_clause = "map is monotone; there is no c_2";
        return rep;
    }
    const double c0 = F.c(0), c1 = F.c(1);
    const double Fc0 = F.eval(c0), Fc1 = F.eval(c1), Fc2 = F.eval(F.c(2));
    if (!gt(Fc0, c0)) {
        rep.first_failed_clause = "F(c_0) > c_0 fails: " + num(Fc0) + " vs " + num(c0);
        return rep;
    }
    if (!lt(Fc1, c1)) {
        rep.first_failed_clause = "F(c_1) < c_1 fails: " + num(Fc1) + " vs " + num(c1);
        return rep;
    }
    if (!eq(Fc2, c0)) {
        rep.first_failed_clause = "F(c_2) = c_0 fails: " + num(Fc2) + " vs " + num(c0);
        return rep;
    }
    const auto rc = check_reversing_correspondence(F, K.bounds);
    if (!rc.is_reversing) {
        rep.first_failed_clause = "F is not reversing-correspondence on K";
        return rep;
    }
    rep.theorem_case = TheoremCase::T23;
    rep.matched_clauses = {"F(c_0) > c_0: " + num(Fc0) + " > " + num(c0),
                           "F(c_1) < c_1: " + num(Fc1) + " < " + num(c1),
                           "F(c_2) = c_0: " + num(Fc2) + " = " + num(c0),
                           "reversing-correspondence on K"};
    return rep;
}

std::pair<ConditionReport, std::optional<FortPattern>> match_t24(const PMFunction& F,
                                                                 PatternMode mode) {
    MiddleLapContext ctx = middle_lap_context(F);
    ConditionReport rep = std::move(ctx.rep);
    if (!ctx.gates_ok) return {rep, std::nullopt};
    const double ck = ctx.ck, ck1 = ctx.ck1, A = ctx.A, B = ctx.B, Fck = ctx.Fck,
                 Fck1 = ctx.Fck1;

    const auto rc = check_reversing_correspondence(F, ctx.K.bounds);
    if (!rc.is_reversing)
        fail(ErrorCode::NotReversing, "F is not reversing-correspondence on K");

    if (eq(B, ck) && lt(B, Fck) && lt(Fck, Fck1) && eq(Fck1, A) && lt(A, ck1)) {
        rep.theorem_case = TheoremCase::T24_case1;
        rep.matched_clauses = {"c_k = F(c_{k+2}) = " + num(B),
                               chain3(B, "<", Fck, "<", Fck1) + " = F(c_{k-1}) < " + num(ck1)};
    } else if (lt(ck, B) && lt(B, Fck) && lt(Fck, Fck1) && lt(Fck1, A) && lt(A, ck1)) {
        rep.theorem_case = TheoremCase::T24_case2;
        rep.matched_clauses = {num(ck) + " < " + num(B) + " < " + num(Fck) + " < " + num(Fck1) +
                               " < " + num(A) + " < " + num(ck1)};
    } else if (lt(ck, B) && eq(B, Fck) && lt(Fck, Fck1) && lt(Fck1, A) && eq(A, ck1)) {
        rep.theorem_case = TheoremCase::T24_case3;
        rep.matched_clauses = {num(ck) + " < F(c_{k+2}) = F(c_k) = " + num(B),
                               chain3(Fck, "<", Fck1, "<", A) + " = c_{k+1}"};
    } else {
        rep.first_failed_clause = "no chain condition holds: F(c_k)=" + num(Fck) +
                                  ", F(c_{k+1})=" + num(Fck1) + ", F(c_{k-1})=" + num(A) +
                                  ", F(c_{k+2})=" + num(B);
        return {rep, std::nullopt};
    }
    FortPattern pat = search_pattern(F, ctx.k, mode);
    return {rep, pat};
}

ReversingReport check_reversing_correspondence(const PMFunction& F, std::array<double, 2> bounds) {
    MonotonePL phi = increasing_restriction(F, bounds);
    ReversingReport rep;
    rep.fixed_points = phi.fixed_points();
    const std::size_t n = rep.fixed_points.size();
    if (n == 0 || n % 2 == 0)
        fail(ErrorCode::EvenFixedPointCount,
             "fixed-point count " + std::to_string(n) + " admits no order-reversing center");
    rep.center = rep.fixed_points[n / 2];
    const bool left_fixed = eq(phi.eval(bounds[0]), bounds[0]);
    const bool right_fixed = eq(phi.eval(bounds[1]), bounds[1]);
    rep.endpoints_parity_ok = (left_fixed == right_fixed);
    rep.note = "pair condition checked for consecutive interior fixed points only";

    // omega is the order reversal of the fixed-point list; the sign condition
    // is sampled on a 33x33 grid per consecutive pair below the center.
    rep.sign_condition_ok = true;
    const int grid = 33;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x1 = rep.fixed_points[i], x2 = rep.fixed_points[i + 1];
        if (x2 > rep.center + kCondTol) break;
        if (x1 <= bounds[0] || x2 >= bounds[1]) continue; // interior pairs only
        const double w1 = rep.fixed_points[n - 2 - i], w2 = rep.fixed_points[n - 1 - i];
        for (int gx = 1; gx <= grid && rep.sign_condition_ok; ++gx) {
            const double x = x1 + gx * (x2 - x1) / (grid + 1);
            const double dx = phi.eval(x) - x;
            for (int gy = 1; gy <= grid; ++gy) {
                const double y = w1 + gy * (w2 - w1) / (grid + 1);
                const double dy = phi.eval(y) - y;
                ++rep.sign_samples;
                if (!(dx * dy < 0.0)) {
                    rep.sign_condition_ok = false;
                    break;
                }
            }
        }
    }
    rep.is_reversing = rep.endpoints_parity_ok && rep.sign_condition_ok;
    return rep;
}

Table1Verdict classify_table1(const PMFunction& F, int order, RootClass root_class,
                              int root_height) {
    if (order < 2) fail(ErrorCode::PreconditionFailed, "root order must be at least 2");
    const auto h = height(F);
    if (!h.is_finite() || *h.value != 1)
        fail(ErrorCode::PreconditionFailed, "table applies to maps of height 1 only");
    if (!check_kplus(F))
        fail(ErrorCode::PreconditionFailed, "table applies under (K+) only");
    if (check_kplus0(F).holds)
        fail(ErrorCode::PreconditionFailed,
             "table applies when the characteristic endpoints condition fails");

    const int N = F.fort_count();
    const bool inc = root_class == RootClass::Increasing;
    const int n = order, hf = root_height;

    struct Row {
        bool match;
        Verdict verdict;
        const char* label;
    };
    const Row rows[] = {
        {n == 2 && inc && hf == 1, Verdict::Nonexistence, "n=2, f increasing on K, H(f)=1"},
        {n == 2 && !inc && hf == 1, Verdict::Existence, "n=2, f decreasing on K, H(f)=1"},
        {2 < n && n < N && inc && hf < n, Verdict::Nonexistence,
         "2<n<N(F), f increasing on K, H(f)<n"},
        {2 < n && n < N && !inc && hf < n - 1, Verdict::Nonexistence,
         "2<n<N(F), f decreasing on K, H(f)<n-1"},
        {n == N && inc && hf <= n, Verdict::Nonexistence, "n=N(F), f increasing on K, H(f)<=n"},
        {n == N && !inc && hf < n - 1, Verdict::Nonexistence,
         "n=N(F), f decreasing on K, H(f)<n-1"},
        {n == N && !inc && hf == n, Verdict::Existence, "n=N(F), f decreasing on K, H(f)=n"},
        {n == N + 1 && inc && hf <= n, Verdict::Nonexistence,
         "n=N(F)+1, f increasing on K, H(f)<=n"},
        {n == N + 1 && !inc && hf < n - 1, Verdict::Nonexistence,
         "n=N(F)+1, f decreasing on K, H(f)<n-1"},
    };

    Table1Verdict out;
    out.order = order;
    out.root_class = root_class;
    out.root_height = root_height;
    for (const Row& row : rows) {
        if (!row.match) continue;
        if (out.verdict != Verdict::Unknown && out.verdict != row.verdict)
            throw std::logic_error("internal: overlapping table rows disagree");
        out.verdict = row.verdict;
        if (out.table_row.empty()) out.table_row = row.label;
    }
    return out;
}

} // namespace pmroot
