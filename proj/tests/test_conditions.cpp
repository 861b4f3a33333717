#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pmroot/conditions.hpp"
#include "pmroot/verify.hpp"

using namespace pmroot;
using doctest::Approx;

namespace {

PMFunction with_y(const PMFunction& F, std::size_t idx, double y) {
    auto ys = F.ys();
    ys[idx] = y;
    return PMFunction::validate({F.a(), F.b()}, F.xs(), ys);
}

} // namespace

TEST_CASE("increasing characteristic interval (K+)") {
    CHECK(check_kplus(fixtures::f1()));
    CHECK(check_kplus(fixtures::f2()));
    CHECK(check_kplus(fixtures::f3()));

    // decreasing on its characteristic interval; mirroring cannot fix the
    // sign (reflection conjugation preserves slope signs)
    const auto D = PMFunction::validate({0, 1}, {0, 0.5, 0.6, 1.0}, {0.45, 0.05, 0.30, 0.10});
    CHECK_FALSE(check_kplus(D));
    CHECK_FALSE(check_kplus(mirror_conjugate(D)));
    CHECK(check_kplus(mirror_conjugate(fixtures::f1())));
}

TEST_CASE("characteristic endpoints condition (K+0) with witnesses") {
    const auto r1 = check_kplus0(fixtures::f1());
    CHECK_FALSE(r1.holds);
    REQUIRE(r1.witnesses.size() == 1);
    CHECK(r1.witnesses[0] == Approx(0.8).epsilon(1e-14));

    const auto r2 = check_kplus0(fixtures::f2());
    CHECK_FALSE(r2.holds);
    REQUIRE(r2.witnesses.size() == 2);
    CHECK(r2.witnesses[0] == Approx(0.15).epsilon(1e-14));
    CHECK(r2.witnesses[1] == Approx(0.85).epsilon(1e-14));
    // each witness attains an endpoint of K
    for (double w : r2.witnesses) {
        const double v = fixtures::f2().eval(w);
        CHECK((std::abs(v - 0.4) <= 1e-12 || std::abs(v - 0.6) <= 1e-12));
    }

    CHECK(check_kplus0(fixtures::identity01()).holds);
}

TEST_CASE("first-lap increasing hypotheses on f1") {
    const auto rep = match_t21(fixtures::f1());
    CHECK(rep.theorem_case == TheoremCase::T21_case3);
    REQUIRE(rep.u_index.has_value());
    CHECK(*rep.u_index == 4);
    CHECK(rep.max_range == Approx(0.45));
    CHECK(rep.k_plus);
    CHECK_FALSE(rep.k_plus_zero);

    // F(c_2) = F(c_0) but != c_0: no clause matches
    const auto m1 = match_t21(with_y(fixtures::f1(), 2, 0.10));
    CHECK(m1.theorem_case == TheoremCase::None);
    CHECK_FALSE(m1.first_failed_clause.empty());

    // no u with F(c_u) = c_0
    const auto m2 = match_t21(with_y(fixtures::f1(), 4, 0.01));
    CHECK(m2.theorem_case == TheoremCase::None);
    CHECK(m2.first_failed_clause.find("no u") != std::string::npos);

    CHECK_THROWS_AS((void)match_t21(fixtures::f2()), PmError); // middle lap
}

TEST_CASE("first-lap variants matching the other endpoint cases") {
    const auto c1 = match_t21(fixtures::f1_case1());
    CHECK(c1.theorem_case == TheoremCase::T21_case1);
    const auto c2 = match_t21(fixtures::f1_case2());
    CHECK(c2.theorem_case == TheoremCase::T21_case2);
}

TEST_CASE("middle-lap increasing hypotheses and pattern on f2") {
    const auto [rep, pat] = match_t22(fixtures::f2());
    CHECK(rep.theorem_case == TheoremCase::T22_case3);
    REQUIRE(pat.has_value());
    CHECK(pat->s() == 0);
    CHECK(pat->t() == 0);
    CHECK(pat->left_seq == std::vector<int>{2, 0});
    CHECK(pat->right_seq == std::vector<int>{5, 7});
    REQUIRE(pat->left_schedule.size() == 1);
    CHECK(pat->left_schedule[0] == PocketMap::KPlus1);
    REQUIRE(pat->right_schedule.size() == 1);
    CHECK(pat->right_schedule[0] == PocketMap::KMinus1);

    // breaking the endpoint chain: F(c_{k-1}) lowered below F(c_{k+1})
    const auto [mrep, mpat] = match_t22(with_y(fixtures::f2(), 2, 0.54));
    CHECK(mrep.theorem_case == TheoremCase::None);
    CHECK_FALSE(mpat.has_value());

    // raising the left pocket minimum removes only the left (K+0) witness;
    // the right one keeps the regime valid and the pattern intact
    const auto [zrep, zpat] = match_t22(with_y(fixtures::f2(), 1, 0.43));
    CHECK(zrep.theorem_case == TheoremCase::T22_case3);
    REQUIRE(zrep.k_plus_zero_witnesses.size() == 1);
    CHECK(zrep.k_plus_zero_witnesses[0] == Approx(0.85).epsilon(1e-14));
    CHECK(zpat.has_value());

    // removing both witnesses restores (K+0): outside this regime
    auto ys = fixtures::f2().ys();
    ys[1] = 0.43;
    ys[6] = 0.59;
    const auto G = PMFunction::validate({0, 1}, fixtures::f2().xs(), ys);
    const auto [grep, gpat] = match_t22(G);
    CHECK(grep.theorem_case == TheoremCase::None);
    CHECK(grep.first_failed_clause.find("K+0") != std::string::npos);
    CHECK_FALSE(gpat.has_value());

    CHECK_THROWS_AS((void)match_t22(fixtures::f1()), PmError); // first lap
}

TEST_CASE("pattern search backtracks over alternative junction forts") {
    // Two A-valued forts (c_2 and c_4) could close the first left pocket.
    // The nearer choice c_4 puts the below-B dip at c_3 into a pocket that
    // needs min = B, so the search must backtrack and take c_2, leaving the
    // dip inside the unconstrained first pocket.
    const auto F = PMFunction::validate(
        {0, 1},
        {0, 0.06, 0.12, 0.18, 0.24, 0.30, 0.36, 0.40, 0.62, 0.746, 0.873, 1.0},
        {0.50, 0.43, 0.60, 0.415, 0.60, 0.40, 0.60, 0.45, 0.57, 0.43, 0.55, 0.48});
    REQUIRE(*height(F).value == 1);
    const auto [rep, pat] = match_t22(F);
    CHECK(rep.theorem_case == TheoremCase::T22_case3);
    REQUIRE(pat.has_value());
    CHECK(pat->left_seq == std::vector<int>{6, 2, 1, 0});
    CHECK(pat->s() == 2);
    const auto f = construct_t22(F);
    CHECK(verify_root(F, f, 1001, 1e-8).passed);
}

TEST_CASE("no admissible fort pattern raises a structured error") {
    // kill the only interior junction fort carrying F(c_{k-1}) and push the
    // left maximum above it so the one-pocket fallback fails too
    auto ys = fixtures::mid_s3().ys();
    ys[0] = 0.57;
    ys[4] = 0.55;
    const auto G = PMFunction::validate({0, 1}, fixtures::mid_s3().xs(), ys);
    try {
        (void)match_t22(G);
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::NoPattern);
    }
    try {
        (void)match_t22(G, PatternMode::Relaxed);
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::NoPattern);
    }
}

TEST_CASE("middle-lap endpoint-case variants") {
    const auto [r1, p1] = match_t22(fixtures::f2_case1());
    CHECK(r1.theorem_case == TheoremCase::T22_case1);
    CHECK(p1.has_value());
    const auto [r2, p2] = match_t22(fixtures::f2_case2());
    CHECK(r2.theorem_case == TheoremCase::T22_case2);
    CHECK(p2.has_value());
}

TEST_CASE("four-pocket left chain on the synthetic middle-lap map") {
    const auto F = fixtures::mid_s3();
    const auto [rep, pat] = match_t22(F);
    CHECK(rep.theorem_case == TheoremCase::T22_case3);
    REQUIRE(pat.has_value());
    CHECK(pat->s() == 3);
    CHECK(pat->t() == 0);
    CHECK(pat->left_seq == std::vector<int>{6, 4, 3, 1, 0});
    const std::vector<PocketMap> sched{PocketMap::KPlus1, PocketMap::K, PocketMap::KMinus1,
                                       PocketMap::K};
    CHECK(pat->left_schedule == sched);

    // The pocket between c_1 and c_3 satisfies the min-based condition but
    // not a double-max reading: its maximum exceeds F(c_{k+2}).
    const double B = F.eval(F.c(9));
    double mx = 0.0, mn = 1.0;
    for (std::size_t i = 0; i < F.xs().size(); ++i)
        if (F.xs()[i] >= F.c(1) && F.xs()[i] <= F.c(3)) {
            mx = std::max(mx, F.ys()[i]);
            mn = std::min(mn, F.ys()[i]);
        }
    CHECK(mn == Approx(B).epsilon(1e-14));
    CHECK(mx > B + 1e-3);

    // relaxed mode accepts the same pattern
    const auto [rrep, rpat] = match_t22(F, PatternMode::Relaxed);
    CHECK(rrep.theorem_case == TheoremCase::T22_case3);
    REQUIRE(rpat.has_value());
    CHECK(rpat->left_seq == pat->left_seq);
    CHECK_FALSE(rpat->strict_mode);
}

TEST_CASE("first-lap decreasing hypotheses on f3") {
    const auto rep = match_t23(fixtures::f3());
    CHECK(rep.theorem_case == TheoremCase::T23);

    const auto m1 = match_t23(with_y(fixtures::f3(), 2, 0.05));
    CHECK(m1.theorem_case == TheoremCase::None);
    CHECK(m1.first_failed_clause.find("F(c_2) = c_0") != std::string::npos);

    const auto m2 = match_t23(fixtures::f1());
    CHECK(m2.theorem_case == TheoremCase::None);
}

TEST_CASE("middle-lap decreasing hypotheses on f2") {
    const auto [rep, pat] = match_t24(fixtures::f2());
    CHECK(rep.theorem_case == TheoremCase::T24_case2);
    REQUIRE(pat.has_value());
    CHECK(pat->left_seq == std::vector<int>{2, 0});
    CHECK(pat->right_seq == std::vector<int>{5, 7});

    // F(c_k) pushed above F(c_{k+1}) breaks the chain
    const auto [mrep, mpat] = match_t24(with_y(fixtures::f2(), 3, 0.56));
    CHECK(mrep.theorem_case == TheoremCase::None);
    CHECK_FALSE(mpat.has_value());

    CHECK_THROWS_AS((void)match_t24(fixtures::f3()), PmError); // first lap

    const auto [c1, c1p] = match_t24(fixtures::f2_mdc1());
    CHECK(c1.theorem_case == TheoremCase::T24_case1);
    CHECK(c1p.has_value());
    const auto [c3, c3p] = match_t24(fixtures::f2_mdc3());
    CHECK(c3.theorem_case == TheoremCase::T24_case3);
    CHECK(c3p.has_value());
}

TEST_CASE("reversing correspondence on characteristic intervals") {
    const auto r3 = check_reversing_correspondence(fixtures::f3(), {0.0, 0.5});
    REQUIRE(r3.fixed_points.size() == 1);
    CHECK(r3.fixed_points[0] == Approx(0.25).epsilon(1e-14));
    CHECK(r3.center == Approx(0.25).epsilon(1e-14));
    CHECK(r3.is_reversing);

    const auto r2 = check_reversing_correspondence(fixtures::f2(), {0.4, 0.6});
    REQUIRE(r2.fixed_points.size() == 1);
    CHECK(r2.fixed_points[0] == Approx(0.5).epsilon(1e-14));
    CHECK(r2.is_reversing);

    // identity restriction: non-isolated fixed points
    try {
        (void)check_reversing_correspondence(fixtures::identity01(), {0.0, 1.0});
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::NonIsolatedFixedPoints);
    }

    // three interior fixed points: odd count, pair condition holds
    const auto S = PMFunction::validate({0, 1}, {0, 0.15, 0.35, 0.5, 0.7, 1.0},
                                        {0.05, 0.10, 0.40, 0.45, 0.05, 0.45});
    const auto rs = check_reversing_correspondence(S, {0.0, 0.5});
    CHECK(rs.fixed_points.size() == 3);
    CHECK(rs.center == Approx(0.25).epsilon(1e-12));
    CHECK(rs.is_reversing);
    CHECK(rs.sign_samples > 0);
}

TEST_CASE("even fixed-point sets admit no center") {
    // both endpoints of [0, 0.5] fixed, none interior
    const auto F = PMFunction::validate({0, 1}, {0, 0.25, 0.5, 0.7, 1.0},
                                        {0.0, 0.35, 0.5, 0.05, 0.45});
    try {
        (void)check_reversing_correspondence(F, {0.0, 0.5});
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::EvenFixedPointCount);
    }
}

TEST_CASE("tabulated existence verdicts cover all nine rows") {
    const auto F1 = fixtures::f1(); // N(F1) = 4
    using RC = RootClass;

    auto verdict = [&](int n, RC rc, int h) { return classify_table1(F1, n, rc, h).verdict; };

    // order 2
    CHECK(verdict(2, RC::Increasing, 1) == Verdict::Nonexistence);
    CHECK(verdict(2, RC::Decreasing, 1) == Verdict::Existence);
    // 2 < n < N
    CHECK(verdict(3, RC::Increasing, 2) == Verdict::Nonexistence);
    CHECK(verdict(3, RC::Decreasing, 1) == Verdict::Nonexistence);
    // n = N
    CHECK(verdict(4, RC::Increasing, 4) == Verdict::Nonexistence);
    CHECK(verdict(4, RC::Decreasing, 2) == Verdict::Nonexistence);
    CHECK(verdict(4, RC::Decreasing, 4) == Verdict::Existence);
    // n = N + 1
    CHECK(verdict(5, RC::Increasing, 5) == Verdict::Nonexistence);
    CHECK(verdict(5, RC::Decreasing, 3) == Verdict::Nonexistence);

    // off the table
    CHECK(verdict(2, RC::Increasing, 2) == Verdict::Unknown);
    CHECK(verdict(3, RC::Decreasing, 3) == Verdict::Unknown);
    CHECK(verdict(2, RC::Decreasing, 2) == Verdict::Unknown);

    // pure lookup: identical inputs, identical verdicts
    for (int i = 0; i < 3; ++i)
        CHECK(classify_table1(F1, 2, RC::Decreasing, 1).verdict == Verdict::Existence);

    CHECK_THROWS_AS((void)classify_table1(fixtures::tent(), 2, RC::Increasing, 1), PmError);
    CHECK_THROWS_AS((void)classify_table1(fixtures::identity01(), 2, RC::Increasing, 1), PmError);
}

namespace {

// Re-derives every requirement of a returned middle-lap pattern straight
// from the map, independently of the matcher's own bookkeeping.
void recheck_pattern(const PMFunction& F, int k, const pmroot::FortPattern& pat) {
    const double A = F.eval(F.c(k - 1));
    const double B = F.eval(F.c(k + 2));
    const double tol = 1e-12;
    auto extremes = [&](double lo, double hi) {
        double mn = std::min(F.eval(lo), F.eval(hi));
        double mx = std::max(F.eval(lo), F.eval(hi));
        for (std::size_t i = 0; i < F.xs().size(); ++i)
            if (F.xs()[i] > lo && F.xs()[i] < hi) {
                mn = std::min(mn, F.ys()[i]);
                mx = std::max(mx, F.ys()[i]);
            }
        return std::pair{mn, mx};
    };

    REQUIRE(pat.left_seq.front() == k - 1);
    REQUIRE(pat.left_seq.back() == 0);
    for (std::size_t j = 0; j + 1 < pat.left_seq.size(); ++j)
        CHECK(pat.left_seq[j] > pat.left_seq[j + 1]);
    for (std::size_t j = 1; j + 1 < pat.left_seq.size(); ++j) {
        const double want = (j % 4 <= 1) ? A : B;
        CHECK(std::abs(F.eval(F.c(pat.left_seq[j])) - want) <= tol);
    }
    for (std::size_t j = 0; j + 1 < pat.left_seq.size(); ++j) {
        const auto [mn, mx] = extremes(F.c(pat.left_seq[j + 1]), F.c(pat.left_seq[j]));
        const int r = static_cast<int>(j % 4);
        if (r == 0 || r == 1 || r == 3) CHECK(std::abs(mx - A) <= tol);
        if (r == 1 || r == 2 || r == 3) CHECK(std::abs(mn - B) <= tol);
    }

    REQUIRE(pat.right_seq.front() == k + 2);
    REQUIRE(pat.right_seq.back() == F.fort_count() + 1);
    for (std::size_t j = 0; j + 1 < pat.right_seq.size(); ++j)
        CHECK(pat.right_seq[j] < pat.right_seq[j + 1]);
    for (std::size_t j = 1; j + 1 < pat.right_seq.size(); ++j) {
        const double want = (j % 4 <= 1) ? B : A;
        CHECK(std::abs(F.eval(F.c(pat.right_seq[j])) - want) <= tol);
    }
    for (std::size_t j = 0; j + 1 < pat.right_seq.size(); ++j) {
        const auto [mn, mx] = extremes(F.c(pat.right_seq[j]), F.c(pat.right_seq[j + 1]));
        const int r = static_cast<int>(j % 4);
        if (r == 0 || r == 1 || r == 3) CHECK(std::abs(mn - B) <= tol);
        if (r == 1 || r == 2 || r == 3) CHECK(std::abs(mx - A) <= tol);
    }
}

} // namespace

TEST_CASE("returned patterns re-verify independently") {
    for (const auto& F :
         {fixtures::f2(), fixtures::f2_case1(), fixtures::f2_case2(), fixtures::mid_s3()}) {
        const auto [rep, pat] = match_t22(F);
        REQUIRE(pat.has_value());
        recheck_pattern(F, rep.k_lap, *pat);
    }
    const auto [rep24, pat24] = match_t24(fixtures::f2());
    REQUIRE(pat24.has_value());
    recheck_pattern(fixtures::f2(), rep24.k_lap, *pat24);
}

TEST_CASE("matched endpoint chains re-verify independently") {
    // generic middle-lap chain on f2: c_k < F(c_{k+2}) < F(c_k) and
    // F(c_{k+1}) < F(c_{k-1}) < c_{k+1}
    const auto F = fixtures::f2();
    const int k = match_t22(F).first.k_lap;
    const double ck = F.c(k), ck1 = F.c(k + 1);
    const double A = F.eval(F.c(k - 1)), B = F.eval(F.c(k + 2));
    CHECK(ck < B);
    CHECK(B < F.eval(ck));
    CHECK(F.eval(ck1) < A);
    CHECK(A < ck1);
    // and the decreasing-class full chain
    CHECK(F.eval(ck) < F.eval(ck1));
}

TEST_CASE("matched cases re-verify and are mutually exclusive on the fixtures") {
    // f1: t21 only (first lap)
    CHECK(match_t21(fixtures::f1()).theorem_case == TheoremCase::T21_case3);
    CHECK(match_t23(fixtures::f1()).theorem_case == TheoremCase::None);
    // f3: t23 only
    CHECK(match_t23(fixtures::f3()).theorem_case == TheoremCase::T23);
    CHECK(match_t21(fixtures::f3()).theorem_case == TheoremCase::None);
    // f2: both t22 and t24 (documented)
    CHECK(match_t22(fixtures::f2()).first.theorem_case == TheoremCase::T22_case3);
    CHECK(match_t24(fixtures::f2()).first.theorem_case == TheoremCase::T24_case2);
}
