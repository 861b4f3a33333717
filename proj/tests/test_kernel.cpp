#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pmroot/kernel.hpp"
#include "pmroot/pm_function.hpp"

using namespace pmroot;
using doctest::Approx;

namespace {

MonotonePL lin_segment() { return MonotonePL({0.0, 1.0}, {0.5, 1.0}); }

MonotonePL f1_on_K() { return restrict_to_lap(fixtures::f1(), 0); }

double sup_square_residual(const IncreasingKernel& k, const MonotonePL& phi, int grid) {
    double sup = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = phi.lo() + (phi.hi() - phi.lo()) * i / (grid - 1.0);
        sup = std::max(sup, std::abs(k.eval(k.eval(x)) - phi.eval(x)));
    }
    return sup;
}

} // namespace

TEST_CASE("increasing segment root with a prescribed left value") {
    const auto phi = lin_segment();
    const auto k = inc_root_segment(phi, 1.0 / 3.0);
    CHECK(k.eval(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(k.eval(1.0 / 3.0) == Approx(0.5).epsilon(1e-13));
    CHECK(k.eval(1.0) == 1.0);
    CHECK(sup_square_residual(k, phi, 1001) <= 1e-10);
}

TEST_CASE("segment root inverse agrees with the forward map") {
    const auto phi = lin_segment();
    const auto k = inc_root_segment(phi, 1.0 / 3.0);
    for (int i = 0; i <= 500; ++i) {
        const double x = i / 500.0;
        const double y = k.eval(x);
        CHECK(k.eval_inverse(y) == Approx(x).epsilon(1e-10));
    }
}

TEST_CASE("general increasing root splits at interior fixed points") {
    const auto phi = f1_on_K(); // 0.1 + 0.4x on [0, 0.5], fixed point 1/6
    const auto k = inc_root_general(phi, 0.05, 0.40);
    CHECK(k.eval(0.0) == Approx(0.05).epsilon(1e-15));
    CHECK(k.eval(1.0 / 6.0) == Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(k.eval(0.5) == Approx(0.40).epsilon(1e-15));
    CHECK(sup_square_residual(k, phi, 2001) <= 1e-9);

    // strict monotonicity across the fixed point
    double prev = k.eval(0.0);
    for (int i = 1; i <= 2000; ++i) {
        const double y = k.eval(0.5 * i / 2000.0);
        CHECK(y > prev);
        prev = y;
    }
}

TEST_CASE("missing or out-of-range anchors are rejected") {
    const auto phi = f1_on_K();
    CHECK_THROWS_AS((void)inc_root_general(phi, std::nullopt, 0.40), PmError);
    CHECK_THROWS_AS((void)inc_root_general(phi, 0.15, 0.40), PmError); // 0.15 > phi(0)
    CHECK_THROWS_AS((void)inc_root_general(phi, 0.05, 0.25), PmError); // 0.25 < phi(0.5)
}

TEST_CASE("identity segment has no isolated fixed points") {
    const MonotonePL ident({0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS((void)ident.fixed_points(), PmError);
    try {
        (void)inc_root_general(ident, std::nullopt, std::nullopt);
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::NonIsolatedFixedPoints);
    }
}

TEST_CASE("interior segments use deterministic midpoint seeds") {
    // phi with fixed endpoints and one interior fixed point at 0.5:
    // above the diagonal on (0, 0.5), below on (0.5, 1).
    const MonotonePL phi({0.0, 0.25, 0.75, 1.0}, {0.0, 0.35, 0.65, 1.0});
    const auto k = inc_root_general(phi, std::nullopt, std::nullopt);
    CHECK(k.eval(0.0) == 0.0);
    CHECK(k.eval(0.5) == 0.5);
    CHECK(k.eval(1.0) == 1.0);
    CHECK(sup_square_residual(k, phi, 2001) <= 1e-9);
    const auto again = inc_root_general(phi, std::nullopt, std::nullopt);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        CHECK(k.eval(x) == again.eval(x));
    }
}

TEST_CASE("decreasing paired root on the split characteristic interval") {
    const auto phi = restrict_to_lap(fixtures::f3(), 0); // 0.1 + 0.6x on [0, 0.5]
    const auto left = phi.restrict(0.0, 0.25);
    const auto right = phi.restrict(0.25, 0.5);
    const auto k = dec_root_paired(left, right, /*xstar=*/0.0, /*ystar=*/0.40);
    CHECK(k.corner_case());
    CHECK(k.eval(0.0) == Approx(0.40).epsilon(1e-15));
    CHECK(k.eval(0.25) == Approx(0.25).epsilon(1e-15));
    CHECK(k.eval(0.5) == Approx(0.0).epsilon(1e-15));

    double sup = 0.0, conj = 0.0;
    for (int i = 0; i < 2001; ++i) {
        const double x = 0.5 * i / 2000.0;
        sup = std::max(sup, std::abs(k.eval(k.eval(x)) - phi.eval(x)));
    }
    for (int i = 0; i < 1001; ++i) {
        const double x = 0.25 * i / 1000.0;
        conj = std::max(conj, std::abs(k.eval_hat(phi.eval(x)) - phi.eval(k.eval_hat(x))));
    }
    CHECK(sup <= 1e-9);
    CHECK(conj <= 1e-10);
}

TEST_CASE("decreasing root: the other corner and the open rectangle") {
    const auto phi = restrict_to_lap(fixtures::f3(), 0);
    const auto left = phi.restrict(0.0, 0.25);
    const auto right = phi.restrict(0.25, 0.5);

    const auto corner = dec_root_paired(left, right, /*xstar=*/0.1, /*ystar=*/0.5);
    CHECK(corner.corner_case());
    CHECK(corner.eval(0.0) == Approx(0.5).epsilon(1e-15));
    CHECK(corner.eval(0.5) == Approx(0.1).epsilon(1e-15));

    const auto inner = dec_root_paired(left, right, /*xstar=*/0.05, /*ystar=*/0.45);
    CHECK_FALSE(inner.corner_case());
    CHECK(inner.eval(0.0) == Approx(0.45).epsilon(1e-15));
    CHECK(inner.eval(0.5) == Approx(0.05).epsilon(1e-15));
    double sup = 0.0;
    for (int i = 0; i < 2001; ++i) {
        const double x = 0.5 * i / 2000.0;
        sup = std::max(sup, std::abs(inner.eval(inner.eval(x)) - phi.eval(x)));
    }
    CHECK(sup <= 1e-9);

    CHECK_THROWS_AS((void)dec_root_paired(left, right, 0.2, 0.45), PmError);
    CHECK_THROWS_AS((void)dec_root_paired(left, right, 0.05, 0.2), PmError);
}

TEST_CASE("decreasing root on K prescribes both endpoint values") {
    const auto F2 = fixtures::f2();
    const auto K = characteristic_interval(F2);
    const auto k = dec_root_on_K(F2, K, /*y_left=*/0.58, /*x_right=*/0.42);
    CHECK(k.eval(0.4) == Approx(0.58).epsilon(1e-15));
    CHECK(k.eval(0.6) == Approx(0.42).epsilon(1e-15));
    CHECK(k.eval(0.5) == Approx(0.5).epsilon(1e-15));
    const auto phi = restrict_to_lap(F2, K.lap_index);
    double sup = 0.0;
    for (int i = 0; i < 2001; ++i) {
        const double x = 0.4 + 0.2 * i / 2000.0;
        sup = std::max(sup, std::abs(k.eval(k.eval(x)) - phi.eval(x)));
    }
    CHECK(sup <= 1e-9);
}

TEST_CASE("multiple interior fixed points are a scope gate") {
    // F|K crosses the diagonal three times inside [0, 0.5].
    const auto F = PMFunction::validate(
        {0, 1}, {0, 0.15, 0.35, 0.5, 0.7, 1.0}, {0.05, 0.10, 0.40, 0.45, 0.05, 0.45});
    const auto K = characteristic_interval(F);
    REQUIRE(K.lap_index == 0);
    try {
        (void)dec_root_on_K(F, K, 0.45, 0.05);
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::MultipleInteriorFixedPoints);
    }
}

TEST_CASE("seed choice moves the root pointwise but not its contract") {
    const auto phi = lin_segment();
    KernelOptions bent;
    bent.seed.bend = 0.4;
    const auto lin_root = inc_root_segment(phi, 1.0 / 3.0);
    const auto bent_root = inc_root_segment(phi, 1.0 / 3.0, bent);
    CHECK(bent_root.eval(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(bent_root.eval(1.0) == 1.0);
    CHECK(sup_square_residual(bent_root, phi, 1001) <= 1e-10);
    double diff = 0.0;
    for (int i = 0; i <= 200; ++i)
        diff = std::max(diff, std::abs(bent_root.eval(i / 200.0) - lin_root.eval(i / 200.0)));
    CHECK(diff > 1e-6);
}

TEST_CASE("evaluation near attracting fixed points snaps instead of looping") {
    const auto phi = lin_segment();
    const auto k = inc_root_segment(phi, 1.0 / 3.0);
    CHECK(k.eval(1.0 - 1e-14) == 1.0);
    CHECK(k.eval(1.0 - 1e-9) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bent seeds work for the decreasing kernel too") {
    const auto F2 = fixtures::f2();
    const auto K = characteristic_interval(F2);
    KernelOptions bent;
    bent.seed.bend = -0.3;
    const auto k = dec_root_on_K(F2, K, 0.58, 0.42, bent);
    CHECK(k.eval(0.4) == Approx(0.58).epsilon(1e-15));
    CHECK(k.eval(0.6) == Approx(0.42).epsilon(1e-15));
    const auto phi = restrict_to_lap(F2, K.lap_index);
    const auto plain = dec_root_on_K(F2, K, 0.58, 0.42);
    double sup = 0.0, diff = 0.0;
    for (int i = 0; i < 1001; ++i) {
        const double x = 0.4 + 0.2 * i / 1000.0;
        sup = std::max(sup, std::abs(k.eval(k.eval(x)) - phi.eval(x)));
        diff = std::max(diff, std::abs(k.eval(x) - plain.eval(x)));
    }
    CHECK(sup <= 1e-9);
    CHECK(diff > 1e-7);
}
