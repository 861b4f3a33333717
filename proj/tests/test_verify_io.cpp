#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pmroot/json_io.hpp"
#include "pmroot/verify.hpp"

using namespace pmroot;
using doctest::Approx;

TEST_CASE("verification passes on the constructed roots") {
    struct Case {
        PMFunction F;
        RootFunction f;
    };
    const Case cases[] = {
        {fixtures::f1(), construct_t21(fixtures::f1())},
        {fixtures::f2(), construct_t22(fixtures::f2())},
        {fixtures::f3(), construct_t23(fixtures::f3())},
        {fixtures::f2(), construct_t24(fixtures::f2())},
        {fixtures::mid_s3(), construct_t22(fixtures::mid_s3())},
    };
    for (const auto& c : cases) {
        const auto rep = verify_root(c.F, c.f);
        CHECK(rep.passed);
        CHECK(rep.sup_residual <= 1e-8);
        CHECK(rep.max_junction_gap <= 1e-11);
        CHECK(rep.monotone_ok);
        REQUIRE(rep.root_height.is_finite());
        CHECK(*rep.root_height.value == 2);
        CHECK_FALSE(rep.f_image_in_K);
        CHECK(rep.f2_image_in_K);
    }
}

TEST_CASE("verification rejects a wrong root") {
    const auto F = fixtures::f1();
    const auto rep = verify_root(F, make_view(fixtures::identity01()), 5001, 1e-8, std::nullopt);
    CHECK_FALSE(rep.passed);
    CHECK(rep.sup_residual == Approx(0.8).epsilon(1e-12));
    CHECK(rep.residual_argmax == Approx(0.8).epsilon(1e-12));
}

TEST_CASE("verification reports are deterministic") {
    const auto F = fixtures::f3();
    const auto f = construct_t23(F);
    const auto a = to_json(verify_root(F, f)).dump();
    const auto b = to_json(verify_root(F, f)).dump();
    CHECK(a == b);
}

TEST_CASE("csv samples merge uniform grid with breakpoints") {
    const auto rows = sample_table(make_view(fixtures::f1()), {0.0, 1.0}, 3);
    REQUIRE(rows.size() == 6); // 0, 0.5, 1 plus interior forts 0.6, 0.7, 0.8
    const double expected_x[] = {0.0, 0.5, 0.6, 0.7, 0.8, 1.0};
    const double expected_y[] = {0.1, 0.3, 0.05, 0.40, 0.00, 0.45};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].first == Approx(expected_x[i]).epsilon(1e-15));
        CHECK(rows[i].second == Approx(expected_y[i]).epsilon(1e-15));
    }
    const auto id_rows = sample_table(make_view(fixtures::identity01()), {0.0, 1.0}, 2);
    REQUIRE(id_rows.size() == 2);
    CHECK(id_rows[0].first == 0.0);
    CHECK(id_rows[1].second == 1.0);

    const auto root_rows =
        sample_table(make_view(construct_t21(fixtures::f1())), {0.0, 1.0}, 1001);
    CHECK(root_rows.size() >= 1001);
    for (std::size_t i = 1; i < root_rows.size(); ++i)
        CHECK(root_rows[i].first > root_rows[i - 1].first);

    const auto csv = to_csv({{0.0, 0.1}});
    CHECK(csv.substr(0, 4) == "x,y\n");
}

TEST_CASE("json load rejects malformed input") {
    CHECK_THROWS_AS((void)pm_function_from_json(json::parse("[1,2]")), PmError);
    CHECK_THROWS_AS((void)pm_function_from_json(json::parse("{\"domain\":[0,1]}")), PmError);
    CHECK_THROWS_AS(
        (void)pm_function_from_json(json::parse(
            "{\"domain\":[0,1],\"xs\":[0,1],\"ys\":[0.2,0.2]}")),
        PmError);
    const auto F = pm_function_from_json(json::parse(
        "{\"domain\":[0,1],\"xs\":[0,0.5,1],\"ys\":[0,1,0]}"));
    CHECK(F.fort_count() == 1);
}

TEST_CASE("fixture files round-trip through the loader") {
    const auto F1 = load_pm_function(std::string(FIXTURES_DIR) + "/f1.json");
    CHECK(content_hash(F1) == content_hash(fixtures::f1()));
    const auto M = load_pm_function(std::string(FIXTURES_DIR) + "/mid_s3.json");
    CHECK(content_hash(M) == content_hash(fixtures::mid_s3()));
}

TEST_CASE("recipes rebuild the same root") {
    struct Case {
        PMFunction F;
        RootFunction f;
    };
    const Case cases[] = {
        {fixtures::f1(), construct_t21(fixtures::f1())},
        {fixtures::f2(), construct_t24(fixtures::f2())},
        {fixtures::f3(), construct_t23(fixtures::f3())},
        {fixtures::mid_s3(), construct_t22(fixtures::mid_s3())},
    };
    for (const auto& c : cases) {
        const json recipe = recipe_to_json(c.f, c.F);
        const auto g = root_from_recipe(c.F, recipe);
        CHECK(g.source() == c.f.source());
        for (int i = 0; i <= 1000; ++i) {
            const double x = i / 1000.0;
            CHECK(g.eval(x) == Approx(c.f.eval(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("recipes are tied to their input map") {
    const auto f = construct_t21(fixtures::f1());
    const json recipe = recipe_to_json(f, fixtures::f1());
    CHECK_THROWS_AS((void)root_from_recipe(fixtures::f2(), recipe), PmError);
    try {
        (void)root_from_recipe(fixtures::f2(), recipe);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::RecipeMismatch);
    }
}

TEST_CASE("a tampered recipe fails verification instead of passing") {
    // interior-rectangle anchors (t24): a nudged ystar still rebuilds but the
    // root no longer squares to F
    {
        const auto F = fixtures::f2();
        const auto f = construct_t24(F);
        json recipe = recipe_to_json(f, F);
        REQUIRE(verify_root(F, root_from_recipe(F, recipe)).passed);

        json bad = recipe;
        bad["kernel"]["ystar"] = bad["kernel"]["ystar"].get<double>() - 1e-3;
        const auto g = root_from_recipe(F, bad);
        const auto rep = verify_root(F, g);
        CHECK_FALSE(rep.passed);
        CHECK(rep.sup_residual > 1e-8);
    }
    // segment anchor of an increasing kernel (t21)
    {
        const auto F = fixtures::f1();
        const auto f = construct_t21(F);
        json recipe = recipe_to_json(f, F);
        json bad = recipe;
        bad["kernel"]["segments"][0][4] =
            bad["kernel"]["segments"][0][4].get<double>() + 1e-3;
        const auto g = root_from_recipe(F, bad);
        const auto rep = verify_root(F, g);
        CHECK_FALSE(rep.passed);
        CHECK(rep.sup_residual > 1e-8);
    }
    // corner-case anchors (t23) sit on the boundary of the admissible set;
    // tampering them is rejected at rebuild time
    {
        const auto F = fixtures::f3();
        const auto f = construct_t23(F);
        json bad = recipe_to_json(f, F);
        bad["kernel"]["ystar"] = bad["kernel"]["ystar"].get<double>() - 1e-3;
        CHECK_THROWS_AS((void)root_from_recipe(F, bad), PmError);
    }
    // t23 piece-table tamper: rebuilds, then fails verification
    {
        const auto F = fixtures::f3();
        const auto f = construct_t23(F);
        json bad = recipe_to_json(f, F);
        bad["pieces"][2]["via"] = 0;
        const auto g = root_from_recipe(F, bad);
        const auto rep = verify_root(F, g);
        CHECK_FALSE(rep.passed);
    }
}

TEST_CASE("an exhausted orbit budget surfaces as an evaluation failure") {
    KernelOptions tiny;
    tiny.orbit_cap = 2;
    const auto F = fixtures::f1();
    const auto f = construct_t21(F, tiny);
    try {
        (void)verify_root(F, f);
        CHECK(false);
    } catch (const PmError& e) {
        CHECK(e.code() == ErrorCode::EvaluationFailure);
        CHECK(std::string(e.what()).find("x = ") != std::string::npos);
    }
}

TEST_CASE("root fort counts follow the assembled monotone pattern") {
    const auto rep1 = verify_root(fixtures::f1(), construct_t21(fixtures::f1()));
    CHECK(rep1.root_forts == 2); // inc,dec,inc,inc,inc across the five laps
    const auto rep2 = verify_root(fixtures::f2(), construct_t22(fixtures::f2()));
    CHECK(rep2.root_forts == 4);
    const auto rep3 = verify_root(fixtures::f3(), construct_t23(fixtures::f3()));
    CHECK(rep3.root_forts == 1); // dec,inc,inc
}

TEST_CASE("mirrored recipes rebuild through the reflection") {
    const auto M = mirror_conjugate(fixtures::f1());
    const auto g = construct_auto(M, RootPreference::Increasing);
    REQUIRE(g.mirrored());
    const json recipe = recipe_to_json(g, M);
    const auto h = root_from_recipe(M, recipe);
    CHECK(h.mirrored());
    for (int i = 0; i <= 500; ++i) {
        const double x = i / 500.0;
        CHECK(h.eval(x) == Approx(g.eval(x)).epsilon(1e-12));
    }
}

TEST_CASE("analysis json carries forts, height and the covering lap") {
    const auto j = analysis_to_json(fixtures::f1());
    CHECK(j["N"] == 4);
    CHECK(j["H"] == 1);
    CHECK(j["K"][0] == 0.0);
    CHECK(j["K"][1] == 0.5);

    const auto jt = analysis_to_json(fixtures::tent());
    CHECK(jt["H"] == "infinite(cap=32)");
    CHECK_FALSE(jt.contains("K"));
}
