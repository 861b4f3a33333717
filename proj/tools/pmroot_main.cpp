// pmroot: analyze piecewise-monotone interval maps and construct/verify
// continuous iterative square roots on them.
//
// Exit codes: 0 success/pass, 1 verification failed, 2 input error,
// 3 conditions not met, 4 construction/evaluation error.

#include <clocale>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmroot/json_io.hpp"

using namespace pmroot;

namespace {

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError:
        case ErrorCode::UnsortedAbscissae:
        case ErrorCode::FlatSegment:
        case ErrorCode::NonSelfMap:
        case ErrorCode::OutOfDomain:
        case ErrorCode::RangeMismatch:
        case ErrorCode::RecipeMismatch:
            return 2;
        case ErrorCode::WrongLap:
        case ErrorCode::NoPattern:
        case ErrorCode::NotReversing:
        case ErrorCode::EvenFixedPointCount:
        case ErrorCode::NonIsolatedFixedPoints:
        case ErrorCode::PreconditionFailed:
        case ErrorCode::ConditionsNotMet:
        case ErrorCode::NoApplicableTheorem:
        case ErrorCode::NoCharacteristicInterval:
            return 3;
        default:
            return 4;
    }
}

std::size_t breakpoint_budget() {
    if (const char* env = std::getenv("PMROOT_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        std::cerr << "warning: ignoring unparsable PMROOT_CAP=" << env << "\n";
    }
    return 1000000;
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

RootPreference preference_from(const std::string& s) {
    if (s == "inc") return RootPreference::Increasing;
    if (s == "dec") return RootPreference::Decreasing;
    return RootPreference::Any;
}

struct CheckOutcome {
    json report;
    bool matched = false;
};

void attach_reversing(const PMFunction& F, json& report) {
    try {
        const auto K = characteristic_interval(F);
        report["reversing"] = to_json(check_reversing_correspondence(F, K.bounds));
    } catch (const PmError& e) {
        report["reversing"] = json{{"error", e.what()}};
    }
}

CheckOutcome run_matcher(const PMFunction& F, const std::string& name, PatternMode mode) {
    CheckOutcome out;
    out.report["theorem"] = name;
    try {
        if (name == "t21") {
            const auto rep = match_t21(F);
            out.report["conditions"] = to_json(rep);
            out.matched = rep.theorem_case != TheoremCase::None;
        } else if (name == "t22") {
            const auto [rep, pat] = match_t22(F, mode);
            out.report["conditions"] = to_json(rep);
            if (pat) out.report["pattern"] = to_json(*pat);
            out.matched = rep.theorem_case != TheoremCase::None && pat.has_value();
        } else if (name == "t23") {
            const auto rep = match_t23(F);
            out.report["conditions"] = to_json(rep);
            out.matched = rep.theorem_case != TheoremCase::None;
            attach_reversing(F, out.report);
        } else {
            const auto [rep, pat] = match_t24(F, mode);
            out.report["conditions"] = to_json(rep);
            if (pat) out.report["pattern"] = to_json(*pat);
            out.matched = rep.theorem_case != TheoremCase::None && pat.has_value();
            attach_reversing(F, out.report);
        }
    } catch (const PmError& e) {
        out.report["error"] = e.what();
    }
    out.report["matched"] = out.matched;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C"); // CSV and summaries use '.' decimals
    CLI::App app{
        "pmroot: iterative square roots of piecewise-monotone interval maps.\n"
        "Input maps are JSON files {\"domain\":[a,b],\"xs\":[...],\"ys\":[...]};\n"
        "the environment variable PMROOT_CAP overrides the composition\n"
        "breakpoint budget (default 1000000)."};
    app.require_subcommand(1);

    std::string input, out_path, root_path, theorem = "auto", klass = "any", seed_spec_path;
    int height_cap = 32, grid = 5001, points = 1001, order = 2, cheight = 1;
    long orbit_cap = 100000;
    double tol = 1e-8;
    bool relaxed = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", input, "input map (JSON)")->required();
        cmd->add_option("--out", out_path, "write output here instead of stdout");
    };

    auto* analyze = app.add_subcommand("analyze", "forts, height, characteristic interval, range");
    add_common(analyze);
    analyze->add_option("--cap", height_cap, "height iteration cap (default 32)");

    auto* check = app.add_subcommand("check", "which construction hypotheses hold");
    add_common(check);
    check->add_option("--theorem", theorem, "auto|t21|t22|t23|t24 (default auto = all)")
        ->check(CLI::IsMember({"auto", "t21", "t22", "t23", "t24"}));
    check->add_flag("--relaxed", relaxed, "pocket conditions as inclusions instead of equalities");

    auto* construct = app.add_subcommand("construct", "build a square-root recipe");
    add_common(construct);
    construct->add_option("--theorem", theorem, "auto|t21|t22|t23|t24")
        ->check(CLI::IsMember({"auto", "t21", "t22", "t23", "t24"}));
    construct->add_option("--class", klass, "inc|dec|any: monotone class on K (default any)")
        ->check(CLI::IsMember({"inc", "dec", "any"}));
    construct->add_flag("--relaxed", relaxed, "relaxed pocket conditions");
    construct->add_option("--seed-spec", seed_spec_path, "seed JSON, e.g. {\"bend\":0.3}");
    construct->add_option("--orbit-cap", orbit_cap, "kernel orbit budget (default 100000)");
    construct->add_option("--cap", height_cap, "height iteration cap (default 32)");

    auto* verify = app.add_subcommand("verify", "check a recipe against its map");
    add_common(verify);
    verify->add_option("--root", root_path, "recipe file")->required();
    verify->add_option("--grid", grid, "residual grid size (default 5001)");
    verify->add_option("--tol", tol, "residual tolerance (default 1e-8)");

    auto* classify = app.add_subcommand("classify", "tabulated existence/nonexistence lookup");
    add_common(classify);
    classify->add_option("--order", order, "root order n")->required();
    classify->add_option("--class", klass, "inc|dec: root class on K")
        ->required()
        ->check(CLI::IsMember({"inc", "dec"}));
    classify->add_option("--height", cheight, "root height H(f)")->required();

    auto* sample = app.add_subcommand("sample", "CSV samples of the map or of a root");
    add_common(sample);
    sample->add_option("--root", root_path, "sample this recipe's root instead of the map");
    sample->add_option("--points", points, "number of uniform samples (default 1001)");

    CLI11_PARSE(app, argc, argv);

    const PatternMode mode = relaxed ? PatternMode::Relaxed : PatternMode::Strict;
    const std::size_t budget = breakpoint_budget();

    try {
        const PMFunction F = load_pm_function(input);

        if (analyze->parsed()) {
            emit(analysis_to_json(F, height_cap, budget), out_path);
            return 0;
        }

        if (check->parsed()) {
            json j;
            j["input"] = input;
            json matches = json::array();
            bool any = false;
            std::vector<std::string> names =
                theorem == "auto" ? std::vector<std::string>{"t21", "t22", "t23", "t24"}
                                  : std::vector<std::string>{theorem};
            for (const auto& name : names) {
                auto outcome = run_matcher(F, name, mode);
                any = any || outcome.matched;
                matches.push_back(outcome.report);
            }
            j["matches"] = matches;
            j["anyMatched"] = any;
            emit(j, out_path);
            return any ? 0 : 3;
        }

        if (construct->parsed()) {
            KernelOptions opts;
            opts.orbit_cap = orbit_cap;
            if (!seed_spec_path.empty())
                opts.seed.bend = load_json_file(seed_spec_path).value("bend", 0.0);
            RootFunction root = [&] {
                if (theorem == "t21") return construct_t21(F, opts);
                if (theorem == "t22") return construct_t22(F, opts, mode);
                if (theorem == "t23") return construct_t23(F, opts);
                if (theorem == "t24") return construct_t24(F, opts, mode);
                return construct_auto(F, preference_from(klass), opts, mode);
            }();
            const auto Kb = root.K_bounds();
            std::cerr << "constructed " << to_string(root.source())
                      << (root.mirrored() ? " (mirrored)" : "") << ": f(" << Kb[0]
                      << ") = " << root.eval(Kb[0]) << ", f(" << Kb[1] << ") = " << root.eval(Kb[1])
                      << ", " << (root.increasing_on_K() ? "increasing" : "decreasing")
                      << " on K\n";
            emit(recipe_to_json(root, F), out_path);
            return 0;
        }

        if (verify->parsed()) {
            const json recipe = load_json_file(root_path);
            const RootFunction root = root_from_recipe(F, recipe);
            const auto rep = verify_root(F, root, grid, tol);
            emit(to_json(rep), out_path);
            std::cerr << (rep.passed ? "PASS" : "FAIL") << ": supResidual = " << rep.sup_residual
                      << " (tol " << tol << ")\n";
            return rep.passed ? 0 : 1;
        }

        if (classify->parsed()) {
            const RootClass rc = klass == "inc" ? RootClass::Increasing : RootClass::Decreasing;
            emit(to_json(classify_table1(F, order, rc, cheight)), out_path);
            return 0;
        }

        if (sample->parsed()) {
            EvaluableView view;
            std::optional<RootFunction> root;
            if (!root_path.empty()) {
                root = root_from_recipe(F, load_json_file(root_path));
                view = make_view(*root);
            } else {
                view = make_view(F);
            }
            const auto rows = sample_table(view, {F.a(), F.b()}, points);
            const std::string csv = to_csv(rows);
            if (out_path.empty())
                std::cout << csv;
            else
                write_text_file(out_path, csv);
            return 0;
        }
    } catch (const PmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
