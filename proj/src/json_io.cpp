#include "pmroot/json_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pmroot {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, h);
    return buf;
}

std::vector<double> doubles(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        fail(ErrorCode::ParseError, std::string("missing or non-array field \"") + key + "\"");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail(ErrorCode::ParseError, std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

PMFunction pm_function_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorCode::ParseError, "input is not a JSON object");
    const auto dom = doubles(j, "domain");
    if (dom.size() != 2) fail(ErrorCode::ParseError, "\"domain\" must have two entries");
    return PMFunction::validate({dom[0], dom[1]}, doubles(j, "xs"), doubles(j, "ys"));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::ParseError, "invalid JSON in " + path);
    return j;
}

PMFunction load_pm_function(const std::string& path) {
    return pm_function_from_json(load_json_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::ParseError, "cannot write " + path);
    out << content;
}

json to_json(const PMFunction& F) {
    return json{{"domain", {F.a(), F.b()}}, {"xs", F.xs()}, {"ys", F.ys()}};
}

json to_json(const HeightReport& h) {
    json j;
    if (h.is_finite())
        j["value"] = *h.value;
    else
        j["value"] = h.to_string();
    j["fortCounts"] = h.fort_counts;
    j["cap"] = h.cap;
    if (h.budget_exhausted) j["budgetExhausted"] = true;
    if (h.saturated) j["saturated"] = true;
    return j;
}

json analysis_to_json(const PMFunction& F, int height_cap, std::size_t breakpoint_budget) {
    json j;
    j["N"] = F.fort_count();
    j["forts"] = F.forts().positions;
    const auto h = height(F, height_cap, breakpoint_budget);
    if (h.is_finite())
        j["H"] = *h.value;
    else
        j["H"] = h.to_string();
    j["fortCounts"] = h.fort_counts;
    const auto rg = F.range();
    j["range"] = {rg[0], rg[1]};
    if (h.is_finite() && *h.value <= 1) {
        const auto K = characteristic_interval(F, height_cap);
        j["K"] = {K.bounds[0], K.bounds[1]};
        j["kLap"] = K.lap_index;
    }
    j["hash"] = hash_hex(content_hash(F));
    return j;
}

json to_json(const ConditionReport& rep) {
    json j;
    j["kPlus"] = rep.k_plus;
    j["kPlusZero"] = rep.k_plus_zero;
    j["kPlusZeroWitnesses"] = rep.k_plus_zero_witnesses;
    j["theoremCase"] = to_string(rep.theorem_case);
    j["matchedClauses"] = rep.matched_clauses;
    if (!rep.first_failed_clause.empty()) j["firstFailedClause"] = rep.first_failed_clause;
    j["maxRange"] = rep.max_range;
    if (rep.u_index) j["uIndex"] = *rep.u_index;
    j["mirrored"] = rep.mirrored;
    j["kLap"] = rep.k_lap;
    return j;
}

json to_json(const FortPattern& pat) {
    json j;
    j["leftSeq"] = pat.left_seq;
    j["rightSeq"] = pat.right_seq;
    json ls = json::array(), rs = json::array();
    for (auto m : pat.left_schedule) ls.push_back(to_string(m));
    for (auto m : pat.right_schedule) rs.push_back(to_string(m));
    j["leftSchedule"] = ls;
    j["rightSchedule"] = rs;
    j["s"] = pat.s();
    j["t"] = pat.t();
    j["strictMode"] = pat.strict_mode;
    return j;
}

json to_json(const ReversingReport& rep) {
    json j;
    j["fixedPoints"] = rep.fixed_points;
    j["center"] = rep.center;
    j["endpointsParityOk"] = rep.endpoints_parity_ok;
    j["signConditionOk"] = rep.sign_condition_ok;
    j["signSamples"] = rep.sign_samples;
    j["isReversing"] = rep.is_reversing;
    j["note"] = rep.note;
    return j;
}

json to_json(const Table1Verdict& verdict) {
    json j;
    j["order"] = verdict.order;
    j["rootClass"] = verdict.root_class == RootClass::Increasing ? "increasing" : "decreasing";
    j["rootHeight"] = verdict.root_height;
    j["verdict"] = to_string(verdict.verdict);
    j["tableRow"] = verdict.table_row;
    return j;
}

json to_json(const VerificationReport& rep) {
    json j;
    j["supResidual"] = rep.sup_residual;
    j["residualArgmax"] = rep.residual_argmax;
    j["residualGridSize"] = rep.residual_grid;
    json gaps = json::array();
    for (const auto& [c, gap] : rep.junction_gaps) gaps.push_back({{"at", c}, {"gap", gap}});
    j["junctionGaps"] = gaps;
    j["maxJunctionGap"] = rep.max_junction_gap;
    j["pieceMonotoneOk"] = rep.piece_monotone_ok;
    j["lapMonotonicityOk"] = rep.monotone_ok;
    j["rootForts"] = rep.root_forts;
    j["rootHeight"] = to_json(rep.root_height);
    j["kDefined"] = rep.k_defined;
    j["fImageInK"] = rep.f_image_in_K;
    j["f2ImageInK"] = rep.f2_image_in_K;
    if (rep.claimed_height) j["claimedHeight"] = *rep.claimed_height;
    j["heightOk"] = rep.height_ok;
    j["evalFailures"] = rep.eval_failures;
    if (rep.eval_failures > 0) j["firstFailureAt"] = rep.first_failure_at;
    j["tol"] = rep.tol;
    j["passed"] = rep.passed;
    return j;
}

namespace {

const char* piece_kind_name(PieceKind k) {
    switch (k) {
        case PieceKind::Kernel: return "kernel";
        case PieceKind::KernelInv: return "kinv";
        case PieceKind::LapInv: return "lapinv";
    }
    return "kernel";
}

PieceKind piece_kind_from(const std::string& s) {
    if (s == "kernel") return PieceKind::Kernel;
    if (s == "kinv") return PieceKind::KernelInv;
    if (s == "lapinv") return PieceKind::LapInv;
    fail(ErrorCode::ParseError, "unknown piece kind \"" + s + "\"");
}

PocketMap pocket_map_from(const std::string& s) {
    if (s == "kMinus1") return PocketMap::KMinus1;
    if (s == "k") return PocketMap::K;
    if (s == "kPlus1") return PocketMap::KPlus1;
    fail(ErrorCode::ParseError, "unknown pocket map \"" + s + "\"");
}

} // namespace

json recipe_to_json(const RootFunction& f, const PMFunction& outer) {
    json j;
    j["format"] = "pmroot-recipe/1";
    j["sourceTheorem"] = to_string(f.source());
    j["mirrored"] = f.mirrored();
    j["fixtureHash"] = hash_hex(content_hash(outer));
    j["kLap"] = f.k_lap();
    j["options"] = {{"orbitCap", f.options().orbit_cap},
                    {"snapTol", f.options().snap_tol},
                    {"seedBend", f.options().seed.bend}};
    json kj;
    if (f.increasing_on_K()) {
        const auto& ker = std::get<IncreasingKernel>(f.kernel());
        kj["orientation"] = "increasing";
        kj["fixedPoints"] = ker.fixed_points();
        json segs = json::array();
        for (const auto& s : ker.segments())
            segs.push_back({s.p(), s.q(), s.reflected() ? 1.0 : 0.0, s.z(), s.w()});
        kj["segments"] = segs;
    } else {
        const auto& ker = std::get<DecreasingKernel>(f.kernel());
        kj["orientation"] = "decreasing";
        kj["alpha"] = ker.alpha();
        kj["beta"] = ker.beta();
        kj["eta"] = ker.eta();
        kj["xi"] = ker.xi();
        kj["xstar"] = ker.xstar();
        kj["ystar"] = ker.ystar();
        kj["cornerCase"] = ker.corner_case();
    }
    j["kernel"] = kj;
    json pieces = json::array();
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        json p;
        p["lap"] = i;
        p["kind"] = piece_kind_name(f.pieces()[i].kind);
        if (f.pieces()[i].kind == PieceKind::LapInv) p["via"] = f.pieces()[i].via_lap;
        pieces.push_back(p);
    }
    j["pieces"] = pieces;
    if (f.pattern()) j["pattern"] = to_json(*f.pattern());
    return j;
}

RootFunction root_from_recipe(const PMFunction& outer, const json& recipe) try {
    if (!recipe.is_object() || recipe.value("format", "") != std::string("pmroot-recipe/1"))
        fail(ErrorCode::ParseError, "not a pmroot recipe");
    if (recipe.value("fixtureHash", "") != hash_hex(content_hash(outer)))
        fail(ErrorCode::RecipeMismatch, "recipe was built for a different input map");

    const bool mirrored = recipe.value("mirrored", false);
    PMFunction inner = mirrored ? mirror_conjugate(outer) : outer;
    const int k_lap = recipe.at("kLap").get<int>();

    KernelOptions opts;
    if (recipe.contains("options")) {
        const auto& o = recipe["options"];
        opts.orbit_cap = o.value("orbitCap", opts.orbit_cap);
        opts.snap_tol = o.value("snapTol", opts.snap_tol);
        opts.seed.bend = o.value("seedBend", 0.0);
    }

    const std::string st = recipe.value("sourceTheorem", "T21");
    Theorem source = Theorem::T21;
    if (st == "T22") source = Theorem::T22;
    else if (st == "T23") source = Theorem::T23;
    else if (st == "T24") source = Theorem::T24;

    const auto& kj = recipe.at("kernel");
    KernelVariant kernel = [&]() -> KernelVariant {
        MonotonePL phi = restrict_to_lap(inner, k_lap);
        if (kj.value("orientation", "") == std::string("increasing")) {
            std::vector<double> fixed;
            for (const auto& v : kj.at("fixedPoints")) fixed.push_back(v.get<double>());
            std::vector<std::array<double, 5>> segs;
            for (const auto& s : kj.at("segments"))
                segs.push_back({s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>(),
                                s.at(3).get<double>(), s.at(4).get<double>()});
            return restore_increasing_kernel(phi, fixed, segs, opts);
        }
        const double alpha = kj.at("alpha").get<double>();
        const double beta = kj.at("beta").get<double>();
        const double eta = kj.at("eta").get<double>();
        const double xi = kj.at("xi").get<double>();
        return dec_root_paired(phi.restrict(alpha, beta), phi.restrict(eta, xi),
                               kj.at("xstar").get<double>(), kj.at("ystar").get<double>(), opts);
    }();

    std::vector<LapPiece> pieces(static_cast<std::size_t>(inner.lap_count()));
    for (const auto& p : recipe.at("pieces")) {
        const auto lap = p.at("lap").get<std::size_t>();
        if (lap >= pieces.size()) fail(ErrorCode::ParseError, "piece lap index out of range");
        pieces[lap].kind = piece_kind_from(p.at("kind").get<std::string>());
        pieces[lap].via_lap = p.value("via", -1);
    }

    std::optional<FortPattern> pattern;
    if (recipe.contains("pattern")) {
        FortPattern pat;
        for (const auto& v : recipe["pattern"].at("leftSeq")) pat.left_seq.push_back(v.get<int>());
        for (const auto& v : recipe["pattern"].at("rightSeq")) pat.right_seq.push_back(v.get<int>());
        for (const auto& v : recipe["pattern"].at("leftSchedule"))
            pat.left_schedule.push_back(pocket_map_from(v.get<std::string>()));
        for (const auto& v : recipe["pattern"].at("rightSchedule"))
            pat.right_schedule.push_back(pocket_map_from(v.get<std::string>()));
        pat.strict_mode = recipe["pattern"].value("strictMode", true);
        pattern = pat;
    }

    return RootFunction::assemble(std::move(inner), k_lap, std::move(kernel), std::move(pieces),
                                  source, mirrored, std::move(pattern), opts,
                                  /*validate=*/false);
} catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed recipe: ") + e.what());
}

} // namespace pmroot
