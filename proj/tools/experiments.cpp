#include "experiments.hpp"

#include "bfree/constructions.hpp"
#include "bfree/criterion.hpp"
#include "bfree/density.hpp"
#include "bfree/sieve.hpp"
#include "bfree/structure.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bfree::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kExperiments = {"de-convergence",  "oscillation",
                                            "difference-density", "criterion-scan",
                                            "toeplitz",          "triples"};

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument("config: " + msg);
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << content;
}

std::vector<u64> u64_grid(const json& j, const char* name) {
    require(j.is_array() && !j.empty(), std::string(name) + " must be a nonempty array");
    std::vector<u64> out;
    for (const auto& v : j) {
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() > 0),
                std::string(name) + " entries must be positive integers");
        out.push_back(v.get<u64>());
    }
    return out;
}

// geometric checkpoint grid plus the family's own block corners when present
std::vector<u64> oscillation_checkpoints(const FamilySpec& family, const json& grids) {
    std::vector<u64> cps;
    if (grids.contains("checkpoints")) {
        cps = u64_grid(grids.at("checkpoints"), "checkpoints");
    } else {
        u64 hi = grids.value("max_checkpoint", u64(1'000'000));
        for (u64 x = 8; x <= hi; x *= 2) cps.push_back(x);
        if (const auto* iv = family.get_if<IntervalUnion>()) {
            for (u64 t : iv->levels) {
                if (t <= hi) cps.push_back(t);
                if (2 * t <= hi) cps.push_back(2 * t);
            }
        }
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return cps;
}

json proxies_json(const OscillationProxies& p) {
    return json{{"min", static_cast<double>(p.min_value)},
                {"max", static_cast<double>(p.max_value)},
                {"argmin", p.argmin},
                {"argmax", p.argmax},
                {"spread", p.spread()},
                {"checkpoints_used", p.checkpoints_used},
                {"note", "finite-checkpoint proxies; no limit is decided"}};
}

std::string run_de_convergence(const json& cfg, const fs::path& out) {
    FamilySpec family = FamilySpec::from_json(cfg.at("family"));
    auto k_grid = u64_grid(cfg.at("grids").at("k_grid"), "k_grid");
    DensitySeries s = davenport_erdos_series(family, k_grid);
    write_file(out / "de_series.csv", density_series_csv(s));
    json summary = {{"experiment", "de-convergence"},
                    {"checkpoints", s.checkpoints.size()},
                    {"final_value", s.values.back().value},
                    {"final_kind", to_string(s.values.back().kind)}};
    write_file(out / "summary.json", summary.dump(2));
    std::ostringstream os;
    os << "de-convergence: " << s.checkpoints.size() << " checkpoints, final "
       << s.values.back().value << " (" << to_string(s.values.back().kind) << ")";
    return os.str();
}

std::string run_oscillation(const json& cfg, const fs::path& out) {
    FamilySpec family;
    json family_source;
    if (cfg.contains("builder")) {
        const auto& b = cfg.at("builder");
        auto r = build_besicovitch_intervals(b.at("eps").get<double>(),
                                             b.at("levels").get<std::size_t>(),
                                             b.at("n_est").get<u64>());
        family = r.family;
        family_source = {{"builder_log", r.log.data}};
    } else {
        family = FamilySpec::from_json(cfg.at("family"));
    }
    json grids = cfg.value("grids", json::object());
    std::vector<u64> cps = oscillation_checkpoints(family, grids);
    FiniteSet b = family.materialize(cps.back());
    std::vector<u64> counts = count_multiples_at(b, cps);
    std::ostringstream csv;
    csv.precision(15);
    csv << "x,count,partial\n";
    for (std::size_t i = 0; i < cps.size(); ++i)
        csv << cps[i] << ',' << counts[i] << ','
            << static_cast<double>(counts[i]) / static_cast<double>(cps[i]) << '\n';
    write_file(out / "oscillation.csv", csv.str());
    auto prox = upper_lower_proxies(family, cps, grids.value("burn_in", u64(0)));
    json summary = {{"experiment", "oscillation"}, {"proxies", proxies_json(prox)}};
    if (!family_source.is_null()) summary["builder"] = family_source;
    write_file(out / "family.json", family.to_json().dump(2));
    write_file(out / "summary.json", summary.dump(2));
    std::ostringstream os;
    os.precision(6);
    os << "oscillation: min " << static_cast<double>(prox.min_value) << " @ " << prox.argmin
       << ", max " << static_cast<double>(prox.max_value) << " @ " << prox.argmax;
    return os.str();
}

std::string run_difference_density(const json& cfg, const fs::path& out) {
    FamilySpec base = FamilySpec::from_json(cfg.at("family"));
    const auto& grids = cfg.at("grids");
    std::size_t levels = grids.value("levels", std::size_t(3));
    u64 n_budget = grids.value("n_budget", u64(1'000'000));
    GapWitnessResult r = build_density_gap_witness(base, levels, n_budget);
    std::ostringstream csv;
    csv.precision(15);
    csv << "x,difference_count,gap\n";
    for (u64 x : r.witness_checkpoints) {
        u64 d = count_difference(r.family_e, r.family_b, x);
        csv << x << ',' << d << ',' << static_cast<double>(d) / static_cast<double>(x) << '\n';
    }
    write_file(out / "difference.csv", csv.str());
    write_file(out / "family_b.json", r.family_b.to_json().dump(2));
    json summary = {{"experiment", "difference-density"},
                    {"eps0", r.eps0},
                    {"witness_checkpoints", r.witness_checkpoints},
                    {"log", r.log.data}};
    write_file(out / "summary.json", summary.dump(2));
    std::ostringstream os;
    os << "difference-density: eps0 " << r.eps0 << ", " << r.witness_checkpoints.size()
       << " witness checkpoints";
    return os.str();
}

std::string run_criterion_scan(const json& cfg, const fs::path& out) {
    FamilySpec family = FamilySpec::from_json(cfg.at("family"));
    const auto& grids = cfg.at("grids");
    auto x_grid = u64_grid(grids.at("x_grid"), "x_grid");
    require(grids.contains("eps_grid") && grids.at("eps_grid").is_array(),
            "eps_grid must be an array");
    std::vector<double> eps_grid;
    for (const auto& v : grids.at("eps_grid")) eps_grid.push_back(v.get<double>());
    double threshold = grids.value("threshold", 0.05);
    CriterionReport r = criterion_scan(family, x_grid, eps_grid, threshold);
    write_file(out / "criterion.csv", criterion_report_csv(r));
    write_file(out / "summary.json", criterion_report_summary_json(r));
    std::ostringstream os;
    os << "criterion-scan: verdict " << (r.verdict.consistent ? "consistent" : "inconsistent")
       << " (heuristic, threshold " << threshold << ")";
    return os.str();
}

std::string run_toeplitz(const json& cfg, const fs::path& out) {
    FamilySpec family = FamilySpec::from_json(cfg.at("family"));
    const auto& grids = cfg.at("grids");
    i64 n_lo = grids.value("n_lo", i64(0));
    i64 n_hi = grids.value("n_hi", i64(16));
    u64 s_max = grids.at("s_max").get<u64>();
    u64 window = grids.at("window").get<u64>();
    ToeplitzReport r = toeplitz_scan(family, n_lo, n_hi, s_max, window);
    write_file(out / "toeplitz.csv", toeplitz_report_csv(r));
    json summary = {{"experiment", "toeplitz"},
                    {"resolved", r.resolved.size()},
                    {"defects", r.defects},
                    {"note", "window evidence only; admissibility is a necessary condition"}};
    write_file(out / "summary.json", summary.dump(2));
    std::ostringstream os;
    os << "toeplitz: " << r.resolved.size() << " resolved, " << r.defects.size() << " defects";
    return os.str();
}

// ---------------------------------------------------------------------------
// triples: evidence rows for the realizable existence patterns
// ---------------------------------------------------------------------------

struct TripleRow {
    std::string code;       // expected existence pattern for (B, B', B*)
    std::string name;
    FamilySpec b, b_taut, b_min;
    std::string caveat;
};

json spread_cell(const FamilySpec& f, const std::vector<u64>& cps) {
    auto p = upper_lower_proxies(f, cps, 256); // skip small-checkpoint noise
    return proxies_json(p);
}

std::string run_triples(const json& cfg, const fs::path& out) {
    UnionExampleParams params;
    if (cfg.contains("grids")) {
        const auto& g = cfg.at("grids");
        if (g.contains("interval_levels"))
            params.interval_levels = u64_grid(g.at("interval_levels"), "interval_levels");
        params.loosening_scales = g.value("loosening_scales", params.loosening_scales);
        params.n_cal = g.value("n_cal", params.n_cal);
    }
    const u64 top = 4 * params.interval_levels.back();
    std::vector<u64> cps;
    for (u64 x = 8; x <= top; x *= 2) cps.push_back(x);
    for (u64 t : params.interval_levels) {
        if (t <= top) cps.push_back(t);
        if (2 * t <= top) cps.push_back(2 * t);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    const FamilySpec one = FamilySpec::explicit_set({1});
    const FamilySpec intervals = FamilySpec::interval_union(params.interval_levels);
    std::vector<TripleRow> rows;
    // pairwise coprime thin set: prime squares
    {
        FamilySpec sq = FamilySpec::all_primes(1, 2);
        rows.push_back({"111", "erdos-prime-squares", sq, sq, one,
                        "coprime thin family: its taut counterpart is itself"});
    }
    {
        auto r = build_union_example("ex_4_1", params);
        rows.push_back({"111", "ex_4_1", r.family, r.standins.at("tautified"),
                        r.standins.at("minimised"), "odd coprime part plus doubled primes"});
    }
    {
        rows.push_back({"001", "interval-union", intervals, intervals, one,
                        "taut counterpart not finitely computable; the family stands in"});
    }
    {
        auto r = build_union_example("EX1", params);
        rows.push_back({"001", "EX1", r.family, r.standins.at("tautified"),
                        r.standins.at("minimised"), r.log.data["caveats"][0]});
    }
    {
        auto r = build_union_example("EX2", params);
        // a loosening of a primitive prefix of the family stands in for the
        // existence-side counterpart
        FiniteSet prefix = primitivize(r.family.materialize(4096));
        std::vector<u64> first(prefix.begin(),
                               prefix.begin() + std::min<std::ptrdiff_t>(
                                                    static_cast<std::ptrdiff_t>(prefix.size()),
                                                    static_cast<std::ptrdiff_t>(params.loosening_scales)));
        LooseningPlan plan;
        plan.n_cal = params.n_cal;
        auto loos = build_loosening(FiniteSet::from_sorted(first), plan);
        rows.push_back({"100", "EX2", loos.family, r.standins.at("tautified"),
                        r.standins.at("minimised"),
                        "loosening of a finite prefix stands in for the full counterpart"});
    }
    {
        auto r = build_union_example("ex_110", params);
        rows.push_back({"110", "ex_110", r.family, r.standins.at("tautified"),
                        r.standins.at("minimised"), "loosened odd scales plus doubled primes"});
    }
    {
        auto r = build_union_example("ex_000", params);
        rows.push_back({"000", "ex_000", r.family, r.standins.at("tautified"),
                        r.standins.at("minimised"), "split prime families declared divergent"});
    }
    {
        FiniteSet prefix = primitivize(intervals.materialize(4096));
        std::vector<u64> first(prefix.begin(),
                               prefix.begin() + std::min<std::ptrdiff_t>(
                                                    static_cast<std::ptrdiff_t>(prefix.size()),
                                                    static_cast<std::ptrdiff_t>(params.loosening_scales)));
        LooseningPlan plan;
        plan.n_cal = params.n_cal;
        auto loos = build_loosening(FiniteSet::from_sorted(first), plan);
        rows.push_back({"101", "loosened-interval-prefix", loos.family, intervals, one,
                        "taut counterpart stands in as the interval family"});
    }

    json table = json::array();
    std::ostringstream csv;
    csv.precision(6);
    csv << "code,name,spread_b,spread_taut,spread_min,note\n";
    for (const auto& row : rows) {
        json cell = {{"code", row.code}, {"name", row.name}, {"caveat", row.caveat}};
        try {
            cell["b"] = spread_cell(row.b, cps);
            cell["b_taut"] = spread_cell(row.b_taut, cps);
            cell["b_min"] = spread_cell(row.b_min, cps);
            csv << row.code << ',' << row.name << ',' << cell["b"]["spread"].get<double>() << ','
                << cell["b_taut"]["spread"].get<double>() << ','
                << cell["b_min"]["spread"].get<double>() << ',' << row.caveat << '\n';
        } catch (const std::exception& e) {
            cell["error"] = e.what(); // other rows still emitted
            csv << row.code << ',' << row.name << ",,,,error: " << e.what() << '\n';
        }
        table.push_back(cell);
    }
    json summary = {{"experiment", "triples"},
                    {"checkpoints", cps},
                    {"rows", table},
                    {"note", "spreads are finite-checkpoint evidence; nothing here decides "
                             "whether any density limit exists"}};
    write_file(out / "triples.csv", csv.str());
    write_file(out / "summary.json", summary.dump(2));
    return "triples: " + std::to_string(rows.size()) + " evidence rows";
}

} // namespace

void validate_experiment_config(const json& config) {
    require(config.is_object(), "top level must be an object");
    require(config.contains("experiment") && config.at("experiment").is_string(),
            "missing string field \"experiment\"");
    const std::string name = config.at("experiment").get<std::string>();
    require(kExperiments.count(name) == 1, "unknown experiment \"" + name + "\"");
    if (name == "de-convergence") {
        require(config.contains("family"), "de-convergence needs \"family\"");
        require(config.contains("grids") && config.at("grids").contains("k_grid"),
                "de-convergence needs grids.k_grid");
    } else if (name == "oscillation") {
        require(config.contains("family") || config.contains("builder"),
                "oscillation needs \"family\" or \"builder\"");
        if (config.contains("builder")) {
            const auto& b = config.at("builder");
            require(b.contains("eps") && b.contains("levels") && b.contains("n_est"),
                    "builder needs eps, levels, n_est");
        }
    } else if (name == "difference-density") {
        require(config.contains("family"), "difference-density needs \"family\"");
        require(config.contains("grids"), "difference-density needs \"grids\"");
    } else if (name == "criterion-scan") {
        require(config.contains("family"), "criterion-scan needs \"family\"");
        require(config.contains("grids") && config.at("grids").contains("x_grid") &&
                    config.at("grids").contains("eps_grid"),
                "criterion-scan needs grids.x_grid and grids.eps_grid");
    } else if (name == "toeplitz") {
        require(config.contains("family"), "toeplitz needs \"family\"");
        require(config.contains("grids") && config.at("grids").contains("s_max") &&
                    config.at("grids").contains("window"),
                "toeplitz needs grids.s_max and grids.window");
    }
    if (config.contains("family")) FamilySpec::from_json(config.at("family")); // must parse
    if (config.contains("threads"))
        require(config.at("threads").is_number_unsigned() && config.at("threads").get<u64>() >= 1,
                "threads must be >= 1");
}

std::string run_experiment(const json& config, const fs::path& out_dir) {
    validate_experiment_config(config);
    fs::create_directories(out_dir);
    // record the exact config next to the artifacts
    write_file(out_dir / "config.json", config.dump(2));
    const std::string name = config.at("experiment").get<std::string>();
    if (name == "de-convergence") return run_de_convergence(config, out_dir);
    if (name == "oscillation") return run_oscillation(config, out_dir);
    if (name == "difference-density") return run_difference_density(config, out_dir);
    if (name == "criterion-scan") return run_criterion_scan(config, out_dir);
    if (name == "toeplitz") return run_toeplitz(config, out_dir);
    return run_triples(config, out_dir);
}

} // namespace bfree::cli
