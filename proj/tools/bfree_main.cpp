// bfree: command-line front end for computing with sets of multiples.
// Exit codes: 0 success, 2 config error, 3 compute error, 4 budget exceeded.

#include "experiments.hpp"

#include "bfree/constructions.hpp"
#include "bfree/criterion.hpp"
#include "bfree/density.hpp"
#include "bfree/primes.hpp"
#include "bfree/sieve.hpp"
#include "bfree/structure.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace bfree;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitBudget = 4;

// --family accepts inline JSON or @path-to-json
FamilySpec parse_family_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream is(arg.substr(1));
        if (!is) throw std::invalid_argument("cannot open family file " + arg.substr(1));
        text.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
    }
    return FamilySpec::from_json(json::parse(text));
}

std::vector<u64> parse_u64_list(const std::string& csv) {
    std::vector<u64> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

void write_text(const fs::path& p, const std::string& content) {
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << content;
}

struct WallBudget {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds = 0.0; // 0 = unlimited
    void check() const {
        if (seconds <= 0.0) return;
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
        if (elapsed.count() > seconds)
            throw BudgetError("wall-clock budget of " + std::to_string(seconds) + "s exceeded");
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bfree: sieving, densities, and structural evidence for sets of multiples"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    unsigned threads = 1;
    double budget_seconds = 0.0;
    app.add_option("--out", out_dir, "output directory for artifacts");
    app.add_option("--threads", threads, "worker count (recorded; evaluation is deterministic)")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--budget-seconds", budget_seconds, "wall-clock budget; 0 means unlimited");

    // --- sieve ---
    auto* c_sieve = app.add_subcommand("sieve", "sieve a window of the set of multiples");
    std::string sieve_family;
    u64 sieve_lo = 1, sieve_hi = 0;
    std::string sieve_dump;
    bool sieve_members = false, sieve_free = false;
    c_sieve->add_option("--family", sieve_family, "family JSON or @file")->required();
    c_sieve->add_option("--lo", sieve_lo, "window start (inclusive, >= 1)");
    c_sieve->add_option("--hi", sieve_hi, "window end (exclusive)")->required();
    c_sieve->add_flag("--free", sieve_free, "sieve the complement instead");
    c_sieve->add_option("--dump", sieve_dump, "write the packed window to this file");
    c_sieve->add_flag("--members", sieve_members, "print the members");

    // --- density ---
    auto* c_density = app.add_subcommand("density", "natural/log partial or exact density");
    std::string den_family;
    u64 den_n = 0;
    bool den_log = false, den_exact = false, den_period = false;
    u64 den_cap = kDefaultPeriodCap;
    c_density->add_option("--family", den_family)->required();
    c_density->add_option("--n", den_n, "evaluation bound (also the truncation for exact modes)");
    c_density->add_flag("--log", den_log, "logarithmic partial density");
    c_density->add_flag("--exact", den_exact, "exact density by inclusion-exclusion");
    c_density->add_flag("--period", den_period, "exact density by one-period sieve");
    c_density->add_option("--cap", den_cap, "period cap for --period");

    // --- de-series ---
    auto* c_de = app.add_subcommand("de-series", "density checkpoint series over truncations");
    std::string de_family, de_grid, de_csv;
    c_de->add_option("--family", de_family)->required();
    c_de->add_option("--grid", de_grid, "comma-separated K checkpoints")->required();
    c_de->add_option("--csv", de_csv, "write the series CSV here");

    // --- criterion ---
    auto* c_crit = app.add_subcommand("criterion", "existence-criterion statistic scan");
    std::string crit_family, crit_x, crit_eps, crit_csv, crit_summary;
    double crit_threshold = 0.05;
    c_crit->add_option("--family", crit_family)->required();
    c_crit->add_option("--x-grid", crit_x, "comma-separated x values")->required();
    c_crit->add_option("--eps-grid", crit_eps, "comma-separated eps values")->required();
    c_crit->add_option("--threshold", crit_threshold, "heuristic verdict threshold");
    c_crit->add_option("--csv", crit_csv);
    c_crit->add_option("--summary", crit_summary);

    // --- g-sum ---
    auto* c_gsum = app.add_subcommand("g-sum", "prime-reciprocal sum over a scaled window");
    u64 g_scale = 1, g_cutoff = 2, g_stride = 1, g_x = 0;
    u32 g_level = 1;
    double g_eps = 0.5;
    c_gsum->add_option("--scale", g_scale)->required();
    c_gsum->add_option("--level", g_level)->required();
    c_gsum->add_option("--cutoff", g_cutoff);
    c_gsum->add_option("--stride", g_stride);
    c_gsum->add_option("--x", g_x)->required();
    c_gsum->add_option("--eps", g_eps)->required();

    // --- mertens ---
    auto* c_mertens = app.add_subcommand("mertens", "reciprocal sum of primes in a progression");
    u64 m_k = 0, m_l = 0, m_x = 0;
    c_mertens->add_option("--k", m_k)->required();
    c_mertens->add_option("--l", m_l)->required();
    c_mertens->add_option("--x", m_x)->required();

    // --- toeplitz ---
    auto* c_toep = app.add_subcommand("toeplitz", "per-position period scan of the free indicator");
    std::string t_family, t_csv;
    i64 t_nlo = 0, t_nhi = 16;
    u64 t_smax = 0, t_window = 0;
    c_toep->add_option("--family", t_family)->required();
    c_toep->add_option("--n-lo", t_nlo);
    c_toep->add_option("--n-hi", t_nhi);
    c_toep->add_option("--s-max", t_smax)->required();
    c_toep->add_option("--window", t_window)->required();
    c_toep->add_option("--csv", t_csv);

    // --- pattern ---
    auto* c_pat = app.add_subcommand("pattern", "smallest offset where a pattern window recurs");
    std::string p_star, p_host;
    u64 p_n = 0, p_radius = 0;
    c_pat->add_option("--star", p_star, "pattern family JSON or @file")->required();
    c_pat->add_option("--host", p_host, "host family JSON or @file")->required();
    c_pat->add_option("--n", p_n, "window length minus one")->required();
    c_pat->add_option("--radius", p_radius, "largest offset to try")->required();

    // --- classify ---
    auto* c_cls = app.add_subcommand("classify", "structural evidence checks");
    std::string cls_family, cls_check, cls_witness, cls_grid = "100,1000,10000", cls_out;
    u64 cls_k = 10'000, cls_c = 1;
    double cls_tol = 0.2;
    c_cls->add_option("--family", cls_family)->required();
    c_cls->add_option("--check", cls_check, "thin|behrend|coprime|taut-violation|primitive")
        ->required();
    c_cls->add_option("--k", cls_k, "truncation bound");
    c_cls->add_option("--grid", cls_grid, "K grid for evidence checks");
    c_cls->add_option("--tol", cls_tol);
    c_cls->add_option("--c", cls_c, "rescaling factor for taut-violation");
    c_cls->add_option("--witness", cls_witness, "witness family for taut-violation");
    c_cls->add_option("--json", cls_out, "write the verdict JSON here");

    // --- build ---
    auto* c_build = app.add_subcommand("build", "construct an example family with a log");
    std::string b_kind, b_name, b_scales, b_base;
    double b_eps = 0.1;
    std::size_t b_levels = 3;
    u64 b_nest = 1'000'000;
    c_build->add_option("--kind", b_kind,
                        "besicovitch-intervals|thin-blocks|loosening|gap-witness|union-example")
        ->required();
    c_build->add_option("--eps", b_eps);
    c_build->add_option("--levels", b_levels);
    c_build->add_option("--n-est", b_nest);
    c_build->add_option("--scales", b_scales, "comma-separated scale set (loosening)");
    c_build->add_option("--base", b_base, "base family JSON or @file (gap-witness)");
    c_build->add_option("--name", b_name, "example name (union-example)");

    // --- experiment ---
    auto* c_exp = app.add_subcommand("experiment", "run a named experiment from a JSON config");
    std::string exp_config;
    c_exp->add_option("--config", exp_config, "experiment config JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    WallBudget budget;
    budget.seconds = budget_seconds;
    std::cout.precision(15);

    try {
        if (*c_sieve) {
            FamilySpec f = parse_family_arg(sieve_family);
            FiniteSet b = f.materialize(sieve_hi);
            Window w = sieve_free ? free_window(b, sieve_lo, sieve_hi)
                                  : sieve_multiples(b, sieve_lo, sieve_hi);
            std::cout << "window [" << w.lo() << "," << w.hi() << ") members " << w.popcount()
                      << "\n";
            if (sieve_members) {
                for (u64 m : w.members()) std::cout << m << "\n";
            }
            if (!sieve_dump.empty()) {
                std::ofstream os(sieve_dump, std::ios::binary);
                dump_window(w, os);
            }
        } else if (*c_density) {
            FamilySpec f = parse_family_arg(den_family);
            if (den_exact || den_period) {
                if (den_n == 0) throw std::invalid_argument("exact modes need --n as truncation");
                FiniteSet b = f.materialize(den_n);
                Rat d = den_exact ? exact_density_finite(b) : exact_density_period(b, den_cap);
                std::cout << "exact " << rat_num(d) << "/" << rat_den(d) << " ~ "
                          << static_cast<double>(d) << "\n";
            } else if (den_log) {
                auto d = log_partial(f, den_n);
                std::cout << "log-partial raw " << d.value << " clipped " << d.clipped()
                          << " at n " << den_n << "\n";
            } else {
                auto d = natural_partial(f, den_n);
                std::cout << "natural-partial " << rat_num(*d.exact) << "/" << rat_den(*d.exact)
                          << " ~ " << d.value << " at n " << den_n << "\n";
            }
        } else if (*c_de) {
            FamilySpec f = parse_family_arg(de_family);
            DensitySeries s = davenport_erdos_series(f, parse_u64_list(de_grid));
            std::string csv = density_series_csv(s);
            if (!de_csv.empty())
                write_text(de_csv, csv);
            else
                std::cout << csv;
        } else if (*c_crit) {
            FamilySpec f = parse_family_arg(crit_family);
            CriterionReport r = criterion_scan(f, parse_u64_list(crit_x),
                                               parse_double_list(crit_eps), crit_threshold);
            if (!crit_csv.empty())
                write_text(crit_csv, criterion_report_csv(r));
            else
                std::cout << criterion_report_csv(r);
            if (!crit_summary.empty())
                write_text(crit_summary, criterion_report_summary_json(r));
            else
                std::cout << criterion_report_summary_json(r) << "\n";
        } else if (*c_gsum) {
            PatternSpec pat{g_level, g_cutoff, g_stride};
            std::cout << g_sum(g_scale, pat, g_x, g_eps) << "\n";
        } else if (*c_mertens) {
            double s = mertens_progression_sum(m_k, m_l, m_x);
            double drift = s - std::log(std::log(static_cast<double>(m_x))) /
                                   static_cast<double>(totient(m_k));
            std::cout << "sum " << s << " drift " << drift << "\n";
        } else if (*c_toep) {
            FamilySpec f = parse_family_arg(t_family);
            ToeplitzReport r = toeplitz_scan(f, t_nlo, t_nhi, t_smax, t_window);
            std::string csv = toeplitz_report_csv(r);
            if (!t_csv.empty())
                write_text(t_csv, csv);
            else
                std::cout << csv;
            std::cout << "resolved " << r.resolved.size() << " defects " << r.defects.size()
                      << "\n";
        } else if (*c_pat) {
            auto k = pattern_occurs(parse_family_arg(p_star), parse_family_arg(p_host), p_n,
                                    p_radius);
            if (k)
                std::cout << "offset " << *k << "\n";
            else
                std::cout << "none within radius " << p_radius << "\n";
        } else if (*c_cls) {
            FamilySpec f = parse_family_arg(cls_family);
            json verdict;
            if (cls_check == "thin") {
                auto t = thin_check(f, cls_k);
                verdict = t.verdict.to_json();
                verdict["partial_sum"] = t.partial_sum;
                if (t.certified_bound)
                    verdict["certified_bound"] = static_cast<double>(*t.certified_bound);
            } else if (cls_check == "behrend") {
                auto b = behrend_evidence(f, parse_u64_list(cls_grid), cls_tol);
                verdict = b.verdict.to_json();
                verdict["final_exact_value"] = b.final_exact_value;
            } else if (cls_check == "coprime") {
                verdict = check_pairwise_coprime(f, cls_k).to_json();
            } else if (cls_check == "taut-violation") {
                if (cls_witness.empty())
                    throw std::invalid_argument("taut-violation needs --witness");
                verdict = taut_violation_evidence(f, cls_c, parse_family_arg(cls_witness),
                                                  parse_u64_list(cls_grid), cls_tol)
                              .to_json();
            } else if (cls_check == "primitive") {
                FiniteSet b = f.materialize(cls_k);
                auto w = divisibility_witness(b);
                verdict["property"] = "primitive";
                verdict["verdict"] = w ? "fails" : "holds-on-truncation";
                if (w) verdict["witness_pair"] = {w->divisor, w->multiple};
            } else {
                throw std::invalid_argument("unknown --check " + cls_check);
            }
            if (!cls_out.empty()) write_text(cls_out, verdict.dump(2));
            std::cout << verdict.dump(2) << "\n";
        } else if (*c_build) {
            fs::create_directories(out_dir);
            json log;
            FamilySpec family;
            if (b_kind == "besicovitch-intervals") {
                auto r = build_besicovitch_intervals(b_eps, b_levels, b_nest);
                family = r.family;
                log = r.log.data;
            } else if (b_kind == "thin-blocks") {
                ThinBlocksPolicy policy;
                policy.levels = b_levels;
                auto r = build_thin_blocks(policy);
                family = r.family;
                log = r.log.data;
            } else if (b_kind == "loosening") {
                if (b_scales.empty()) throw std::invalid_argument("loosening needs --scales");
                LooseningPlan plan;
                plan.n_cal = b_nest;
                auto r = build_loosening(FiniteSet::from_values(parse_u64_list(b_scales)), plan);
                family = r.family;
                log = r.log.data;
            } else if (b_kind == "gap-witness") {
                if (b_base.empty()) throw std::invalid_argument("gap-witness needs --base");
                auto r = build_density_gap_witness(parse_family_arg(b_base), b_levels, b_nest);
                family = r.family_b;
                log = r.log.data;
            } else if (b_kind == "union-example") {
                if (b_name.empty()) throw std::invalid_argument("union-example needs --name");
                UnionExampleParams params;
                params.n_cal = b_nest;
                auto r = build_union_example(b_name, params);
                family = r.family;
                log = r.log.data;
                for (const auto& [key, spec] : r.standins)
                    write_text(fs::path(out_dir) / ("standin_" + key + ".json"),
                               spec.to_json().dump(2));
            } else {
                throw std::invalid_argument("unknown --kind " + b_kind);
            }
            write_text(fs::path(out_dir) / "family.json", family.to_json().dump(2));
            write_text(fs::path(out_dir) / "log.json", log.dump(2));
            std::cout << "wrote " << (fs::path(out_dir) / "family.json").string() << "\n";
        } else if (*c_exp) {
            std::ifstream is(exp_config);
            if (!is) throw std::invalid_argument("cannot open config " + exp_config);
            json config = json::parse(is);
            if (budget_seconds > 0.0) config["budget_seconds"] = budget_seconds;
            config["threads"] = threads;
            std::cout << cli::run_experiment(config, out_dir) << "\n";
        }
        budget.check();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}
