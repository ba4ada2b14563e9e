#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tuckercert/bounds.hpp"
#include "tuckercert/certifier.hpp"
#include "tuckercert/montecarlo.hpp"
#include "tuckercert/oracle.hpp"

using namespace tuckercert;
using json = nlohmann::json;

namespace {

const char* kVersion = "1.0.0";

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw Error("empty entry in list '" + s + "'");
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw Error("bad integer '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error("empty list");
    return out;
}

json manifest(const std::string& command, const json& config, std::uint64_t seed) {
    json m;
    m["tool"] = "tuckercert";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    json mods;
    for (const char* name : {"tensor-core", "tucker-geometry", "pattern-assumptions", "constraint-builder", "hall-graph",
                             "completability-certifier", "probability-bounds", "algebraic-oracle", "montecarlo",
                             "cli-harness"})
        mods[name] = kVersion;
    m["modules"] = mods;
    return m;
}

void write_atomic(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp);
        out << text;
        if (!out) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& path, const json& manifest_json, const std::string& key, const json& body) {
    json doc;
    doc["manifest"] = manifest_json;
    doc[key] = body;
    write_atomic(path, doc.dump(2) + "\n");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CertifyArgs {
    std::string pattern, rank, out;
    int j = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = CertifyOptions{}.node_budget;
};

void add_certify_flags(CLI::App* sub, CertifyArgs& a) {
    sub->add_option("pattern", a.pattern, "pattern JSON file")->required();
    sub->add_option("--rank", a.rank, "ranks r_{j+1},...,r_d as a comma list")->required();
    sub->add_option("--j", a.j, "split index j")->required();
    sub->add_option("--seed", a.seed, "seed");
    sub->add_option("--budget", a.budget, "search node budget");
    sub->add_option("-o,--out", a.out, "output file (stdout when omitted)");
}

json certify_config(const CertifyArgs& a, const SamplingPattern& p) {
    return {{"pattern", json::parse(pattern_json(p))}, {"j", a.j}, {"rank", parse_list(a.rank)}, {"nodeBudget", a.budget}};
}

int run_check_finite(const CertifyArgs& a) {
    auto p = read_pattern_file(a.pattern);
    RankSpec rs(a.j, parse_list(a.rank));
    CertifyOptions opt;
    opt.node_budget = a.budget;
    auto c = certify_finite(p, rs, a.seed, opt);
    emit(a.out, manifest("check-finite", certify_config(a, p), a.seed), "certificate", json::parse(certificate_json(c, rs)));
    std::cerr << "verdict: " << to_string(c.verdict) << "\n";
    return c.verdict == FiniteVerdict::Undecided ? 2 : 0;
}

int run_check_unique(const CertifyArgs& a) {
    auto p = read_pattern_file(a.pattern);
    RankSpec rs(a.j, parse_list(a.rank));
    CertifyOptions opt;
    opt.node_budget = a.budget;
    auto c = certify_unique(p, rs, a.seed, opt);
    emit(a.out, manifest("check-unique", certify_config(a, p), a.seed), "certificate", json::parse(certificate_json(c, rs)));
    std::cerr << "verdict: " << to_string(c.verdict) << "\n";
    return c.verdict == UniqueVerdict::Undecided ? 2 : 0;
}

struct BoundsArgs {
    int d = 4, n = 900, j = 1;
    std::string range = "1:300";
    double eps = 1e-4;
    std::string out;
};

int run_bounds(const BoundsArgs& a) {
    CurveConfig cfg;
    cfg.d = a.d;
    cfg.n = a.n;
    cfg.j = a.j;
    cfg.eps = a.eps;
    auto colon = a.range.find(':');
    if (colon == std::string::npos) throw Error("--rank-range expects lo:hi");
    cfg.r_min = std::stoi(a.range.substr(0, colon));
    cfg.r_max = std::stoi(a.range.substr(colon + 1));
    if (cfg.r_min < 1 || cfg.r_max < cfg.r_min) throw Error("--rank-range must satisfy 1 <= lo <= hi");
    const std::string csv = curves_csv(emit_curves(cfg));
    json config{{"d", a.d}, {"n", a.n}, {"j", a.j}, {"rankRange", {cfg.r_min, cfg.r_max}}, {"eps", a.eps}};
    json m = manifest("bounds", config, 0);
    if (a.out.empty() || a.out == "-") {
        std::cout << csv;
        std::cerr << m.dump() << "\n";
    } else {
        write_atomic(a.out + ".manifest.json", json{{"manifest", m}, {"artifact", std::filesystem::path(a.out).filename().string()}}.dump(2) + "\n");
        write_atomic(a.out, csv);
    }
    return 0;
}

struct SimulateArgs {
    std::string dims, rank, property = "proper1", out;
    int j = 1;
    std::optional<double> p;
    std::optional<int> l;
    int trials = 1000, count_threshold = 0;
    std::uint64_t seed = 0, budget = 200'000;
};

int run_simulate(const SimulateArgs& a) {
    TrialConfig cfg;
    cfg.shape = Shape(parse_list(a.dims));
    if (!a.rank.empty()) cfg.rank_spec = RankSpec(a.j, parse_list(a.rank));
    cfg.p = a.p;
    cfg.l = a.l;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.property = parse_property(a.property);
    cfg.count_threshold = a.count_threshold;
    cfg.node_budget = a.budget;
    auto e = estimate(cfg);
    json body = json::parse(estimate_json(e));
    emit(a.out, manifest("simulate", body["config"], a.seed), "estimate", body);
    if (e.infeasible) std::cerr << "experiment infeasible at this scale: l exceeds the column length\n";
    return 0;
}

struct OracleArgs {
    std::string pattern, rank, values, mode = "coreAndFactors", out;
    int j = 1, draws = 5, starts = EnumerateOptions{}.starts;
    bool generate = false;
    double tol = 1e-8;
    std::uint64_t seed = 0;
};

Unknowns parse_mode(const std::string& s) {
    for (auto u : {Unknowns::CoreAndFactors, Unknowns::FactorsOnly, Unknowns::CoreOnly})
        if (s == to_string(u)) return u;
    throw Error("unknown --mode '" + s + "'");
}

int run_oracle(const OracleArgs& a) {
    auto p = read_pattern_file(a.pattern);
    RankSpec rs(a.j, parse_list(a.rank));
    json config{{"pattern", json::parse(pattern_json(p))}, {"j", a.j}, {"rank", rs.ranks()}};
    if (a.generate == !a.values.empty()) throw Error("oracle: give exactly one of --generate and --values");
    if (a.generate) {
        auto mode = parse_mode(a.mode);
        auto v = oracle_verdict(p.shape(), rs, p.observed(), mode, a.seed, a.draws, a.tol);
        config["mode"] = a.mode;
        config["draws"] = a.draws;
        config["tolerance"] = a.tol;
        json body;
        body["verdict"] = v.finite ? "finite" : "infinite";
        body["stable"] = v.stable;
        body["reports"] = json::array();
        for (const auto& r : v.reports) body["reports"].push_back(json::parse(oracle_json(r)));
        emit(a.out, manifest("oracle", config, a.seed), "oracle", body);
        std::cerr << "verdict: " << body["verdict"].get<std::string>() << (v.stable ? "" : " (unstable)") << "\n";
        return v.stable ? 0 : 2;
    }
    json vj = json::parse(read_file(a.values));
    if (vj.is_object()) vj = vj.at("values");
    std::vector<double> vals = vj.get<std::vector<double>>();
    EnumerateOptions opt;
    opt.starts = a.starts;
    auto cs = enumerate_completions(p, vals, rs, a.seed, opt);
    config["values"] = vals;
    config["starts"] = a.starts;
    emit(a.out, manifest("oracle", config, a.seed), "completions", json::parse(completions_json(cs, p.shape())));
    std::cerr << "completions: " << cs.clusters.size() << " from " << cs.converged << " converged starts\n";
    return cs.converged == 0 ? 2 : 0;
}

int run_paper_examples(std::uint64_t seed, const std::string& out) {
    json checks = json::array();
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, json detail) {
        all_ok = all_ok && ok;
        checks.push_back({{"name", name}, {"pass", ok}, {"detail", detail}});
        std::cerr << (ok ? "PASS " : "FAIL ") << name << "\n";
    };

    // 5x4 rank-2 matrix with exactly two completions
    {
        auto c = appendixC_closed_form();
        const bool roots_ok = c.roots.size() == 2 && c.roots[0] == Rational(-2) && c.roots[1] == Rational(-21, 32);
        auto cs = enumerate_completions(appendixC_pattern(), appendixC_values(), RankSpec(1, {2}), seed);
        double worst = 0;
        std::vector<int> matched(c.completions.size(), 0);
        for (const auto& k : cs.clusters) {
            double best = INFINITY;
            std::size_t arg = 0;
            for (std::size_t q = 0; q < c.completions.size(); ++q) {
                double e = 0;
                for (int i = 0; i < 5; ++i)
                    for (int t = 0; t < 4; ++t)
                        e = std::max(e, std::abs(k.values[i * 4 + t] - boost::rational_cast<double>(c.completions[q][i][t])));
                if (e < best) best = e, arg = q;
            }
            ++matched[arg];
            worst = std::max(worst, best);
        }
        const bool enum_ok = cs.clusters.size() == 2 && matched[0] == 1 && matched[1] == 1 && worst < 1e-9;
        json comps = json::array();
        for (const auto& M : c.completions) {
            json rows = json::array();
            for (const auto& row : M) {
                json r = json::array();
                for (const auto& v : row) r.push_back(rational_str(v));
                rows.push_back(r);
            }
            comps.push_back(rows);
        }
        report("two-completion matrix", roots_ok && enum_ok,
               {{"quadratic", {c.a, c.b, c.c}},
                {"roots", {rational_str(c.roots[0]), rational_str(c.roots[1])}},
                {"completions", comps},
                {"enumeratedClusters", cs.clusters.size()},
                {"convergedStarts", cs.converged},
                {"maxEntryError", worst}});
    }
    // rank-one 2x2x2 tensor with four observed entries
    {
        auto ex = rank_one_example(seed);
        bool mats_ok = true;
        json mats = json::array();
        for (const auto& m : ex.matricizations) {
            mats_ok = mats_ok && m.clusters.size() >= 2;
            mats.push_back({{"clusters", m.clusters.size()}, {"converged", m.converged}});
        }
        const bool ok = ex.tensor.clusters.size() == 1 && ex.closed_form_error < 1e-10 && mats_ok;
        report("rank-one tensor", ok,
               {{"tensorClusters", ex.tensor.clusters.size()},
                {"closedFormError", ex.closed_form_error},
                {"closedForm", ex.closed_form},
                {"matricizations", mats}});
    }
    emit(out, manifest("paper-examples", json::object(), seed), "checks", checks);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tucker-rank completability certification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CertifyArgs fin, uni;
    auto* cf = app.add_subcommand("check-finite", "certify finite completability");
    add_certify_flags(cf, fin);
    auto* cu = app.add_subcommand("check-unique", "certify unique completability");
    add_certify_flags(cu, uni);

    BoundsArgs bnd;
    auto* bs = app.add_subcommand("bounds", "sampling-probability curves as CSV");
    bs->add_option("--d", bnd.d, "order");
    bs->add_option("--n", bnd.n, "dimension of every mode");
    bs->add_option("--j", bnd.j, "split index");
    bs->add_option("--rank-range", bnd.range, "lo:hi");
    bs->add_option("--eps", bnd.eps, "failure probability");
    bs->add_option("-o,--out", bnd.out, "CSV file; its manifest goes to <file>.manifest.json");

    SimulateArgs sim;
    auto* sm = app.add_subcommand("simulate", "Monte Carlo property estimate");
    sm->add_option("--dims", sim.dims, "comma list")->required();
    sm->add_option("--j", sim.j, "split index");
    sm->add_option("--rank", sim.rank, "ranks r_{j+1},...,r_d");
    auto* op = sm->add_option("--p", sim.p, "Bernoulli density");
    auto* ol = sm->add_option("--l", sim.l, "entries per column");
    op->excludes(ol);
    sm->add_option("--trials", sim.trials, "trial count");
    sm->add_option("--property", sim.property, "proper1|proper2|perColumnCount|finiteByCertifier|finiteByOracle");
    sm->add_option("--count-threshold", sim.count_threshold, "perColumnCount threshold");
    sm->add_option("--budget", sim.budget, "certifier node budget per trial");
    sm->add_option("--seed", sim.seed, "seed");
    sm->add_option("-o,--out", sim.out, "output file");

    OracleArgs orc;
    auto* oc = app.add_subcommand("oracle", "Jacobian-rank verdict or completion enumeration");
    oc->add_option("pattern", orc.pattern, "pattern JSON file")->required();
    oc->add_option("--rank", orc.rank, "ranks r_{j+1},...,r_d")->required();
    oc->add_option("--j", orc.j, "split index")->required();
    oc->add_flag("--generate", orc.generate, "draw generic instances and report the Jacobian rank");
    oc->add_option("--values", orc.values, "JSON array of observed values, pattern order; enumerates completions");
    oc->add_option("--mode", orc.mode, "coreAndFactors|factorsOnly|coreOnly");
    oc->add_option("--draws", orc.draws, "instances per verdict");
    oc->add_option("--tol", orc.tol, "relative singular value tolerance");
    oc->add_option("--starts", orc.starts, "multi-start count");
    oc->add_option("--seed", orc.seed, "seed");
    oc->add_option("-o,--out", orc.out, "output file");

    std::uint64_t ex_seed = 0;
    std::string ex_out;
    auto* pe = app.add_subcommand("paper-examples", "rerun the two worked examples");
    pe->add_option("--seed", ex_seed, "seed");
    pe->add_option("-o,--out", ex_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = 1;
    try {
        if (*cf) code = run_check_finite(fin);
        else if (*cu) code = run_check_unique(uni);
        else if (*bs) code = run_bounds(bnd);
        else if (*sm) code = run_simulate(sim);
        else if (*oc) code = run_oracle(orc);
        else if (*pe) code = run_paper_examples(ex_seed, ex_out);
    } catch (const GuardExceeded& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        code = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        code = 1;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "wall time: " << secs << " s\n";
    return code;
}
