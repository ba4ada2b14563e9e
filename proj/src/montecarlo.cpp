#include "tuckercert/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tuckercert/certifier.hpp"
#include "tuckercert/hall.hpp"
#include "tuckercert/oracle.hpp"
#include "tuckercert/parallel.hpp"
#include "tuckercert/rng.hpp"

namespace tuckercert {

SamplingPattern sample_pattern(const Shape& s, double p, std::uint64_t seed) {
    if (!(p >= 0 && p <= 1)) throw Error("sample_pattern: p must lie in [0,1]");
    Rng rng(Rng::derive(seed, 0x5a3, 0));
    std::vector<Coord> obs;
    for (const auto& x : all_coords(s))
        if (rng.uniform() < p) obs.push_back(x);
    return SamplingPattern(s, std::move(obs));
}

namespace {

// l distinct rows out of n, ascending, 1-based
std::vector<int> pick_rows(Rng& rng, int n, int l) {
    std::vector<int> rows(n);
    for (int k = 0; k < n; ++k) rows[k] = k + 1;
    for (int k = 0; k < l; ++k) std::swap(rows[k], rows[k + rng.below(n - k)]);
    rows.resize(l);
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

SamplingPattern sample_pattern_per_column(const Shape& s, int l, std::uint64_t seed) {
    const int n1 = s.dim(1);
    if (l < 0 || l > n1) throw Error("sample_pattern_per_column: l must lie in [0, n1]");
    Rng rng(Rng::derive(seed, 0x5a4, 0));
    std::vector<Coord> obs;
    for (Index col = 1; col <= s.size_without(1); ++col)
        for (int row : pick_rows(rng, n1, l)) obs.push_back(matricize_coord(s, 1, row, col));
    return SamplingPattern(s, std::move(obs));
}

const char* to_string(Property p) {
    switch (p) {
        case Property::Proper1: return "proper1";
        case Property::Proper2: return "proper2";
        case Property::PerColumnCount: return "perColumnCount";
        case Property::FiniteByCertifier: return "finiteByCertifier";
        default: return "finiteByOracle";
    }
}

Property parse_property(const std::string& name) {
    for (auto p : {Property::Proper1, Property::Proper2, Property::PerColumnCount, Property::FiniteByCertifier,
                   Property::FiniteByOracle})
        if (name == to_string(p)) return p;
    throw Error("unknown property '" + name + "'");
}

void TrialConfig::check() const {
    if (p.has_value() == l.has_value()) throw Error("trial config: give exactly one of p and l");
    if (p && !(*p >= 0 && *p <= 1)) throw Error("trial config: p must lie in [0,1]");
    if (l && *l < 0) throw Error("trial config: l must be nonnegative");
    if (trials < 1) throw Error("trial config: trials must be at least 1");
    if (shape.order() < 1) throw Error("trial config: empty shape");
    if (property == Property::FiniteByCertifier || property == Property::FiniteByOracle)
        rank_spec.check_against(shape);
    if ((property == Property::Proper1 || property == Property::Proper2) &&
        shape.size_without(1) < shape.dim(1) - (property == Property::Proper1 ? 1 : 0))
        throw Error("trial config: too few columns in the first matricization");
}

Interval wilson_interval(long long successes, long long n, double z) {
    if (n <= 0) return {0, 1};
    const double ph = double(successes) / double(n), nn = double(n), z2 = z * z;
    const double den = 1 + z2 / nn;
    const double mid = (ph + z2 / (2 * nn)) / den;
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / den;
    return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

bool proper_columns(int n_rows, const std::vector<std::vector<int>>& cols, int surplus) {
    BipartiteGraph g(static_cast<int>(cols.size()), n_rows);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r : cols[c]) g.add_edge(static_cast<int>(c) + 1, r);
    return has_surplus(g, surplus);
}

namespace {

std::vector<std::vector<int>> first_columns(const SamplingPattern& p, int count) {
    const Shape& s = p.shape();
    std::vector<std::vector<int>> cols(count);
    for (const auto& x : p.observed()) {
        Index c = matricize_col(s, 1, x);
        if (c <= count) cols[c - 1].push_back(x[0]);
    }
    for (auto& c : cols) std::sort(c.begin(), c.end());
    return cols;
}

int run_trial(const TrialConfig& cfg, std::uint64_t trial_seed) {
    const Shape& s = cfg.shape;
    const int n1 = s.dim(1);
    if ((cfg.property == Property::Proper1 || cfg.property == Property::Proper2) && cfg.l) {
        // columns drawn directly; no need to materialize the tensor
        const int count = cfg.property == Property::Proper1 ? n1 - 1 : n1;
        Rng rng(Rng::derive(trial_seed, 0x5a4, 0));
        std::vector<std::vector<int>> cols;
        for (int c = 0; c < count; ++c) cols.push_back(pick_rows(rng, n1, *cfg.l));
        return proper_columns(n1, cols, cfg.property == Property::Proper1 ? 1 : 0);
    }
    SamplingPattern pat = cfg.p ? sample_pattern(s, *cfg.p, trial_seed) : sample_pattern_per_column(s, *cfg.l, trial_seed);
    switch (cfg.property) {
        case Property::Proper1: return proper_columns(n1, first_columns(pat, n1 - 1), 1);
        case Property::Proper2: return proper_columns(n1, first_columns(pat, n1), 0);
        case Property::PerColumnCount: {
            std::vector<int> cnt(s.size_without(1), 0);
            for (const auto& x : pat.observed()) ++cnt[matricize_col(s, 1, x) - 1];
            return *std::min_element(cnt.begin(), cnt.end()) >= cfg.count_threshold;
        }
        case Property::FiniteByCertifier: {
            CertifyOptions opt;
            opt.node_budget = cfg.node_budget;
            try {
                auto c = certify_finite(pat, cfg.rank_spec, trial_seed, opt);
                if (c.verdict == FiniteVerdict::Undecided) return -1;
                return c.verdict == FiniteVerdict::Finite;
            } catch (const GuardExceeded&) {
                return -1;
            } catch (const AssumptionError&) {
                return -1;
            }
        }
        default: {
            auto v = oracle_verdict(s, cfg.rank_spec, pat.observed(), Unknowns::CoreAndFactors, trial_seed);
            if (!v.stable) return -1;
            return v.finite;
        }
    }
}

}  // namespace

Estimate estimate(const TrialConfig& cfg) {
    cfg.check();
    Estimate e;
    e.config = cfg;
    if (cfg.l && *cfg.l > cfg.shape.dim(1)) {
        e.infeasible = true;
        return e;
    }
    e.outcomes.assign(cfg.trials, -1);
    parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t k) {
        e.outcomes[k] = run_trial(cfg, Rng::derive(cfg.seed, 0x7121a1, k));
    });
    for (int o : e.outcomes) {
        if (o == 1) ++e.pass;
        else if (o == 0) ++e.fail;
        else ++e.undecided;
    }
    e.pass_ci = wilson_interval(e.pass, e.pass + e.fail);
    e.fail_ci = wilson_interval(e.fail, e.pass + e.fail);
    return e;
}

std::string estimate_json(const Estimate& e) {
    const auto& c = e.config;
    nlohmann::json cfg;
    cfg["dims"] = c.shape.dims();
    cfg["j"] = c.rank_spec.j();
    cfg["ranks"] = c.rank_spec.ranks();
    if (c.p) cfg["p"] = *c.p;
    if (c.l) cfg["l"] = *c.l;
    cfg["trials"] = c.trials;
    cfg["seed"] = c.seed;
    cfg["property"] = to_string(c.property);
    if (c.property == Property::PerColumnCount) cfg["countThreshold"] = c.count_threshold;
    if (c.property == Property::FiniteByCertifier) cfg["nodeBudget"] = c.node_budget;
    nlohmann::json j;
    j["config"] = cfg;
    j["infeasible"] = e.infeasible;
    j["counts"] = {{"pass", e.pass}, {"fail", e.fail}, {"undecided", e.undecided}};
    j["passRate"] = e.pass_rate();
    j["failRate"] = e.fail_rate();
    j["confidence"] = 0.99;
    j["passInterval"] = {e.pass_ci.lo, e.pass_ci.hi};
    j["failInterval"] = {e.fail_ci.lo, e.fail_ci.hi};
    return j.dump(2);
}

}  // namespace tuckercert
