#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "tuckercert/bounds.hpp"
#include "tuckercert/montecarlo.hpp"

using namespace tuckercert;

TEST_CASE("sampling extremes and density") {
    Shape s({4, 4, 4});
    CHECK(sample_pattern(s, 0, 1).count() == 0);
    CHECK(sample_pattern(s, 1, 1).count() == 64);
    CHECK(sample_pattern(s, 0.3, 5) == sample_pattern(s, 0.3, 5));
    Shape big({4, 4, 4, 4, 4});   // 1024 entries
    double total = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) total += sample_pattern(big, 0.5, t).count();
    const double mean = total / (trials * 1024.0);
    const double sigma = std::sqrt(0.25 / (trials * 1024.0));
    CHECK(std::abs(mean - 0.5) < 3 * sigma);
}

TEST_CASE("per-column sampling") {
    Shape s({6, 3, 2});
    auto p = sample_pattern_per_column(s, 4, 3);
    std::vector<int> cnt(s.size_without(1), 0);
    for (const auto& x : p.observed()) ++cnt[matricize_col(s, 1, x) - 1];
    for (int c : cnt) CHECK(c == 4);
}

TEST_CASE("wilson interval") {
    auto w = wilson_interval(0, 2000);
    const double z = 2.5758293035489004;
    CHECK(w.lo == 0);
    CHECK(w.hi == doctest::Approx(z * z / (2000 + z * z)));
    auto h = wilson_interval(50, 100);
    CHECK(h.lo < 0.5);
    CHECK(h.hi > 0.5);
    CHECK((h.lo + h.hi) / 2 == doctest::Approx(0.5));
}

TEST_CASE("complete columns always pass") {
    for (auto prop : {Property::Proper1, Property::Proper2}) {
        TrialConfig cfg;
        cfg.shape = Shape({10, 12});
        cfg.l = 10;
        cfg.trials = 50;
        cfg.property = prop;
        auto e = estimate(cfg);
        CHECK(e.pass == 50);
    }
}

TEST_CASE("column threshold keeps failures rare") {
    const double eps = 0.1, k = 4;
    const int l = static_cast<int>(std::floor(minsamp_l_bound(64, k, eps))) + 1;
    TrialConfig cfg;
    cfg.shape = Shape({64, 63});
    cfg.l = l;
    cfg.trials = 400;
    cfg.property = Property::Proper1;
    auto e = estimate(cfg);
    CHECK_FALSE(e.infeasible);
    CHECK(e.fail_ci.lo <= eps / k);
}

TEST_CASE("infeasible when l exceeds the column") {
    TrialConfig cfg;
    cfg.shape = Shape({8, 8});
    cfg.l = 9;
    cfg.trials = 10;
    auto e = estimate(cfg);
    CHECK(e.infeasible);
    CHECK(e.pass + e.fail + e.undecided == 0);
}

TEST_CASE("per-column count property") {
    TrialConfig cfg;
    cfg.shape = Shape({5, 5});
    cfg.p = 1.0;
    cfg.trials = 5;
    cfg.property = Property::PerColumnCount;
    cfg.count_threshold = 5;
    CHECK(estimate(cfg).pass == 5);
    cfg.count_threshold = 6;
    CHECK(estimate(cfg).fail == 5);
}

TEST_CASE("estimates are reproducible and thread-count independent") {
    TrialConfig cfg;
    cfg.shape = Shape({3, 3, 3});
    cfg.rank_spec = RankSpec(2, {2});
    cfg.p = 0.55;
    cfg.trials = 40;
    cfg.property = Property::FiniteByCertifier;
    setenv("TUCKERCERT_THREADS", "1", 1);
    auto a = estimate(cfg);
    setenv("TUCKERCERT_THREADS", "3", 1);
    auto b = estimate(cfg);
    unsetenv("TUCKERCERT_THREADS");
    CHECK(a.outcomes == b.outcomes);
    CHECK(estimate_json(a) == estimate_json(b));
}

TEST_CASE("certifier and oracle agree trial by trial") {
    for (double p : {0.4, 0.55, 0.7, 0.85}) {
        TrialConfig cfg;
        cfg.shape = Shape({3, 3, 3});
        cfg.rank_spec = RankSpec(1, {1, 2});
        cfg.p = p;
        cfg.trials = 30;
        cfg.seed = 77;
        cfg.property = Property::FiniteByCertifier;
        auto c = estimate(cfg);
        cfg.property = Property::FiniteByOracle;
        auto o = estimate(cfg);
        for (int t = 0; t < cfg.trials; ++t)
            if (c.outcomes[t] >= 0) CHECK(c.outcomes[t] == o.outcomes[t]);
    }
}
