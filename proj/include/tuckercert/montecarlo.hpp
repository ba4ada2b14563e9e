#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tuckercert/geometry.hpp"
#include "tuckercert/tensor.hpp"

namespace tuckercert {

SamplingPattern sample_pattern(const Shape& s, double p, std::uint64_t seed);
// every column of the first matricization gets exactly l entries at uniform rows
SamplingPattern sample_pattern_per_column(const Shape& s, int l, std::uint64_t seed);

enum class Property { Proper1, Proper2, PerColumnCount, FiniteByCertifier, FiniteByOracle };
const char* to_string(Property p);
Property parse_property(const std::string& name);

struct TrialConfig {
    Shape shape;
    RankSpec rank_spec;
    std::optional<double> p;   // Bernoulli density
    std::optional<int> l;      // or a fixed count per column
    int trials = 1000;
    std::uint64_t seed = 0;
    Property property = Property::Proper1;
    int count_threshold = 0;   // perColumnCount: every column needs this many entries
    std::uint64_t node_budget = 200'000;

    void check() const;
};

struct Interval {
    double lo = 0, hi = 1;
};

// two-sided score interval at z (99% by default)
Interval wilson_interval(long long successes, long long n, double z = 2.5758293035489004);

struct Estimate {
    TrialConfig config;
    long long pass = 0, fail = 0, undecided = 0;
    bool infeasible = false;        // l exceeds the column length; nothing was run
    std::vector<int> outcomes;      // per trial: 1 pass, 0 fail, -1 undecided
    Interval pass_ci, fail_ci;      // over decided trials

    double pass_rate() const { return pass + fail ? double(pass) / double(pass + fail) : 0; }
    double fail_rate() const { return pass + fail ? double(fail) / double(pass + fail) : 0; }
};

// proper1: n1-1 columns of the first matricization, every column subset of size t reaches t+1 rows
// proper2: n1 columns, every subset of size t reaches t rows
bool proper_columns(int n_rows, const std::vector<std::vector<int>>& cols, int surplus);

Estimate estimate(const TrialConfig& cfg);
std::string estimate_json(const Estimate& e);

}  // namespace tuckercert
