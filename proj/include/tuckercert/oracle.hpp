#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "tuckercert/geometry.hpp"
#include "tuckercert/tensor.hpp"

namespace tuckercert {

// U(x) = sum_k C(row(x), k) prod_{i>j} T_i(k_i, x_i); theta = [C row-major | T_{j+1} | ... | T_d], T_i column-major
class TuckerModel {
public:
    TuckerModel(const Shape& s, const RankSpec& rs);

    const Shape& shape() const { return shape_; }
    const RankSpec& ranks() const { return rs_; }
    int num_params() const { return num_params_; }
    int num_core() const { return static_cast<int>(Nj_ * R_); }
    int core_index(Index row, Index col) const { return static_cast<int>((row - 1) * R_ + (col - 1)); }
    // a, x 1-based
    int factor_index(int mode, int a, int x) const;

    double value(const Eigen::VectorXd& th, const Coord& x) const;
    void gradient(const Eigen::VectorXd& th, const Coord& x, Eigen::Ref<Eigen::RowVectorXd> row) const;

private:
    Shape shape_;
    RankSpec rs_;
    Index Nj_, R_;
    int num_params_;
    std::vector<int> factor_off_;
    std::vector<std::vector<int>> kidx_;   // core column -> 0-based multi-index over modes j+1..d
};

struct GenericInstance {
    Shape shape;
    RankSpec rs;
    Eigen::VectorXd theta;
    bool canonical = true;

    Eigen::MatrixXd core() const;          // N_j x R
    Eigen::MatrixXd factor(int mode) const;   // r_i x n_i
    double value(const Coord& x) const;
    std::vector<double> values(const std::vector<Coord>& xs) const;
};

GenericInstance generate_instance(const Shape& s, const RankSpec& rs, std::uint64_t seed, bool canonical = true);

enum class Unknowns { CoreAndFactors, FactorsOnly, CoreOnly };
const char* to_string(Unknowns u);

struct OracleReport {
    Unknowns mode = Unknowns::CoreAndFactors;
    Index num_unknowns = 0;     // rank needed for a finite verdict
    Index num_params = 0;       // Jacobian columns
    Index num_polynomials = 0;
    std::vector<double> singular_values;
    Index numerical_rank = 0;
    Index generic_rank = -1;    // rank with every entry observed (coreAndFactors only)
    bool finite = false;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
};

OracleReport jacobian_rank(const GenericInstance& inst, const std::vector<Coord>& observed, Unknowns mode,
                           double tol = 1e-8);

Eigen::MatrixXd jacobian_matrix(const GenericInstance& inst, const std::vector<Coord>& observed);
// max relative gap between the analytic Jacobian and central differences
double jacobian_fd_discrepancy(const GenericInstance& inst, const std::vector<Coord>& observed);

struct StableVerdict {
    bool finite = false;
    bool stable = true;
    std::vector<OracleReport> reports;
};

// verdict over several ungauged draws; instability is reported, not averaged
StableVerdict oracle_verdict(const Shape& s, const RankSpec& rs, const std::vector<Coord>& observed, Unknowns mode,
                             std::uint64_t seed, int draws = 5, double tol = 1e-8);

struct Completion {
    std::vector<double> values;   // every entry, lexicographic coordinate order
    double residual = 0;
    int hits = 0;
    int first_start = 0;
};

struct CompletionSet {
    std::vector<Completion> clusters;
    int starts = 0;
    int converged = 0;
    bool finite_consistent = true;
    std::string diagnostics;
};

struct EnumerateOptions {
    int starts = 128;
    int max_iter = 2000;
    double residual_tol = 1e-10;
    double merge_tol = 1e-6;
    double init_scale = 3.0;
};

CompletionSet enumerate_completions(const SamplingPattern& p, const std::vector<double>& observed_values,
                                    const RankSpec& rs, std::uint64_t seed, const EnumerateOptions& opt = {});

using Rational = boost::rational<long long>;

struct AppendixC {
    std::vector<std::vector<Rational>> observed;     // 5x4, blanks are zero with mask below
    std::vector<std::vector<bool>> mask;
    long long a = 0, b = 0, c = 0;                   // a x^2 + b x + c, integer, gcd 1, a > 0
    std::vector<Rational> roots;                     // ascending
    std::vector<std::vector<std::vector<Rational>>> completions;   // per root, 5x4
    Rational r3, r4;                                 // row-4 coefficients
};

AppendixC appendixC_closed_form();
SamplingPattern appendixC_pattern();
std::vector<double> appendixC_values();

// rank-(1,1,1) tensor of shape (2,2,2) from the four entries touching (1,1,1)
struct RankOneExample {
    Shape shape{std::vector<int>{2, 2, 2}};
    std::vector<Coord> observed;
    std::vector<double> observed_values;
    std::vector<double> truth;          // all entries of the generating tensor
    std::vector<double> closed_form;    // U(x1,1,1) U(1,x2,1) U(1,1,x3) / U(1,1,1)^2
    CompletionSet tensor;               // j = 1, ranks (1,1)
    std::vector<CompletionSet> matricizations;   // mode-i matricization as a 2x4 rank-1 matrix
    double closed_form_error = 0;       // max |completion - closed form|
};

RankOneExample rank_one_example(std::uint64_t seed, const EnumerateOptions& opt = {});

std::string rational_str(const Rational& q);
std::string oracle_json(const OracleReport& r);
std::string completions_json(const CompletionSet& c, const Shape& s);

}  // namespace tuckercert
