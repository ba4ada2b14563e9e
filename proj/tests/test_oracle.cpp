#include <doctest.h>

#include <Eigen/Dense>

#include "tuckercert/assumptions.hpp"
#include "tuckercert/montecarlo.hpp"
#include "tuckercert/oracle.hpp"

using namespace tuckercert;

namespace {

Eigen::MatrixXd matricization(const GenericInstance& inst, int mode) {
    const Shape& s = inst.shape;
    Eigen::MatrixXd M(s.dim(mode), s.size_without(mode));
    for (const auto& x : all_coords(s)) M(x[mode - 1] - 1, matricize_col(s, mode, x) - 1) = inst.value(x);
    return M;
}

int num_rank(const Eigen::MatrixXd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int k = 0; k < sv.size(); ++k) r += sv[k] > 1e-9 * sv[0];
    return r;
}

double q(const Rational& v) { return boost::rational_cast<double>(v); }

}  // namespace

TEST_CASE("generated instances") {
    Shape s({5, 3, 4});
    RankSpec rs(1, {2, 3});
    auto a = generate_instance(s, rs, 1);
    auto b = generate_instance(s, rs, 2);
    auto ps = canonical_structure(s, rs);
    auto C = a.core();
    for (const auto& e : ps.known_entries()) CHECK(C(e.row - 1, e.col - 1) == e.value);
    CHECK((a.theta - b.theta).norm() > 1e-3);
    CHECK(num_rank(matricization(a, 2)) == 2);
    CHECK(num_rank(matricization(a, 3)) == 3);
    CHECK(a.factor(3).rows() == 3);
    CHECK(a.factor(3).cols() == 4);
}

TEST_CASE("Jacobian matches central differences") {
    for (int seed = 0; seed < 5; ++seed) {
        Shape s({3, 3, 2, 2});
        auto inst = generate_instance(s, RankSpec(2, {2, 1}), seed, false);
        CHECK(jacobian_fd_discrepancy(inst, all_coords(s)) < 1e-6);
        auto inst2 = generate_instance(Shape({5, 4, 4}), RankSpec(1, {2, 3}), seed);
        CHECK(jacobian_fd_discrepancy(inst2, all_coords(Shape({5, 4, 4}))) < 1e-6);
    }
}

TEST_CASE("unknown count and full observation") {
    for (const auto& [dims, j, r] : std::vector<std::tuple<std::vector<int>, int, std::vector<int>>>{
             {{4, 4, 4}, 1, {2, 3}}, {{3, 3, 3}, 1, {1, 2}}, {{3, 3, 3, 3}, 2, {2, 1}}, {{2, 3, 4}, 2, {2}}}) {
        Shape s(dims);
        RankSpec rs(j, r);
        Index sum_nr = 0;
        for (int i = j + 1; i <= s.order(); ++i) sum_nr += s.dim(i) * rs.rank(i);
        auto v = oracle_verdict(s, rs, all_coords(s), Unknowns::CoreAndFactors, 3);
        CHECK(v.stable);
        CHECK(v.finite);
        CHECK(v.reports[0].num_unknowns == core_dim(s, rs) + sum_nr);
        CHECK(v.reports[0].generic_rank == v.reports[0].num_unknowns);
    }
}

TEST_CASE("rank-one 2x2x2 from four entries") {
    Shape s({2, 2, 2});
    std::vector<Coord> obs{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
    CHECK(oracle_verdict(s, RankSpec(1, {1, 1}), obs, Unknowns::CoreAndFactors, 0).finite);
    auto ex = rank_one_example(0);
    CHECK(ex.tensor.clusters.size() == 1);
    CHECK(ex.closed_form_error < 1e-10);
    // U(2,2,2) against the generating tensor
    CHECK(ex.closed_form.back() == doctest::Approx(ex.truth.back()).epsilon(1e-12));
    for (const auto& m : ex.matricizations) {
        CHECK(m.clusters.size() >= 2);
        CHECK_FALSE(m.finite_consistent);
    }
}

TEST_CASE("two-completion matrix in exact arithmetic") {
    auto c = appendixC_closed_form();
    CHECK(c.a == 32);
    CHECK(c.b == 85);
    CHECK(c.c == 42);
    REQUIRE(c.roots.size() == 2);
    CHECK(c.roots[0] == Rational(-2));
    CHECK(c.roots[1] == Rational(-21, 32));
    CHECK(c.r3 == Rational(5));
    CHECK(c.r4 == Rational(1));
    // first root -2: (2,4) = -10, (3,3) = -1/2, (4,2) = -8, (4,4) = -25/2, (5,1) = -39/21
    const auto& A = c.completions[0];
    CHECK(A[0][1] == Rational(-2));
    CHECK(A[1][3] == Rational(-10));
    CHECK(A[2][2] == Rational(-1, 2));
    CHECK(A[3][1] == Rational(-8));
    CHECK(A[3][3] == Rational(-25, 2));
    CHECK(A[4][0] == Rational(-39, 21));
    const auto& B = c.completions[1];
    CHECK(B[0][1] == Rational(-21, 32));
    CHECK(B[1][3] == Rational(3, 4));
    CHECK(B[2][2] == Rational(-24, 5));
    CHECK(B[3][1] == Rational(-41, 32));
    CHECK(B[3][3] == Rational(-7, 4));
    CHECK(B[4][0] == Rational(-8));
    // both have rank 2 and keep the observed entries
    for (const auto& M : c.completions) {
        Eigen::MatrixXd E(5, 4);
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 4; ++k) {
                E(i, k) = q(M[i][k]);
                if (c.mask[i][k]) CHECK(M[i][k] == c.observed[i][k]);
            }
        CHECK(num_rank(E) == 2);
    }
}

TEST_CASE("enumerator finds both completions, stable when starts double") {
    auto c = appendixC_closed_form();
    auto p = appendixC_pattern();
    auto v = appendixC_values();
    for (int starts : {128, 256}) {
        EnumerateOptions opt;
        opt.starts = starts;
        auto cs = enumerate_completions(p, v, RankSpec(1, {2}), 0, opt);
        REQUIRE(cs.clusters.size() == 2);
        for (const auto& M : c.completions) {
            double best = 1e9;
            for (const auto& k : cs.clusters) {
                double e = 0;
                for (int i = 0; i < 5; ++i)
                    for (int t = 0; t < 4; ++t) e = std::max(e, std::abs(k.values[i * 4 + t] - q(M[i][t])));
                best = std::min(best, e);
            }
            CHECK(best < 1e-9);
        }
    }
    EnumerateOptions opt;
    opt.starts = 256;
    CHECK(rank_one_example(0, opt).tensor.clusters.size() == 1);
}

TEST_CASE("under-observed matrix is flagged") {
    Shape s({4, 4});
    SamplingPattern p(s, {{1, 1}, {1, 2}, {2, 1}, {3, 3}, {4, 4}});
    auto inst = generate_instance(s, RankSpec(1, {2}), 5, false);
    auto cs = enumerate_completions(p, inst.values(p.observed()), RankSpec(1, {2}), 5);
    CHECK_FALSE(cs.finite_consistent);
    CHECK_FALSE(oracle_verdict(s, RankSpec(1, {2}), p.observed(), Unknowns::CoreAndFactors, 5).finite);
}

TEST_CASE("factor-only verdict matches A_j when j = d-1") {
    int tested = 0;
    for (const auto& [dims, r] : std::vector<std::pair<std::vector<int>, int>>{{{3, 3, 3}, 2}, {{4, 4, 4}, 2}, {{2, 3, 4}, 3}}) {
        Shape s(dims);
        RankSpec rs(2, {r});
        for (int t = 0; t < 25; ++t) {
            auto p = sample_pattern(s, 0.7, 70 + t);
            const std::size_t k = selection_size(s, rs, SelectionMode::A);
            if (p.count() < k) continue;
            std::vector<Coord> sel(p.observed().begin(), p.observed().begin() + k);
            ++tested;
            auto v = oracle_verdict(s, rs, sel, Unknowns::FactorsOnly, t);
            CHECK(v.stable);
            CHECK(v.finite == check_Aj(p, rs, sel).ok);
        }
    }
    CHECK(tested > 40);
}
