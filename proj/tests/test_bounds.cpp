#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tuckercert/bounds.hpp"

using namespace tuckercert;

namespace {

// second evaluator, written from the formulas directly
double tucker_l_ref(double Nj, double prod_r, double sum_sq, double eps, bool unique) {
    if (!unique) {
        double m = std::max(std::log(2 * sum_sq / eps), std::log((2 * prod_r - 2 * sum_sq) / eps));
        return 6 * std::log(Nj) + 2 * m + 4;
    }
    double m = std::max({std::log(sum_sq / eps), std::log((prod_r - sum_sq) / eps), std::log(Nj / eps)});
    return 6 * std::log(Nj) + 2 * m + 8;
}

double grass_ref(double n, double r, double eps) {
    return std::max(6.0 * r / (3.0 * n), 12.0 * std::log(n * std::exp(1.0) / eps) / n) + 1.0 / std::sqrt(std::sqrt(n));
}

}  // namespace

TEST_CASE("grassmannian value and validity") {
    Shape s({900, 900, 900, 900});
    auto g = grassmannian_bound(s, {3, 3, 3, 3}, 1e-4);
    CHECK(g.value == doctest::Approx(grass_ref(900, 3, 1e-4)).epsilon(1e-13));
    CHECK(g.argmin == 1);
    for (int r = 1; r <= 300; ++r) CHECK(grassmannian_bound(s, std::vector<int>(4, r), 1e-4).rank_small == (r <= 150));
}

TEST_CASE("tucker finite threshold") {
    Shape s({900, 900, 900, 900});
    auto bad = tucker_finite_threshold_l(s, RankSpec(1, {3, 3, 3}), 1e-4);
    CHECK_FALSE(bad.validity.sum_sq_below_prod);
    CHECK(std::isnan(bad.bound));
    auto t = tucker_finite_threshold_l(s, RankSpec(1, {4, 4, 4}), 1e-4);
    const double want = 6 * std::log(900.0) + 2 * std::max(std::log(96 / 1e-4), std::log(32 / 1e-4)) + 4;
    CHECK(t.bound == doctest::Approx(want).epsilon(1e-13));
    CHECK(t.l == static_cast<long long>(std::floor(want)) + 1);
    auto p = tucker_finite_bound_p(s, RankSpec(1, {4, 4, 4}), 1e-4);
    CHECK(p.value == doctest::Approx(want / 900 + std::pow(900.0, -0.25)).epsilon(1e-13));
    // eps -> 1 stays above the constant part
    auto e1 = tucker_finite_threshold_l(Shape({5, 5, 5, 5}), RankSpec(1, {4, 4, 4}), 0.999);
    CHECK(e1.bound > 6 * std::log(5.0) + 4);
}

TEST_CASE("tucker unique threshold") {
    Shape s({900, 900, 900, 900});
    auto t = tucker_unique_threshold_l(s, RankSpec(1, {4, 4, 4}), 1e-4);
    CHECK(t.bound == doctest::Approx(tucker_l_ref(900, 64, 48, 1e-4, true)).epsilon(1e-13));
    CHECK(std::isnan(tucker_unique_threshold_l(s, RankSpec(1, {3, 3, 3}), 1e-4).bound));
}

TEST_CASE("six-way tail condition cuts at r = 30") {
    Shape s(std::vector<int>(6, 900));
    for (int r = 1; r <= 80; ++r) {
        auto b = tucker_finite_bound_p(s, RankSpec(2, std::vector<int>(4, r)), 1e-4);
        CHECK(b.validity.enough_tail == (r <= 30));
    }
}

TEST_CASE("unique needs more than finite") {
    for (int n : {30, 200, 900})
        for (int r = 2; r <= 10; ++r) {
            Shape s({n, n, n, n});
            RankSpec rs(1, {r, r, r});
            auto f = tucker_finite_bound_p(s, rs, 1e-3);
            auto u = tucker_unique_bound_p(s, rs, 1e-3);
            if (f.validity.valid() && u.validity.valid()) CHECK(u.value > f.value);
        }
}

TEST_CASE("thresholds are monotone in ranks and 1/eps") {
    Shape s({400, 400, 400});
    for (int a = 2; a <= 8; ++a)
        for (int b = 2; b <= 8; ++b) {
            RankSpec rs(1, {a, b}), up(1, {a + 1, b}), up2(1, {a, b + 1});
            const double l = tucker_finite_threshold_l(s, rs, 1e-3).bound;
            if (std::isnan(l)) continue;
            CHECK(tucker_finite_threshold_l(s, up, 1e-3).bound >= l);
            CHECK(tucker_finite_threshold_l(s, up2, 1e-3).bound >= l);
            CHECK(tucker_finite_threshold_l(s, rs, 1e-4).bound >= l);
            CHECK(tucker_finite_threshold_l(s, rs, 1e-3).bound == doctest::Approx(tucker_l_ref(400, a * b, a * a + b * b, 1e-3, false)));
        }
}

TEST_CASE("azuma pieces") {
    CHECK(azuma_tail(400, 20) == doctest::Approx(std::exp(-0.5)));
    auto a = azuma_threshold(900, 3, 1e-4);
    CHECK(a.p_prime == doctest::Approx(6.0 / 900 + std::pow(900.0, -0.25)));
    double prev = 1e9;
    for (double n = 100; n < 1e7; n *= 3) {
        auto t = azuma_threshold(n, 3, 1e-4);
        CHECK(t.p_prime < prev);
        prev = t.p_prime;
    }
    CHECK(minsamp_l_bound(64, 4, 0.1) == doctest::Approx(6 * std::log(64.0) + 2 * std::log(40.0) + 4));
}

TEST_CASE("four-way curves: tucker below grassmannian wherever both valid") {
    CurveConfig cfg;
    auto rows = emit_curves(cfg);
    REQUIRE(rows.size() == 300);
    int both = 0;
    for (const auto& row : rows) {
        CHECK(row.grass.valid() == (row.r <= 150));
        if (row.grass.valid() && row.finite.validity.valid()) {
            ++both;
            CHECK(row.finite.value < row.grass.value);
        }
        // second evaluator
        CHECK(row.grass.value == doctest::Approx(grass_ref(900, row.r, 1e-4)).epsilon(1e-12));
        const double R = std::pow(double(row.r), 3), sq = 3.0 * row.r * row.r;
        if (sq < R)
            CHECK(row.finite.value ==
                  doctest::Approx(tucker_l_ref(900, R, sq, 1e-4, false) / 900 + std::pow(900.0, -0.25)).epsilon(1e-12));
    }
    CHECK(both > 0);
}

TEST_CASE("csv layout") {
    CurveConfig cfg;
    cfg.r_min = 5;
    cfg.r_max = 4;
    auto empty = curves_csv(emit_curves(cfg));
    CHECK(empty == "r,p_grassmannian,valid_grassmannian,p_tucker_finite,valid_tucker_finite,p_tucker_unique,valid_tucker_unique\n");
    cfg.r_min = cfg.r_max = 4;
    auto one = curves_csv(emit_curves(cfg));
    std::istringstream in(one);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    char buf[64];
    std::snprintf(buf, sizeof buf, "4,%.12g,1,", grass_ref(900, 4, 1e-4));
    CHECK(line.rfind(buf, 0) == 0);
}
