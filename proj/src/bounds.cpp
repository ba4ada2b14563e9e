#include "tuckercert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tuckercert {

namespace {

double safe_log(double x) { return x > 0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN(); }

TuckerValidity validity(const Shape& s, const RankSpec& rs, bool unique) {
    TuckerValidity v;
    const double R = static_cast<double>(rs.R()), sq = static_cast<double>(rs.sum_sq());
    const double Nj = static_cast<double>(s.head(rs.j())), tail = static_cast<double>(s.tail(rs.j()));
    v.sum_sq_below_prod = sq < R;
    v.enough_tail = tail >= (unique ? Nj * (R + 1) - sq : Nj * R - sq);
    v.Bj = check_Bj(s, rs);
    double spread = 0;
    for (int i = rs.j() + 1; i <= s.order(); ++i) spread += static_cast<double>(s.dim(i)) * rs.rank(i);
    v.spread = spread < tail;
    return v;
}

double finite_l_bound(double Nj, double R, double sq, double eps) {
    double a = safe_log(2 * sq / eps), b = safe_log((2 * R - 2 * sq) / eps);
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return 6 * std::log(Nj) + 2 * std::max(a, b) + 4;
}

double unique_l_bound(double Nj, double R, double sq, double eps) {
    double a = safe_log(sq / eps), b = safe_log((R - sq) / eps), c = safe_log(Nj / eps);
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return 6 * std::log(Nj) + 2 * std::max({a, b, c}) + 8;
}

long long above(double b) {
    if (std::isnan(b)) return -1;
    return static_cast<long long>(std::floor(b)) + 1;
}

}  // namespace

GrassmannianBound grassmannian_bound(const Shape& s, const std::vector<int>& r, double eps) {
    if (static_cast<int>(r.size()) != s.order()) throw Error("grassmannian_bound: need one rank per mode");
    GrassmannianBound g;
    g.value = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= s.order(); ++i) {
        const double n = s.dim(i), ri = r[i - 1];
        double v = std::max(2 * ri / n, 12 * std::log(std::exp(1.0) * n / eps) / n) + std::pow(n, -0.25);
        if (v < g.value) {
            g.value = v;
            g.argmin = i;
        }
        if (6 * ri > n) g.rank_small = false;
        if (static_cast<double>(s.size_without(i)) < ri * (n - ri)) g.enough_columns = false;
    }
    return g;
}

Threshold tucker_finite_threshold_l(const Shape& s, const RankSpec& rs, double eps) {
    Threshold t;
    t.validity = validity(s, rs, false);
    t.bound = finite_l_bound(static_cast<double>(s.head(rs.j())), static_cast<double>(rs.R()),
                             static_cast<double>(rs.sum_sq()), eps);
    t.l = above(t.bound);
    return t;
}

TuckerBound tucker_finite_bound_p(const Shape& s, const RankSpec& rs, double eps) {
    TuckerBound b;
    b.validity = validity(s, rs, false);
    const double Nj = static_cast<double>(s.head(rs.j()));
    b.value = finite_l_bound(Nj, static_cast<double>(rs.R()), static_cast<double>(rs.sum_sq()), eps) / Nj +
              std::pow(Nj, -0.25);
    return b;
}

Threshold tucker_unique_threshold_l(const Shape& s, const RankSpec& rs, double eps) {
    Threshold t;
    t.validity = validity(s, rs, true);
    t.bound = unique_l_bound(static_cast<double>(s.head(rs.j())), static_cast<double>(rs.R()),
                             static_cast<double>(rs.sum_sq()), eps);
    t.l = above(t.bound);
    return t;
}

TuckerBound tucker_unique_bound_p(const Shape& s, const RankSpec& rs, double eps) {
    TuckerBound b;
    b.validity = validity(s, rs, true);
    const double Nj = static_cast<double>(s.head(rs.j()));
    b.value = unique_l_bound(Nj, static_cast<double>(rs.R()), static_cast<double>(rs.sum_sq()), eps) / Nj +
              std::pow(Nj, -0.25);
    return b;
}

double azuma_tail(double n, double c) {
    if (n < 1 || c <= 0) throw Error("azuma_tail: need n >= 1 and c > 0");
    return std::exp(-n / (2 * c * c));
}

AzumaThreshold azuma_threshold(double n, double r, double eps) {
    if (n < 1) throw Error("azuma_threshold: need n >= 1");
    double tail = std::pow(n, -0.25);
    return {2 * r / n + tail, 12 * std::log(std::exp(1.0) * n / eps) / n + tail};
}

double minsamp_l_bound(double n1, double k, double eps) { return 6 * std::log(n1) + 2 * std::log(k / eps) + 4; }

std::vector<CurveRow> emit_curves(const CurveConfig& cfg) {
    if (cfg.j < 1 || cfg.j >= cfg.d) throw Error("curves: j out of range");
    std::vector<CurveRow> rows;
    Shape s(std::vector<int>(cfg.d, cfg.n));
    for (int r = cfg.r_min; r <= cfg.r_max; ++r) {
        CurveRow row;
        row.r = r;
        row.grass = grassmannian_bound(s, std::vector<int>(cfg.d, r), cfg.eps);
        RankSpec rs(cfg.j, std::vector<int>(cfg.d - cfg.j, r));
        row.finite = tucker_finite_bound_p(s, rs, cfg.eps);
        row.unique = tucker_unique_bound_p(s, rs, cfg.eps);
        rows.push_back(row);
    }
    return rows;
}

std::string curves_csv(const std::vector<CurveRow>& rows) {
    std::string out = "r,p_grassmannian,valid_grassmannian,p_tucker_finite,valid_tucker_finite,p_tucker_unique,valid_tucker_unique\n";
    char buf[256];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%d,%.12g,%d,%.12g,%d\n", row.r, row.grass.value, row.grass.valid() ? 1 : 0,
                      row.finite.value, row.finite.validity.valid() ? 1 : 0, row.unique.value,
                      row.unique.validity.valid() ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace tuckercert
