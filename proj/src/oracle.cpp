#include "tuckercert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/integer/common_factor.hpp>
#include <json.hpp>

#include "tuckercert/parallel.hpp"
#include "tuckercert/rng.hpp"

namespace tuckercert {

TuckerModel::TuckerModel(const Shape& s, const RankSpec& rs) : shape_(s), rs_(rs) {
    rs.check_against(s);
    Nj_ = s.head(rs.j());
    R_ = rs.R();
    int off = static_cast<int>(Nj_ * R_);
    for (int i = rs.j() + 1; i <= s.order(); ++i) {
        factor_off_.push_back(off);
        off += rs.rank(i) * s.dim(i);
    }
    num_params_ = off;
    const int m = s.order() - rs.j();
    for (Index k = 0; k < R_; ++k) {
        std::vector<int> idx(m);
        Index rest = k;
        for (int t = 0; t < m; ++t) {
            idx[t] = static_cast<int>(rest % rs.ranks()[t]);
            rest /= rs.ranks()[t];
        }
        kidx_.push_back(idx);
    }
}

int TuckerModel::factor_index(int mode, int a, int x) const {
    int t = mode - rs_.j() - 1;
    return factor_off_[t] + (x - 1) * rs_.rank(mode) + (a - 1);
}

double TuckerModel::value(const Eigen::VectorXd& th, const Coord& x) const {
    const Index row = head_row(shape_, rs_.j(), x) - 1;
    const int m = static_cast<int>(factor_off_.size());
    double sum = 0;
    for (Index k = 0; k < R_; ++k) {
        double v = th[row * R_ + k];
        for (int t = 0; t < m && v != 0; ++t) {
            int mode = rs_.j() + 1 + t;
            v *= th[factor_off_[t] + (x[mode - 1] - 1) * rs_.ranks()[t] + kidx_[k][t]];
        }
        sum += v;
    }
    return sum;
}

void TuckerModel::gradient(const Eigen::VectorXd& th, const Coord& x, Eigen::Ref<Eigen::RowVectorXd> g) const {
    g.setZero();
    const Index row = head_row(shape_, rs_.j(), x) - 1;
    const int m = static_cast<int>(factor_off_.size());
    std::vector<int> tix(m);
    for (Index k = 0; k < R_; ++k) {
        for (int t = 0; t < m; ++t) {
            int mode = rs_.j() + 1 + t;
            tix[t] = factor_off_[t] + (x[mode - 1] - 1) * rs_.ranks()[t] + kidx_[k][t];
        }
        const double c = th[row * R_ + k];
        double prod = 1;
        for (int t = 0; t < m; ++t) prod *= th[tix[t]];
        g[row * R_ + k] += prod;
        for (int t = 0; t < m; ++t) {
            double p = c;
            for (int u = 0; u < m; ++u)
                if (u != t) p *= th[tix[u]];
            g[tix[t]] += p;
        }
    }
}

Eigen::MatrixXd GenericInstance::core() const {
    Index Nj = shape.head(rs.j()), R = rs.R();
    Eigen::MatrixXd C(Nj, R);
    for (Index a = 0; a < Nj; ++a)
        for (Index b = 0; b < R; ++b) C(a, b) = theta[a * R + b];
    return C;
}

Eigen::MatrixXd GenericInstance::factor(int mode) const {
    TuckerModel model(shape, rs);
    Eigen::MatrixXd T(rs.rank(mode), shape.dim(mode));
    for (int a = 1; a <= rs.rank(mode); ++a)
        for (int x = 1; x <= shape.dim(mode); ++x) T(a - 1, x - 1) = theta[model.factor_index(mode, a, x)];
    return T;
}

double GenericInstance::value(const Coord& x) const { return TuckerModel(shape, rs).value(theta, x); }

std::vector<double> GenericInstance::values(const std::vector<Coord>& xs) const {
    TuckerModel model(shape, rs);
    std::vector<double> out;
    for (const auto& x : xs) out.push_back(model.value(theta, x));
    return out;
}

GenericInstance generate_instance(const Shape& s, const RankSpec& rs, std::uint64_t seed, bool canonical) {
    rs.check_against(s);
    if (canonical && !check_Bj(s, rs)) throw Error("generate_instance: Assumption B_j fails");
    TuckerModel model(s, rs);
    GenericInstance inst{s, rs, Eigen::VectorXd(model.num_params()), canonical};
    Rng rng(Rng::derive(seed, 0x1257, 0));
    for (int p = 0; p < model.num_params(); ++p) inst.theta[p] = rng.normal();
    if (canonical) {
        auto ps = canonical_structure(s, rs);
        for (const auto& e : ps.known_entries()) inst.theta[model.core_index(e.row, e.col)] = e.value;
    }
    return inst;
}

const char* to_string(Unknowns u) {
    switch (u) {
        case Unknowns::CoreAndFactors: return "coreAndFactors";
        case Unknowns::FactorsOnly: return "factorsOnly";
        default: return "coreOnly";
    }
}

Eigen::MatrixXd jacobian_matrix(const GenericInstance& inst, const std::vector<Coord>& observed) {
    TuckerModel model(inst.shape, inst.rs);
    Eigen::MatrixXd J(observed.size(), model.num_params());
    Eigen::RowVectorXd g(model.num_params());
    for (std::size_t r = 0; r < observed.size(); ++r) {
        model.gradient(inst.theta, observed[r], g);
        J.row(r) = g;
    }
    return J;
}

namespace {

std::vector<int> mode_columns(const GenericInstance& inst, Unknowns mode) {
    TuckerModel model(inst.shape, inst.rs);
    std::vector<int> cols;
    if (mode == Unknowns::FactorsOnly) {
        for (int p = model.num_core(); p < model.num_params(); ++p) cols.push_back(p);
    } else if (mode == Unknowns::CoreOnly) {
        std::vector<char> fixed(model.num_core(), 0);
        if (check_Bj(inst.shape, inst.rs))
            for (const auto& e : canonical_structure(inst.shape, inst.rs).known_entries())
                fixed[model.core_index(e.row, e.col)] = 1;
        for (int p = 0; p < model.num_core(); ++p)
            if (!fixed[p]) cols.push_back(p);
    } else {
        cols.resize(model.num_params());
        std::iota(cols.begin(), cols.end(), 0);
    }
    return cols;
}

Index target_rank(const GenericInstance& inst, Unknowns mode) {
    const Shape& s = inst.shape;
    const RankSpec& rs = inst.rs;
    Index sum_nr = 0;
    for (int i = rs.j() + 1; i <= s.order(); ++i) sum_nr += static_cast<Index>(s.dim(i)) * rs.rank(i);
    const Index torus = s.order() - rs.j() - 1;
    switch (mode) {
        case Unknowns::FactorsOnly: return sum_nr - torus;
        case Unknowns::CoreOnly: return core_dim(s, rs);
        default: return core_dim(s, rs) + sum_nr;
    }
}

Index numerical_rank(const Eigen::MatrixXd& M, double tol, std::vector<double>* sv) {
    if (M.rows() == 0 || M.cols() == 0) {
        if (sv) sv->clear();
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (sv) sv->assign(s.data(), s.data() + s.size());
    if (s.size() == 0 || s[0] == 0) return 0;
    Index r = 0;
    for (int k = 0; k < s.size(); ++k)
        if (s[k] > tol * s[0]) ++r;
    return r;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& J, const std::vector<int>& cols) {
    Eigen::MatrixXd out(J.rows(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = J.col(cols[c]);
    return out;
}

}  // namespace

OracleReport jacobian_rank(const GenericInstance& inst, const std::vector<Coord>& observed, Unknowns mode, double tol) {
    for (const auto& x : observed) inst.shape.check(x);
    OracleReport rep;
    rep.mode = mode;
    rep.tolerance = tol;
    auto cols = mode_columns(inst, mode);
    rep.num_params = static_cast<Index>(cols.size());
    rep.num_polynomials = static_cast<Index>(observed.size());
    rep.num_unknowns = target_rank(inst, mode);
    auto J = select_cols(jacobian_matrix(inst, observed), cols);
    rep.numerical_rank = numerical_rank(J, tol, &rep.singular_values);
    if (mode == Unknowns::CoreAndFactors) {
        auto Jf = jacobian_matrix(inst, all_coords(inst.shape));
        rep.generic_rank = numerical_rank(Jf, tol, nullptr);
    }
    rep.finite = rep.numerical_rank == rep.num_unknowns;
    return rep;
}

double jacobian_fd_discrepancy(const GenericInstance& inst, const std::vector<Coord>& observed) {
    TuckerModel model(inst.shape, inst.rs);
    auto J = jacobian_matrix(inst, observed);
    double worst = 0;
    Eigen::VectorXd th = inst.theta;
    for (int p = 0; p < model.num_params(); ++p) {
        const double h = 1e-6 * (1 + std::abs(th[p]));
        const double keep = th[p];
        for (std::size_t r = 0; r < observed.size(); ++r) {
            th[p] = keep + h;
            double up = model.value(th, observed[r]);
            th[p] = keep - h;
            double dn = model.value(th, observed[r]);
            th[p] = keep;
            double fd = (up - dn) / (2 * h);
            double scale = std::max(1.0, std::abs(J(r, p)));
            worst = std::max(worst, std::abs(fd - J(r, p)) / scale);
        }
    }
    return worst;
}

StableVerdict oracle_verdict(const Shape& s, const RankSpec& rs, const std::vector<Coord>& observed, Unknowns mode,
                             std::uint64_t seed, int draws, double tol) {
    StableVerdict v;
    for (int k = 0; k < draws; ++k) {
        auto inst = generate_instance(s, rs, Rng::derive(seed, 0x0ac1e, k), false);
        auto rep = jacobian_rank(inst, observed, mode, tol);
        rep.seed = seed;
        v.reports.push_back(rep);
    }
    v.finite = v.reports.front().finite;
    for (const auto& r : v.reports)
        if (r.finite != v.finite) v.stable = false;
    return v;
}

namespace {

struct Solve {
    bool ok = false;
    double residual = 0;
    std::vector<double> values;
};

Solve lm_solve(const TuckerModel& model, const std::vector<Coord>& obs, const Eigen::VectorXd& y,
               const std::vector<int>& free, Eigen::VectorXd th, const std::vector<Coord>& all,
               const EnumerateOptions& opt) {
    const int nf = static_cast<int>(free.size()), m = static_cast<int>(obs.size());
    const double ynorm = std::max(y.norm(), 1e-300);
    Eigen::MatrixXd J(m, nf);
    Eigen::VectorXd r(m);
    auto eval = [&](const Eigen::VectorXd& t, Eigen::VectorXd& res) {
        for (int k = 0; k < m; ++k) res[k] = model.value(t, obs[k]) - y[k];
    };
    eval(th, r);
    double cost = r.squaredNorm();
    double lambda = -1;
    Eigen::RowVectorXd g(model.num_params());
    // keep polishing past residual_tol; stop once no step helps
    for (int it = 0; it < opt.max_iter && std::sqrt(cost) / ynorm >= 1e-15; ++it) {
        for (int k = 0; k < m; ++k) {
            model.gradient(th, obs[k], g);
            for (int c = 0; c < nf; ++c) J(k, c) = g[free[c]];
        }
        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd b = -J.transpose() * r;
        if (lambda < 0) lambda = 1e-3 * std::max(1.0, A.diagonal().maxCoeff());
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd M = A;
            M.diagonal().array() += lambda;
            Eigen::VectorXd d = M.ldlt().solve(b);
            Eigen::VectorXd t2 = th;
            for (int c = 0; c < nf; ++c) t2[free[c]] += d[c];
            Eigen::VectorXd r2(m);
            eval(t2, r2);
            double c2 = r2.squaredNorm();
            if (std::isfinite(c2) && c2 < cost) {
                th = t2;
                r = r2;
                cost = c2;
                lambda = std::max(lambda / 3, 1e-15);
                improved = true;
                break;
            }
            lambda *= 4;
        }
        if (!improved) break;
    }
    Solve s;
    s.residual = std::sqrt(cost) / ynorm;
    s.ok = s.residual < opt.residual_tol;
    if (s.ok)
        for (const auto& x : all) s.values.push_back(model.value(th, x));
    return s;
}

double rel_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += (a[k] - b[k]) * (a[k] - b[k]);
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    return std::sqrt(num) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

}  // namespace

CompletionSet enumerate_completions(const SamplingPattern& p, const std::vector<double>& observed_values,
                                    const RankSpec& rs, std::uint64_t seed, const EnumerateOptions& opt) {
    if (observed_values.size() != p.count()) throw Error("enumerate_completions: one value per observed entry needed");
    const Shape& s = p.shape();
    TuckerModel model(s, rs);
    // gauge: leading r_i x r_i block of every T_i is the identity
    std::vector<int> free;
    Eigen::VectorXd base = Eigen::VectorXd::Zero(model.num_params());
    for (int q = 0; q < model.num_core(); ++q) free.push_back(q);
    for (int i = rs.j() + 1; i <= s.order(); ++i)
        for (int x = 1; x <= s.dim(i); ++x)
            for (int a = 1; a <= rs.rank(i); ++a) {
                int idx = model.factor_index(i, a, x);
                if (x <= rs.rank(i))
                    base[idx] = a == x ? 1.0 : 0.0;
                else
                    free.push_back(idx);
            }
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(observed_values.data(), observed_values.size());
    const auto all = all_coords(s);

    std::vector<Solve> runs(opt.starts);
    parallel_for(static_cast<std::size_t>(opt.starts), [&](std::size_t k) {
        Rng rng(Rng::derive(seed, 0xe2e, k));
        Eigen::VectorXd th = base;
        for (int q : free) th[q] = opt.init_scale * rng.normal();
        runs[k] = lm_solve(model, p.observed(), y, free, th, all, opt);
    });

    CompletionSet out;
    out.starts = opt.starts;
    for (int k = 0; k < opt.starts; ++k) {
        if (!runs[k].ok) continue;
        ++out.converged;
        bool merged = false;
        for (auto& c : out.clusters)
            if (rel_dist(c.values, runs[k].values) < opt.merge_tol) {
                ++c.hits;
                c.residual = std::max(c.residual, runs[k].residual);
                merged = true;
                break;
            }
        if (!merged) out.clusters.push_back({runs[k].values, runs[k].residual, 1, k});
    }
    if (out.converged == 0) out.diagnostics = "no start converged";
    out.finite_consistent = !(out.clusters.size() > 1 && static_cast<int>(out.clusters.size()) == out.converged);
    if (!out.finite_consistent) out.diagnostics = "every converged start gave a new completion";
    return out;
}

// ---- fixed 5x4 rank-2 instance with two completions ----

namespace {

using Poly = std::vector<Rational>;   // coefficients, lowest degree first

Poly pmul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) c[i + k] += a[i] * b[k];
    return c;
}

Poly padd(const Poly& a, const Poly& b, int sign = 1) {
    Poly c(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += Rational(sign) * b[i];
    return c;
}

Poly pscale(const Poly& a, const Rational& s) {
    Poly c = a;
    for (auto& v : c) v *= s;
    return c;
}

Rational peval(const Poly& a, const Rational& x) {
    Rational v(0), pw(1);
    for (const auto& c : a) {
        v += c * pw;
        pw *= x;
    }
    return v;
}

long long isqrt_exact(long long v) {
    if (v < 0) return -1;
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<long double>(v))));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v ? r : -1;
}

}  // namespace

AppendixC appendixC_closed_form() {
    using Q = Rational;
    AppendixC out;
    const Q blank(0);
    out.observed = {{Q(1), blank, Q(1), Q(-1, 2)},
                    {Q(-4), Q(2), Q(-1), blank},
                    {Q(0), Q(1), blank, Q(2)},
                    {Q(1), blank, Q(4), blank},
                    {blank, Q(4), Q(-2), Q(3, 2)}};
    out.mask = {{1, 0, 1, 1}, {1, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 1, 1}};
    const auto& U = out.observed;
    // rows 1-2 are the right factor (identity gauge on the left factor)
    const Q x1 = U[0][0], x3 = U[0][2], x4 = U[0][3];
    const Q x5 = U[1][0], x6 = U[1][1], x7 = U[1][2];
    const Q u31 = U[2][0], u32 = U[2][1], u34 = U[2][3];
    const Q u41 = U[3][0], u43 = U[3][2];
    const Q u52 = U[4][1], u53 = U[4][2], u54 = U[4][3];

    // row 3: col 1 gives rho1 in terms of rho2, col 4 gives rho2 = A / (x8 - B)
    const Q A = u34 - x4 * u31 / x1, B = x4 * x5 / x1;
    // row 5: col 3 gives rho1' in terms of rho2', col 4 gives rho2' = A' / (x8 - B')
    const Q A2 = u54 - x4 * u53 / x3, B2 = x4 * x7 / x3;
    // row 3 col 2: x8 = B + Qn(x2) / P(x2)
    const Poly P{u32 * x1, -u31};
    const Poly Qn = pscale(Poly{x6 * x1, -x5}, A);
    // row 5 col 2 with x8 substituted, times P
    const Poly lhs = pmul(Poly{u52 * x3, -u53}, padd(pscale(P, B - B2), Qn));
    const Poly rhs = pmul(pscale(Poly{x6 * x3, -x7}, A2), P);
    Poly quad = padd(lhs, rhs, -1);
    while (quad.size() > 3 && quad.back() == Q(0)) quad.pop_back();
    if (quad.size() != 3 || quad[2] == Q(0)) throw Error("two-completion example: elimination did not give a quadratic");

    long long lcm = 1;
    for (const auto& c : quad) lcm = boost::integer::lcm(lcm, c.denominator());
    long long ic[3];
    for (int k = 0; k < 3; ++k) ic[k] = (quad[k] * Q(lcm)).numerator();
    long long g = boost::integer::gcd(boost::integer::gcd(ic[0], ic[1]), ic[2]);
    if (ic[2] < 0) g = -g;
    out.a = ic[2] / g;
    out.b = ic[1] / g;
    out.c = ic[0] / g;

    long long disc = out.b * out.b - 4 * out.a * out.c;
    long long sq = isqrt_exact(disc);
    if (sq < 0) throw Error("two-completion example: discriminant is not a perfect square");
    out.roots = {Q(-out.b - sq, 2 * out.a), Q(-out.b + sq, 2 * out.a)};
    std::sort(out.roots.begin(), out.roots.end());

    // row 4 has two observed entries: a 2x2 linear system
    const Q det = x1 * x7 - x5 * x3;
    out.r3 = (u41 * x7 - x5 * u43) / det;
    out.r4 = (x1 * u43 - u41 * x3) / det;

    for (const Q& x2 : out.roots) {
        const Q Pv = peval(P, x2);
        if (Pv == Q(0)) throw Error("two-completion example: spurious root");
        const Q x8 = B + peval(Qn, x2) / Pv;
        const Q rho2 = A / (x8 - B), rho1 = (u31 - rho2 * x5) / x1;
        const Q rho6 = A2 / (x8 - B2), rho5 = (u53 - rho6 * x7) / x3;
        const std::vector<Q> X1{x1, x2, x3, x4}, X2{x5, x6, x7, x8};
        const Q coef[5][2] = {{Q(1), Q(0)}, {Q(0), Q(1)}, {rho1, rho2}, {out.r3, out.r4}, {rho5, rho6}};
        std::vector<std::vector<Q>> M(5, std::vector<Q>(4));
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 4; ++k) M[i][k] = coef[i][0] * X1[k] + coef[i][1] * X2[k];
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 4; ++k)
                if (out.mask[i][k] && M[i][k] != U[i][k]) throw Error("two-completion example: completion misses an observed entry");
        out.completions.push_back(M);
    }
    return out;
}

SamplingPattern appendixC_pattern() {
    auto c = appendixC_closed_form();
    std::vector<Coord> obs;
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 4; ++k)
            if (c.mask[i][k]) obs.push_back({i + 1, k + 1});
    return SamplingPattern(Shape({5, 4}), obs);
}

std::vector<double> appendixC_values() {
    auto c = appendixC_closed_form();
    std::vector<double> v;
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 4; ++k)
            if (c.mask[i][k]) v.push_back(boost::rational_cast<double>(c.observed[i][k]));
    return v;
}

RankOneExample rank_one_example(std::uint64_t seed, const EnumerateOptions& opt) {
    RankOneExample ex;
    const Shape& s = ex.shape;
    ex.observed = {{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1}};
    // entries kept away from zero so the identity gauge is always valid
    Rng rng(Rng::derive(seed, 0x2b, 0));
    std::vector<double> a(2), b(2), c(2);
    for (auto* v : {&a, &b, &c})
        for (auto& t : *v) t = (rng.uniform() < 0.5 ? -1 : 1) * (0.5 + rng.uniform());
    const auto all = all_coords(s);
    for (const auto& x : all) ex.truth.push_back(a[x[0] - 1] * b[x[1] - 1] * c[x[2] - 1]);
    auto U = [&](const Coord& x) { return a[x[0] - 1] * b[x[1] - 1] * c[x[2] - 1]; };
    for (const auto& x : ex.observed) ex.observed_values.push_back(U(x));
    const double u111 = U({1, 1, 1});
    for (const auto& x : all)
        ex.closed_form.push_back(U({x[0], 1, 1}) * U({1, x[1], 1}) * U({1, 1, x[2]}) / (u111 * u111));

    SamplingPattern pat(s, ex.observed);
    ex.tensor = enumerate_completions(pat, ex.observed_values, RankSpec(1, {1, 1}), seed, opt);
    ex.closed_form_error = ex.tensor.clusters.empty() ? INFINITY : 0;
    for (const auto& k : ex.tensor.clusters)
        for (std::size_t t = 0; t < all.size(); ++t)
            ex.closed_form_error = std::max(ex.closed_form_error, std::abs(k.values[t] - ex.closed_form[t]));

    for (int mode = 1; mode <= 3; ++mode) {
        Shape m({2, 4});
        std::vector<Coord> obs;
        for (const auto& x : ex.observed) obs.push_back({x[mode - 1], static_cast<int>(matricize_col(s, mode, x))});
        SamplingPattern mp(m, obs);
        // the pattern sorts its entries; look values up again
        std::vector<double> vals;
        for (const auto& y : mp.observed()) vals.push_back(U(matricize_coord(s, mode, y[0], y[1])));
        ex.matricizations.push_back(enumerate_completions(mp, vals, RankSpec(1, {1}), Rng::derive(seed, 0x2b, mode), opt));
    }
    return ex;
}

std::string rational_str(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string oracle_json(const OracleReport& r) {
    nlohmann::json j;
    j["mode"] = to_string(r.mode);
    j["numUnknowns"] = r.num_unknowns;
    j["numParameters"] = r.num_params;
    j["numPolynomials"] = r.num_polynomials;
    j["singularValues"] = r.singular_values;
    j["numericalRank"] = r.numerical_rank;
    if (r.generic_rank >= 0) j["fullObservationRank"] = r.generic_rank;
    j["verdict"] = r.finite ? "finite" : "infinite";
    j["tolerance"] = r.tolerance;
    j["seed"] = r.seed;
    return j.dump(2);
}

std::string completions_json(const CompletionSet& c, const Shape& s) {
    nlohmann::json j;
    j["dims"] = s.dims();
    j["starts"] = c.starts;
    j["converged"] = c.converged;
    j["finiteConsistent"] = c.finite_consistent;
    j["diagnostics"] = c.diagnostics;
    j["completions"] = nlohmann::json::array();
    for (const auto& k : c.clusters)
        j["completions"].push_back({{"values", k.values}, {"residual", k.residual}, {"hits", k.hits}, {"firstStart", k.first_start}});
    return j.dump(2);
}

}  // namespace tuckercert
