#pragma once

#include <string>
#include <vector>

#include "tuckercert/geometry.hpp"

namespace tuckercert {

struct GrassmannianBound {
    double value = 0;
    int argmin = 1;                 // mode achieving the min (lowest on ties)
    bool rank_small = true;         // r_i <= n_i / 6 for all i
    bool enough_columns = true;     // N_{-i} >= r_i (n_i - r_i) for all i
    bool valid() const { return rank_small && enough_columns; }
};

GrassmannianBound grassmannian_bound(const Shape& s, const std::vector<int>& full_rank, double eps);

struct TuckerValidity {
    bool sum_sq_below_prod = false;   // sum r_i^2 < prod r_i (equality leaves a log of 0)
    bool enough_tail = false;         // prod_{i>j} n_i >= N_j*R - sumSq (finite) or N_j*(R+1) - sumSq (unique)
    bool Bj = false;
    bool spread = false;              // sum n_i r_i < prod_{i>j} n_i
    bool valid() const { return sum_sq_below_prod && enough_tail && Bj && spread; }
};

struct TuckerBound {
    double value = 0;   // NaN when a log argument is not positive
    TuckerValidity validity;
};

struct Threshold {
    double bound = 0;   // l must exceed this
    long long l = 0;    // smallest integer strictly above bound
    TuckerValidity validity;
};

Threshold tucker_finite_threshold_l(const Shape& s, const RankSpec& rs, double eps);
TuckerBound tucker_finite_bound_p(const Shape& s, const RankSpec& rs, double eps);
Threshold tucker_unique_threshold_l(const Shape& s, const RankSpec& rs, double eps);
TuckerBound tucker_unique_bound_p(const Shape& s, const RankSpec& rs, double eps);

double azuma_tail(double n, double c);
struct AzumaThreshold {
    double p_prime, p_double_prime;
};
AzumaThreshold azuma_threshold(double n, double r, double eps);

// per-column l for the column-subset property: 6 log n + 2 log(k/eps) + 4
double minsamp_l_bound(double n1, double k, double eps);

struct CurveConfig {
    int d = 4;
    int n = 900;
    int j = 1;
    int r_min = 1, r_max = 300;
    double eps = 1e-4;
};

struct CurveRow {
    int r;
    GrassmannianBound grass;
    TuckerBound finite, unique;
};

std::vector<CurveRow> emit_curves(const CurveConfig& cfg);
std::string curves_csv(const std::vector<CurveRow>& rows);

}  // namespace tuckercert
