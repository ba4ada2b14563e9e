#include "tuckercert/geometry.hpp"

#include <algorithm>
#include <functional>

namespace tuckercert {

RankSpec::RankSpec(int j, std::vector<int> ranks) : j_(j), ranks_(std::move(ranks)) {
    if (j_ < 1) throw Error("split index j must be >= 1");
    if (ranks_.empty()) throw Error("rank list is empty");
    for (int r : ranks_) {
        if (r < 1) throw Error("ranks must be positive");
        R_ *= r;
        sum_sq_ += static_cast<Index>(r) * r;
        sum_ += r;
    }
    sorted_ = ranks_;
    std::sort(sorted_.begin(), sorted_.end(), std::greater<int>());
}

void RankSpec::check_against(const Shape& s) const {
    if (order() != s.order())
        throw Error("rank list length must be d - j");
    for (int i = j_ + 1; i <= s.order(); ++i)
        if (rank(i) > s.dim(i)) throw Error("rank r_" + std::to_string(i) + " exceeds n_" + std::to_string(i));
}

Index manifold_dim(const Shape& s, const std::vector<int>& r) {
    if (static_cast<int>(r.size()) != s.order()) throw Error("full rank must have d components");
    Index sum = 0, prod = 1;
    for (int i = 0; i < s.order(); ++i) {
        if (r[i] < 1 || r[i] > s.dims()[i]) throw Error("rank component out of range");
        sum += static_cast<Index>(s.dims()[i]) * r[i] - static_cast<Index>(r[i]) * r[i];
        prod *= r[i];
    }
    return sum + prod;
}

Index core_dim(const Shape& s, const RankSpec& rs) { return s.head(rs.j()) * rs.R() - rs.sum_sq(); }

Index g_fn(const RankSpec& rs, Index x) {
    if (x < 0) throw Error("g: negative argument");
    Index total = 0, used = 0;
    for (int r : rs.sorted()) {
        Index avail = std::max<Index>(0, x - used);
        total += std::min<Index>(r, avail) * r;
        used += r;
    }
    return total;
}

Index f_fn(const RankSpec& rs, Index m) { return rs.R() * m - g_fn(rs, m); }

bool check_Bj(const Shape& s, const RankSpec& rs) { return s.head(rs.j()) >= rs.sum(); }

ProperStructure canonical_structure(const Shape& s, const RankSpec& rs) {
    rs.check_against(s);
    if (!check_Bj(s, rs)) throw Error("Assumption B_j violated: N_j < sum of ranks");
    ProperStructure ps;
    ps.num_rows = s.head(rs.j());
    ps.num_cols = rs.R();
    Index offset = 0;
    for (int i = rs.j() + 1; i <= s.order(); ++i) {
        ProperStructure::Block b;
        b.mode = i;
        b.size = rs.rank(i);
        // stride of core mode i inside the R columns
        Index stride = 1;
        for (int k = rs.j() + 1; k < i; ++k) stride *= rs.rank(k);
        for (int t = 1; t <= b.size; ++t) {
            b.rows.push_back(offset + t);
            b.cols.push_back(1 + (t - 1) * stride);
        }
        offset += b.size;
        ps.blocks.push_back(std::move(b));
    }
    return ps;
}

std::vector<ProperStructure::Entry> ProperStructure::known_entries() const {
    std::vector<Entry> out;
    for (const auto& b : blocks)
        for (int a = 0; a < b.size; ++a)
            for (int c = 0; c < b.size; ++c) out.push_back({b.rows[a], b.cols[c], a == c ? 1.0 : 0.0});
    return out;
}

}  // namespace tuckercert
