#pragma once

#include <vector>

#include "tuckercert/tensor.hpp"

namespace tuckercert {

// ranks r_{j+1}..r_d in mode order, split index j
class RankSpec {
public:
    RankSpec() = default;
    RankSpec(int j, std::vector<int> ranks);

    int j() const { return j_; }
    int order() const { return j_ + static_cast<int>(ranks_.size()); }
    const std::vector<int>& ranks() const { return ranks_; }
    int rank(int mode) const { return ranks_.at(mode - j_ - 1); }   // mode in j+1..d
    const std::vector<int>& sorted() const { return sorted_; }

    Index R() const { return R_; }
    Index sum_sq() const { return sum_sq_; }
    Index sum() const { return sum_; }

    void check_against(const Shape& s) const;

private:
    int j_ = 1;
    std::vector<int> ranks_, sorted_;
    Index R_ = 1, sum_sq_ = 0, sum_ = 0;
};

Index manifold_dim(const Shape& s, const std::vector<int>& full_rank);
Index core_dim(const Shape& s, const RankSpec& rs);
Index g_fn(const RankSpec& rs, Index x);
// R*m - g(m): known-entry-adjusted count for m rows
Index f_fn(const RankSpec& rs, Index m);

struct ProperStructure {
    struct Block {
        int mode;                  // i > j
        int size;                  // r_i
        std::vector<Index> rows;   // rows of the core unfolding
        std::vector<Index> cols;   // columns of the core unfolding, coordinate (1,..,x_i,..,1)
    };
    Index num_rows = 0;   // N_j
    Index num_cols = 0;   // R
    std::vector<Block> blocks;

    // (row, col, value) of every fixed entry
    struct Entry { Index row, col; double value; };
    std::vector<Entry> known_entries() const;
};

ProperStructure canonical_structure(const Shape& s, const RankSpec& rs);

bool check_Bj(const Shape& s, const RankSpec& rs);

}  // namespace tuckercert
