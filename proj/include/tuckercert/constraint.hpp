#pragma once

#include <string>
#include <vector>

#include "tuckercert/geometry.hpp"
#include "tuckercert/tensor.hpp"

namespace tuckercert {

struct ConstraintColumn {
    std::vector<int> base;            // (t_{j+1},..,t_d)
    std::vector<Index> designated;    // unfolding rows of the selected entries in this subtensor
    Index free_row = 0;               // row of the entry this column stands for
    Coord free_coord;
    std::vector<Index> support;       // designated ∪ {free_row}, sorted
};

struct ConstraintMatrix {
    Index num_rows = 0;   // N_j
    std::vector<ConstraintColumn> columns;

    std::size_t size() const { return columns.size(); }
};

ConstraintMatrix build_constraint(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection);

Index m_count(const ConstraintMatrix& cm, const std::vector<int>& subset);

std::string constraint_json(const ConstraintMatrix& cm);

}  // namespace tuckercert
