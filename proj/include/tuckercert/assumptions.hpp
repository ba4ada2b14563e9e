#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tuckercert/geometry.hpp"
#include "tuckercert/tensor.hpp"

namespace tuckercert {

// S_i for i = j+1..d, sorted
struct HullSpec {
    int j = 1;
    std::vector<std::vector<int>> sets;
    bool operator==(const HullSpec& o) const { return j == o.j && sets == o.sets; }
};

HullSpec minimal_hull(int j, const std::vector<Coord>& coords);
// entries with x_i in S_i for every i > j
Index hull_count(const HullSpec& h, const std::vector<Coord>& entries);
Index hull_budget(const HullSpec& h, const RankSpec& rs, int extra);

struct HullCheck {
    bool ok = true;
    std::optional<HullSpec> witness;
    Index count = 0, budget = 0;
};

// guard: sum of n_i over i > j
inline constexpr int kHullBitsGuard = 22;

HullCheck check_Aj(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection);
HullCheck check_Aj_plus(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection);

enum class SelectionMode { A, APlus };

struct TSelection {
    std::vector<Coord> entries;          // sorted
    std::vector<std::pair<int, int>> charge;   // (mode, value) each entry is charged to
    bool one_per_column = false;
};

// selection following the spread construction; throws AssumptionError when the
// spread preconditions fail or no selection exists
TSelection select_T_entries(const SamplingPattern& p, const RankSpec& rs, SelectionMode mode, std::uint64_t seed,
                            const std::vector<Coord>* hint = nullptr);

// exact search over all observed entries; nullopt when no selection exists
std::optional<TSelection> search_T_entries(const SamplingPattern& p, const RankSpec& rs, SelectionMode mode,
                                           std::uint64_t seed);

// drop one entry per (mode, value) slot of an A_j^+ selection
TSelection reduce_plus_selection(const RankSpec& rs, const TSelection& plus);

std::size_t selection_size(const Shape& s, const RankSpec& rs, SelectionMode mode);

}  // namespace tuckercert
