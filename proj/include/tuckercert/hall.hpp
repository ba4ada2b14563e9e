#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tuckercert/tensor.hpp"

namespace tuckercert {

// T1 nodes 1..n1, T2 nodes 1..n2
struct BipartiteGraph {
    int n1 = 0, n2 = 0;
    std::vector<std::vector<int>> adj;   // adj[v-1] sorted T2 neighbours of v

    BipartiteGraph() = default;
    BipartiteGraph(int a, int b) : n1(a), n2(b), adj(a) {}

    void add_edge(int v, int u);
    bool has_edge(int v, int u) const;
    std::size_t num_edges() const;
    int degree(int v) const { return static_cast<int>(adj[v - 1].size()); }
};

struct Matching {
    int size = 0;
    std::vector<std::pair<int, int>> pairs;   // (T1, T2)
};

Matching max_matching(const BipartiteGraph& g);

struct Defect {
    int value = 0;
    std::vector<int> witness;   // T1 nodes attaining the minimum
};

inline constexpr int kHallBruteGuard = 20;

// min over nonempty S of |N(S)| - |S|, by enumeration
Defect expansion_defect(const BipartiteGraph& g);
// same value through matchings
Defect expansion_defect_fast(const BipartiteGraph& g);
bool has_surplus(const BipartiteGraph& g, int r);

struct HallStats {
    int scenario1 = 0, scenario2 = 0;
    int alternative_edges = 0;   // scenario-2 steps that needed a non-lowest edge set
    int repairs = 0;             // steps rebuilt by edge deletion
};

BipartiteGraph generalized_hall_subgraph(const BipartiteGraph& g, int r, HallStats* stats = nullptr);
BipartiteGraph lemma_match_subgraph(const BipartiteGraph& g, int r, const std::vector<int>& S0,
                                    HallStats* stats = nullptr);

// columns as sorted row lists (1-based) over n_rows rows
std::vector<std::vector<int>> lemma_omega_transform(int n_rows, const std::vector<std::vector<int>>& cols, int r,
                                                    HallStats* stats = nullptr);

std::string graph_json(const BipartiteGraph& g);

}  // namespace tuckercert
