#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "tuckercert/geometry.hpp"

using namespace tuckercert;

namespace {

// max known entries over all x-row subsets of the canonical structure
Index g_brute(const Shape& s, const RankSpec& rs, Index x) {
    auto ps = canonical_structure(s, rs);
    std::vector<int> per_row(ps.num_rows, 0);
    for (const auto& e : ps.known_entries()) ++per_row[e.row - 1];
    std::sort(per_row.rbegin(), per_row.rend());
    // rows are disjoint weights, so the best x rows are the heaviest; confirm by enumeration when small
    Index best = 0;
    const int n = static_cast<int>(ps.num_rows);
    if (n <= 16) {
        std::vector<int> w(per_row);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != x) continue;
            Index c = 0;
            for (int b = 0; b < n; ++b)
                if (mask >> b & 1) c += w[b];
            best = std::max(best, c);
        }
        if (x > n) best = std::accumulate(w.begin(), w.end(), Index(0));
        return best;
    }
    for (Index k = 0; k < std::min<Index>(x, n); ++k) best += per_row[k];
    return best;
}

Shape shape_for(int j, const std::vector<int>& ranks, int head_extra) {
    int sum = 0;
    for (int r : ranks) sum += r;
    std::vector<int> dims(j, 1);
    dims[0] = sum + head_extra;
    for (int r : ranks) dims.push_back(r + 1);
    return Shape(dims);
}

}  // namespace

TEST_CASE("manifold_dim") {
    CHECK(manifold_dim(Shape({2, 2, 2}), {1, 1, 1}) == 4);
    CHECK(manifold_dim(Shape({7, 3, 4}), {2, 2, 3}) == 27);
    CHECK(manifold_dim(Shape({900, 900, 900, 900}), {3, 3, 3, 3}) == 4 * (2700 - 9) + 81);
}

TEST_CASE("core_dim") {
    CHECK(core_dim(Shape({2, 2, 2}), RankSpec(1, {1, 1})) == 0);
    CHECK(core_dim(Shape({3, 3, 3}), RankSpec(1, {1, 2})) == 1);
    CHECK(core_dim(Shape({4, 4, 4}), RankSpec(1, {2, 3})) == 11);
}

TEST_CASE("g small values") {
    RankSpec rs(1, {3, 2});
    CHECK(g_fn(rs, 0) == 0);
    CHECK(g_fn(rs, 4) == 11);
    CHECK(g_fn(rs, 7) == 13);
    CHECK(g_fn(rs, 100) == 13);
}

TEST_CASE("g agrees with brute force over canonical rows") {
    std::vector<std::vector<int>> specs;
    for (int a = 1; a <= 7; ++a)
        for (int b = 1; a + b <= 8; ++b) {
            specs.push_back({a, b});
            for (int c = 1; a + b + c <= 8; ++c) specs.push_back({a, b, c});
        }
    for (const auto& r : specs) {
        RankSpec rs(1, r);
        Shape s = shape_for(1, r, 2);
        for (Index x = 0; x <= s.dim(1) + 1; ++x) CHECK(g_fn(rs, x) == g_brute(s, rs, x));
    }
}

TEST_CASE("g ignores rank order") {
    for (Index x = 0; x < 12; ++x) {
        CHECK(g_fn(RankSpec(1, {1, 2, 4}), x) == g_fn(RankSpec(1, {4, 1, 2}), x));
        CHECK(g_fn(RankSpec(2, {3, 1}), x) == g_fn(RankSpec(2, {1, 3}), x));
    }
}

TEST_CASE("core_dim equals R*N_j - g(N_j)") {
    for (const auto& r : std::vector<std::vector<int>>{{1, 1}, {2, 3}, {1, 2, 2}, {3, 3}}) {
        RankSpec rs(1, r);
        Shape s = shape_for(1, r, 1);
        CHECK(core_dim(s, rs) == rs.R() * s.head(1) - g_fn(rs, s.head(1)));
    }
}

TEST_CASE("canonical structure layout") {
    auto ps = canonical_structure(Shape({7, 3, 4}), RankSpec(1, {2, 3}));
    REQUIRE(ps.blocks.size() == 2);
    CHECK(ps.blocks[0].mode == 2);
    CHECK(ps.blocks[0].rows == std::vector<Index>{1, 2});
    CHECK(ps.blocks[1].rows == std::vector<Index>{3, 4, 5});
    // columns (1,x_i,1): x_2 stride 1, x_3 stride 2 in the tail
    CHECK(ps.blocks[0].cols == std::vector<Index>{1, 2});
    CHECK(ps.blocks[1].cols == std::vector<Index>{1, 3, 5});
    CHECK(ps.known_entries().size() == 13);

    auto p2 = canonical_structure(Shape({3, 3, 3}), RankSpec(1, {1, 1}));
    CHECK(p2.blocks[0].rows == std::vector<Index>{1});
    CHECK(p2.blocks[1].rows == std::vector<Index>{2});
}

TEST_CASE("canonical structure invariants") {
    for (const auto& r : std::vector<std::vector<int>>{{1, 1}, {2, 3}, {1, 2, 2}, {3, 1}, {2, 2, 2}}) {
        RankSpec rs(1, r);
        Shape s = shape_for(1, r, 0);
        auto ps = canonical_structure(s, rs);
        std::set<Index> rows;
        std::set<std::pair<Index, Index>> cells;
        Index count = 0;
        for (const auto& b : ps.blocks)
            for (Index row : b.rows) CHECK(rows.insert(row).second);
        for (const auto& e : ps.known_entries()) {
            CHECK(cells.insert({e.row, e.col}).second);
            ++count;
        }
        CHECK(count == rs.sum_sq());
        // each block is an identity on its own rows
        for (const auto& b : ps.blocks)
            for (const auto& e : ps.known_entries())
                if (std::find(b.rows.begin(), b.rows.end(), e.row) != b.rows.end()) {
                    auto ri = std::find(b.rows.begin(), b.rows.end(), e.row) - b.rows.begin();
                    auto ci = std::find(b.cols.begin(), b.cols.end(), e.col) - b.cols.begin();
                    CHECK(e.value == (ri == ci ? 1.0 : 0.0));
                }
    }
}

TEST_CASE("check_Bj") {
    CHECK(check_Bj(Shape({2, 2, 2}), RankSpec(1, {1, 1})));
    CHECK_FALSE(check_Bj(Shape({2, 2, 2}), RankSpec(1, {2, 2})));
    CHECK(check_Bj(Shape({7, 3, 4}), RankSpec(1, {2, 3})));
}
