#include <doctest.h>

#include <algorithm>
#include <set>

#include "tuckercert/assumptions.hpp"
#include "tuckercert/constraint.hpp"
#include "tuckercert/rng.hpp"

using namespace tuckercert;

namespace {

std::set<std::vector<Index>> support_triples(const ConstraintMatrix& cm, const Shape& s, int j) {
    std::set<std::vector<Index>> out;
    for (std::size_t k = 0; k < cm.columns.size(); ++k)
        for (Index row : cm.columns[k].support) {
            Coord head = unfold_coord(s, j, row, 1);
            std::vector<Index> t(head.begin(), head.begin() + j);
            t.push_back(static_cast<Index>(k) + 1);
            out.insert(t);
        }
    return out;
}

}  // namespace

TEST_CASE("three-way worked example") {
    Shape s({3, 2, 2});
    RankSpec rs(2, {2});
    SamplingPattern p(s, {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}, {3, 1, 1}, {1, 1, 2}, {2, 1, 2}, {3, 2, 2}});
    std::vector<Coord> sel{{1, 1, 1}, {1, 2, 1}, {1, 1, 2}, {3, 2, 2}};
    auto cm = build_constraint(p, rs, sel);
    REQUIRE(cm.size() == 3);
    CHECK(cm.num_rows == 6);
    std::set<std::vector<Index>> expect{{1, 1, 1}, {1, 2, 1}, {2, 2, 1}, {1, 1, 2}, {1, 2, 2},
                                        {3, 1, 2}, {1, 1, 3}, {3, 2, 3}, {2, 1, 3}};
    CHECK(support_triples(cm, s, 2) == expect);
    // distinct rows touched by all three columns: (1,1),(1,2),(2,2),(3,1),(3,2),(2,1)
    CHECK(m_count(cm, {0, 1, 2}) == 6);
    CHECK(m_count(cm, {0, 1}) == 4);
}

TEST_CASE("columns and counts") {
    Shape s({2, 2, 2});
    RankSpec rs(1, {1, 1});
    auto full = SamplingPattern::full(s);
    std::vector<Coord> sel{{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {2, 2, 2}};
    auto cm = build_constraint(full, rs, sel);
    CHECK(cm.size() == 4);
    CHECK(m_count(cm, {}) == 0);
    for (int k = 0; k < 4; ++k) CHECK(m_count(cm, {k}) == static_cast<Index>(cm.columns[k].support.size()));
    // only the selection observed
    auto none = build_constraint(SamplingPattern(s, sel), rs, sel);
    CHECK(none.size() == 0);
}

TEST_CASE("column count, designated entries, determinism on random patterns") {
    Rng rng(17);
    struct Case { std::vector<int> dims; int j; std::vector<int> r; };
    for (const auto& cs : std::vector<Case>{{{4, 4, 4}, 1, {2, 1}}, {{3, 3, 3, 3}, 2, {1, 1}}, {{3, 3, 3, 3}, 1, {1, 1, 1}}}) {
        Shape s(cs.dims);
        RankSpec rs(cs.j, cs.r);
        for (int t = 0; t < 15; ++t) {
            std::vector<Coord> obs;
            for (const auto& x : all_coords(s))
                if (rng.uniform() < 0.6) obs.push_back(x);
            SamplingPattern p(s, obs);
            auto sel = search_T_entries(p, rs, SelectionMode::A, t);
            if (!sel) continue;
            auto cm = build_constraint(p, rs, sel->entries);
            CHECK(static_cast<Index>(cm.size()) ==
                  static_cast<Index>(p.count()) - static_cast<Index>(selection_size(s, rs, SelectionMode::A)));
            for (const auto& col : cm.columns) {
                // every selected entry in the column's subtensor is designated
                for (const auto& x : sel->entries) {
                    std::vector<int> tail(x.begin() + rs.j(), x.end());
                    if (tail == col.base)
                        CHECK(std::binary_search(col.support.begin(), col.support.end(), head_row(s, rs.j(), x)));
                }
                CHECK(std::find(col.support.begin(), col.support.end(), col.free_row) != col.support.end());
                CHECK(col.support.size() == col.designated.size() + 1);
            }
            CHECK(constraint_json(cm) == constraint_json(build_constraint(p, rs, sel->entries)));
            for (std::size_t k = 1; k < cm.size(); ++k) {
                const auto& a = cm.columns[k - 1];
                const auto& b = cm.columns[k];
                CHECK((a.base < b.base || (a.base == b.base && a.free_coord < b.free_coord)));
            }
        }
    }
}
