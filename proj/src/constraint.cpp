#include "tuckercert/constraint.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace tuckercert {

ConstraintMatrix build_constraint(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection) {
    const Shape& s = p.shape();
    rs.check_against(s);
    const int j = rs.j();
    for (const auto& x : selection)
        if (!p.contains(x)) throw Error("selection entry " + coord_str(x) + " is not observed");
    std::vector<Coord> sel = selection;
    std::sort(sel.begin(), sel.end());

    struct Sub {
        std::vector<Index> designated;
        std::vector<Coord> free;
    };
    std::map<std::vector<int>, Sub> subs;   // keyed by tail tuple, lexicographic
    for (const auto& x : p.observed()) {
        std::vector<int> base(x.begin() + j, x.end());
        Sub& sb = subs[base];
        if (std::binary_search(sel.begin(), sel.end(), x))
            sb.designated.push_back(head_row(s, j, x));
        else
            sb.free.push_back(x);
    }

    ConstraintMatrix cm;
    cm.num_rows = s.head(j);
    for (auto& [base, sb] : subs) {
        std::sort(sb.designated.begin(), sb.designated.end());
        // free entries in head-coordinate lexicographic order
        std::sort(sb.free.begin(), sb.free.end(), [&](const Coord& a, const Coord& b) {
            return std::lexicographical_compare(a.begin(), a.begin() + j, b.begin(), b.begin() + j);
        });
        for (const auto& x : sb.free) {
            ConstraintColumn c;
            c.base = base;
            c.designated = sb.designated;
            c.free_row = head_row(s, j, x);
            c.free_coord = x;
            c.support = sb.designated;
            c.support.push_back(c.free_row);
            std::sort(c.support.begin(), c.support.end());
            c.support.erase(std::unique(c.support.begin(), c.support.end()), c.support.end());
            cm.columns.push_back(std::move(c));
        }
    }
    return cm;
}

Index m_count(const ConstraintMatrix& cm, const std::vector<int>& subset) {
    std::vector<Index> rows;
    for (int c : subset) {
        const auto& sup = cm.columns.at(c).support;
        rows.insert(rows.end(), sup.begin(), sup.end());
    }
    std::sort(rows.begin(), rows.end());
    return std::unique(rows.begin(), rows.end()) - rows.begin();
}

std::string constraint_json(const ConstraintMatrix& cm) {
    nlohmann::json j;
    j["numRows"] = cm.num_rows;
    j["columns"] = nlohmann::json::array();
    for (const auto& c : cm.columns)
        j["columns"].push_back({{"base", c.base}, {"designated", c.designated}, {"free", c.free_row}});
    return j.dump();
}

}  // namespace tuckercert
