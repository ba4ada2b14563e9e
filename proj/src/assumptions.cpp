#include "tuckercert/assumptions.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "tuckercert/rng.hpp"

namespace tuckercert {

HullSpec minimal_hull(int j, const std::vector<Coord>& coords) {
    if (coords.empty()) throw Error("minimal_hull: empty coordinate set");
    HullSpec h;
    h.j = j;
    int d = static_cast<int>(coords.front().size());
    h.sets.resize(d - j);
    for (const auto& x : coords)
        for (int k = j; k < d; ++k) h.sets[k - j].push_back(x[k]);
    for (auto& s : h.sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return h;
}

Index hull_count(const HullSpec& h, const std::vector<Coord>& entries) {
    Index c = 0;
    for (const auto& x : entries) {
        bool in = true;
        for (std::size_t k = 0; k < h.sets.size() && in; ++k)
            in = std::binary_search(h.sets[k].begin(), h.sets[k].end(), x[h.j + k]);
        c += in;
    }
    return c;
}

Index hull_budget(const HullSpec& h, const RankSpec& rs, int extra) {
    Index b = 0;
    for (std::size_t k = 0; k < h.sets.size(); ++k)
        b += static_cast<Index>(h.sets[k].size()) * (rs.ranks()[k] + extra);
    return b;
}

std::size_t selection_size(const Shape& s, const RankSpec& rs, SelectionMode mode) {
    std::size_t n = 0;
    int extra = mode == SelectionMode::APlus ? 1 : 0;
    for (int i = rs.j() + 1; i <= s.order(); ++i) n += static_cast<std::size_t>(s.dim(i)) * (rs.rank(i) + extra);
    return n;
}

namespace {

// every box (S_{j+1},..,S_d) is a bitmask made of one segment per mode
HullCheck check_boxes(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& sel, int extra,
                      bool allow_empty) {
    const Shape& s = p.shape();
    rs.check_against(s);
    const int j = rs.j(), m = s.order() - j;
    std::vector<int> off(m + 1, 0);
    for (int k = 0; k < m; ++k) off[k + 1] = off[k] + s.dim(j + 1 + k);
    const int bits = off[m];
    if (bits > kHullBitsGuard) throw GuardExceeded("hull enumeration: sum of n_i over i>j exceeds guard");

    for (const auto& x : sel)
        if (!p.contains(x)) throw Error("selection entry " + coord_str(x) + " is not observed");

    const std::size_t total = std::size_t{1} << bits;
    std::vector<std::int32_t> cnt(total, 0);
    for (const auto& x : sel) {
        std::uint32_t mask = 0;
        for (int k = 0; k < m; ++k) mask |= 1u << (off[k] + x[j + k] - 1);
        ++cnt[mask];
    }
    for (int b = 0; b < bits; ++b)
        for (std::size_t mask = 0; mask < total; ++mask)
            if (mask >> b & 1) cnt[mask] += cnt[mask ^ (std::size_t{1} << b)];

    HullCheck res;
    int best_size = 1 << 30;
    Index best_excess = 0;
    std::size_t best_mask = 0;
    for (std::size_t mask = 0; mask < total; ++mask) {
        Index budget = 0;
        int size = 0;
        bool empty_seg = false;
        for (int k = 0; k < m; ++k) {
            int c = std::popcount(static_cast<std::uint32_t>((mask >> off[k]) & ((1u << (off[k + 1] - off[k])) - 1)));
            if (!c) empty_seg = true;
            size += c;
            budget += static_cast<Index>(c) * (rs.ranks()[k] + extra);
        }
        if (empty_seg && !allow_empty) continue;
        Index excess = cnt[mask] - budget;
        if (excess <= 0) continue;
        bool better = size < best_size || (size == best_size && excess > best_excess);
        if (better) {
            best_size = size;
            best_excess = excess;
            best_mask = mask;
            res.ok = false;
            res.count = cnt[mask];
            res.budget = budget;
        }
    }
    if (!res.ok) {
        HullSpec h;
        h.j = j;
        h.sets.resize(m);
        for (int k = 0; k < m; ++k)
            for (int v = 0; v < off[k + 1] - off[k]; ++v)
                if (best_mask >> (off[k] + v) & 1) h.sets[k].push_back(v + 1);
        res.witness = h;
    }
    return res;
}

void check_size(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& sel, SelectionMode mode) {
    if (sel.size() != selection_size(p.shape(), rs, mode))
        throw Error("selection has " + std::to_string(sel.size()) + " entries, expected " +
                    std::to_string(selection_size(p.shape(), rs, mode)));
}

struct Slot {
    int mode, value;
};

// capacitated bipartite matching of items (observed entries) to (mode, value) slots
std::optional<TSelection> charge_match(const Shape& s, const RankSpec& rs, int extra, std::vector<Coord> items,
                                       Rng& rng) {
    const int j = rs.j(), d = s.order();
    std::vector<Slot> slots;
    std::vector<int> cap;
    std::map<std::pair<int, int>, int> slot_of;
    for (int i = j + 1; i <= d; ++i)
        for (int v = 1; v <= s.dim(i); ++v) {
            slot_of[{i, v}] = static_cast<int>(slots.size());
            slots.push_back({i, v});
            cap.push_back(rs.rank(i) + extra);
        }
    const std::size_t need = std::accumulate(cap.begin(), cap.end(), std::size_t{0});
    if (items.size() < need) return std::nullopt;

    rng.shuffle(items);
    const int ni = static_cast<int>(items.size()), ns = static_cast<int>(slots.size());
    std::vector<std::vector<int>> adj(ni);
    for (int a = 0; a < ni; ++a) {
        for (int i = j + 1; i <= d; ++i) adj[a].push_back(slot_of[{i, items[a][i - 1]}]);
        rng.shuffle(adj[a]);
    }
    std::vector<int> item_slot(ni, -1);
    std::vector<std::vector<int>> holders(ns);
    std::vector<int> seen(ns, -1);
    int stamp = 0;

    // augment from item a; a slot with spare capacity ends the path
    auto augment = [&](auto&& self, int a) -> bool {
        for (int sl : adj[a]) {
            if (seen[sl] == stamp) continue;
            seen[sl] = stamp;
            if (static_cast<int>(holders[sl].size()) < cap[sl]) {
                holders[sl].push_back(a);
                item_slot[a] = sl;
                return true;
            }
            for (auto& h : holders[sl]) {
                if (self(self, h)) {
                    // h moved elsewhere; a takes its place
                    h = a;
                    item_slot[a] = sl;
                    return true;
                }
            }
        }
        return false;
    };

    std::size_t matched = 0;
    for (int a = 0; a < ni && matched < need; ++a) {
        ++stamp;
        if (augment(augment, a)) ++matched;
    }
    if (matched < need) return std::nullopt;

    std::vector<std::pair<Coord, std::pair<int, int>>> chosen;
    for (int a = 0; a < ni; ++a)
        if (item_slot[a] >= 0) chosen.push_back({items[a], {slots[item_slot[a]].mode, slots[item_slot[a]].value}});
    std::sort(chosen.begin(), chosen.end());
    TSelection sel;
    for (auto& [x, c] : chosen) {
        sel.entries.push_back(x);
        sel.charge.push_back(c);
    }
    std::vector<Index> cols;
    for (auto& x : sel.entries) cols.push_back(tail_col(s, j, x));
    std::sort(cols.begin(), cols.end());
    sel.one_per_column = std::adjacent_find(cols.begin(), cols.end()) == cols.end();
    return sel;
}

int extra_of(SelectionMode mode) { return mode == SelectionMode::APlus ? 1 : 0; }

}  // namespace

HullCheck check_Aj(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection) {
    check_size(p, rs, selection, SelectionMode::A);
    return check_boxes(p, rs, selection, 0, false);
}

HullCheck check_Aj_plus(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& selection) {
    check_size(p, rs, selection, SelectionMode::APlus);
    return check_boxes(p, rs, selection, 1, true);
}

TSelection select_T_entries(const SamplingPattern& p, const RankSpec& rs, SelectionMode mode, std::uint64_t seed,
                            const std::vector<Coord>* hint) {
    const Shape& s = p.shape();
    rs.check_against(s);
    const int j = rs.j();
    if (hint) {
        std::vector<Coord> h = *hint;
        std::sort(h.begin(), h.end());
        auto chk = mode == SelectionMode::A ? check_Aj(p, rs, h) : check_Aj_plus(p, rs, h);
        if (!chk.ok) throw AssumptionError("hinted selection violates the assumption");
        TSelection sel;
        sel.entries = h;
        return sel;
    }
    const std::size_t need = selection_size(s, rs, mode);
    if (static_cast<Index>(need) >= s.tail(j))
        throw AssumptionError("spread selection needs sum n_i r_i < prod_{i>j} n_i");

    // one random representative per column of the unfolding
    std::map<Index, std::vector<Coord>> by_col;
    for (const auto& x : p.observed()) by_col[tail_col(s, j, x)].push_back(x);
    if (static_cast<Index>(by_col.size()) < s.tail(j))
        throw AssumptionError("spread selection needs every unfolding column observed");
    Rng rng(Rng::derive(seed, 0x5e1ec7, 0));
    std::vector<Coord> reps;
    for (auto& [c, xs] : by_col) reps.push_back(xs[rng.below(xs.size())]);
    auto sel = charge_match(s, rs, extra_of(mode), reps, rng);
    if (!sel) throw AssumptionError("spread selection not found");
    return *sel;
}

std::optional<TSelection> search_T_entries(const SamplingPattern& p, const RankSpec& rs, SelectionMode mode,
                                           std::uint64_t seed) {
    rs.check_against(p.shape());
    Rng rng(Rng::derive(seed, 0x5ea7c4, 0));
    return charge_match(p.shape(), rs, extra_of(mode), p.observed(), rng);
}

TSelection reduce_plus_selection(const RankSpec& rs, const TSelection& plus) {
    if (plus.charge.size() != plus.entries.size()) throw Error("reduce_plus_selection: selection carries no charges");
    std::map<std::pair<int, int>, int> used;
    TSelection out;
    for (std::size_t a = 0; a < plus.entries.size(); ++a) {
        auto c = plus.charge[a];
        if (used[c] >= rs.rank(c.first)) continue;
        ++used[c];
        out.entries.push_back(plus.entries[a]);
        out.charge.push_back(c);
    }
    out.one_per_column = plus.one_per_column;
    return out;
}

}  // namespace tuckercert
