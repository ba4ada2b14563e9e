#include "tuckercert/hall.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <json.hpp>

namespace tuckercert {

void BipartiteGraph::add_edge(int v, int u) {
    if (v < 1 || v > n1 || u < 1 || u > n2) throw Error("edge endpoint out of range");
    auto& a = adj[v - 1];
    auto it = std::lower_bound(a.begin(), a.end(), u);
    if (it == a.end() || *it != u) a.insert(it, u);
}

bool BipartiteGraph::has_edge(int v, int u) const {
    const auto& a = adj[v - 1];
    return std::binary_search(a.begin(), a.end(), u);
}

std::size_t BipartiteGraph::num_edges() const {
    std::size_t e = 0;
    for (const auto& a : adj) e += a.size();
    return e;
}

namespace {

// left nodes 0..L-1 with need[a] units each, right nodes are arbitrary ints.
// Returns true when every unit is matched; otherwise fills `reach` with the
// left nodes reachable by alternating paths from an unmatched unit.
struct UnitMatcher {
    const std::vector<std::vector<int>>& nb;
    std::map<int, int> owner;   // right -> left copy id
    std::vector<int> copy_left;
    std::map<int, int> seen;
    int stamp = 0;

    explicit UnitMatcher(const std::vector<std::vector<int>>& n) : nb(n) {}

    bool augment(int copy) {
        int a = copy_left[copy];
        for (int u : nb[a]) {
            auto& s = seen[u];
            if (s == stamp) continue;
            s = stamp;
            auto it = owner.find(u);
            if (it == owner.end() || augment(it->second)) {
                owner[u] = copy;
                return true;
            }
        }
        return false;
    }

    // one more unit for left node a; augments from the current matching
    bool add(int a, std::vector<int>* reach) {
        const int c = static_cast<int>(copy_left.size());
        copy_left.push_back(a);
        ++stamp;
        if (augment(c)) return true;
        if (reach) {
            // alternating BFS from the new unit
            std::vector<char> inS(nb.size(), 0);
            std::vector<int> queue{c};
            std::map<int, char> rseen;
            inS[a] = 1;
            for (std::size_t q = 0; q < queue.size(); ++q) {
                for (int u : nb[copy_left[queue[q]]]) {
                    if (rseen[u]) continue;
                    rseen[u] = 1;
                    auto it = owner.find(u);
                    if (it != owner.end()) {
                        queue.push_back(it->second);
                        inS[copy_left[it->second]] = 1;
                    }
                }
            }
            reach->clear();
            for (std::size_t b = 0; b < nb.size(); ++b)
                if (inS[b]) reach->push_back(static_cast<int>(b));
        }
        return false;
    }

    bool run(const std::vector<int>& need, std::vector<int>* reach) {
        copy_left.clear();
        owner.clear();
        for (std::size_t a = 0; a < need.size(); ++a)
            for (int k = 0; k < need[a]; ++k)
                if (!add(static_cast<int>(a), reach)) return false;
        return true;
    }
};

// |N(S)| >= |S| + r for every nonempty S; on failure `bad` gets a violating S (local ids)
bool surplus_ok(const std::vector<std::vector<int>>& nb, int r, std::vector<int>* bad = nullptr) {
    const int L = static_cast<int>(nb.size());
    UnitMatcher base(nb);
    if (!base.run(std::vector<int>(L, 1), bad)) return false;
    for (int v = 0; v < L; ++v) {
        UnitMatcher m = base;
        for (int k = 0; k < r; ++k)
            if (!m.add(v, bad)) return false;
    }
    return true;
}

std::vector<int> neighbourhood(const std::vector<std::vector<int>>& nb, const std::vector<int>& S) {
    std::vector<int> out;
    for (int a : S) out.insert(out.end(), nb[a].begin(), nb[a].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// smallest-cardinality, lexicographically smallest proper nonempty subset of {0..L-1} satisfying pred
bool find_tight(int L, const std::function<bool(const std::vector<int>&)>& pred, std::vector<int>& out) {
    if (L > kHallBruteGuard) throw GuardExceeded("tight-set search: |T1| exceeds guard");
    for (int k = 1; k < L; ++k) {
        std::vector<int> S(k);
        for (int a = 0; a < k; ++a) S[a] = a;
        for (;;) {
            if (pred(S)) {
                out = S;
                return true;
            }
            int p = k - 1;
            while (p >= 0 && S[p] == L - k + p) --p;
            if (p < 0) break;
            ++S[p];
            for (int q = p + 1; q < k; ++q) S[q] = S[q - 1] + 1;
        }
    }
    return false;
}

using EdgeMap = std::map<int, std::vector<int>>;   // T1 node -> chosen T2 neighbours

struct Builder {
    const BipartiteGraph& g;
    int r;
    HallStats* stats;

    std::vector<int> nbrs(int v, const std::vector<char>& allowed) const {
        std::vector<int> out;
        for (int u : g.adj[v - 1])
            if (allowed[u]) out.push_back(u);
        return out;
    }

    std::vector<std::vector<int>> local(const std::vector<int>& L, const EdgeMap& e) const {
        std::vector<std::vector<int>> nb;
        for (int v : L) nb.push_back(e.at(v));
        return nb;
    }

    bool saturates(const std::vector<int>& L, const EdgeMap& e, const std::vector<char>& inS0) const {
        std::vector<std::vector<int>> nb;
        for (int v : L) {
            std::vector<int> a;
            for (int u : e.at(v))
                if (inS0[u]) a.push_back(u);
            nb.push_back(a);
        }
        UnitMatcher m(nb);
        return m.run(std::vector<int>(L.size(), 1), nullptr);
    }

    // edge deletion down to degree r+1; edges in `keep` are never removed
    EdgeMap repair(const std::vector<int>& L, const std::vector<char>& allowed, const EdgeMap& keep) {
        if (stats) ++stats->repairs;
        EdgeMap e;
        for (int v : L) e[v] = nbrs(v, allowed);
        for (int v : L) {
            auto cand = e[v];
            for (auto it = cand.rbegin(); it != cand.rend(); ++it) {
                if (static_cast<int>(e[v].size()) <= r + 1) break;
                int u = *it;
                auto k = keep.find(v);
                if (k != keep.end() && std::find(k->second.begin(), k->second.end(), u) != k->second.end()) continue;
                auto saved = e[v];
                e[v].erase(std::find(e[v].begin(), e[v].end(), u));
                if (!surplus_ok(local(L, e), r)) e[v] = saved;
            }
        }
        for (int v : L)
            if (static_cast<int>(e[v].size()) != r + 1) throw Error("generalized Hall repair did not reach degree r+1");
        return e;
    }

    EdgeMap hall(const std::vector<int>& L, const std::vector<char>& allowed) {
        if (L.size() == 1) {
            auto nb = nbrs(L[0], allowed);
            if (static_cast<int>(nb.size()) < r + 1) throw Error("generalized Hall: node with fewer than r+1 neighbours");
            nb.resize(r + 1);
            return {{L[0], nb}};
        }
        std::vector<std::vector<int>> nb;
        for (int v : L) nb.push_back(nbrs(v, allowed));
        std::vector<int> S1;
        bool tight = find_tight(static_cast<int>(L.size()), [&](const std::vector<int>& S) {
            return static_cast<int>(neighbourhood(nb, S).size()) == static_cast<int>(S.size()) + r;
        }, S1);
        EdgeMap out;
        if (tight) {
            if (stats) ++stats->scenario1;
            std::vector<int> A1, A2;
            std::vector<char> inS1(L.size(), 0);
            for (int a : S1) inS1[a] = 1;
            for (std::size_t a = 0; a < L.size(); ++a) (inS1[a] ? A1 : A2).push_back(L[a]);
            auto NS1 = neighbourhood(nb, S1);
            std::vector<char> al1(allowed.size(), 0), s0(allowed.size(), 0);
            for (int u : NS1) al1[u] = 1;
            for (std::size_t u = 0; u < allowed.size(); ++u) s0[u] = allowed[u] && !al1[u];
            auto e1 = hall(A1, al1);
            auto e2 = match(A2, allowed, s0);
            out = e1;
            out.insert(e2.begin(), e2.end());
            if (!surplus_ok(local(L, out), r)) out = repair(L, allowed, {});
            return out;
        }
        if (stats) ++stats->scenario2;
        std::vector<int> rest(L.begin() + 1, L.end());
        out = hall(rest, allowed);
        const int v1 = L[0];
        auto cand = nbrs(v1, allowed);
        if (static_cast<int>(cand.size()) < r + 1) throw Error("generalized Hall: node with fewer than r+1 neighbours");
        if (choose_edges(L, out, v1, cand, -1)) return out;
        return repair(L, allowed, {});
    }

    // try (r+1)-subsets of cand in lexicographic order; `forced` must be included when >= 0
    bool choose_edges(const std::vector<int>& L, EdgeMap& e, int v, const std::vector<int>& cand, int forced,
                      const std::vector<char>* inS0 = nullptr) {
        const int n = static_cast<int>(cand.size()), k = r + 1;
        if (n < k) return false;
        std::vector<int> idx(k);
        for (int a = 0; a < k; ++a) idx[a] = a;
        bool first = true;
        for (;;) {
            std::vector<int> pick;
            for (int a : idx) pick.push_back(cand[a]);
            bool has_forced = forced < 0 || std::find(pick.begin(), pick.end(), forced) != pick.end();
            if (has_forced) {
                e[v] = pick;
                if (surplus_ok(local(L, e), r) && (!inS0 || saturates(L, e, *inS0))) {
                    if (!first && stats) ++stats->alternative_edges;
                    return true;
                }
                first = false;
            }
            int p = k - 1;
            while (p >= 0 && idx[p] == n - k + p) --p;
            if (p < 0) break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
        e.erase(v);
        return false;
    }

    EdgeMap match_repair(const std::vector<int>& L, const std::vector<char>& allowed, const std::vector<char>& inS0) {
        // fix one saturating matching into S0, then delete other edges
        std::vector<std::vector<int>> nb;
        for (int v : L) {
            std::vector<int> a;
            for (int u : nbrs(v, allowed))
                if (inS0[u]) a.push_back(u);
            nb.push_back(a);
        }
        UnitMatcher m(nb);
        if (!m.run(std::vector<int>(L.size(), 1), nullptr)) throw Error("lemma match: no matching into S0");
        EdgeMap keep;
        for (auto& [u, copy] : m.owner) keep[L[m.copy_left[copy]]].push_back(u);
        return repair(L, allowed, keep);
    }

    EdgeMap match(const std::vector<int>& L, const std::vector<char>& allowed, const std::vector<char>& inS0) {
        if (L.empty()) return {};
        if (L.size() == 1) {
            int v = L[0];
            auto cand = nbrs(v, allowed);
            int u0 = -1;
            for (int u : cand)
                if (inS0[u]) {
                    u0 = u;
                    break;
                }
            if (u0 < 0) throw Error("lemma match: node without a neighbour in S0");
            std::vector<int> pick{u0};
            for (int u : cand)
                if (u != u0 && static_cast<int>(pick.size()) < r + 1) pick.push_back(u);
            if (static_cast<int>(pick.size()) < r + 1) throw Error("lemma match: node with fewer than r+1 neighbours");
            std::sort(pick.begin(), pick.end());
            return {{v, pick}};
        }
        std::vector<std::vector<int>> nb, nb0;
        for (int v : L) {
            nb.push_back(nbrs(v, allowed));
            std::vector<int> a;
            for (int u : nb.back())
                if (inS0[u]) a.push_back(u);
            nb0.push_back(a);
        }
        std::vector<int> S1;
        bool tight = find_tight(static_cast<int>(L.size()), [&](const std::vector<int>& S) {
            return neighbourhood(nb0, S).size() == S.size();
        }, S1);
        EdgeMap out;
        if (tight) {
            if (stats) ++stats->scenario1;
            std::vector<int> A1, A2;
            std::vector<char> inS1(L.size(), 0);
            for (int a : S1) inS1[a] = 1;
            for (std::size_t a = 0; a < L.size(); ++a) (inS1[a] ? A1 : A2).push_back(L[a]);
            auto N0 = neighbourhood(nb0, S1);
            std::vector<char> s0a(inS0.size(), 0), s0b = inS0;
            for (int u : N0) {
                s0a[u] = 1;
                s0b[u] = 0;
            }
            out = match(A1, allowed, s0a);
            auto e2 = match(A2, allowed, s0b);
            out.insert(e2.begin(), e2.end());
            if (!surplus_ok(local(L, out), r) || !saturates(L, out, inS0)) out = match_repair(L, allowed, inS0);
            return out;
        }
        if (stats) ++stats->scenario2;
        const int v0 = L[0];
        std::vector<int> rest(L.begin() + 1, L.end());
        auto cand = nbrs(v0, allowed);
        if (nb0[0].empty()) throw Error("lemma match: node without a neighbour in S0");
        const int u0 = nb0[0].front();
        std::vector<char> s0 = inS0;
        s0[u0] = 0;
        out = match(rest, allowed, s0);
        if (choose_edges(L, out, v0, cand, u0, &inS0)) return out;
        return match_repair(L, allowed, inS0);
    }
};

BipartiteGraph to_graph(const BipartiteGraph& g, const std::map<int, std::vector<int>>& e) {
    BipartiteGraph out(g.n1, g.n2);
    for (auto& [v, us] : e)
        for (int u : us) out.add_edge(v, u);
    return out;
}

std::vector<std::vector<int>> global_nb(const BipartiteGraph& g) { return g.adj; }

}  // namespace

Matching max_matching(const BipartiteGraph& g) {
    UnitMatcher m(g.adj);
    std::vector<int> need(g.n1, 1);
    m.copy_left.clear();
    for (int a = 0; a < g.n1; ++a) m.copy_left.push_back(a);
    for (int a = 0; a < g.n1; ++a) {
        ++m.stamp;
        m.augment(a);
    }
    Matching res;
    for (auto& [u, copy] : m.owner) res.pairs.push_back({m.copy_left[copy] + 1, u});
    std::sort(res.pairs.begin(), res.pairs.end());
    res.size = static_cast<int>(res.pairs.size());
    return res;
}

Defect expansion_defect(const BipartiteGraph& g) {
    if (g.n1 < 1) throw Error("expansion_defect: empty T1");
    if (g.n1 > kHallBruteGuard) throw GuardExceeded("expansion_defect: |T1| exceeds guard");
    const int words = (g.n2 + 64) / 64;
    std::vector<std::vector<std::uint64_t>> nm(g.n1, std::vector<std::uint64_t>(words, 0));
    for (int v = 0; v < g.n1; ++v)
        for (int u : g.adj[v]) nm[v][u / 64] |= std::uint64_t{1} << (u % 64);
    Defect best;
    best.value = 1 << 30;
    std::vector<int> S;
    std::vector<std::uint64_t> acc(words, 0);
    std::function<void(int, const std::vector<std::uint64_t>&)> rec = [&](int next, const std::vector<std::uint64_t>& cur) {
        for (int v = next; v < g.n1; ++v) {
            std::vector<std::uint64_t> nxt(words);
            int pc = 0;
            for (int w = 0; w < words; ++w) {
                nxt[w] = cur[w] | nm[v][w];
                pc += __builtin_popcountll(nxt[w]);
            }
            S.push_back(v + 1);
            int val = pc - static_cast<int>(S.size());
            bool better = val < best.value || (val == best.value && (S.size() < best.witness.size() ||
                                                                      (S.size() == best.witness.size() && S < best.witness)));
            if (better) {
                best.value = val;
                best.witness = S;
            }
            rec(v + 1, nxt);
            S.pop_back();
        }
    };
    rec(0, acc);
    return best;
}

Defect expansion_defect_fast(const BipartiteGraph& g) {
    if (g.n1 < 1) throw Error("expansion_defect: empty T1");
    auto nb = global_nb(g);
    Defect res;
    std::vector<int> bad;
    UnitMatcher m(nb);
    if (!m.run(std::vector<int>(g.n1, 1), &bad)) {
        res.value = max_matching(g).size - g.n1;
        // König: all unmatched left nodes and what they reach
        UnitMatcher mm(nb);
        mm.copy_left.clear();
        for (int a = 0; a < g.n1; ++a) mm.copy_left.push_back(a);
        std::vector<char> matched(g.n1, 0);
        for (int a = 0; a < g.n1; ++a) {
            ++mm.stamp;
            matched[a] = mm.augment(a);
        }
        std::vector<char> inS(g.n1, 0);
        std::vector<int> queue;
        for (int a = 0; a < g.n1; ++a)
            if (!matched[a]) {
                inS[a] = 1;
                queue.push_back(a);
            }
        std::map<int, char> rseen;
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (int u : nb[queue[q]]) {
                if (rseen[u]) continue;
                rseen[u] = 1;
                auto it = mm.owner.find(u);
                if (it != mm.owner.end() && !inS[it->second]) {
                    inS[it->second] = 1;
                    queue.push_back(it->second);
                }
            }
        for (int a = 0; a < g.n1; ++a)
            if (inS[a]) res.witness.push_back(a + 1);
        return res;
    }
    int r = 0;
    for (;; ++r) {
        bad.clear();
        if (!surplus_ok(nb, r + 1, &bad)) break;
    }
    res.value = r;
    for (int a : bad) res.witness.push_back(a + 1);
    return res;
}

bool has_surplus(const BipartiteGraph& g, int r) { return surplus_ok(g.adj, r); }

BipartiteGraph generalized_hall_subgraph(const BipartiteGraph& g, int r, HallStats* stats) {
    if (r < 0) throw Error("generalized Hall: negative r");
    if (g.n1 == 0) return BipartiteGraph(0, g.n2);
    std::vector<int> bad;
    if (!surplus_ok(g.adj, r, &bad)) {
        std::string w;
        for (int a : bad) w += " " + std::to_string(a + 1);
        throw AssumptionError("generalized Hall precondition fails; witness T1 set:" + w);
    }
    Builder b{g, r, stats};
    std::vector<int> L(g.n1);
    for (int v = 0; v < g.n1; ++v) L[v] = v + 1;
    std::vector<char> allowed(g.n2 + 1, 1);
    allowed[0] = 0;
    return to_graph(g, b.hall(L, allowed));
}

BipartiteGraph lemma_match_subgraph(const BipartiteGraph& g, int r, const std::vector<int>& S0, HallStats* stats) {
    if (static_cast<int>(S0.size()) != g.n1) throw Error("lemma match: |S0| must equal |T1|");
    std::vector<int> bad;
    if (!surplus_ok(g.adj, r, &bad)) throw AssumptionError("lemma match: surplus precondition fails");
    std::vector<char> inS0(g.n2 + 1, 0);
    for (int u : S0) {
        if (u < 1 || u > g.n2) throw Error("lemma match: S0 node out of range");
        inS0[u] = 1;
    }
    std::vector<std::vector<int>> nb0;
    for (int v = 0; v < g.n1; ++v) {
        std::vector<int> a;
        for (int u : g.adj[v])
            if (inS0[u]) a.push_back(u);
        nb0.push_back(a);
    }
    if (!surplus_ok(nb0, 0, &bad)) throw AssumptionError("lemma match: Hall condition into S0 fails");
    Builder b{g, r, stats};
    std::vector<int> L(g.n1);
    for (int v = 0; v < g.n1; ++v) L[v] = v + 1;
    std::vector<char> allowed(g.n2 + 1, 1);
    allowed[0] = 0;
    return to_graph(g, b.match(L, allowed, inS0));
}

std::vector<std::vector<int>> lemma_omega_transform(int n_rows, const std::vector<std::vector<int>>& cols, int r,
                                                    HallStats* stats) {
    BipartiteGraph g(static_cast<int>(cols.size()), n_rows);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (static_cast<int>(cols[c].size()) < r + 1) throw AssumptionError("column " + std::to_string(c + 1) + " has fewer than r+1 ones");
        for (int x : cols[c]) g.add_edge(static_cast<int>(c) + 1, x);
    }
    auto h = generalized_hall_subgraph(g, r, stats);
    return h.adj;
}

std::string graph_json(const BipartiteGraph& g) {
    nlohmann::json j;
    j["sizeT1"] = g.n1;
    j["sizeT2"] = g.n2;
    j["adj"] = g.adj;
    return j.dump();
}

}  // namespace tuckercert
