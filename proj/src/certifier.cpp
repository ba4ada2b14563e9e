#include "tuckercert/certifier.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <type_traits>

#include <json.hpp>

namespace tuckercert {

using Mask = std::uint64_t;

Index thm3_upper_bound(const ConstraintMatrix& cm, const std::vector<int>& subset, const RankSpec& rs) {
    return f_fn(rs, m_count(cm, subset));
}

const char* to_string(FiniteVerdict v) {
    switch (v) {
        case FiniteVerdict::Finite: return "finite";
        case FiniteVerdict::NotFinite: return "not-finite";
        default: return "undecided";
    }
}

const char* to_string(UniqueVerdict v) {
    switch (v) {
        case UniqueVerdict::Unique: return "unique";
        case UniqueVerdict::NotCertified: return "not-certified";
        default: return "undecided";
    }
}

Index unique_n0(const Shape& s, const RankSpec& rs) { return s.head(rs.j()) - rs.sum_sq() / rs.R(); }

namespace {

struct BudgetExhausted {};

Mask support_mask(const ConstraintColumn& c) {
    Mask m = 0;
    for (Index r : c.support) m |= Mask{1} << (r - 1);
    return m;
}

std::vector<Mask> column_masks(const ConstraintMatrix& cm) {
    if (cm.num_rows > 64) throw GuardExceeded("constraint has more than 64 rows");
    std::vector<Mask> out;
    for (const auto& c : cm.columns) out.push_back(support_mask(c));
    return out;
}

// rhs(t) of the subset inequality f(m) >= rhs(t)
using Rhs = std::function<Index(Index)>;

Rhs finite_rhs() {
    return [](Index t) { return t; };
}

Rhs unique_rhs(const RankSpec& rs, Index n0) {
    Index R = rs.R(), sq = rs.sum_sq();
    return [=](Index t) { return R * t - sq * std::max<Index>(0, t - n0 + 1); };
}

// incremental row-set scan: cnt[W] = #chosen columns with support inside W
class RowChecker {
public:
    RowChecker(int n_rows, const RankSpec& rs, const Rhs& rhs, Index t_max)
        : n_(n_rows), full_(n_rows == 64 ? ~Mask{0} : (Mask{1} << n_rows) - 1), cnt_(std::size_t{1} << n_rows, 0) {
        // lim[w]: largest count c such that every t <= c has rhs(t) <= f(w)
        for (int w = 0; w <= n_rows; ++w) {
            Index f = f_fn(rs, w), c = 0;
            while (c < t_max && rhs(c + 1) <= f) ++c;
            lim_.push_back(c);
        }
    }
    bool can_add(Mask s) const {
        for (Mask W = s;; W = (W + 1) | s) {
            if (cnt_[W] + 1 > lim_[std::popcount(W)]) return false;
            if (W == full_) break;
        }
        return true;
    }
    Mask first_violation(Mask s) const {
        for (Mask W = s;; W = (W + 1) | s) {
            if (cnt_[W] + 1 > lim_[std::popcount(W)]) return W;
            if (W == full_) break;
        }
        return 0;
    }
    void add(Mask s, int delta) {
        for (Mask W = s;; W = (W + 1) | s) {
            cnt_[W] += delta;
            if (W == full_) break;
        }
    }

private:
    int n_;
    Mask full_;
    std::vector<std::int32_t> cnt_;
    std::vector<Index> lim_;
};

// incremental column-subset enumeration over the chosen columns
class ColumnChecker {
public:
    ColumnChecker(const RankSpec& rs, const Rhs& rhs, int n_rows, int max_chosen) : rhs_(rhs) {
        for (int w = 0; w <= n_rows; ++w) f_.push_back(f_fn(rs, w));
        if (max_chosen > 20) throw GuardExceeded("column enumeration: witness size exceeds guard");
        ors_.push_back(0);
    }
    bool can_add(Mask s) const {
        for (std::size_t idx = 0; idx < ors_.size(); ++idx) {
            Index t = std::popcount(idx) + 1;
            if (f_[std::popcount(ors_[idx] | s)] < rhs_(t)) return false;
        }
        return true;
    }
    void add(Mask s, int delta) {
        if (delta > 0) {
            std::size_t k = ors_.size();
            for (std::size_t idx = 0; idx < k; ++idx) ors_.push_back(ors_[idx] | s);
        } else {
            ors_.resize(ors_.size() / 2);
        }
    }

private:
    Rhs rhs_;
    std::vector<Index> f_;
    std::vector<Mask> ors_;
};

struct Types {
    std::vector<Mask> mask;
    std::vector<std::vector<int>> cols;   // ascending column indices
};

// grouped by support, larger supports first
Types group_types(const std::vector<Mask>& masks, const std::vector<int>& allowed) {
    std::map<std::pair<int, Mask>, std::vector<int>> g;
    for (int c : allowed) g[{-std::popcount(masks[c]), masks[c]}].push_back(c);
    Types t;
    for (auto& [k, v] : g) {
        t.mask.push_back(k.second);
        t.cols.push_back(v);
    }
    return t;
}

template <class Checker>
struct TypeDfs {
    const Types& types;
    Checker& chk;
    Index need;
    std::uint64_t& nodes;
    std::uint64_t budget;
    std::vector<int> take;
    std::vector<int> avail;   // usable count per type
    std::vector<Index> suffix;
    std::function<bool()> on_found;

    void prepare() {
        take.assign(types.mask.size(), 0);
        suffix.assign(types.mask.size() + 1, 0);
        for (int t = static_cast<int>(types.mask.size()) - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + avail[t];
    }

    bool run(int t, Index size) {
        if (size == need) return on_found();
        if (t == static_cast<int>(types.mask.size()) || size + suffix[t] < need) return false;
        int k = 0;
        while (k < avail[t] && size + k < need) {
            if (++nodes > budget) throw BudgetExhausted{};
            if (!chk.can_add(types.mask[t])) break;
            chk.add(types.mask[t], 1);
            ++k;
        }
        bool found = false;
        for (; k >= 0; --k) {
            take[t] = k;
            if (run(t + 1, size + k)) {
                found = true;
                break;
            }
            if (k > 0) chk.add(types.mask[t], -1);
        }
        if (found) {
            // leave state as is; caller reads take[]
            return true;
        }
        take[t] = 0;
        return false;
    }
};

std::vector<int> pick_columns(const Types& types, const std::vector<int>& take, const std::vector<int>& skip_count) {
    std::vector<int> out;
    for (std::size_t t = 0; t < types.mask.size(); ++t)
        for (int k = 0; k < take[t]; ++k) out.push_back(types.cols[t][skip_count[t] + k]);
    std::sort(out.begin(), out.end());
    return out;
}

bool use_rows(const ConstraintMatrix& cm) { return cm.num_rows <= kRowScanGuard; }

// one tail mode with uniform supports: |S| <= r m - r^2 is a hypergraph (r, r^2)-sparsity count,
// matroidal since r^2 < r (r+1)
bool sparsity_applies(const ConstraintMatrix& cm, const RankSpec& rs) {
    if (rs.ranks().size() != 1) return false;
    const std::size_t s = static_cast<std::size_t>(rs.ranks()[0]) + 1;
    for (const auto& c : cm.columns)
        if (c.support.size() != s) return false;
    return true;
}

class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}
    void add(int a, int b, std::int64_t cap) {
        to_.push_back(b), cap_.push_back(cap), next_.push_back(head_[a]), head_[a] = static_cast<int>(to_.size()) - 1;
        to_.push_back(a), cap_.push_back(0), next_.push_back(head_[b]), head_[b] = static_cast<int>(to_.size()) - 1;
    }
    std::int64_t run(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
        }
        return flow;
    }
    // source side after run()
    bool reachable(int v) const { return level_[v] >= 0; }

private:
    std::vector<int> head_, to_, next_, level_, it_;
    std::vector<std::int64_t> cap_;
    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::vector<int> q{s};
        level_[s] = 0;
        for (std::size_t k = 0; k < q.size(); ++k)
            for (int e = head_[q[k]]; e >= 0; e = next_[e])
                if (cap_[e] > 0 && level_[to_[e]] < 0) {
                    level_[to_[e]] = level_[q[k]] + 1;
                    q.push_back(to_[e]);
                }
        return level_[t] >= 0;
    }
    std::int64_t dfs(int v, int t, std::int64_t f) {
        if (v == t) return f;
        for (int& e = it_[v]; e >= 0; e = next_[e])
            if (cap_[e] > 0 && level_[to_[e]] == level_[v] + 1)
                if (std::int64_t g = dfs(to_[e], t, std::min(f, cap_[e]))) {
                    cap_[e] -= g, cap_[e ^ 1] += g;
                    return g;
                }
        return 0;
    }
};

// max over row sets W containing supp(forced) of #(set columns inside W) - r|W|; forced must be in set
std::pair<Index, std::vector<int>> densest_closure(const ConstraintMatrix& cm, const std::vector<int>& set, int forced,
                                                   Index r) {
    const int K = static_cast<int>(set.size()), N = static_cast<int>(cm.num_rows);
    const int src = K + N, snk = K + N + 1;
    const std::int64_t big = std::int64_t{1} << 40;
    MaxFlow mf(K + N + 2);
    std::int64_t profit = 0;
    for (int a = 0; a < K; ++a) {
        const std::int64_t w = set[a] == forced ? big : 1;
        profit += w;
        mf.add(src, a, w);
        for (Index row : cm.columns[set[a]].support) mf.add(a, K + static_cast<int>(row) - 1, big);
    }
    for (int row = 0; row < N; ++row) mf.add(K + row, snk, r);
    const std::int64_t best = profit - mf.run(src, snk) - big + 1;
    std::vector<int> cols;
    for (int a = 0; a < K; ++a)
        if (mf.reachable(a)) cols.push_back(set[a]);
    std::sort(cols.begin(), cols.end());
    return {static_cast<Index>(best), cols};
}

SubsetCheck sparsity_check(const ConstraintMatrix& cm, const std::vector<int>& column_set, const RankSpec& rs) {
    const Index r = rs.ranks()[0];
    SubsetCheck res;
    for (int c : column_set) {
        auto [v, cols] = densest_closure(cm, column_set, c, r);
        if (v > -r * r) {
            res.holds = false;
            res.violating = cols;
            return res;
        }
    }
    return res;
}

}  // namespace

SubsetCheck subset_condition_holds(const ConstraintMatrix& cm, const std::vector<int>& column_set, const RankSpec& rs,
                                   SubsetMethod method) {
    SubsetCheck res;
    if (column_set.empty()) return res;
    if (method == SubsetMethod::Auto && sparsity_applies(cm, rs)) method = SubsetMethod::Sparsity;
    if (method == SubsetMethod::Sparsity) {
        if (!sparsity_applies(cm, rs)) throw Error("sparsity check needs one tail mode and supports of size r+1");
        return sparsity_check(cm, column_set, rs);
    }
    auto masks = column_masks(cm);
    if (method == SubsetMethod::Auto)
        method = static_cast<int>(column_set.size()) <= kColumnEnumGuard ? SubsetMethod::Columns
                 : cm.num_rows <= kRowScanGuard                       ? SubsetMethod::Rows
                                                                      : SubsetMethod::Auto;
    if (method == SubsetMethod::Auto) throw GuardExceeded("subset condition: both size guards exceeded");
    if (method == SubsetMethod::Columns) {
        if (static_cast<int>(column_set.size()) > kColumnEnumGuard) throw GuardExceeded("column enumeration guard");
        const std::size_t K = column_set.size(), total = std::size_t{1} << K;
        std::vector<Mask> ors(total, 0);
        for (std::size_t X = 1; X < total; ++X) {
            std::size_t low = std::countr_zero(X);
            ors[X] = ors[X & (X - 1)] | masks[column_set[low]];
            Index t = std::popcount(X);
            if (f_fn(rs, std::popcount(ors[X])) < t) {
                res.holds = false;
                for (std::size_t b = 0; b < K; ++b)
                    if (X >> b & 1) res.violating.push_back(column_set[b]);
                return res;
            }
        }
        return res;
    }
    if (cm.num_rows > kRowScanGuard) throw GuardExceeded("row scan guard");
    const int N = static_cast<int>(cm.num_rows);
    const std::size_t total = std::size_t{1} << N;
    std::vector<std::int32_t> cnt(total, 0);
    for (int c : column_set) ++cnt[masks[c]];
    for (int b = 0; b < N; ++b)
        for (std::size_t W = 0; W < total; ++W)
            if (W >> b & 1) cnt[W] += cnt[W ^ (std::size_t{1} << b)];
    for (std::size_t W = 0; W < total; ++W) {
        if (cnt[W] > f_fn(rs, std::popcount(W))) {
            res.holds = false;
            for (int c : column_set)
                if ((masks[c] & ~W) == 0) res.violating.push_back(c);
            return res;
        }
    }
    return res;
}

bool thm4_dependent(const ConstraintMatrix& cm, const RankSpec& rs) {
    std::vector<int> all(cm.size());
    std::iota(all.begin(), all.end(), 0);
    return !subset_condition_holds(cm, all, rs).holds;
}

SubsetCheck unique_subset_condition_holds(const ConstraintMatrix& cm, const std::vector<int>& column_set,
                                          const RankSpec& rs, Index n0) {
    auto masks = column_masks(cm);
    if (static_cast<int>(column_set.size()) > kColumnEnumGuard) throw GuardExceeded("column enumeration guard");
    auto rhs = unique_rhs(rs, n0);
    SubsetCheck res;
    const std::size_t K = column_set.size(), total = std::size_t{1} << K;
    std::vector<Mask> ors(total, 0);
    for (std::size_t X = 1; X < total; ++X) {
        ors[X] = ors[X & (X - 1)] | masks[column_set[std::countr_zero(X)]];
        if (f_fn(rs, std::popcount(ors[X])) < rhs(std::popcount(X))) {
            res.holds = false;
            for (std::size_t b = 0; b < K; ++b)
                if (X >> b & 1) res.violating.push_back(column_set[b]);
            return res;
        }
    }
    return res;
}

bool verify_finite_witness(const ConstraintMatrix& cm, const RankSpec& rs, const std::vector<int>& witness, Index n) {
    if (static_cast<Index>(witness.size()) != n) return false;
    std::vector<int> w = witness;
    std::sort(w.begin(), w.end());
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) return false;
    for (int c : w)
        if (c < 0 || c >= static_cast<int>(cm.size())) return false;
    return subset_condition_holds(cm, w, rs).holds;
}

FiniteCertificate search_finite_witness(const ConstraintMatrix& cm, const RankSpec& rs, Index n,
                                        std::uint64_t node_budget) {
    FiniteCertificate cert;
    cert.n = n;
    cert.num_columns = static_cast<Index>(cm.size());
    auto& tr = cert.transcript;
    if (n == 0) {
        cert.verdict = FiniteVerdict::Finite;
        tr.search_method = "trivial";
        return cert;
    }
    if (static_cast<Index>(cm.size()) < n) {
        cert.verdict = FiniteVerdict::NotFinite;
        tr.search_method = "trivial";
        tr.note = "fewer constraint columns than n";
        return cert;
    }
    if (sparsity_applies(cm, rs)) {
        // greedy basis of the sparsity matroid; its size is the rank
        tr.search_method = "sparsity";
        const Index r = rs.ranks()[0];
        std::vector<int> basis;
        int rejected = -1;
        for (int c = 0; c < static_cast<int>(cm.size()) && static_cast<Index>(basis.size()) < n; ++c) {
            ++tr.nodes;
            basis.push_back(c);
            auto [v, cols] = densest_closure(cm, basis, c, r);
            if (v > -r * r) {
                basis.pop_back();
                if (rejected < 0) {
                    rejected = c;
                    cert.violating = cols;
                }
            }
        }
        if (static_cast<Index>(basis.size()) == n) {
            cert.verdict = FiniteVerdict::Finite;
            cert.witness = basis;
            cert.violating.clear();
            tr.note = "greedy";
        } else {
            cert.verdict = FiniteVerdict::NotFinite;
            tr.note = "matroid rank " + std::to_string(basis.size()) + " < n";
        }
        return cert;
    }
    std::vector<Mask> masks;
    try {
        masks = column_masks(cm);
    } catch (const GuardExceeded& e) {
        cert.verdict = FiniteVerdict::Undecided;
        tr.note = e.what();
        return cert;
    }
    std::vector<int> all(cm.size());
    std::iota(all.begin(), all.end(), 0);
    Types types = group_types(masks, all);

    auto go = [&](auto& chk) {
        // greedy pass
        std::vector<int> greedy;
        int rejected = -1;
        for (std::size_t t = 0; t < types.mask.size(); ++t)
            for (int c : types.cols[t]) {
                if (static_cast<Index>(greedy.size()) == n) break;
                ++tr.nodes;
                if (chk.can_add(types.mask[t])) {
                    chk.add(types.mask[t], 1);
                    greedy.push_back(c);
                } else if (rejected < 0) {
                    rejected = c;
                }
            }
        if (static_cast<Index>(greedy.size()) == n) {
            cert.verdict = FiniteVerdict::Finite;
            cert.witness = greedy;
            std::sort(cert.witness.begin(), cert.witness.end());
            tr.note = "greedy";
            return;
        }
        if constexpr (std::is_same_v<std::decay_t<decltype(chk)>, RowChecker>) {
            if (rejected >= 0) {
                Mask W = chk.first_violation(masks[rejected]);
                for (int c : greedy)
                    if ((masks[c] & ~W) == 0) cert.violating.push_back(c);
                cert.violating.push_back(rejected);
                std::sort(cert.violating.begin(), cert.violating.end());
            }
        } else {
            if (rejected >= 0) {
                auto cols = greedy;
                cols.push_back(rejected);
                std::sort(cols.begin(), cols.end());
                if (static_cast<int>(cols.size()) <= kColumnEnumGuard)
                    cert.violating = subset_condition_holds(cm, cols, rs, SubsetMethod::Columns).violating;
            }
        }
        for (auto it = greedy.rbegin(); it != greedy.rend(); ++it) chk.add(masks[*it], -1);

        TypeDfs<std::decay_t<decltype(chk)>> dfs{types, chk, n, tr.nodes, node_budget, {}, {}, {}, {}};
        for (auto& v : types.cols) dfs.avail.push_back(static_cast<int>(v.size()));
        dfs.on_found = [] { return true; };
        dfs.prepare();
        try {
            if (dfs.run(0, 0)) {
                cert.verdict = FiniteVerdict::Finite;
                cert.witness = pick_columns(types, dfs.take, std::vector<int>(types.mask.size(), 0));
                cert.violating.clear();
                tr.note = "exhaustive";
            } else {
                cert.verdict = FiniteVerdict::NotFinite;
                tr.note = "exhaustive search found no witness";
            }
        } catch (const BudgetExhausted&) {
            cert.verdict = FiniteVerdict::Undecided;
            tr.note = "node budget exhausted";
        }
    };

    if (use_rows(cm)) {
        tr.search_method = "rows";
        RowChecker chk(static_cast<int>(cm.num_rows), rs, finite_rhs(), n);
        go(chk);
    } else {
        tr.search_method = "columns";
        try {
            ColumnChecker chk(rs, finite_rhs(), static_cast<int>(cm.num_rows), static_cast<int>(n));
            go(chk);
        } catch (const GuardExceeded& e) {
            cert.verdict = FiniteVerdict::Undecided;
            tr.note = e.what();
        }
    }
    return cert;
}

namespace {

TSelection choose_selection(const SamplingPattern& p, const RankSpec& rs, SelectionMode mode, std::uint64_t seed,
                            const CertifyOptions& opt, Transcript& tr) {
    if (opt.hint) {
        tr.selection_method = "hint";
        return select_T_entries(p, rs, mode, seed, opt.hint);
    }
    try {
        auto sel = select_T_entries(p, rs, mode, seed);
        tr.selection_method = "spread";
        return sel;
    } catch (const AssumptionError&) {
    }
    auto sel = search_T_entries(p, rs, mode, seed);
    if (!sel)
        throw AssumptionError(mode == SelectionMode::A ? "Assumption A_j fails for every selection of observed entries"
                                                       : "Assumption A_j^+ fails for every selection of observed entries");
    tr.selection_method = "search";
    return *sel;
}

void verify_selection(const SamplingPattern& p, const RankSpec& rs, const std::vector<Coord>& sel, SelectionMode mode,
                      Transcript& tr) {
    try {
        auto chk = mode == SelectionMode::A ? check_Aj(p, rs, sel) : check_Aj_plus(p, rs, sel);
        tr.Aj_checked = true;
        tr.Aj_ok = chk.ok;
        if (!chk.ok) throw Error("internal: selected entries fail the hull check");
    } catch (const GuardExceeded&) {
        tr.Aj_checked = false;
        tr.Aj_ok = true;
    }
}

}  // namespace

FiniteCertificate certify_finite(const SamplingPattern& p, const RankSpec& rs, std::uint64_t seed,
                                 const CertifyOptions& opt) {
    rs.check_against(p.shape());
    Transcript tr;
    tr.Bj = check_Bj(p.shape(), rs);
    if (!tr.Bj) throw AssumptionError("Assumption B_j fails: N_j < sum of ranks");
    auto sel = choose_selection(p, rs, SelectionMode::A, seed, opt, tr);
    verify_selection(p, rs, sel.entries, SelectionMode::A, tr);
    tr.selection = sel.entries;
    auto cm = build_constraint(p, rs, sel.entries);
    auto cert = search_finite_witness(cm, rs, core_dim(p.shape(), rs), opt.node_budget);
    tr.search_method = cert.transcript.search_method;
    tr.nodes = cert.transcript.nodes;
    tr.note = cert.transcript.note;
    cert.transcript = tr;
    cert.constraint = std::move(cm);
    return cert;
}

UniqueCertificate certify_unique(const SamplingPattern& p, const RankSpec& rs, std::uint64_t seed,
                                 const CertifyOptions& opt) {
    rs.check_against(p.shape());
    UniqueCertificate uc;
    Transcript tr;
    tr.Bj = check_Bj(p.shape(), rs);
    if (!tr.Bj) throw AssumptionError("Assumption B_j fails: N_j < sum of ranks");
    auto plus = choose_selection(p, rs, SelectionMode::APlus, seed, opt, tr);
    verify_selection(p, rs, plus.entries, SelectionMode::APlus, tr);
    TSelection sel = plus.charge.empty() ? plus : reduce_plus_selection(rs, plus);
    if (plus.charge.empty()) {
        // hinted A_j^+ selection: find an A_j subset by matching inside it
        SamplingPattern sub(p.shape(), plus.entries);
        auto s2 = search_T_entries(sub, rs, SelectionMode::A, seed);
        if (!s2) throw AssumptionError("no A_j subset inside the A_j^+ selection");
        sel = *s2;
    }
    verify_selection(p, rs, sel.entries, SelectionMode::A, tr);
    tr.selection = sel.entries;

    auto cm = build_constraint(p, rs, sel.entries);
    const Index n = core_dim(p.shape(), rs), n0 = unique_n0(p.shape(), rs);
    uc.n0 = n0;
    FiniteCertificate& fc = uc.finite;
    fc.n = n;
    fc.num_columns = static_cast<Index>(cm.size());
    fc.transcript = tr;

    auto finish = [&](UniqueVerdict v, const std::string& note) {
        uc.verdict = v;
        fc.transcript.note = note;
        fc.constraint = cm;
    };

    if (static_cast<Index>(cm.size()) < n + n0) {
        // finiteness is still decided on its own
        auto f = search_finite_witness(cm, rs, n, opt.node_budget);
        fc.verdict = f.verdict;
        fc.witness = f.witness;
        fc.violating = f.violating;
        fc.transcript.search_method = f.transcript.search_method;
        fc.transcript.nodes = f.transcript.nodes;
        finish(f.verdict == FiniteVerdict::Undecided ? UniqueVerdict::Undecided : UniqueVerdict::NotCertified,
               "fewer constraint columns than n + n0");
        return uc;
    }
    if (!use_rows(cm)) {
        auto f = search_finite_witness(cm, rs, n, opt.node_budget);
        fc.verdict = f.verdict;
        fc.witness = f.witness;
        fc.transcript.search_method = f.transcript.search_method;
        fc.transcript.nodes = f.transcript.nodes;
        finish(f.verdict == FiniteVerdict::NotFinite ? UniqueVerdict::NotCertified : UniqueVerdict::Undecided,
               "unique search needs the row scan (rows exceed guard)");
        return uc;
    }

    auto masks = column_masks(cm);
    std::vector<int> all(cm.size());
    std::iota(all.begin(), all.end(), 0);
    Types types = group_types(masks, all);
    const int N = static_cast<int>(cm.num_rows);
    RowChecker chk(N, rs, finite_rhs(), n);
    RowChecker chk0(N, rs, unique_rhs(rs, n0), n0);
    std::uint64_t nodes = 0;
    fc.transcript.search_method = "rows";

    TypeDfs<RowChecker> outer{types, chk, n, nodes, opt.node_budget, {}, {}, {}, {}};
    TypeDfs<RowChecker> inner{types, chk0, n0, nodes, opt.node_budget, {}, {}, {}, {}};
    for (auto& v : types.cols) outer.avail.push_back(static_cast<int>(v.size()));
    outer.prepare();
    bool any_finite = false;
    std::vector<int> first_finite;
    inner.on_found = [] { return true; };
    outer.on_found = [&] {
        if (!any_finite) {
            any_finite = true;
            first_finite = outer.take;
        }
        inner.avail.clear();
        for (std::size_t t = 0; t < types.mask.size(); ++t)
            inner.avail.push_back(static_cast<int>(types.cols[t].size()) - outer.take[t]);
        inner.prepare();
        return inner.run(0, 0);
    };
    try {
        bool found = outer.run(0, 0);
        fc.transcript.nodes = nodes;
        if (found) {
            fc.verdict = FiniteVerdict::Finite;
            fc.witness = pick_columns(types, outer.take, std::vector<int>(types.mask.size(), 0));
            uc.witness0 = pick_columns(types, inner.take, outer.take);
            finish(UniqueVerdict::Unique, "exhaustive");
        } else {
            fc.verdict = any_finite ? FiniteVerdict::Finite : FiniteVerdict::NotFinite;
            if (any_finite) fc.witness = pick_columns(types, first_finite, std::vector<int>(types.mask.size(), 0));
            finish(UniqueVerdict::NotCertified, "exhaustive search found no disjoint pair of witnesses");
        }
    } catch (const BudgetExhausted&) {
        fc.transcript.nodes = nodes;
        fc.verdict = any_finite ? FiniteVerdict::Finite : FiniteVerdict::Undecided;
        if (any_finite) fc.witness = pick_columns(types, first_finite, std::vector<int>(types.mask.size(), 0));
        finish(UniqueVerdict::Undecided, "node budget exhausted");
    }
    return uc;
}

SubproResult subpro_consistency(const SamplingPattern& p, int j, const std::vector<int>& ranks_from_j,
                                std::uint64_t seed, const CertifyOptions& opt) {
    if (j < 2) throw Error("subpro: j must be at least 2");
    SubproResult res;
    RankSpec at_j(j, std::vector<int>(ranks_from_j.begin() + 1, ranks_from_j.end()));
    RankSpec at_jm1(j - 1, ranks_from_j);
    try {
        res.at_j = certify_finite(p, at_j, seed, opt).verdict;
    } catch (const AssumptionError& e) {
        res.vacuous = true;
        res.note = std::string("assumptions fail at j: ") + e.what();
        return res;
    }
    if (res.at_j != FiniteVerdict::Finite) {
        res.vacuous = true;
        res.note = "not certified finite at j";
        return res;
    }
    try {
        res.at_j_minus_1 = certify_finite(p, at_jm1, seed, opt).verdict;
    } catch (const AssumptionError& e) {
        res.vacuous = true;
        res.note = std::string("assumptions fail at j-1: ") + e.what();
        return res;
    }
    if (res.at_j_minus_1 == FiniteVerdict::Undecided) {
        res.vacuous = true;
        res.note = "undecided at j-1";
        return res;
    }
    res.holds = res.at_j_minus_1 == FiniteVerdict::Finite;
    return res;
}

namespace {

nlohmann::json one_based(const std::vector<int>& v) {
    auto j = nlohmann::json::array();
    for (int c : v) j.push_back(c + 1);
    return j;
}

nlohmann::json finite_json(const FiniteCertificate& c, const RankSpec& rs) {
    nlohmann::json j;
    j["verdict"] = to_string(c.verdict);
    j["j"] = rs.j();
    j["ranks"] = rs.ranks();
    j["n"] = c.n;
    j["numColumns"] = c.num_columns;
    j["witnessColumns"] = one_based(c.witness);
    j["violatingSubset"] = one_based(c.violating);
    const auto& t = c.transcript;
    j["assumptions"] = {{"B_j", t.Bj},
                        {"selectionMethod", t.selection_method},
                        {"A_j_checked", t.Aj_checked},
                        {"A_j_holds", t.Aj_ok},
                        {"selection", t.selection}};
    j["search"] = {{"method", t.search_method}, {"nodes", t.nodes}, {"note", t.note}};
    return j;
}

}  // namespace

std::string certificate_json(const FiniteCertificate& c, const RankSpec& rs) { return finite_json(c, rs).dump(2); }

std::string certificate_json(const UniqueCertificate& c, const RankSpec& rs) {
    nlohmann::json j;
    j["verdict"] = to_string(c.verdict);
    j["n0"] = c.n0;
    j["witnessColumns0"] = one_based(c.witness0);
    j["finite"] = finite_json(c.finite, rs);
    return j.dump(2);
}

}  // namespace tuckercert
