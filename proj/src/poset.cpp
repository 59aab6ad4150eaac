#include "tuffley/poset.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tuffley {

std::vector<int> Poset::coatoms() const {
    if (!bounded) throw std::invalid_argument("coatoms: poset is not bounded");
    return covers[top];
}

std::vector<int> Poset::rank_profile() const {
    int lo = 0, hi = 0;
    for (int i = 0; i < size(); ++i) {
        lo = std::min(lo, rank[i]);
        hi = std::max(hi, rank[i]);
    }
    std::vector<int> prof(hi - lo + 1, 0);
    for (int i = 0; i < size(); ++i) ++prof[rank[i] - lo];
    return prof;
}

namespace {

void set_threads(const ExecPolicy& exec) {
#ifdef _OPENMP
    if (exec.parallel && exec.threads > 0) omp_set_num_threads(exec.threads);
#else
    (void)exec;
#endif
}

}  // namespace

Poset build_tuffley(int n, const BuildOptions& opts) {
    if (n < 3) throw std::invalid_argument("build_tuffley: n must be >= 3");
    if (n > opts.caps.max_n) {
        throw ResourceError("build_tuffley: n exceeds max_n cap");
    }
    Deadline deadline(opts.caps.time_budget_seconds);
    set_threads(opts.exec);

    // code -> (rank, forest); cover pairs as (upper code, lower code).
    std::map<CanonicalCode, XForest> elems;
    std::set<std::pair<CanonicalCode, CanonicalCode>> cover_pairs;

    std::vector<std::pair<CanonicalCode, XForest>> frontier;
    for (XTree& t : enumerate_trivalent(n)) {
        XForest f = XForest::single_tree(n, std::move(t));
        CanonicalCode c = canonical_code(f);
        frontier.emplace_back(std::move(c), std::move(f));
    }
    if (opts.reverse_frontier) std::reverse(frontier.begin(), frontier.end());
    for (auto& [c, f] : frontier) elems.emplace(c, f);

    while (!frontier.empty()) {
        deadline.check("poset closure");
        const int fs = static_cast<int>(frontier.size());
        std::vector<std::vector<std::pair<CanonicalCode, XForest>>> results(fs);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.exec.parallel)
#endif
        for (int i = 0; i < fs; ++i) {
            auto lc = lower_covers(frontier[i].second);
            results[i].assign(std::make_move_iterator(lc.begin()),
                              std::make_move_iterator(lc.end()));
        }

        std::vector<std::pair<CanonicalCode, XForest>> next;
        for (int i = 0; i < fs; ++i) {
            for (auto& [code, forest] : results[i]) {
                cover_pairs.emplace(frontier[i].first, code);
                auto [it, inserted] = elems.emplace(code, std::move(forest));
                if (inserted) next.emplace_back(code, it->second);
            }
        }
        if (opts.reverse_frontier) std::reverse(next.begin(), next.end());
        frontier = std::move(next);
    }

    Poset p;
    p.n = n;
    std::vector<std::pair<std::pair<int, CanonicalCode>, const XForest*>> order;
    order.reserve(elems.size());
    for (const auto& [code, f] : elems) {
        order.push_back({{f.rank(), code}, &f});
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, fp] : order) {
        p.index_of.emplace(key.second, p.size());
        p.codes.push_back(key.second);
        p.forests.push_back(*fp);
        p.rank.push_back(key.first);
    }
    p.covers.assign(p.size(), {});
    p.covered_by.assign(p.size(), {});
    for (const auto& [upper, lower] : cover_pairs) {
        const int ui = p.index_of.at(upper);
        const int li = p.index_of.at(lower);
        p.covers[ui].push_back(li);
        p.covered_by[li].push_back(ui);
    }
    for (auto& v : p.covers) std::sort(v.begin(), v.end());
    for (auto& v : p.covered_by) std::sort(v.begin(), v.end());
    return p;
}

void finalize_relations(Poset& p, bool with_downsets, const ExecPolicy& exec) {
    p.covered_by.assign(p.size(), {});
    for (int i = 0; i < p.size(); ++i) {
        for (int j : p.covers[i]) p.covered_by[j].push_back(i);
    }
    for (auto& v : p.covered_by) std::sort(v.begin(), v.end());
    if (!with_downsets) {
        p.downset.clear();
        return;
    }
    set_threads(exec);

    // One ascending pass per rank level sees all covered elements already
    // finished; levels are gathered explicitly since loaded posets need not
    // be rank-sorted.
    p.downset.assign(p.size(), DynBitset(p.size()));
    std::map<int, std::vector<int>> levels;
    for (int i = 0; i < p.size(); ++i) levels[p.rank[i]].push_back(i);
    for (auto& [r, level] : levels) {
        const int ls = static_cast<int>(level.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec.parallel)
#endif
        for (int k = 0; k < ls; ++k) {
            const int i = level[k];
            p.downset[i].set(i);
            for (int j : p.covers[i]) p.downset[i] |= p.downset[j];
        }
    }
}

Poset augment(const Poset& p, const ExecPolicy& exec) {
    if (p.bounded) throw std::invalid_argument("augment: already bounded");
    Poset q;
    q.n = p.n;
    q.bounded = true;

    q.codes.push_back(std::string("\x00bottom", 7));
    q.forests.emplace_back();
    q.rank.push_back(-1);
    for (int i = 0; i < p.size(); ++i) {
        q.codes.push_back(p.codes[i]);
        q.forests.push_back(p.forests[i]);
        q.rank.push_back(p.rank[i]);
    }
    q.codes.push_back(std::string("\x01top", 4));
    q.forests.emplace_back();
    q.rank.push_back(2 * p.n - 2);
    q.bottom = 0;
    q.top = q.size() - 1;
    for (int i = 0; i < q.size(); ++i) q.index_of.emplace(q.codes[i], i);

    q.covers.assign(q.size(), {});
    for (int i = 0; i < p.size(); ++i) {
        for (int j : p.covers[i]) q.covers[i + 1].push_back(j + 1);
        if (p.rank[i] == 0) q.covers[i + 1].push_back(q.bottom);
        if (p.covered_by[i].empty()) q.covers[q.top].push_back(i + 1);
    }
    for (auto& v : q.covers) std::sort(v.begin(), v.end());
    finalize_relations(q, /*with_downsets=*/true, exec);
    return q;
}

std::vector<int> common_lower_covers(const Poset& p, int a, int b) {
    if (a == b) throw std::invalid_argument("common_lower_covers: a == b");
    const auto cts = p.coatoms();
    auto is_coatom = [&](int x) {
        return std::find(cts.begin(), cts.end(), x) != cts.end();
    };
    if (!is_coatom(a) || !is_coatom(b)) {
        throw std::invalid_argument("common_lower_covers: not a coatom");
    }
    std::vector<int> out;
    std::set_intersection(p.covers[a].begin(), p.covers[a].end(),
                          p.covers[b].begin(), p.covers[b].end(),
                          std::back_inserter(out));
    return out;
}

namespace {

// Longest/shortest saturated descent from each element, memoized.
struct ChainSpans {
    std::vector<int> shortest, longest;
};

ChainSpans chain_spans(const Poset& p) {
    ChainSpans s;
    s.shortest.assign(p.size(), 0);
    s.longest.assign(p.size(), 0);
    // Topological pass over the cover DAG; i depends on the elements it
    // covers, so bottoms go first. Handles corrupted (loaded) input.
    std::vector<int> pending(p.size(), 0);
    for (int i = 0; i < p.size(); ++i) pending[i] = static_cast<int>(p.covers[i].size());
    std::vector<int> queue;
    for (int i = 0; i < p.size(); ++i) {
        if (pending[i] == 0) queue.push_back(i);
    }
    size_t qi = 0;
    int done = 0;
    while (qi < queue.size()) {
        const int i = queue[qi++];
        ++done;
        if (!p.covers[i].empty()) {
            int mn = p.size() + 1, mx = -1;
            for (int j : p.covers[i]) {
                mn = std::min(mn, s.shortest[j]);
                mx = std::max(mx, s.longest[j]);
            }
            s.shortest[i] = mn + 1;
            s.longest[i] = mx + 1;
        }
        for (int up : p.covered_by[i]) {
            if (--pending[up] == 0) queue.push_back(up);
        }
    }
    if (done != p.size()) throw std::invalid_argument("cover relation has a cycle");
    return s;
}

std::vector<int> extract_chain(const Poset& p, int from, bool longest,
                               const ChainSpans& s) {
    std::vector<int> chain{from};
    int cur = from;
    while (!p.covers[cur].empty()) {
        int best = -1;
        for (int j : p.covers[cur]) {
            if (best < 0) best = j;
            const int bj = longest ? s.longest[j] : s.shortest[j];
            const int bb = longest ? s.longest[best] : s.shortest[best];
            if (longest ? bj > bb : bj < bb) best = j;
        }
        chain.push_back(best);
        cur = best;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

}  // namespace

GradedResult check_graded(const Poset& p) {
    GradedResult r;
    if (p.size() == 0) {
        r.ok = false;
        r.message = "empty poset";
        return r;
    }
    ChainSpans s;
    try {
        s = chain_spans(p);
    } catch (const std::invalid_argument& e) {
        r.ok = false;
        r.message = e.what();
        return r;
    }
    // Maximal chains run from a maximal element (nothing covers it) all the
    // way down; all must have equal length.
    int short_at = -1, long_at = -1;
    for (int i = 0; i < p.size(); ++i) {
        if (!p.covered_by[i].empty()) continue;
        if (short_at < 0 || s.shortest[i] < s.shortest[short_at]) short_at = i;
        if (long_at < 0 || s.longest[i] > s.longest[long_at]) long_at = i;
    }
    if (s.shortest[short_at] != s.longest[long_at]) {
        r.ok = false;
        r.message = "maximal chains of different lengths";
        r.chain_a = extract_chain(p, short_at, /*longest=*/false, s);
        r.chain_b = extract_chain(p, long_at, /*longest=*/true, s);
    }
    return r;
}

ThinResult check_thin(const Poset& p, const ExecPolicy& exec) {
    set_threads(exec);
    ThinResult out;
    const int sz = p.size();
    std::vector<ThinResult> local(sz);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec.parallel)
#endif
    for (int y = 0; y < sz; ++y) {
        // Thinness concerns the face poset itself. Intervals under the
        // adjoined maximum have 1 or 3 coatoms over each element and are
        // audited separately.
        if (p.bounded && y == p.top) continue;
        std::map<int, int> mids;  // grandchild -> number of middle elements
        for (int z : p.covers[y]) {
            std::set<int> seen;
            for (int x : p.covers[z]) seen.insert(x);
            for (int x : seen) ++mids[x];
        }
        for (auto [x, cnt] : mids) {
            if (cnt != 2) {
                local[y].ok = false;
                local[y].x = x;
                local[y].y = y;
                local[y].message = "interval [x,y] has " + std::to_string(cnt + 2) +
                                   " elements";
                break;
            }
        }
    }
    for (const auto& l : local) {
        if (!l.ok) return l;
    }
    return out;
}

std::vector<std::vector<int>> maximal_chains(const Poset& p) {
    if (p.size() == 0) throw std::invalid_argument("maximal_chains: empty poset");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int v) -> void {
        cur.push_back(v);
        if (p.covers[v].empty()) {
            std::vector<int> chain(cur.rbegin(), cur.rend());
            out.push_back(std::move(chain));
        } else {
            for (int w : p.covers[v]) self(self, w);
        }
        cur.pop_back();
    };
    for (int i = 0; i < p.size(); ++i) {
        if (p.covered_by[i].empty()) dfs(dfs, i);
    }
    return out;
}

std::vector<int> coatoms_above(const Poset& p, int f) {
    if (!p.has_downsets()) throw std::invalid_argument("coatoms_above: no down-sets");
    std::vector<int> out;
    for (int c : p.coatoms()) {
        if (p.downset[c].test(f)) out.push_back(c);
    }
    return out;
}

}  // namespace tuffley
