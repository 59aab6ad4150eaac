#include "tuffley/nni.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tuffley {

bool NNIGraph::adjacent(int a, int b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

int NNIGraph::index_of_code(const CanonicalCode& c) const {
    auto it = std::lower_bound(codes.begin(), codes.end(), c);
    if (it == codes.end() || *it != c) return -1;
    return static_cast<int>(it - codes.begin());
}

NNIGraph build_nni_graph(int n, const Caps& caps, const ExecPolicy& exec) {
    if (n < 3) throw std::invalid_argument("build_nni_graph: n must be >= 3");
    if (n > caps.max_n) throw ResourceError("build_nni_graph: n exceeds max_n cap");
#ifdef _OPENMP
    if (exec.parallel && exec.threads > 0) omp_set_num_threads(exec.threads);
#endif

    NNIGraph g;
    g.n = n;
    g.trees = enumerate_trivalent(n);
    for (const XTree& t : g.trees) {
        g.codes.push_back(canonical_code(XForest::single_tree(n, t)));
    }
    const int nv = g.vertex_count();
    g.adj.assign(nv, {});

    // Route 1: NNI moves over every internal edge.
    std::vector<std::vector<std::pair<int, CanonicalCode>>> moves(nv);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec.parallel)
#endif
    for (int i = 0; i < nv; ++i) {
        for (int e : internal_edges(g.trees[i])) {
            auto [a, b] = nni_neighbors(g.trees[i], e);
            moves[i].push_back({e, canonical_code(XForest::single_tree(n, a))});
            moves[i].push_back({e, canonical_code(XForest::single_tree(n, b))});
        }
    }
    std::set<std::pair<int, int>> nni_edges;
    for (int i = 0; i < nv; ++i) {
        for (auto& [e, code] : moves[i]) {
            const int j = g.index_of_code(code);
            if (j < 0) throw InternalError("build_nni_graph: NNI result not trivalent");
            if (j == i) throw InternalError("build_nni_graph: NNI fixed the tree");
            nni_edges.insert({std::min(i, j), std::max(i, j)});
            g.tags[{std::min(i, j), std::max(i, j)}].moves.push_back({i, e});
        }
    }

    // Route 2: common covered elements; the two edge sets must agree
    // exactly.
    std::vector<std::vector<CanonicalCode>> cover_codes(nv);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec.parallel)
#endif
    for (int i = 0; i < nv; ++i) {
        XForest f = XForest::single_tree(n, g.trees[i]);
        for (auto& [code, forest] : lower_covers(f)) cover_codes[i].push_back(code);
        std::sort(cover_codes[i].begin(), cover_codes[i].end());
    }
    std::set<std::pair<int, int>> shared_edges;
    for (int i = 0; i < nv; ++i) {
        for (int j = i + 1; j < nv; ++j) {
            std::vector<CanonicalCode> common;
            std::set_intersection(cover_codes[i].begin(), cover_codes[i].end(),
                                  cover_codes[j].begin(), cover_codes[j].end(),
                                  std::back_inserter(common));
            if (!common.empty()) {
                shared_edges.insert({i, j});
                g.tags[{i, j}].common_covers = std::move(common);
            }
        }
    }
    if (nni_edges != shared_edges) {
        throw InternalError(
            "build_nni_graph: NNI-move edges disagree with common-covered-element edges");
    }

    for (auto [i, j] : nni_edges) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    return g;
}

ConnectivityReport gallery_connected(const NNIGraph& g) {
    ConnectivityReport r;
    const int nv = g.vertex_count();
    std::vector<int> comp(nv, -1);
    int nc = 0;
    for (int s = 0; s < nv; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = nc;
        r.components.emplace_back();
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            r.components[nc].push_back(v);
            for (int w : g.adj[v]) {
                if (comp[w] < 0) {
                    comp[w] = nc;
                    stack.push_back(w);
                }
            }
        }
        ++nc;
    }
    r.connected = (nc <= 1);
    return r;
}

CycleClass classify_cycle(const NNIGraph& g, const std::vector<int>& cycle) {
    const int k = static_cast<int>(cycle.size());
    if (k < 3) return CycleClass::not_a_cycle;
    std::set<int> uniq(cycle.begin(), cycle.end());
    if (static_cast<int>(uniq.size()) != k) return CycleClass::not_a_cycle;
    for (int i = 0; i < k; ++i) {
        if (!g.adjacent(cycle[i], cycle[(i + 1) % k])) return CycleClass::not_a_cycle;
    }
    if (k > 3) return CycleClass::nontrivial;
    // A 3-cycle must consist of three trees covering a common element.
    auto it01 = g.tags.find({std::min(cycle[0], cycle[1]), std::max(cycle[0], cycle[1])});
    auto it02 = g.tags.find({std::min(cycle[0], cycle[2]), std::max(cycle[0], cycle[2])});
    std::vector<CanonicalCode> common;
    std::set_intersection(it01->second.common_covers.begin(),
                          it01->second.common_covers.end(),
                          it02->second.common_covers.begin(),
                          it02->second.common_covers.end(),
                          std::back_inserter(common));
    if (common.empty()) {
        throw InternalError("classify_cycle: 3-cycle without a common covered element");
    }
    return CycleClass::trivial;
}

namespace {

// Caterpillar from a spine description: entry i is the list of leaf labels
// hanging off spine vertex i (ends carry two, middles one).
XTree caterpillar(const std::vector<std::vector<int>>& spine) {
    XTree t;
    const int s = static_cast<int>(spine.size());
    for (int i = 0; i < s; ++i) t.labels.push_back(0);
    for (int i = 0; i + 1 < s; ++i) t.edges.push_back({i, i + 1});
    for (int i = 0; i < s; ++i) {
        for (int leaf : spine[i]) {
            const int v = t.vertex_count();
            t.labels.push_back(mask_of({leaf}));
            t.edges.push_back({i, v});
        }
    }
    return t;
}

}  // namespace

std::vector<XTree> canonical_cycle_K(int n) {
    if (n < 5) throw std::invalid_argument("canonical_cycle_K requires n >= 5");
    // The six permutations of {n-3, n-2, n-1}, consecutive ones differing by
    // an adjacent transposition; each transposition is one NNI.
    const int a = n - 3, b = n - 2, c = n - 1;
    const std::vector<std::array<int, 3>> perms = {
        {a, b, c}, {b, a, c}, {b, c, a}, {c, b, a}, {c, a, b}, {a, c, b}};
    std::vector<XTree> out;
    for (const auto& perm : perms) {
        std::vector<std::vector<int>> spine;
        spine.push_back({1, perm[0]});
        spine.push_back({perm[1]});
        if (n == 5) {
            spine.push_back({perm[2], n});
        } else {
            spine.push_back({perm[2]});
            for (int leaf = n - 4; leaf >= 3; --leaf) spine.push_back({leaf});
            spine.push_back({2, n});
        }
        out.push_back(caterpillar(spine));
    }
    return out;
}

CriticalContext make_critical_context(int n, const XTree& ci, int x,
                                      const CanonicalCode& cj,
                                      const CanonicalCode& ck) {
    CriticalContext ctx;
    ctx.n = n;
    ctx.ci = ci;
    ctx.x = x;
    ctx.ci_code = canonical_code(XForest::single_tree(n, ci));
    ctx.cj_code = cj;
    ctx.ck_code = ck;

    // e_x is the pendant edge of the leaf labeled x; its inner endpoint must
    // have two internal edges besides e_x.
    int leaf = -1;
    for (int v = 0; v < ci.vertex_count(); ++v) {
        if (ci.labels[v] == mask_of({x})) leaf = v;
    }
    if (leaf < 0) throw std::invalid_argument("make_critical_context: no leaf x");
    const auto deg = ci.degrees();
    int w = -1;
    for (int e = 0; e < ci.edge_count(); ++e) {
        auto [u, v] = ci.edges[e];
        if (u == leaf || v == leaf) {
            ctx.ex = e;
            w = (u == leaf) ? v : u;
        }
    }
    std::vector<int> flank;
    for (int e = 0; e < ci.edge_count(); ++e) {
        if (e == ctx.ex) continue;
        auto [u, v] = ci.edges[e];
        if (u != w && v != w) continue;
        const int other = (u == w) ? v : u;
        if (ci.labels[other] == 0 && deg[other] == 3) flank.push_back(e);
    }
    if (flank.size() != 2) {
        throw std::invalid_argument(
            "make_critical_context: e_x is not flanked by two internal edges");
    }

    // Pair each flanking edge with the requested neighbor: cj must arise by
    // an NNI over one of them, ck over the other.
    auto nni_codes = [&](int e) {
        auto [p, q] = nni_neighbors(ci, e);
        return std::array<CanonicalCode, 2>{canonical_code(XForest::single_tree(n, p)),
                                            canonical_code(XForest::single_tree(n, q))};
    };
    const auto c0 = nni_codes(flank[0]);
    const auto c1 = nni_codes(flank[1]);
    const bool cj_on_0 = (cj == c0[0] || cj == c0[1]);
    const bool ck_on_1 = (ck == c1[0] || ck == c1[1]);
    if (cj_on_0 && ck_on_1) {
        ctx.ex1 = flank[0];
        ctx.ex2 = flank[1];
    } else if ((cj == c1[0] || cj == c1[1]) && (ck == c0[0] || ck == c0[1])) {
        ctx.ex1 = flank[1];
        ctx.ex2 = flank[0];
    } else {
        throw std::invalid_argument(
            "make_critical_context: cj/ck are not NNI results over the flanking edges");
    }

    const XForest fi = XForest::single_tree(n, ci);
    std::vector<int> map_j, map_k;
    ctx.fj = contract_edge(fi, 0, ctx.ex1, &map_j);
    ctx.fk = contract_edge(fi, 0, ctx.ex2, &map_k);
    ctx.fj_code = canonical_code(ctx.fj);
    ctx.fk_code = canonical_code(ctx.fk);

    // F_ijk: delete the (relocated) e_x from F_j, and check the F_k route
    // gives the same element.
    auto delete_ex = [&](const XForest& f, const std::vector<int>& vmap) {
        const int lu = vmap[ci.edges[ctx.ex].first];
        const int lv = vmap[ci.edges[ctx.ex].second];
        for (int e = 0; e < f.blocks[0].edge_count(); ++e) {
            auto [u, v] = f.blocks[0].edges[e];
            if ((u == lu && v == lv) || (u == lv && v == lu)) {
                return delete_edge(f, 0, e);
            }
        }
        throw InternalError("make_critical_context: lost track of e_x");
    };
    ctx.fijk = delete_ex(ctx.fj, map_j);
    ctx.fijk_code = canonical_code(ctx.fijk);
    const CanonicalCode via_k = canonical_code(delete_ex(ctx.fk, map_k));
    if (via_k != ctx.fijk_code) {
        throw InternalError(
            "make_critical_context: F_ijk differs between the C_j and C_k routes");
    }

    // F_ijk is an isolated vertex labeled x plus an ([n]-{x})-tree.
    int singleton = -1, treeblk = -1;
    for (int bi = 0; bi < static_cast<int>(ctx.fijk.blocks.size()); ++bi) {
        const XTree& blk = ctx.fijk.blocks[bi];
        if (blk.vertex_count() == 1 && blk.labels[0] == mask_of({x})) {
            singleton = bi;
        } else {
            treeblk = bi;
        }
    }
    if (singleton < 0 || treeblk < 0 || ctx.fijk.blocks.size() != 2) {
        throw InternalError("make_critical_context: F_ijk has unexpected shape");
    }
    ctx.tf = ctx.fijk.blocks[treeblk];

    // vmap: attach x to each vertex of T_F; emap: subdivide each edge and
    // attach x to the new vertex.
    for (int v = 0; v < ctx.tf.vertex_count(); ++v) {
        XTree t = ctx.tf;
        const int xv = t.vertex_count();
        t.labels.push_back(mask_of({x}));
        t.edges.push_back({v, xv});
        ctx.vmap.push_back(canonical_code(XForest::single_tree(n, t)));
    }
    for (int e = 0; e < ctx.tf.edge_count(); ++e) {
        XTree t = ctx.tf;
        auto [u, v] = t.edges[e];
        const int mid = t.vertex_count();
        const int xv = mid + 1;
        t.labels.push_back(0);
        t.labels.push_back(mask_of({x}));
        t.edges[e] = {std::min(u, mid), std::max(u, mid)};
        t.edges.push_back({std::min(v, mid), std::max(v, mid)});
        t.edges.push_back({mid, xv});
        ctx.emap.push_back(canonical_code(XForest::single_tree(n, t)));
    }
    return ctx;
}

std::vector<CriticalContext> find_critical_triplets(int n) {
    if (n < 3) throw std::invalid_argument("find_critical_triplets: n must be >= 3");
    std::vector<CriticalContext> out;
    std::set<std::tuple<CanonicalCode, int, CanonicalCode, CanonicalCode>> seen;
    for (const XTree& ci : enumerate_trivalent(n)) {
        const auto deg = ci.degrees();
        for (int leaf = 0; leaf < ci.vertex_count(); ++leaf) {
            if (ci.labels[leaf] == 0) continue;
            const int w = ci.neighbors(leaf)[0];
            std::vector<int> flank;
            for (int e = 0; e < ci.edge_count(); ++e) {
                auto [u, v] = ci.edges[e];
                if (u != w && v != w) continue;
                const int other = (u == w) ? v : u;
                if (other == leaf) continue;
                if (ci.labels[other] == 0 && deg[other] == 3) flank.push_back(e);
            }
            if (flank.size() != 2) continue;
            const int x = labels_of(ci.labels[leaf])[0];
            auto [j1, j2] = nni_neighbors(ci, flank[0]);
            auto [k1, k2] = nni_neighbors(ci, flank[1]);
            const std::array<CanonicalCode, 2> cjs = {
                canonical_code(XForest::single_tree(n, j1)),
                canonical_code(XForest::single_tree(n, j2))};
            const std::array<CanonicalCode, 2> cks = {
                canonical_code(XForest::single_tree(n, k1)),
                canonical_code(XForest::single_tree(n, k2))};
            for (const CanonicalCode& cj : cjs) {
                for (const CanonicalCode& ck : cks) {
                    CanonicalCode lo = std::min(cj, ck), hi = std::max(cj, ck);
                    if (!seen.insert({canonical_code(XForest::single_tree(n, ci)), x, lo,
                                      hi})
                             .second) {
                        continue;
                    }
                    out.push_back(make_critical_context(n, ci, x, cj, ck));
                }
            }
        }
    }
    return out;
}

InducedSubgraph induced_subgraph_above(const Poset& p, const NNIGraph& g, int f) {
    InducedSubgraph s;
    s.elems = coatoms_above(p, f);
    const int k = static_cast<int>(s.elems.size());
    std::vector<int> gidx(k);
    for (int i = 0; i < k; ++i) {
        gidx[i] = g.index_of_code(p.codes[s.elems[i]]);
        if (gidx[i] < 0) throw InternalError("induced_subgraph_above: coatom not in graph");
    }
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (g.adjacent(gidx[i], gidx[j])) s.edges.push_back({i, j});
            // Shared covered element that is itself above f.
            std::vector<int> common;
            std::set_intersection(p.covers[s.elems[i]].begin(), p.covers[s.elems[i]].end(),
                                  p.covers[s.elems[j]].begin(), p.covers[s.elems[j]].end(),
                                  std::back_inserter(common));
            for (int z : common) {
                if (p.downset[z].test(f)) {
                    s.shared_above_edges.push_back({i, j});
                    break;
                }
            }
        }
    }
    s.diverges = (s.edges != s.shared_above_edges);
    return s;
}

CheckResult verify_tf_lemma(const Poset& p, const CriticalContext& ctx) {
    CheckResult r;
    const int f = p.index_of.at(ctx.fijk_code);

    // The covers of F_ijk must be exactly the vmap image, and the coatoms
    // above F_ijk exactly the emap image.
    std::vector<int> cover_elems(p.covered_by[f].begin(), p.covered_by[f].end());
    std::set<CanonicalCode> cover_codes;
    for (int a : cover_elems) cover_codes.insert(p.codes[a]);
    if (cover_codes != std::set<CanonicalCode>(ctx.vmap.begin(), ctx.vmap.end()) ||
        cover_codes.size() != ctx.vmap.size()) {
        r.ok = false;
        r.counterexample = "vmap is not a bijection onto the covers of F_ijk";
        return r;
    }
    std::set<CanonicalCode> above_codes;
    for (int c : coatoms_above(p, f)) above_codes.insert(p.codes[c]);
    if (above_codes != std::set<CanonicalCode>(ctx.emap.begin(), ctx.emap.end()) ||
        above_codes.size() != ctx.emap.size()) {
        r.ok = false;
        r.counterexample = "emap is not a bijection onto the coatoms above F_ijk";
        return r;
    }

    // Cover relation vs incidence in T_F.
    for (int vi = 0; vi < ctx.tf.vertex_count(); ++vi) {
        const int a = p.index_of.at(ctx.vmap[vi]);
        for (int ei = 0; ei < ctx.tf.edge_count(); ++ei) {
            const int c = p.index_of.at(ctx.emap[ei]);
            const bool covers = std::binary_search(p.covers[c].begin(),
                                                   p.covers[c].end(), a);
            const bool incident = (ctx.tf.edges[ei].first == vi ||
                                   ctx.tf.edges[ei].second == vi);
            if (covers != incident) {
                r.ok = false;
                r.counterexample = "cover/incidence mismatch at vertex " +
                                   std::to_string(vi) + ", edge " + std::to_string(ei);
                return r;
            }
        }
    }

    // Corollary: shared covered element above F_ijk iff the edges share a
    // vertex of T_F.
    for (int ei = 0; ei < ctx.tf.edge_count(); ++ei) {
        for (int ej = ei + 1; ej < ctx.tf.edge_count(); ++ej) {
            const int ci = p.index_of.at(ctx.emap[ei]);
            const int cj = p.index_of.at(ctx.emap[ej]);
            std::vector<int> common;
            std::set_intersection(p.covers[ci].begin(), p.covers[ci].end(),
                                  p.covers[cj].begin(), p.covers[cj].end(),
                                  std::back_inserter(common));
            bool shared_above = false;
            for (int z : common) {
                if (p.downset[z].test(f)) shared_above = true;
            }
            auto [a1, b1] = ctx.tf.edges[ei];
            auto [a2, b2] = ctx.tf.edges[ej];
            const bool share_vertex = (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2);
            if (shared_above != share_vertex) {
                r.ok = false;
                r.counterexample = "corollary mismatch at edges " + std::to_string(ei) +
                                   "," + std::to_string(ej);
                return r;
            }
        }
    }
    return r;
}

namespace {

// All simple cycles in a tiny graph given as adjacency lists; reports any
// simple cycle of length > 3 through a callback returning false to abort.
bool has_long_cycle(const std::vector<std::vector<int>>& adj, std::vector<int>* witness) {
    const int k = static_cast<int>(adj.size());
    std::vector<int> path;
    std::vector<char> on(k, 0);
    auto dfs = [&](auto&& self, int start, int v) -> bool {
        for (int w : adj[v]) {
            if (w == start && path.size() >= 4) {
                if (witness) *witness = path;
                return true;
            }
            if (!on[w] && w > start) {
                on[w] = 1;
                path.push_back(w);
                if (self(self, start, w)) return true;
                path.pop_back();
                on[w] = 0;
            }
        }
        return false;
    };
    for (int s = 0; s < k; ++s) {
        path = {s};
        std::fill(on.begin(), on.end(), 0);
        on[s] = 1;
        if (dfs(dfs, s, s)) return true;
    }
    return false;
}

}  // namespace

CheckResult verify_no_nontrivial_f_cycles(const Poset& p, const NNIGraph& g,
                                          const CriticalContext& ctx) {
    CheckResult r;
    const int f = p.index_of.at(ctx.fijk_code);
    const InducedSubgraph s = induced_subgraph_above(p, g, f);
    const int k = static_cast<int>(s.elems.size());
    std::vector<std::vector<int>> adj(k);
    for (auto [i, j] : s.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<int> witness;
    if (has_long_cycle(adj, &witness)) {
        r.ok = false;
        r.counterexample = "nontrivial F_ijk-cycle of length " +
                           std::to_string(witness.size());
        return r;
    }
    // Connectivity of the induced subgraph.
    std::vector<char> seen(k, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = k > 0 ? 1 : 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                stack.push_back(w);
            }
        }
    }
    if (visited != k) {
        r.ok = false;
        r.counterexample = "induced subgraph above F_ijk is disconnected";
    }
    return r;
}

CheckResult verify_fpath_exclusivity(const Poset& p, const NNIGraph& g,
                                     const CriticalContext& ctx) {
    CheckResult r;
    const int f = p.index_of.at(ctx.fijk_code);
    const InducedSubgraph s = induced_subgraph_above(p, g, f);
    const int k = static_cast<int>(s.elems.size());
    std::vector<std::vector<int>> adj(k);
    for (auto [i, j] : s.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    auto local_index = [&](const CanonicalCode& code) {
        for (int i = 0; i < k; ++i) {
            if (p.codes[s.elems[i]] == code) return i;
        }
        throw InternalError("verify_fpath_exclusivity: coatom missing above F_ijk");
    };
    const int ci = local_index(ctx.ci_code);
    const int cj = local_index(ctx.cj_code);
    const int ck = local_index(ctx.ck_code);

    // Enumerate all simple paths ending at C_i and check none contains both
    // C_j and C_k.
    bool bad = false;
    std::vector<int> path;
    std::vector<char> on(k, 0);
    auto dfs = [&](auto&& self, int v) -> void {
        if (bad) return;
        if (v == ci) {
            bool has_j = false, has_k = false;
            for (int w : path) {
                has_j |= (w == cj);
                has_k |= (w == ck);
            }
            if (has_j && has_k) {
                bad = true;
                r.counterexample = "F_ijk-path through both C_j and C_k";
            }
            return;  // simple paths end at their first visit of C_i
        }
        for (int w : adj[v]) {
            if (!on[w]) {
                on[w] = 1;
                path.push_back(w);
                self(self, w);
                path.pop_back();
                on[w] = 0;
            }
        }
    };
    for (int start = 0; start < k && !bad; ++start) {
        std::fill(on.begin(), on.end(), 0);
        path = {start};
        on[start] = 1;
        dfs(dfs, start);
    }
    r.ok = !bad;
    return r;
}

}  // namespace tuffley
