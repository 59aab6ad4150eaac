#include "tuffley/forest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "tuffley/canonical.hpp"

namespace tuffley {

LabelMask mask_of(const std::vector<int>& labels) {
    LabelMask m = 0;
    for (int x : labels) m |= LabelMask(1) << (x - 1);
    return m;
}

std::vector<int> labels_of(LabelMask m) {
    std::vector<int> out;
    for (int x = 1; m; ++x, m >>= 1) {
        if (m & 1) out.push_back(x);
    }
    return out;
}

std::vector<int> XTree::degrees() const {
    std::vector<int> deg(labels.size(), 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

LabelMask XTree::support() const {
    LabelMask m = 0;
    for (LabelMask l : labels) m |= l;
    return m;
}

std::vector<int> XTree::neighbors(int v) const {
    std::vector<int> out;
    for (auto [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int XForest::rank() const {
    int r = 0;
    for (const XTree& b : blocks) r += b.edge_count();
    return r;
}

XForest XForest::single_tree(int n, XTree t) {
    XForest f;
    f.n = n;
    f.blocks.push_back(std::move(t));
    return f;
}

namespace {

void normalize_edge(std::pair<int, int>& e) {
    if (e.first > e.second) std::swap(e.first, e.second);
}

bool tree_connected(const XTree& t) {
    const int nv = t.vertex_count();
    if (nv == 0) return false;
    std::vector<std::vector<int>> adj(nv);
    for (auto [u, v] : t.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int visited = 1;
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
    return visited == nv;
}

}  // namespace

ValidationResult validate(const XForest& f) {
    if (f.n < 1 || f.n > kMaxGroundSet) {
        return {false, "ground set size out of range"};
    }
    if (f.blocks.empty()) return {false, "no blocks"};
    const LabelMask full = (f.n >= 32) ? ~LabelMask(0) : (LabelMask(1) << f.n) - 1;
    LabelMask seen = 0;
    for (const XTree& b : f.blocks) {
        const int nv = b.vertex_count();
        if (nv == 0) return {false, "empty block"};
        for (auto [u, v] : b.edges) {
            if (u < 0 || u >= nv || v < 0 || v >= nv) {
                return {false, "edge endpoint out of range"};
            }
            if (u == v) return {false, "self-loop"};
        }
        {
            auto es = b.edges;
            for (auto& e : es) normalize_edge(e);
            std::sort(es.begin(), es.end());
            if (std::adjacent_find(es.begin(), es.end()) != es.end()) {
                return {false, "duplicate edge"};
            }
        }
        if (b.edge_count() != nv - 1) return {false, "block edge count != vertices - 1"};
        if (!tree_connected(b)) return {false, "block not connected"};
        const auto deg = b.degrees();
        LabelMask block_support = 0;
        for (int v = 0; v < nv; ++v) {
            const LabelMask l = b.labels[v];
            if (l & ~full) return {false, "label out of range"};
            if (l == 0 && deg[v] < 3) return {false, "unlabeled vertex degree < 3"};
            if (l & block_support) return {false, "labels not a partition"};
            block_support |= l;
        }
        if (block_support == 0) return {false, "block carries no labels"};
        if (block_support & seen) return {false, "labels not a partition"};
        seen |= block_support;
    }
    if (seen != full) return {false, "labels not a partition"};
    return {};
}

XForest contract_edge(const XForest& f, int block, int edge_index,
                      std::vector<int>* vertex_map) {
    if (block < 0 || block >= static_cast<int>(f.blocks.size())) {
        throw std::invalid_argument("contract_edge: no such block");
    }
    const XTree& t = f.blocks[block];
    if (edge_index < 0 || edge_index >= t.edge_count()) {
        throw std::invalid_argument("contract_edge: no such edge");
    }
    auto [u, v] = t.edges[edge_index];
    if (u > v) std::swap(u, v);  // keep u, drop v

    XTree out;
    const int nv = t.vertex_count();
    std::vector<int> remap(nv, -1);
    for (int w = 0, next = 0; w < nv; ++w) {
        if (w == v) continue;
        remap[w] = next++;
        out.labels.push_back(t.labels[w]);
    }
    remap[v] = remap[u];
    out.labels[remap[u]] = t.labels[u] | t.labels[v];
    for (int e = 0; e < t.edge_count(); ++e) {
        if (e == edge_index) continue;
        std::pair<int, int> ne{remap[t.edges[e].first], remap[t.edges[e].second]};
        normalize_edge(ne);
        out.edges.push_back(ne);
    }
    if (vertex_map) *vertex_map = remap;

    XForest g = f;
    g.blocks[block] = std::move(out);
    return g;
}

bool is_safe_deletion(const XTree& t, int edge_index) {
    const auto deg = t.degrees();
    auto [u, v] = t.edges[edge_index];
    const bool u_ok = t.labels[u] != 0 || deg[u] > 3;
    const bool v_ok = t.labels[v] != 0 || deg[v] > 3;
    return u_ok && v_ok;
}

XForest delete_edge(const XForest& f, int block, int edge_index) {
    if (block < 0 || block >= static_cast<int>(f.blocks.size())) {
        throw std::invalid_argument("delete_edge: no such block");
    }
    const XTree& t = f.blocks[block];
    if (edge_index < 0 || edge_index >= t.edge_count()) {
        throw std::invalid_argument("delete_edge: no such edge");
    }

    // Split into the two components on either side of the edge.
    const int nv = t.vertex_count();
    std::vector<std::vector<int>> adj(nv);
    for (int e = 0; e < t.edge_count(); ++e) {
        if (e == edge_index) continue;
        auto [a, b] = t.edges[e];
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> side(nv, -1);
    const int root = t.edges[edge_index].first;
    std::vector<int> stack{root};
    side[root] = 0;
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int z : adj[w]) {
            if (side[z] < 0) {
                side[z] = 0;
                stack.push_back(z);
            }
        }
    }

    XTree part[2];
    std::vector<int> remap(nv, -1);
    for (int w = 0; w < nv; ++w) {
        const int s = side[w] == 0 ? 0 : 1;
        remap[w] = part[s].vertex_count();
        part[s].labels.push_back(t.labels[w]);
    }
    for (int e = 0; e < t.edge_count(); ++e) {
        if (e == edge_index) continue;
        auto [a, b] = t.edges[e];
        const int s = side[a] == 0 ? 0 : 1;
        std::pair<int, int> ne{remap[a], remap[b]};
        normalize_edge(ne);
        part[s].edges.push_back(ne);
    }

    XForest g;
    g.n = f.n;
    for (int i = 0; i < static_cast<int>(f.blocks.size()); ++i) {
        if (i != block) g.blocks.push_back(f.blocks[i]);
    }
    g.blocks.push_back(std::move(part[0]));
    g.blocks.push_back(std::move(part[1]));
    return g;
}

std::vector<std::pair<int, int>> safe_deletions(const XForest& f) {
    std::vector<std::pair<int, int>> out;
    for (int b = 0; b < static_cast<int>(f.blocks.size()); ++b) {
        for (int e = 0; e < f.blocks[b].edge_count(); ++e) {
            if (is_safe_deletion(f.blocks[b], e)) out.emplace_back(b, e);
        }
    }
    return out;
}

std::vector<std::pair<std::string, XForest>> lower_covers(const XForest& f) {
    std::map<std::string, XForest> dedup;
    for (int b = 0; b < static_cast<int>(f.blocks.size()); ++b) {
        for (int e = 0; e < f.blocks[b].edge_count(); ++e) {
            XForest c = contract_edge(f, b, e);
            dedup.emplace(canonical_code(c), std::move(c));
            if (is_safe_deletion(f.blocks[b], e)) {
                XForest d = delete_edge(f, b, e);
                dedup.emplace(canonical_code(d), std::move(d));
            }
        }
    }
    std::vector<std::pair<std::string, XForest>> out;
    out.reserve(dedup.size());
    for (auto& [code, forest] : dedup) out.emplace_back(code, std::move(forest));
    return out;
}

bool is_trivalent(const XTree& t, int n) {
    if (t.support() != (LabelMask(1) << n) - 1) return false;
    const auto deg = t.degrees();
    int leaves = 0;
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.labels[v] != 0) {
            if (deg[v] != 1) return false;
            if (__builtin_popcount(t.labels[v]) != 1) return false;
            ++leaves;
        } else if (deg[v] != 3) {
            return false;
        }
    }
    return leaves == n && tree_connected(t) && t.edge_count() == t.vertex_count() - 1;
}

std::vector<int> internal_edges(const XTree& t) {
    const auto deg = t.degrees();
    std::vector<int> out;
    for (int e = 0; e < t.edge_count(); ++e) {
        auto [u, v] = t.edges[e];
        if (deg[u] >= 3 && t.labels[u] == 0 && deg[v] >= 3 && t.labels[v] == 0) {
            out.push_back(e);
        }
    }
    return out;
}

std::pair<XTree, XTree> nni_neighbors(const XTree& t, int edge_index) {
    if (edge_index < 0 || edge_index >= t.edge_count()) {
        throw std::invalid_argument("nni_neighbors: no such edge");
    }
    auto [u, v] = t.edges[edge_index];
    const auto deg = t.degrees();
    if (deg[u] != 3 || deg[v] != 3 || t.labels[u] != 0 || t.labels[v] != 0) {
        throw std::invalid_argument("nni_neighbors: edge is not internal");
    }

    std::vector<int> us, vs;  // the subtree roots on each side
    for (int w : t.neighbors(u)) {
        if (w != v) us.push_back(w);
    }
    for (int w : t.neighbors(v)) {
        if (w != u) vs.push_back(w);
    }

    auto swap_subtrees = [&](int b, int c) {
        // Move subtree rooted at b from u to v and subtree at c from v to u.
        XTree s = t;
        for (auto& e : s.edges) {
            if ((e.first == u && e.second == b) || (e.first == b && e.second == u)) {
                e = {v, b};
            } else if ((e.first == v && e.second == c) || (e.first == c && e.second == v)) {
                e = {u, c};
            }
            normalize_edge(e);
        }
        return s;
    };

    return {swap_subtrees(us[1], vs[0]), swap_subtrees(us[1], vs[1])};
}

std::vector<XTree> enumerate_trivalent(int n) {
    if (n < 3) throw std::invalid_argument("enumerate_trivalent: n must be >= 3");
    if (n > kMaxGroundSet) throw std::invalid_argument("enumerate_trivalent: n too large");

    std::vector<XTree> trees;
    {
        XTree star;
        star.labels = {mask_of({1}), mask_of({2}), mask_of({3}), 0};
        star.edges = {{0, 3}, {1, 3}, {2, 3}};
        trees.push_back(star);
    }
    for (int k = 4; k <= n; ++k) {
        std::map<std::string, XTree> next;
        for (const XTree& t : trees) {
            for (int e = 0; e < t.edge_count(); ++e) {
                XTree s = t;
                auto [a, b] = s.edges[e];
                const int mid = s.vertex_count();
                const int leaf = mid + 1;
                s.labels.push_back(0);
                s.labels.push_back(mask_of({k}));
                s.edges[e] = {std::min(a, mid), std::max(a, mid)};
                s.edges.push_back({std::min(b, mid), std::max(b, mid)});
                s.edges.push_back({mid, leaf});
                next.emplace(tree_code(s), std::move(s));
            }
        }
        trees.clear();
        trees.reserve(next.size());
        for (auto& [code, t] : next) trees.push_back(std::move(t));
    }
    std::sort(trees.begin(), trees.end(), [](const XTree& a, const XTree& b) {
        return tree_code(a) < tree_code(b);
    });
    return trees;
}

}  // namespace tuffley
