#include "tuffley/edge_product.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tuffley/canonical.hpp"

namespace tuffley {

int EdgeProductVector::pair_index(int n, int x, int y) {
    if (x > y) std::swap(x, y);
    // pairs (1,2),(1,3),...,(1,n),(2,3),... lexicographic
    int idx = 0;
    for (int a = 1; a < x; ++a) idx += n - a;
    return idx + (y - x - 1);
}

std::vector<std::pair<int, int>> sorted_label_pairs(int n) {
    std::vector<std::pair<int, int>> out;
    for (int x = 1; x <= n; ++x) {
        for (int y = x + 1; y <= n; ++y) out.push_back({x, y});
    }
    return out;
}

namespace {

int vertex_with_label(const XTree& t, int x) {
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.labels[v] & (LabelMask(1) << (x - 1))) return v;
    }
    return -1;
}

// Edge indices along the unique path between two vertices of a tree.
std::vector<int> tree_path(const XTree& t, int from, int to) {
    const int nv = t.vertex_count();
    std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge)
    for (int e = 0; e < t.edge_count(); ++e) {
        auto [u, v] = t.edges[e];
        adj[u].push_back({v, e});
        adj[v].push_back({u, e});
    }
    std::vector<int> via_edge(nv, -1), parent(nv, -1);
    std::vector<int> stack{from};
    parent[from] = from;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == to) break;
        for (auto [w, e] : adj[v]) {
            if (parent[w] < 0) {
                parent[w] = v;
                via_edge[w] = e;
                stack.push_back(w);
            }
        }
    }
    std::vector<int> path;
    for (int v = to; v != from; v = parent[v]) path.push_back(via_edge[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::vector<int> path_edges(const XTree& t, int x, int y) {
    if (x == y) throw std::invalid_argument("path_edges: labels must differ");
    const int vx = vertex_with_label(t, x);
    const int vy = vertex_with_label(t, y);
    if (vx < 0 || vy < 0) throw std::invalid_argument("path_edges: label missing");
    if (vx == vy) return {};
    return tree_path(t, vx, vy);
}

EdgeProductVector lambda_tree(const EdgeWeightVector& w) {
    if (w.weights.size() != static_cast<size_t>(w.tree.edge_count())) {
        throw std::invalid_argument("lambda_tree: weight count mismatch");
    }
    for (double x : w.weights) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument("lambda_tree: weight outside [0,1]");
        }
    }
    EdgeProductVector out;
    out.n = w.n;
    for (auto [x, y] : sorted_label_pairs(w.n)) {
        double prod = 1.0;
        for (int e : path_edges(w.tree, x, y)) prod *= w.weights[e];
        out.entries.push_back(prod);
    }
    return out;
}

EdgeProductVector lambda_forest(const XForest& f, int n,
                                const std::vector<std::vector<double>>& weights) {
    EdgeProductVector out;
    out.n = n;
    for (auto [x, y] : sorted_label_pairs(n)) {
        int bx = -1, by = -1;
        for (int b = 0; b < static_cast<int>(f.blocks.size()); ++b) {
            if (vertex_with_label(f.blocks[b], x) >= 0) bx = b;
            if (vertex_with_label(f.blocks[b], y) >= 0) by = b;
        }
        if (bx != by || bx < 0) {
            out.entries.push_back(0.0);
            continue;
        }
        const XTree& t = f.blocks[bx];
        const int vx = vertex_with_label(t, x);
        const int vy = vertex_with_label(t, y);
        double prod = 1.0;
        if (vx != vy) {
            for (int e : tree_path(t, vx, vy)) prod *= weights[bx][e];
        }
        out.entries.push_back(prod);
    }
    return out;
}

DegenerationResult weight_degeneration_check(const EdgeWeightVector& w, double tol) {
    DegenerationResult res;
    XForest f = XForest::single_tree(w.n, w.tree);
    std::vector<std::vector<double>> weights{w.weights};

    // Contract every weight-1 edge first; contraction is always legal.
    bool again = true;
    while (again) {
        again = false;
        for (size_t b = 0; b < f.blocks.size() && !again; ++b) {
            for (int e = 0; e < f.blocks[b].edge_count(); ++e) {
                if (weights[b][e] == 1.0) {
                    f = contract_edge(f, static_cast<int>(b), e);
                    weights[b].erase(weights[b].begin() + e);
                    again = true;
                    break;
                }
            }
        }
    }
    // Then delete weight-0 edges; each must be safe in the current forest.
    again = true;
    while (again) {
        again = false;
        for (size_t b = 0; b < f.blocks.size() && !again; ++b) {
            for (int e = 0; e < f.blocks[b].edge_count(); ++e) {
                if (weights[b][e] == 0.0) {
                    if (!is_safe_deletion(f.blocks[b], e)) {
                        res.flagged = "deletion of a weight-0 edge is unsafe";
                        return res;
                    }
                    // delete_edge keeps other blocks first, then the two
                    // halves of block b in side order.
                    const XTree& t = f.blocks[b];
                    const int nv = t.vertex_count();
                    std::vector<std::vector<int>> adj(nv);
                    for (int e2 = 0; e2 < t.edge_count(); ++e2) {
                        if (e2 == e) continue;
                        auto [a2, b2] = t.edges[e2];
                        adj[a2].push_back(b2);
                        adj[b2].push_back(a2);
                    }
                    std::vector<char> side(nv, 1);
                    std::vector<int> stack{t.edges[e].first};
                    side[t.edges[e].first] = 0;
                    while (!stack.empty()) {
                        int v = stack.back();
                        stack.pop_back();
                        for (int u : adj[v]) {
                            if (side[u]) {
                                side[u] = 0;
                                stack.push_back(u);
                            }
                        }
                    }
                    std::vector<double> w0, w1;
                    for (int e2 = 0; e2 < t.edge_count(); ++e2) {
                        if (e2 == e) continue;
                        (side[t.edges[e2].first] == 0 ? w0 : w1).push_back(weights[b][e2]);
                    }
                    f = delete_edge(f, static_cast<int>(b), e);
                    weights.erase(weights.begin() + b);
                    weights.push_back(std::move(w0));
                    weights.push_back(std::move(w1));
                    again = true;
                    break;
                }
            }
        }
    }

    const EdgeProductVector direct = lambda_tree(w);
    const EdgeProductVector degen = lambda_forest(f, w.n, weights);
    for (size_t i = 0; i < direct.entries.size(); ++i) {
        res.max_deviation =
            std::max(res.max_deviation, std::fabs(direct.entries[i] - degen.entries[i]));
    }
    res.ok = res.max_deviation <= tol;
    res.forest = std::move(f);
    res.surviving_weights = std::move(weights);
    return res;
}

}  // namespace tuffley
