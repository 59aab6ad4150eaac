#pragma once

#include <string>
#include <vector>

#include "tuffley/forest.hpp"

namespace tuffley {

/// Per-edge weights in [0,1], indexed consistently with t.edges.
struct EdgeWeightVector {
    XTree tree;
    int n = 0;
    std::vector<double> weights;
};

/// Entry per unordered label pair {x,y}, x < y, in lexicographic order:
/// (1,2), (1,3), ..., (1,n), (2,3), ...
struct EdgeProductVector {
    int n = 0;
    std::vector<double> entries;

    static int pair_index(int n, int x, int y);
    double at(int x, int y) const { return entries[pair_index(n, x, y)]; }
};

std::vector<std::pair<int, int>> sorted_label_pairs(int n);

/// Edge indices of the unique path between the vertices carrying labels
/// x and y. Throws std::invalid_argument if a label is missing.
std::vector<int> path_edges(const XTree& t, int x, int y);

/// The defining map: entry {x,y} is the product of the weights along the
/// path between x and y.
EdgeProductVector lambda_tree(const EdgeWeightVector& w);

/// Same map on a forest: pairs in different blocks map to 0.
EdgeProductVector lambda_forest(const XForest& f, int n,
                                const std::vector<std::vector<double>>& weights);

struct DegenerationResult {
    bool ok = false;
    std::string flagged;  // set when a requested deletion is unsafe
    XForest forest;
    std::vector<std::vector<double>> surviving_weights;  // per block, per edge
    double max_deviation = 0.0;
};

/// Contracts every weight-1 edge and deletes every weight-0 edge of w (when
/// safe), then checks that the product vector of the degenerated forest on
/// the surviving weights equals lambda_tree(w). Unsafe deletions are flagged
/// and no forest is returned.
DegenerationResult weight_degeneration_check(const EdgeWeightVector& w,
                                             double tol = 1e-12);

}  // namespace tuffley
