#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tuffley {

/// Labels are drawn from X = {1..n} and stored as a bitmask: bit (x-1) set
/// means label x is present. An empty mask is an unlabeled vertex.
using LabelMask = uint32_t;

constexpr int kMaxGroundSet = 20;

LabelMask mask_of(const std::vector<int>& labels);
std::vector<int> labels_of(LabelMask m);

/// A tree whose vertices carry (possibly empty) label sets. Edges are
/// unordered vertex-index pairs, normalized to u < v.
struct XTree {
    std::vector<LabelMask> labels;          // per-vertex label mask
    std::vector<std::pair<int, int>> edges;

    int vertex_count() const { return static_cast<int>(labels.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    std::vector<int> degrees() const;
    LabelMask support() const;

    /// Neighbors of v, ascending.
    std::vector<int> neighbors(int v) const;
};

/// A set of blocks whose nonempty label sets partition {1..n}.
struct XForest {
    int n = 0;
    std::vector<XTree> blocks;

    /// Total edge count over blocks; this is the poset rank.
    int rank() const;

    static XForest single_tree(int n, XTree t);
};

struct ValidationResult {
    bool ok = true;
    std::string violation;  // names the first violated invariant

    explicit operator bool() const { return ok; }
};

/// Checks every XTree and XForest invariant; total function.
ValidationResult validate(const XForest& f);

/// Contracts edge `edge_index` of block `block`: the edge is removed and its
/// endpoints merge into one vertex labeled by the union of their label sets.
/// The optional out-parameter receives the map old vertex index -> new index
/// within the affected block.
XForest contract_edge(const XForest& f, int block, int edge_index,
                      std::vector<int>* vertex_map = nullptr);

/// Deletes edge `edge_index` of block `block`, splitting it into two blocks.
/// Precondition: the deletion is safe.
XForest delete_edge(const XForest& f, int block, int edge_index);

/// An edge may be safely deleted when each endpoint is labeled or has
/// degree greater than 3.
bool is_safe_deletion(const XTree& t, int edge_index);

/// All (block, edge_index) pairs whose deletion is safe.
std::vector<std::pair<int, int>> safe_deletions(const XForest& f);

/// Results of every single contraction and every safe deletion, deduplicated
/// by canonical code and paired with that code.
std::vector<std::pair<std::string, XForest>> lower_covers(const XForest& f);

/// True iff t is a maximal element: leaves bijectively labeled by singletons
/// and every internal vertex unlabeled of degree exactly 3.
bool is_trivalent(const XTree& t, int n);

/// Edge indices whose endpoints are both internal vertices.
std::vector<int> internal_edges(const XTree& t);

/// The two trees obtained by the two subtree swaps across the internal edge
/// `edge_index` of a trivalent tree. Throws std::invalid_argument if the
/// edge is a leaf edge.
std::pair<XTree, XTree> nni_neighbors(const XTree& t, int edge_index);

/// All leaf-labeled trivalent trees on {1..n}, pairwise non-isomorphic,
/// ordered by canonical code. Throws std::invalid_argument for n < 3.
std::vector<XTree> enumerate_trivalent(int n);

}  // namespace tuffley
