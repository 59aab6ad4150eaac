#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tuffley/canonical.hpp"
#include "tuffley/forest.hpp"
#include "tuffley/poset.hpp"

namespace tuffley {

/// One recorded NNI witness for a graph edge: the source vertex, the index
/// of the swapped internal edge in its tree, and the common covered
/// element(s) of the pair.
struct NNIEdgeTag {
    std::vector<std::pair<int, int>> moves;       // (vertex, internal edge idx)
    std::vector<CanonicalCode> common_covers;
};

/// The graph on the maximal elements: an edge joins two trees iff they are
/// related by a single NNI, equivalently iff they cover a common element.
/// Both routes are built and must agree edge-for-edge.
struct NNIGraph {
    int n = 0;
    std::vector<XTree> trees;                 // vertex order = code order
    std::vector<CanonicalCode> codes;
    std::vector<std::vector<int>> adj;        // sorted neighbor lists
    std::map<std::pair<int, int>, NNIEdgeTag> tags;  // key u < v

    int vertex_count() const { return static_cast<int>(trees.size()); }
    int edge_count() const { return static_cast<int>(tags.size()); }
    bool adjacent(int a, int b) const;
    int index_of_code(const CanonicalCode& c) const;
};

/// Builds G_NNI(n) via NNI moves and cross-validates edge-for-edge against
/// the common-covered-element relation; a mismatch throws InternalError.
NNIGraph build_nni_graph(int n, const Caps& caps = {}, const ExecPolicy& exec = {});

struct ConnectivityReport {
    bool connected = true;
    std::vector<std::vector<int>> components;
};

ConnectivityReport gallery_connected(const NNIGraph& g);

enum class CycleClass { trivial, nontrivial, not_a_cycle };

/// Classifies a vertex list: trivial iff a 3-cycle (the three trees are then
/// checked to share a common covered element), nontrivial iff a simple cycle
/// of length > 3.
CycleClass classify_cycle(const NNIGraph& g, const std::vector<int>& cycle);

/// The six caterpillar trees forming the canonical nontrivial cycle K, in
/// cycle order. Throws std::invalid_argument for n < 5.
std::vector<XTree> canonical_cycle_K(int n);

/// A critical triplet {C_i, C_j, C_k} with its derived context: the leaf x
/// of C_i whose pendant edge is flanked by two internal edges, the shared
/// covers F_j / F_k, the meet-like element F_ijk, the tree T(F_ijk), and the
/// vertex/edge association maps.
struct CriticalContext {
    int n = 0;
    XTree ci;
    int x = 0;             // distinguished leaf label
    int ex = -1;           // leaf edge of x in ci
    int ex1 = -1, ex2 = -1;  // flanking internal edges in ci
    CanonicalCode ci_code, cj_code, ck_code;
    XForest fj, fk, fijk;
    CanonicalCode fj_code, fk_code, fijk_code;
    XTree tf;  // the ([n]-{x})-tree of F_ijk
    std::vector<CanonicalCode> vmap;  // T_F vertex -> code of the cover A
    std::vector<CanonicalCode> emap;  // T_F edge index -> code of the coatom
};

/// All critical triplets on {1..n}, both choices of C_j and C_k per flanking
/// edge, deduplicated by (C_i, x, {C_j, C_k}).
std::vector<CriticalContext> find_critical_triplets(int n);

/// Builds the context for a specific triplet; cj/ck must each be one of the
/// two NNI results over the corresponding flanking edge.
CriticalContext make_critical_context(int n, const XTree& ci, int x,
                                      const CanonicalCode& cj,
                                      const CanonicalCode& ck);

struct CheckResult {
    bool ok = true;
    std::string counterexample;
};

/// Element ids (in the bounded poset) of the coatoms above f, plus the
/// induced subgraph of g on them (as indices into that id list).
struct InducedSubgraph {
    std::vector<int> elems;                    // poset element ids
    std::vector<std::pair<int, int>> edges;    // indices into elems
    /// pairs sharing a covered element above f; divergence from `edges`
    /// is reported rather than assumed impossible
    std::vector<std::pair<int, int>> shared_above_edges;
    bool diverges = false;
};

InducedSubgraph induced_subgraph_above(const Poset& p, const NNIGraph& g, int f);

/// For every A covering F_ijk and coatom C above F_ijk, checks
/// (C covers A) iff (e(C) is incident to v(A) in T_F), and the corollary
/// that two coatoms share a covered element above F_ijk iff their edges
/// share a vertex.
CheckResult verify_tf_lemma(const Poset& p, const CriticalContext& ctx);

/// No simple cycle of length > 3 among coatoms above F_ijk, and that
/// induced subgraph is connected.
CheckResult verify_no_nontrivial_f_cycles(const Poset& p, const NNIGraph& g,
                                          const CriticalContext& ctx);

/// No simple path from any coatom above F_ijk to C_i contains both C_j and
/// C_k.
CheckResult verify_fpath_exclusivity(const Poset& p, const NNIGraph& g,
                                     const CriticalContext& ctx);

}  // namespace tuffley
