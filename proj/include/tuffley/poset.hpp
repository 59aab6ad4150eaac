#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tuffley/bitset.hpp"
#include "tuffley/canonical.hpp"
#include "tuffley/forest.hpp"
#include "tuffley/run_config.hpp"

namespace tuffley {

/// Dense element table with cover lists, ranks and per-element down-set
/// bitsets. Elements are sorted by (rank, code), so indexing is
/// deterministic across runs and enumeration orders.
struct Poset {
    int n = 0;
    bool bounded = false;  // true once 0-hat and 1-hat are adjoined
    std::vector<CanonicalCode> codes;
    std::vector<XForest> forests;            // empty for the adjoined bounds
    std::vector<int> rank;                   // edge count; 0-hat = -1
    std::vector<std::vector<int>> covers;    // i -> elements covered by i
    std::vector<std::vector<int>> covered_by;
    std::vector<DynBitset> downset;          // may be empty if not built
    int bottom = -1;
    int top = -1;
    std::unordered_map<CanonicalCode, int> index_of;

    int size() const { return static_cast<int>(codes.size()); }
    bool has_downsets() const { return !downset.empty(); }

    /// x <= y. Requires down-sets.
    bool leq(int x, int y) const { return downset[y].test(x); }

    /// Elements covered by the adjoined maximum. Requires bounded.
    std::vector<int> coatoms() const;

    /// Elements per rank, from the lowest rank present upward.
    std::vector<int> rank_profile() const;
};

struct BuildOptions {
    Caps caps;
    ExecPolicy exec;
    bool reverse_frontier = false;  // alternate traversal order, for the
                                    // order-independence cross-check
};

/// Downward closure of enumerate_trivalent(n) under lower_covers; the cover
/// relation is exactly the single-move relation. No bounds adjoined.
Poset build_tuffley(int n, const BuildOptions& opts = {});

/// Adjoins 0-hat below the rank-0 elements and 1-hat above the maximal
/// elements (which become the coatoms), then materializes down-sets.
Poset augment(const Poset& p, const ExecPolicy& exec = {});

/// Rebuilds covered_by and (optionally) down-sets from `covers`; used after
/// loading a poset from a file.
void finalize_relations(Poset& p, bool with_downsets, const ExecPolicy& exec = {});

/// Exact set of elements z with z covered by both a and b. Throws
/// std::invalid_argument when a == b or either is not a coatom.
std::vector<int> common_lower_covers(const Poset& p, int a, int b);

struct GradedResult {
    bool ok = true;
    std::string message;
    std::vector<int> chain_a;  // two maximal chains of different lengths
    std::vector<int> chain_b;
};

/// Verifies all maximal chains have equal length. Works on possibly
/// corrupted posets (loaded from files).
GradedResult check_graded(const Poset& p);

struct ThinResult {
    bool ok = true;
    std::string message;
    int x = -1, y = -1;  // violating interval when !ok
};

/// Verifies every length-2 interval [x,y] has exactly 4 elements.
ThinResult check_thin(const Poset& p, const ExecPolicy& exec = {});

/// All maximal chains of an unbounded poset as sorted element-index tuples.
/// Throws std::invalid_argument on an empty poset.
std::vector<std::vector<int>> maximal_chains(const Poset& p);

/// Coatoms c with f <= c. Requires bounded poset with down-sets.
std::vector<int> coatoms_above(const Poset& p, int f);

}  // namespace tuffley
