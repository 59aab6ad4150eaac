#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tuffley/nni.hpp"
#include "tuffley/poset.hpp"

namespace tuffley {

/// The definition's condition (ii) compares candidate elements y against
/// shared covers z. `nonstrict` reads the comparison as y <= z (the standard
/// formulation); `strict` reads it as y < z.
enum class Variant { nonstrict, strict };

std::string to_string(Variant v);

/// Per-coatom cover lists and cover->coatom masks, precomputed once from a
/// bounded poset with down-sets.
struct ConditionIIOracle {
    const Poset* p = nullptr;
    std::vector<int> coatoms;                       // element ids, code order
    std::vector<std::vector<int>> zlist;            // per-coatom covered elems
    std::unordered_map<int, uint32_t> cover_mask;   // z -> coatom bits covering z
    std::unordered_map<int, int> coatom_bit;        // element id -> bit

    explicit ConditionIIOracle(const Poset& poset);
};

/// True iff coatom c (element id) may extend the placed set S (coatom
/// bitmask) without violating condition (ii): every y below both c and some
/// member of S lies below a cover z shared between c and S.
bool valid_extension(const ConditionIIOracle& o, int c, uint32_t placed_mask,
                     Variant variant);

/// One level of a nested recursive-coatom-ordering certificate: the ordering
/// of the coatoms of [0-hat, top], and per entry the certificate of its own
/// interval together with the prefix that had to come first.
struct IntervalCertificate {
    CanonicalCode top;
    std::vector<CanonicalCode> ordering;
    std::vector<std::vector<CanonicalCode>> prefixes;  // per ordering entry
    std::vector<std::shared_ptr<IntervalCertificate>> children;  // may hold nullptr
};

struct RcoCertificate {
    enum class Verdict { exists, not_exists };
    Verdict verdict = Verdict::not_exists;
    Variant variant = Variant::nonstrict;
    bool condition_ii_only = false;  // top-level DP result, no interval certs
    std::shared_ptr<IntervalCertificate> ordering;          // when exists
    std::vector<std::vector<CanonicalCode>> maximal_reachable;  // when not
};

/// Subset DP over coatom sets: S + C is reachable iff S is reachable and
/// valid_extension(C, S). Verdict `exists` iff the full coatom set is
/// reachable; otherwise all maximal reachable subsets are reported.
RcoCertificate condition_ii_feasible(const Poset& p, Variant variant,
                                     const Caps& caps = {},
                                     const ExecPolicy& exec = {});

/// Full recursive decision for the interval [0-hat, top]: searches coatom
/// orderings in which required_prefix occupies an initial segment, every
/// step satisfies condition (ii), and every placed coatom's own interval
/// admits a recursive coatom ordering with the inherited prefix. Memoized on
/// (top, placed set, remaining prefix), with positive and negative caching.
RcoCertificate rco_search(const Poset& p, int top,
                          const std::vector<int>& required_prefix,
                          Variant variant, const Caps& caps = {});

struct ReplayResult {
    bool ok = true;
    std::string first_violation;
};

/// Re-checks an exists-certificate from scratch with naive quantifier loops
/// and cover-list reachability only; independent of the bitset machinery.
ReplayResult replay_certificate(const RcoCertificate& cert, const Poset& p);

/// Structured reproduction of the main non-shellability argument at n = 5
/// (n = 4 reports the absence of critical triplets instead).
struct Theorem1Report {
    int n = 0;
    bool ok = false;
    std::string failure;
    std::vector<CanonicalCode> cycle_k;
    struct TripletBlock {
        CriticalContext ctx;
        std::vector<CanonicalCode> coatoms_above;
        int induced_vertices = 0;
        int induced_edges = 0;
        bool shape_ok = false;   // C_i adjacent to all four, plus two pairs
        bool tf_lemma_ok = false;
        bool no_nontrivial_cycles_ok = false;
        bool fpath_ok = false;
    };
    std::vector<TripletBlock> blocks;
    RcoCertificate dp_nonstrict;
    RcoCertificate dp_strict;
    std::vector<CanonicalCode> obstruction_witness;  // one maximal reachable set
};

Theorem1Report theorem1_report(int n, const Caps& caps = {},
                               const ExecPolicy& exec = {});

}  // namespace tuffley
