#include "tuffley/shellability.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tuffley {

std::string to_string(Variant v) {
    return v == Variant::nonstrict ? "nonstrict" : "strict";
}

ConditionIIOracle::ConditionIIOracle(const Poset& poset) : p(&poset) {
    if (!poset.bounded || !poset.has_downsets()) {
        throw std::invalid_argument("ConditionIIOracle: need bounded poset with down-sets");
    }
    coatoms = poset.coatoms();  // index order == code order within a rank
    for (size_t b = 0; b < coatoms.size(); ++b) {
        coatom_bit[coatoms[b]] = static_cast<int>(b);
        zlist.push_back(poset.covers[coatoms[b]]);
        for (int z : zlist.back()) cover_mask[z] |= uint32_t(1) << b;
    }
}

namespace {

// Shared core of valid_extension: Y = down(c) & U must be contained in the
// union of down(z) over covers z of c shared with the placed set (minus the
// z themselves under the strict reading).
bool valid_extension_with_union(const ConditionIIOracle& o, int cbit,
                                const DynBitset& placed_union, uint32_t placed_mask,
                                Variant variant) {
    const Poset& p = *o.p;
    DynBitset y = p.downset[o.coatoms[cbit]];
    y &= placed_union;
    if (!y.any()) return true;
    DynBitset d(p.size());
    std::vector<int> shared;
    for (int z : o.zlist[cbit]) {
        if (o.cover_mask.at(z) & placed_mask & ~(uint32_t(1) << cbit)) {
            shared.push_back(z);
            d |= p.downset[z];
        }
    }
    if (variant == Variant::strict) {
        for (int z : shared) d.reset(z);
    }
    return y.subset_of(d);
}

DynBitset placed_union_of(const ConditionIIOracle& o, uint32_t placed_mask) {
    DynBitset u(o.p->size());
    for (uint32_t m = placed_mask; m; m &= m - 1) {
        u |= o.p->downset[o.coatoms[__builtin_ctz(m)]];
    }
    return u;
}

}  // namespace

bool valid_extension(const ConditionIIOracle& o, int c, uint32_t placed_mask,
                     Variant variant) {
    auto it = o.coatom_bit.find(c);
    if (it == o.coatom_bit.end()) {
        throw std::invalid_argument("valid_extension: not a coatom");
    }
    const int cbit = it->second;
    if (placed_mask & (uint32_t(1) << cbit)) {
        throw std::invalid_argument("valid_extension: c already placed");
    }
    if (placed_mask == 0) return true;
    return valid_extension_with_union(o, cbit, placed_union_of(o, placed_mask),
                                      placed_mask, variant);
}

RcoCertificate condition_ii_feasible(const Poset& p, Variant variant,
                                     const Caps& caps, const ExecPolicy& exec) {
    ConditionIIOracle oracle(p);
    const int t = static_cast<int>(oracle.coatoms.size());
    if (t > caps.dp_coatom_cap) {
        throw ResourceError("condition_ii_feasible: coatom count exceeds DP cap");
    }
#ifdef _OPENMP
    if (exec.parallel && exec.threads > 0) omp_set_num_threads(exec.threads);
#endif
    Deadline deadline(caps.time_budget_seconds);

    const uint32_t full = (t == 32) ? ~uint32_t(0) : (uint32_t(1) << t) - 1;
    std::vector<signed char> pred(size_t(1) << t, -2);  // -2 unreachable, -1 root
    pred[0] = -1;
    std::vector<uint32_t> level{0};

    while (!level.empty() && pred[full] == -2) {
        deadline.check("condition-ii DP");
        const int ls = static_cast<int>(level.size());
        std::vector<std::vector<std::pair<uint32_t, int>>> found(ls);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (exec.parallel)
#endif
        for (int i = 0; i < ls; ++i) {
            const uint32_t s = level[i];
            const DynBitset u = placed_union_of(oracle, s);
            for (int c = 0; c < t; ++c) {
                if (s & (uint32_t(1) << c)) continue;
                if (s == 0 ||
                    valid_extension_with_union(oracle, c, u, s, variant)) {
                    found[i].push_back({s | (uint32_t(1) << c), c});
                }
            }
        }
        std::vector<uint32_t> next;
        for (int i = 0; i < ls; ++i) {
            for (auto [ns, c] : found[i]) {
                if (pred[ns] == -2) {
                    pred[ns] = static_cast<signed char>(c);
                    next.push_back(ns);
                }
            }
        }
        std::sort(next.begin(), next.end());
        level = std::move(next);
    }

    RcoCertificate cert;
    cert.variant = variant;
    cert.condition_ii_only = true;
    if (pred[full] != -2) {
        cert.verdict = RcoCertificate::Verdict::exists;
        auto ic = std::make_shared<IntervalCertificate>();
        ic->top = p.codes[p.top];
        std::vector<int> order;
        for (uint32_t s = full; s != 0;) {
            const int c = pred[s];
            order.push_back(c);
            s &= ~(uint32_t(1) << c);
        }
        std::reverse(order.begin(), order.end());
        for (int c : order) {
            ic->ordering.push_back(p.codes[oracle.coatoms[c]]);
            ic->prefixes.emplace_back();
            ic->children.push_back(nullptr);
        }
        cert.ordering = std::move(ic);
    } else {
        cert.verdict = RcoCertificate::Verdict::not_exists;
        std::vector<uint32_t> reachable;
        for (uint32_t s = 0; s <= full; ++s) {
            if (pred[s] != -2) reachable.push_back(s);
        }
        std::sort(reachable.begin(), reachable.end(),
                  [](uint32_t a, uint32_t b) {
                      const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
                      return pa != pb ? pa > pb : a < b;
                  });
        for (size_t i = 0; i < reachable.size(); ++i) {
            bool maximal = true;
            for (size_t j = 0; j < i && maximal; ++j) {
                if ((reachable[i] & reachable[j]) == reachable[i]) maximal = false;
            }
            if (!maximal) continue;
            std::vector<CanonicalCode> subset;
            for (int c = 0; c < t; ++c) {
                if (reachable[i] & (uint32_t(1) << c)) {
                    subset.push_back(p.codes[oracle.coatoms[c]]);
                }
            }
            cert.maximal_reachable.push_back(std::move(subset));
        }
    }
    return cert;
}

namespace {

// Per-interval machinery for the recursive search: the "coatoms" of
// [0-hat, top] are the elements covered by top.
struct LocalOracle {
    std::vector<int> z;                       // covered elements of top
    std::unordered_map<int, int> bit_of;
    std::vector<std::vector<int>> zz;         // covers of each z
    std::unordered_map<int, uint32_t> zz_mask;  // w -> bits of z covering w
};

struct MemoKey {
    int top;
    uint32_t placed;
    uint32_t rem_prefix;
    bool operator==(const MemoKey& o) const {
        return top == o.top && placed == o.placed && rem_prefix == o.rem_prefix;
    }
};

struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const {
        size_t h = std::hash<int>()(k.top);
        h ^= std::hash<uint32_t>()(k.placed) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::hash<uint32_t>()(k.rem_prefix) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

class RcoSearcher {
public:
    RcoSearcher(const Poset& p, Variant var, const Caps& caps)
        : p_(p), var_(var), caps_(caps), deadline_(caps.time_budget_seconds) {}

    std::shared_ptr<IntervalCertificate> decide(int top, uint32_t prefix_mask) {
        const MemoKey key{top, 0, prefix_mask};
        if (auto it = pos_.find(key); it != pos_.end()) return it->second;
        if (fail_.count(key)) return nullptr;

        const LocalOracle& lo = local(top);
        auto cert = std::make_shared<IntervalCertificate>();
        cert->top = p_.codes[top];
        if (lo.z.empty()) {
            pos_.emplace(key, cert);
            return cert;
        }
        if (search(top, lo, 0, prefix_mask, *cert)) {
            pos_.emplace(key, cert);
            return cert;
        }
        fail_.insert(key);
        return nullptr;
    }

    const LocalOracle& local(int top) {
        auto it = locals_.find(top);
        if (it != locals_.end()) return it->second;
        LocalOracle lo;
        lo.z = p_.covers[top];
        if (lo.z.size() > 31) {
            throw ResourceError("rco_search: interval coatom count exceeds 31");
        }
        for (size_t b = 0; b < lo.z.size(); ++b) {
            lo.bit_of[lo.z[b]] = static_cast<int>(b);
            lo.zz.push_back(p_.covers[lo.z[b]]);
            for (int w : lo.zz.back()) lo.zz_mask[w] |= uint32_t(1) << b;
        }
        return locals_.emplace(top, std::move(lo)).first->second;
    }

private:
    bool valid_ext(const LocalOracle& lo, int cbit, uint32_t placed) const {
        DynBitset u(p_.size());
        for (uint32_t m = placed; m; m &= m - 1) {
            u |= p_.downset[lo.z[__builtin_ctz(m)]];
        }
        DynBitset y = p_.downset[lo.z[cbit]];
        y &= u;
        if (!y.any()) return true;
        DynBitset d(p_.size());
        std::vector<int> shared;
        for (int w : lo.zz[cbit]) {
            if (lo.zz_mask.at(w) & placed) {
                shared.push_back(w);
                d |= p_.downset[w];
            }
        }
        if (var_ == Variant::strict) {
            for (int w : shared) d.reset(w);
        }
        return y.subset_of(d);
    }

    bool search(int top, const LocalOracle& lo, uint32_t placed, uint32_t rem_prefix,
                IntervalCertificate& cert) {
        deadline_.check("rco search");
        const int t = static_cast<int>(lo.z.size());
        const uint32_t full = (uint32_t(1) << t) - 1;
        if (placed == full) return true;
        const MemoKey key{top, placed, rem_prefix};
        if (fail_.count(key)) return false;

        const uint32_t candidates = rem_prefix ? rem_prefix : (full & ~placed);
        for (uint32_t m = candidates; m; m &= m - 1) {
            const int cbit = __builtin_ctz(m);
            if (placed != 0 && !valid_ext(lo, cbit, placed)) continue;

            // Condition (i): the interval below this coatom must admit an
            // ordering whose initial segment is exactly the covers shared
            // with already-placed coatoms (empty for the first placement).
            const int c = lo.z[cbit];
            uint32_t child_prefix = 0;
            std::vector<CanonicalCode> child_prefix_codes;
            if (placed != 0) {
                const LocalOracle& cl = local(c);
                for (size_t b = 0; b < cl.z.size(); ++b) {
                    const int w = cl.z[b];
                    auto it = lo.zz_mask.find(w);
                    if (it != lo.zz_mask.end() && (it->second & placed)) {
                        child_prefix |= uint32_t(1) << b;
                        child_prefix_codes.push_back(p_.codes[w]);
                    }
                }
            }
            auto child = decide(c, child_prefix);
            if (!child) continue;

            cert.ordering.push_back(p_.codes[c]);
            cert.prefixes.push_back(child_prefix_codes);
            cert.children.push_back(child);
            if (search(top, lo, placed | (uint32_t(1) << cbit),
                       rem_prefix & ~(uint32_t(1) << cbit), cert)) {
                return true;
            }
            cert.ordering.pop_back();
            cert.prefixes.pop_back();
            cert.children.pop_back();
        }
        fail_.insert(key);
        return false;
    }

    const Poset& p_;
    Variant var_;
    Caps caps_;
    Deadline deadline_;
    std::unordered_map<int, LocalOracle> locals_;
    std::unordered_map<MemoKey, std::shared_ptr<IntervalCertificate>, MemoKeyHash> pos_;
    std::unordered_set<MemoKey, MemoKeyHash> fail_;
};

}  // namespace

RcoCertificate rco_search(const Poset& p, int top,
                          const std::vector<int>& required_prefix, Variant variant,
                          const Caps& caps) {
    if (!p.bounded || !p.has_downsets()) {
        throw std::invalid_argument("rco_search: need bounded poset with down-sets");
    }
    RcoCertificate out;
    out.variant = variant;

    // Condition (ii) alone is a relaxation of the full search over this
    // interval, so an infeasible DP already settles the verdict.
    if (top == p.top) {
        RcoCertificate dp = condition_ii_feasible(p, variant, caps);
        if (dp.verdict == RcoCertificate::Verdict::not_exists) {
            dp.condition_ii_only = true;
            return dp;
        }
    }

    RcoSearcher searcher(p, variant, caps);
    const LocalOracle& lo = searcher.local(top);
    uint32_t prefix_mask = 0;
    for (int e : required_prefix) {
        auto it = lo.bit_of.find(e);
        if (it == lo.bit_of.end()) {
            throw std::invalid_argument("rco_search: prefix element is not a coatom of the interval");
        }
        prefix_mask |= uint32_t(1) << it->second;
    }
    auto cert = searcher.decide(top, prefix_mask);
    if (cert) {
        out.verdict = RcoCertificate::Verdict::exists;
        out.ordering = cert;
    } else {
        out.verdict = RcoCertificate::Verdict::not_exists;
    }
    return out;
}

namespace {

// Reachability over cover lists only; the replay checker's independent
// notion of <=.
std::vector<std::vector<char>> naive_leq(const Poset& p) {
    std::vector<std::vector<char>> leq(p.size(), std::vector<char>(p.size(), 0));
    for (int i = 0; i < p.size(); ++i) {
        std::vector<int> stack{i};
        leq[i][i] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : p.covers[v]) {
                if (!leq[i][w]) {
                    leq[i][w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return leq;  // leq[i][j] == 1 means j <= i
}

struct ReplayState {
    const Poset& p;
    Variant variant;
    const std::vector<std::vector<char>>& below;
    std::set<std::tuple<const IntervalCertificate*, int, std::vector<int>>> done;
};

bool replay_interval(ReplayState& st, const IntervalCertificate& ic, int top,
                     const std::vector<int>& required_prefix, std::string& err) {
    {
        auto key = std::make_tuple(&ic, top, required_prefix);
        if (st.done.count(key)) return true;
        st.done.insert(key);
    }
    const Poset& p = st.p;
    if (ic.top != p.codes[top]) {
        err = "certificate top mismatch at " + code_to_hex(p.codes[top]);
        return false;
    }
    std::vector<int> order;
    for (const auto& code : ic.ordering) {
        auto it = p.index_of.find(code);
        if (it == p.index_of.end()) {
            err = "unknown coatom code in ordering";
            return false;
        }
        order.push_back(it->second);
    }
    std::set<int> claimed(order.begin(), order.end());
    std::set<int> actual(p.covers[top].begin(), p.covers[top].end());
    if (claimed != actual || order.size() != actual.size()) {
        err = "ordering is not a permutation of the coatoms of [0,"
              + code_to_hex(p.codes[top]) + "]";
        return false;
    }
    std::set<int> req(required_prefix.begin(), required_prefix.end());
    std::set<int> head(order.begin(), order.begin() + std::min(order.size(), req.size()));
    if (head != req) {
        err = "required prefix does not form the initial segment under "
              + code_to_hex(p.codes[top]);
        return false;
    }

    for (size_t j = 0; j < order.size(); ++j) {
        const int cj = order[j];
        // Condition (ii), naive quantifiers: every y below cj and below some
        // earlier ci needs a shared cover z with y <= z (y < z when strict).
        for (size_t i = 0; i < j; ++i) {
            const int ci = order[i];
            for (int y = 0; y < p.size(); ++y) {
                if (!(st.below[cj][y] && y != cj)) continue;
                if (!(st.below[ci][y] && y != ci)) continue;
                bool witnessed = false;
                for (size_t k = 0; k < j && !witnessed; ++k) {
                    for (int z : p.covers[cj]) {
                        const bool z_shared =
                            std::find(p.covers[order[k]].begin(), p.covers[order[k]].end(),
                                      z) != p.covers[order[k]].end();
                        if (!z_shared) continue;
                        const bool yz = st.variant == Variant::strict
                                            ? (st.below[z][y] && y != z)
                                            : st.below[z][y];
                        if (yz) {
                            witnessed = true;
                            break;
                        }
                    }
                }
                if (!witnessed) {
                    err = "condition (ii) fails in [" + code_to_hex(p.codes[top]) +
                          "] at position " + std::to_string(j + 1);
                    return false;
                }
            }
        }
        // Condition (i): recompute the child's required prefix and recurse.
        std::vector<int> child_prefix;
        if (j > 0) {
            for (int z : p.covers[cj]) {
                for (size_t k = 0; k < j; ++k) {
                    if (std::find(p.covers[order[k]].begin(), p.covers[order[k]].end(),
                                  z) != p.covers[order[k]].end()) {
                        child_prefix.push_back(z);
                        break;
                    }
                }
            }
        }
        if (j < ic.prefixes.size()) {
            std::set<int> recorded;
            for (const auto& code : ic.prefixes[j]) {
                auto it = p.index_of.find(code);
                if (it == p.index_of.end()) {
                    err = "unknown code in recorded prefix";
                    return false;
                }
                recorded.insert(it->second);
            }
            if (recorded != std::set<int>(child_prefix.begin(), child_prefix.end())) {
                err = "recorded prefix disagrees with recomputation at position " +
                      std::to_string(j + 1);
                return false;
            }
        }
        if (j >= ic.children.size() || !ic.children[j]) {
            err = "missing interval certificate at position " + std::to_string(j + 1);
            return false;
        }
        if (!replay_interval(st, *ic.children[j], cj, child_prefix, err)) return false;
    }
    return true;
}

}  // namespace

ReplayResult replay_certificate(const RcoCertificate& cert, const Poset& p) {
    ReplayResult r;
    if (cert.verdict != RcoCertificate::Verdict::exists || !cert.ordering) {
        r.ok = false;
        r.first_violation = "certificate does not claim existence";
        return r;
    }
    if (cert.condition_ii_only) {
        r.ok = false;
        r.first_violation = "condition-ii-only certificate has no interval structure";
        return r;
    }
    const auto below = naive_leq(p);
    ReplayState st{p, cert.variant, below, {}};
    std::string err;
    if (!replay_interval(st, *cert.ordering, p.top, {}, err)) {
        r.ok = false;
        r.first_violation = err;
    }
    return r;
}

Theorem1Report theorem1_report(int n, const Caps& caps, const ExecPolicy& exec) {
    if (n != 4 && n != 5) {
        throw std::invalid_argument("theorem1_report: supported for n in {4, 5}");
    }
    Theorem1Report rep;
    rep.n = n;

    Poset s = build_tuffley(n, {caps, exec});
    Poset hat = augment(s, exec);
    NNIGraph g = build_nni_graph(n, caps, exec);

    rep.dp_nonstrict = condition_ii_feasible(hat, Variant::nonstrict, caps, exec);
    rep.dp_strict = condition_ii_feasible(hat, Variant::strict, caps, exec);

    if (n == 4) {
        const auto triplets = find_critical_triplets(4);
        if (!triplets.empty()) {
            rep.failure = "unexpected critical triplets at n=4";
            return rep;
        }
        RcoCertificate rc = rco_search(hat, hat.top, {}, Variant::nonstrict, caps);
        rep.ok = rc.verdict == RcoCertificate::Verdict::exists &&
                 rep.dp_nonstrict.verdict == RcoCertificate::Verdict::exists;
        if (!rep.ok) rep.failure = "expected an ordering to exist at n=4";
        return rep;
    }

    // (a) the canonical nontrivial cycle K.
    const auto K = canonical_cycle_K(n);
    std::vector<int> kv;
    for (const XTree& t : K) {
        rep.cycle_k.push_back(canonical_code(XForest::single_tree(n, t)));
        kv.push_back(g.index_of_code(rep.cycle_k.back()));
        if (kv.back() < 0) {
            rep.failure = "cycle K vertex missing from the graph";
            return rep;
        }
    }
    if (classify_cycle(g, kv) != CycleClass::nontrivial) {
        rep.failure = "cycle K failed to classify as nontrivial";
        return rep;
    }

    // (b)+(c) each choice of the latest cycle vertex yields a critical
    // triplet whose neighborhood above F_ijk has the documented shape.
    for (int i = 0; i < 6; ++i) {
        const XTree& ci = K[i];
        const CanonicalCode cj = rep.cycle_k[(i + 5) % 6];
        const CanonicalCode ck = rep.cycle_k[(i + 1) % 6];
        CriticalContext ctx;
        bool made = false;
        const auto deg = ci.degrees();
        for (int leaf = 0; leaf < ci.vertex_count() && !made; ++leaf) {
            if (ci.labels[leaf] == 0) continue;
            try {
                ctx = make_critical_context(n, ci, labels_of(ci.labels[leaf])[0], cj, ck);
                made = true;
            } catch (const std::invalid_argument&) {
            }
        }
        (void)deg;
        if (!made) {
            rep.failure = "cycle vertex " + std::to_string(i) +
                          " did not yield a critical triplet with its neighbors";
            return rep;
        }

        Theorem1Report::TripletBlock blk;
        blk.ctx = ctx;
        const int f = hat.index_of.at(ctx.fijk_code);
        const InducedSubgraph sub = induced_subgraph_above(hat, g, f);
        for (int e : sub.elems) blk.coatoms_above.push_back(hat.codes[e]);
        blk.induced_vertices = static_cast<int>(sub.elems.size());
        blk.induced_edges = static_cast<int>(sub.edges.size());

        // Shape: C_i adjacent to the other four, plus the pairs {C_j, D_j}
        // and {C_k, D_k}.
        auto local_of = [&](const CanonicalCode& code) {
            for (size_t q = 0; q < sub.elems.size(); ++q) {
                if (hat.codes[sub.elems[q]] == code) return static_cast<int>(q);
            }
            return -1;
        };
        const int li = local_of(ctx.ci_code);
        const int lj = local_of(ctx.cj_code);
        const int lk = local_of(ctx.ck_code);
        if (blk.induced_vertices == 5 && blk.induced_edges == 6 && li >= 0 &&
            lj >= 0 && lk >= 0) {
            auto adjacent = [&](int a, int b) {
                const auto e = std::minmax(a, b);
                return std::find(sub.edges.begin(), sub.edges.end(),
                                 std::make_pair(e.first, e.second)) != sub.edges.end();
            };
            int deg_i = 0;
            for (int q = 0; q < 5; ++q) {
                if (q != li && adjacent(li, q)) ++deg_i;
            }
            std::vector<int> rest;
            for (int q = 0; q < 5; ++q) {
                if (q != li && q != lj && q != lk) rest.push_back(q);
            }
            if (deg_i == 4 && rest.size() == 2 && !adjacent(lj, lk) &&
                !adjacent(rest[0], rest[1])) {
                const bool pair_a = adjacent(lj, rest[0]) && adjacent(lk, rest[1]);
                const bool pair_b = adjacent(lj, rest[1]) && adjacent(lk, rest[0]);
                blk.shape_ok = pair_a != pair_b;
            }
        }
        blk.tf_lemma_ok = verify_tf_lemma(hat, ctx).ok;
        blk.no_nontrivial_cycles_ok = verify_no_nontrivial_f_cycles(hat, g, ctx).ok;
        blk.fpath_ok = verify_fpath_exclusivity(hat, g, ctx).ok;
        if (!blk.shape_ok || !blk.tf_lemma_ok || !blk.no_nontrivial_cycles_ok ||
            !blk.fpath_ok) {
            rep.failure = "sub-verification failed for cycle vertex " + std::to_string(i);
            rep.blocks.push_back(std::move(blk));
            return rep;
        }
        rep.blocks.push_back(std::move(blk));
    }

    // (d) the feasibility verdicts and an obstruction witness.
    if (rep.dp_nonstrict.verdict != RcoCertificate::Verdict::not_exists ||
        rep.dp_strict.verdict != RcoCertificate::Verdict::not_exists) {
        rep.failure = "expected condition (ii) to be infeasible at n=5";
        return rep;
    }
    if (!rep.dp_nonstrict.maximal_reachable.empty()) {
        rep.obstruction_witness = rep.dp_nonstrict.maximal_reachable.front();
    }
    rep.ok = true;
    return rep;
}

}  // namespace tuffley
