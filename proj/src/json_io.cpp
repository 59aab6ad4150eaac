#include "tuffley/json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tuffley {

using nlohmann::json;

json forest_to_json(const XForest& f) {
    json j;
    j["n"] = f.n;
    j["blocks"] = json::array();
    for (const XTree& b : f.blocks) {
        json jb;
        jb["vertices"] = json::array();
        for (LabelMask m : b.labels) jb["vertices"].push_back(labels_of(m));
        jb["edges"] = json::array();
        for (auto [u, v] : b.edges) jb["edges"].push_back({u, v});
        j["blocks"].push_back(std::move(jb));
    }
    j["code"] = code_to_hex(canonical_code(f));
    return j;
}

XForest forest_from_json(const json& j) {
    XForest f;
    f.n = j.at("n").get<int>();
    for (const auto& jb : j.at("blocks")) {
        XTree t;
        for (const auto& vl : jb.at("vertices")) {
            t.labels.push_back(mask_of(vl.get<std::vector<int>>()));
        }
        for (const auto& je : jb.at("edges")) {
            int u = je.at(0).get<int>(), v = je.at(1).get<int>();
            t.edges.push_back({std::min(u, v), std::max(u, v)});
        }
        f.blocks.push_back(std::move(t));
    }
    return f;
}

json poset_to_json(const Poset& p) {
    json j;
    j["n"] = p.n;
    j["bounded"] = p.bounded;
    j["elements"] = json::array();
    for (const auto& c : p.codes) j["elements"].push_back(code_to_hex(c));
    j["ranks"] = p.rank;
    json covers = json::array();
    for (int i = 0; i < p.size(); ++i) {
        for (int k : p.covers[i]) covers.push_back({i, k});
    }
    j["covers"] = std::move(covers);
    return j;
}

Poset poset_from_json(const json& j, bool with_downsets) {
    Poset p;
    p.n = j.at("n").get<int>();
    p.bounded = j.value("bounded", false);
    for (const auto& h : j.at("elements")) {
        p.codes.push_back(code_from_hex(h.get<std::string>()));
    }
    p.rank = j.at("ranks").get<std::vector<int>>();
    if (p.rank.size() != p.codes.size()) {
        throw std::invalid_argument("poset_from_json: ranks/elements size mismatch");
    }
    p.forests.resize(p.codes.size());
    for (int i = 0; i < p.size(); ++i) {
        p.index_of.emplace(p.codes[i], i);
        if (p.bounded && p.rank[i] == -1) p.bottom = i;
        if (p.bounded && p.rank[i] == 2 * p.n - 2) p.top = i;
        if (!p.codes[i].empty() &&
            static_cast<unsigned char>(p.codes[i][0]) == p.n) {
            p.forests[i] = decode_forest(p.codes[i]);
        }
    }
    p.covers.assign(p.size(), {});
    for (const auto& e : j.at("covers")) {
        p.covers[e.at(0).get<int>()].push_back(e.at(1).get<int>());
    }
    for (auto& v : p.covers) std::sort(v.begin(), v.end());
    finalize_relations(p, with_downsets);
    return p;
}

json nni_graph_to_json(const NNIGraph& g) {
    json j;
    j["n"] = g.n;
    j["vertices"] = json::array();
    for (const auto& c : g.codes) j["vertices"].push_back(code_to_hex(c));
    j["edges"] = json::array();
    for (const auto& [e, tag] : g.tags) {
        json je;
        je["u"] = e.first;
        je["v"] = e.second;
        je["common_covers"] = json::array();
        for (const auto& c : tag.common_covers) {
            je["common_covers"].push_back(code_to_hex(c));
        }
        j["edges"].push_back(std::move(je));
    }
    return j;
}

json context_to_json(const CriticalContext& ctx) {
    json j;
    j["n"] = ctx.n;
    j["x"] = ctx.x;
    j["ci"] = code_to_hex(ctx.ci_code);
    j["cj"] = code_to_hex(ctx.cj_code);
    j["ck"] = code_to_hex(ctx.ck_code);
    j["fj"] = code_to_hex(ctx.fj_code);
    j["fk"] = code_to_hex(ctx.fk_code);
    j["fijk"] = code_to_hex(ctx.fijk_code);
    json tf;
    tf["edges"] = json::array();
    for (auto [u, v] : ctx.tf.edges) tf["edges"].push_back({u, v});
    tf["vertices"] = json::array();
    for (LabelMask m : ctx.tf.labels) tf["vertices"].push_back(labels_of(m));
    j["tf"] = std::move(tf);
    j["vmap"] = json::array();
    for (const auto& c : ctx.vmap) j["vmap"].push_back(code_to_hex(c));
    j["emap"] = json::array();
    for (const auto& c : ctx.emap) j["emap"].push_back(code_to_hex(c));
    return j;
}

namespace {

json interval_to_json(const IntervalCertificate& ic) {
    json j;
    j["top"] = code_to_hex(ic.top);
    j["ordering"] = json::array();
    for (size_t i = 0; i < ic.ordering.size(); ++i) {
        json entry;
        entry["coatom"] = code_to_hex(ic.ordering[i]);
        if (i < ic.prefixes.size()) {
            entry["prefix"] = json::array();
            for (const auto& c : ic.prefixes[i]) entry["prefix"].push_back(code_to_hex(c));
        }
        if (i < ic.children.size() && ic.children[i]) {
            entry["interval_certificate"] = interval_to_json(*ic.children[i]);
        } else {
            entry["interval_certificate"] = nullptr;
        }
        j["ordering"].push_back(std::move(entry));
    }
    return j;
}

}  // namespace

json certificate_to_json(const RcoCertificate& cert) {
    json j;
    j["verdict"] =
        cert.verdict == RcoCertificate::Verdict::exists ? "exists" : "not-exists";
    j["variant"] = to_string(cert.variant);
    j["condition_ii_only"] = cert.condition_ii_only;
    if (cert.verdict == RcoCertificate::Verdict::exists && cert.ordering) {
        j["ordering"] = interval_to_json(*cert.ordering)["ordering"];
    } else {
        j["maximal_reachable"] = json::array();
        for (const auto& subset : cert.maximal_reachable) {
            json js = json::array();
            for (const auto& c : subset) js.push_back(code_to_hex(c));
            j["maximal_reachable"].push_back(std::move(js));
        }
    }
    return j;
}

json report_to_json(const Theorem1Report& r) {
    json j;
    j["n"] = r.n;
    j["ok"] = r.ok;
    if (!r.failure.empty()) j["failure"] = r.failure;
    j["cycle_k"] = json::array();
    for (const auto& c : r.cycle_k) j["cycle_k"].push_back(code_to_hex(c));
    j["triplets"] = json::array();
    for (const auto& b : r.blocks) {
        json jb;
        jb["context"] = context_to_json(b.ctx);
        jb["coatoms_above"] = json::array();
        for (const auto& c : b.coatoms_above) {
            jb["coatoms_above"].push_back(code_to_hex(c));
        }
        jb["induced_vertices"] = b.induced_vertices;
        jb["induced_edges"] = b.induced_edges;
        jb["shape_ok"] = b.shape_ok;
        jb["tf_lemma_ok"] = b.tf_lemma_ok;
        jb["no_nontrivial_cycles_ok"] = b.no_nontrivial_cycles_ok;
        jb["fpath_ok"] = b.fpath_ok;
        j["triplets"].push_back(std::move(jb));
    }
    j["condition_ii"] = {{"nonstrict", certificate_to_json(r.dp_nonstrict)},
                         {"strict", certificate_to_json(r.dp_strict)}};
    j["obstruction_witness"] = json::array();
    for (const auto& c : r.obstruction_witness) {
        j["obstruction_witness"].push_back(code_to_hex(c));
    }
    return j;
}

std::string poset_to_dot(const Poset& p) {
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontsize=9];\n";
    std::map<int, std::vector<int>> by_rank;
    for (int i = 0; i < p.size(); ++i) by_rank[p.rank[i]].push_back(i);
    for (const auto& [r, elems] : by_rank) {
        os << "  { rank=same;";
        for (int i : elems) os << " e" << i << ";";
        os << " }\n";
    }
    for (int i = 0; i < p.size(); ++i) {
        os << "  e" << i << " [label=\"" << code_to_hex(p.codes[i]).substr(0, 12)
           << "\\nr=" << p.rank[i] << "\"];\n";
    }
    for (int i = 0; i < p.size(); ++i) {
        for (int k : p.covers[i]) os << "  e" << k << " -> e" << i << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string nni_to_dot(const NNIGraph& g, const std::vector<int>& bold) {
    std::ostringstream os;
    os << "graph gnni {\n  layout=circo;\n  node [shape=circle, fontsize=9];\n";
    std::set<int> bold_set(bold.begin(), bold.end());
    std::set<std::pair<int, int>> bold_edges;
    for (size_t i = 0; i < bold.size(); ++i) {
        int a = bold[i], b = bold[(i + 1) % bold.size()];
        bold_edges.insert({std::min(a, b), std::max(a, b)});
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        os << "  v" << v << " [label=\"" << v << "\"";
        if (bold_set.count(v)) os << ", penwidth=3";
        os << "];\n";
    }
    for (const auto& [e, tag] : g.tags) {
        os << "  v" << e.first << " -- v" << e.second;
        if (!bold.empty() && bold_edges.count(e)) os << " [penwidth=3]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string order_complex_to_text(
    const std::vector<std::vector<int>>& facets) {
    std::ostringstream os;
    int dim = 0;
    for (const auto& f : facets) dim = std::max(dim, static_cast<int>(f.size()) - 1);
    os << "# dim=" << dim << "\n";
    for (const auto& f : facets) {
        for (size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
        os << "\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace tuffley
