#include "tuffley/canonical.hpp"

#include <algorithm>
#include <stdexcept>

namespace tuffley {

namespace {

constexpr char kOpen = '(';
constexpr char kClose = ')';

std::string rooted_code(const XTree& t, const std::vector<std::vector<int>>& adj,
                        int v, int parent) {
    std::string s;
    s += kOpen;
    const auto ls = labels_of(t.labels[v]);
    s += static_cast<char>(ls.size());
    for (int x : ls) s += static_cast<char>(x);
    std::vector<std::string> kids;
    for (int w : adj[v]) {
        if (w != parent) kids.push_back(rooted_code(t, adj, w, v));
    }
    std::sort(kids.begin(), kids.end());
    for (const auto& k : kids) s += k;
    s += kClose;
    return s;
}

}  // namespace

CanonicalCode tree_code(const XTree& t) {
    std::vector<std::vector<int>> adj(t.vertex_count());
    for (auto [u, v] : t.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::string best;
    for (int r = 0; r < t.vertex_count(); ++r) {
        std::string s = rooted_code(t, adj, r, -1);
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

CanonicalCode canonical_code(const XForest& f) {
    std::vector<std::string> codes;
    codes.reserve(f.blocks.size());
    for (const XTree& b : f.blocks) codes.push_back(tree_code(b));
    std::sort(codes.begin(), codes.end());
    std::string out;
    out += static_cast<char>(f.n);
    for (const auto& c : codes) out += c;
    return out;
}

namespace {

// Parses one '(' k labels children... ')' group, appending vertices/edges.
int parse_tree(const std::string& s, size_t& pos, XTree& t, int parent) {
    if (pos >= s.size() || s[pos] != kOpen) {
        throw std::invalid_argument("decode_forest: expected '('");
    }
    ++pos;
    if (pos >= s.size()) throw std::invalid_argument("decode_forest: truncated");
    const int k = static_cast<unsigned char>(s[pos++]);
    LabelMask m = 0;
    for (int i = 0; i < k; ++i) {
        if (pos >= s.size()) throw std::invalid_argument("decode_forest: truncated");
        m |= LabelMask(1) << (static_cast<unsigned char>(s[pos++]) - 1);
    }
    const int v = t.vertex_count();
    t.labels.push_back(m);
    if (parent >= 0) t.edges.push_back({std::min(parent, v), std::max(parent, v)});
    while (pos < s.size() && s[pos] == kOpen) parse_tree(s, pos, t, v);
    if (pos >= s.size() || s[pos] != kClose) {
        throw std::invalid_argument("decode_forest: expected ')'");
    }
    ++pos;
    return v;
}

}  // namespace

XForest decode_forest(const CanonicalCode& code) {
    if (code.empty()) throw std::invalid_argument("decode_forest: empty code");
    XForest f;
    f.n = static_cast<unsigned char>(code[0]);
    size_t pos = 1;
    while (pos < code.size()) {
        XTree t;
        parse_tree(code, pos, t, -1);
        f.blocks.push_back(std::move(t));
    }
    if (f.blocks.empty()) throw std::invalid_argument("decode_forest: no blocks");
    return f;
}

std::string code_to_hex(const CanonicalCode& code) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(code.size() * 2);
    for (unsigned char c : code) {
        out += digits[c >> 4];
        out += digits[c & 15];
    }
    return out;
}

CanonicalCode code_from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("code_from_hex: odd length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("code_from_hex: bad digit");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        out += static_cast<char>((nib(hex[i]) << 4) | nib(hex[i + 1]));
    }
    return out;
}

}  // namespace tuffley
