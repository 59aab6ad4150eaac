#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tuffley/nni.hpp"
#include "tuffley/poset.hpp"
#include "tuffley/shellability.hpp"

namespace tuffley {

/// {"n": int, "blocks": [{"vertices": [[labels...],...], "edges": [[i,j],...]}]}
nlohmann::json forest_to_json(const XForest& f);
XForest forest_from_json(const nlohmann::json& j);

/// {"n":..., "elements":[hex codes...], "covers":[[i,j],...], "ranks":[...]}
/// where [i,j] means element i covers element j.
nlohmann::json poset_to_json(const Poset& p);
Poset poset_from_json(const nlohmann::json& j, bool with_downsets = true);

nlohmann::json nni_graph_to_json(const NNIGraph& g);
nlohmann::json context_to_json(const CriticalContext& ctx);
nlohmann::json certificate_to_json(const RcoCertificate& cert);
nlohmann::json report_to_json(const Theorem1Report& r);

/// Hasse diagram with ranks as same-rank clusters.
std::string poset_to_dot(const Poset& p);

/// G_NNI(n); vertices in `bold` (e.g. the canonical cycle K) are emphasized
/// along with the cycle edges between consecutive ones.
std::string nni_to_dot(const NNIGraph& g, const std::vector<int>& bold = {});

/// One facet per line, space-separated element indices, after a
/// "# dim=..." header.
std::string order_complex_to_text(
    const std::vector<std::vector<int>>& facets);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tuffley
