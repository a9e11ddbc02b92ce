#pragma once

// JSON serialisation (field names in docs/schemas.md), the anisotropy spec
// grammar used on the command line, and SVG rendering.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wulff_clusters/clusters.hpp"
#include "wulff_clusters/verify.hpp"

namespace wulff::io {

using json = nlohmann::ordered_json;

json to_json(const Anisotropy& a);
// Inverse of to_json; throws InvalidArgument / UnsupportedKind.
Anisotropy anisotropy_from_json(const json& j);

// "euclidean", "l1", "elliptic:a,b", "pnorm:p", "smoothed_l1:eps",
// "fourier:c0,c1,...", an inline JSON object, or "@path" to a JSON file.
Anisotropy parse_anisotropy(std::string_view spec);

json to_json(const WulffBoundary& w);
json to_json(const JunctionTriple& t);
json to_json(const Cluster& c);
json to_json(const ClusterReport& r);
json to_json(const PerturbationReport& r);
json to_json(const GridResult& r);
json to_json(const VerificationReport& r);
json to_json(const std::vector<ApproximationRow>& rows);

// Two-space indented dump followed by a newline.
std::string dump(const json& j);

std::string wulff_svg(const WulffBoundary& w);
std::string cluster_svg(const Cluster& c);

}  // namespace wulff::io
