#include "wulff_clusters/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wulff_clusters/errors.hpp"

namespace wulff::io {

namespace {

json point(Vec2 p) { return json::array({p.x, p.y}); }

json points(std::span<const Vec2> ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(point(p));
  return out;
}

std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(s)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in anisotropy spec");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in anisotropy spec");
    out.push_back(v);
  }
  return out;
}

void expect_count(const std::string& name, const std::vector<double>& v, std::size_t n) {
  if (v.size() != n)
    throw Error(ErrorCode::InvalidArgument, name + " takes " + std::to_string(n) + " parameter(s)");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Box {
  double x0, y0, x1, y1;
};

// SVG with the mathematical y axis pointing up.
std::string svg_open(const Box& b, double stroke) {
  std::ostringstream os;
  const double w = b.x1 - b.x0;
  const double h = b.y1 - b.y0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(b.x0) << " " << num(-b.y1) << " " << num(w)
     << " " << num(h) << "\" width=\"600\" height=\"" << num(600.0 * h / w) << "\">\n";
  os << "<g transform=\"scale(1,-1)\" stroke-width=\"" << num(stroke) << "\" stroke-linejoin=\"round\">\n";
  return os.str();
}

std::string path_of(std::span<const Vec2> ps, bool closed) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ps.size(); ++i) os << (i ? " L" : "M") << num(ps[i].x) << " " << num(ps[i].y);
  if (closed) os << " Z";
  return os.str();
}

std::string text_at(Vec2 p, const std::string& s, double size) {
  std::ostringstream os;
  os << "<text x=\"" << num(p.x) << "\" y=\"" << num(-p.y) << "\" transform=\"scale(1,-1)\" font-size=\"" << num(size)
     << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#222\">" << s << "</text>\n";
  return os.str();
}

const char* chamber_fill(int label) {
  switch (label) {
    case 1: return "#f4a261";
    case 2: return "#a8dadc";
    case 3: return "#e9c46a";
    case 4: return "#cdb4db";
  }
  return "#dddddd";
}

}  // namespace

json to_json(const Anisotropy& a) {
  json params = json::object();
  const auto& p = a.params();
  switch (a.kind()) {
    case AnisotropyKind::euclidean:
    case AnisotropyKind::crystalline_l1: break;
    case AnisotropyKind::elliptic:
      params["a"] = p[0];
      params["b"] = p[1];
      break;
    case AnisotropyKind::p_norm: params["p"] = p[0]; break;
    case AnisotropyKind::smoothed_l1: params["eps"] = p[0]; break;
    case AnisotropyKind::custom_fourier: params["coeffs"] = p; break;
  }
  return json{{"kind", to_string(a.kind())}, {"params", params}};
}

Anisotropy anisotropy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::InvalidArgument, "anisotropy JSON needs a string field \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  const json params = j.value("params", json::object());
  auto get = [&](const char* key) {
    if (!params.contains(key) || !params[key].is_number())
      throw Error(ErrorCode::InvalidArgument, kind + " needs numeric params." + key);
    return params[key].get<double>();
  };
  if (kind == "euclidean") return Anisotropy::euclidean();
  if (kind == "crystalline_l1") return Anisotropy::crystalline_l1();
  if (kind == "elliptic") return Anisotropy::elliptic(get("a"), get("b"));
  if (kind == "p_norm") return Anisotropy::p_norm(get("p"));
  if (kind == "smoothed_l1") return Anisotropy::smoothed_l1(get("eps"));
  if (kind == "custom_fourier") {
    if (!params.contains("coeffs") || !params["coeffs"].is_array())
      throw Error(ErrorCode::InvalidArgument, "custom_fourier needs params.coeffs");
    std::vector<double> c;
    for (const auto& v : params["coeffs"]) {
      if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "coefficients must be numbers");
      c.push_back(v.get<double>());
    }
    return Anisotropy::custom_fourier(std::move(c));
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown anisotropy kind '" + kind + "'");
}

Anisotropy parse_anisotropy(std::string_view spec) {
  if (spec.empty()) throw Error(ErrorCode::InvalidArgument, "empty anisotropy spec");
  if (spec.front() == '{') {
    const json j = json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, "malformed anisotropy JSON");
    return anisotropy_from_json(j);
  }
  if (spec.front() == '@') {
    const std::string path(spec.substr(1));
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, "malformed anisotropy JSON in " + path);
    return anisotropy_from_json(j);
  }
  const auto colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  const std::vector<double> v =
      colon == std::string_view::npos ? std::vector<double>{} : parse_numbers(spec.substr(colon + 1));
  if (name == "euclidean") return expect_count(name, v, 0), Anisotropy::euclidean();
  if (name == "l1" || name == "crystalline_l1") return expect_count(name, v, 0), Anisotropy::crystalline_l1();
  if (name == "elliptic") return expect_count(name, v, 2), Anisotropy::elliptic(v[0], v[1]);
  if (name == "pnorm" || name == "p_norm") return expect_count(name, v, 1), Anisotropy::p_norm(v[0]);
  if (name == "smoothed_l1") return expect_count(name, v, 1), Anisotropy::smoothed_l1(v[0]);
  if (name == "fourier" || name == "custom_fourier") {
    if (v.empty()) throw Error(ErrorCode::InvalidArgument, "fourier needs at least c0");
    return Anisotropy::custom_fourier(v);
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown anisotropy '" + name + "'");
}

json to_json(const WulffBoundary& w) {
  return json{{"vertices", points(w.vertices)},
              {"normals", points(w.normals)},
              {"lambda", w.lambda},
              {"provenance", w.provenance == Provenance::gradient_map ? "gradient_map" : "halfplane_intersection"}};
}

json to_json(const JunctionTriple& t) {
  return json{{"n_hat_deg", t.n_hat.degrees()}, {"nu1_deg", t.nu1.degrees()}, {"nu2_deg", t.nu2.degrees()},
              {"residual", t.residual},         {"A", point(t.a)},              {"B", point(t.b)},
              {"C", point(t.c)}};
}

json to_json(const Cluster& c) {
  json chambers = json::array();
  for (const auto& ch : c.chambers) chambers.push_back({{"label", ch.label}, {"finite", ch.finite}});
  json interfaces = json::array();
  for (const auto& f : c.interfaces)
    interfaces.push_back({{"chambers", json::array({f.first, f.second})}, {"vertices", points(f.points)}});
  json junctions = json::array();
  for (std::size_t i = 0; i < c.junctions.size(); ++i) {
    json j{{"point", point(c.junctions[i])}};
    if (i < c.junction_triples.size()) j["triple"] = to_json(c.junction_triples[i]);
    if (i < c.ray_directions.size()) j["ray_direction"] = point(c.ray_directions[i]);
    junctions.push_back(j);
  }
  return json{{"kind", to_string(c.kind)}, {"n_hat_deg", c.n_hat.degrees()}, {"R", c.radius},
              {"m", c.mass},               {"lambda", c.lambda},             {"chambers", chambers},
              {"interfaces", interfaces},  {"junctions", junctions},         {"anchors", points(c.anchors)}};
}

json to_json(const ClusterReport& r) {
  return json{{"junction_degrees_ok", r.junction_degrees_ok},
              {"non_crossing", r.non_crossing},
              {"area_rel_error", r.area_rel_error},
              {"max_straight_deviation", r.max_straight_deviation},
              {"max_anchor_error", r.max_anchor_error},
              {"max_young_residual", r.max_young_residual},
              {"finite_chamber_convex", r.finite_chamber_convex},
              {"ok", r.ok()}};
}

json to_json(const PerturbationReport& r) {
  return json{{"trials", r.trials},     {"energy_standard", r.energy_standard}, {"min_gap", r.min_gap},
              {"max_gap", r.max_gap},   {"violations", r.violations},           {"passed", r.passed()}};
}

json to_json(const GridResult& r) {
  return json{{"width", r.grid.width},
              {"cell", r.grid.cell},
              {"target_count", r.grid.target_count},
              {"label1_count", r.label1_count},
              {"energy", r.energy},
              {"finite_components", r.finite_components},
              {"islands_found", r.islands},
              {"infinite_chambers_connected", r.infinite_touch_ring},
              {"symmetric_difference", r.symmetric_difference},
              {"boundary_mismatch", r.boundary_mismatch},
              {"passed", r.passed()}};
}

json to_json(const VerificationReport& r) {
  const VerifyConfig& c = r.config;
  const json config{{"kind", to_string(c.kind)},
                    {"anisotropy", r.anisotropy},
                    {"n_hat_deg", c.n_hat.degrees()},
                    {"m", c.mass},
                    {"R", c.radius},
                    {"resolution", c.resolution},
                    {"seeds", c.seeds},
                    {"tol", c.tol},
                    {"trials", c.trials},
                    {"amplitude", c.amplitude_fraction * c.radius},
                    {"jitter_sigma", c.jitter_fraction * c.radius},
                    {"grid", c.grid},
                    {"seed", c.seed}};
  const std::size_t islands = r.grid ? r.grid->islands : 0;
  json runs = json::array();
  for (const auto& s : r.runs) {
    runs.push_back({{"config", {{"seed", s.seed}, {"init", s.init}}},
                    {"energy_standard", r.energy_standard},
                    {"energy_initial", s.energy_initial},
                    {"energy_found", s.energy_found},
                    {"hausdorff_gap", s.hausdorff_gap},
                    {"hausdorff_tolerance", s.hausdorff_tolerance},
                    {"young_residuals", s.young_residuals},
                    {"islands_found", islands},
                    {"area_error", s.area_error},
                    {"gradient_norm", s.gradient_norm},
                    {"converged", s.converged},
                    {"passed", s.passed}});
  }
  return json{{"config", config},
              {"energy_standard", r.energy_standard},
              {"energy_discrete", r.energy_discrete},
              {"young_residuals", r.young_residuals},
              {"runs", runs},
              {"perturbation", to_json(r.perturbation)},
              {"grid", r.grid ? to_json(*r.grid) : json(nullptr)},
              {"islands_found", islands},
              {"passed", r.passed}};
}

json to_json(const std::vector<ApproximationRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"eps", r.eps},
                   {"sup_gap", r.sup_gap},
                   {"wulff_gap", r.wulff_gap},
                   {"lens_gap", r.lens_gap},
                   {"triod_gap", r.triod_gap}});
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string wulff_svg(const WulffBoundary& w) {
  double r = 0.0;
  for (const auto& v : w.vertices) r = std::max({r, std::abs(v.x), std::abs(v.y)});
  const double pad = 0.1 * r;
  std::ostringstream os;
  os << svg_open({-r - pad, -r - pad, r + pad, r + pad}, 0.01 * r);
  os << "<line x1=\"" << num(-r - pad) << "\" y1=\"0\" x2=\"" << num(r + pad)
     << "\" y2=\"0\" stroke=\"#bbb\"/>\n<line x1=\"0\" y1=\"" << num(-r - pad) << "\" x2=\"0\" y2=\"" << num(r + pad)
     << "\" stroke=\"#bbb\"/>\n";
  os << "<path d=\"" << path_of(w.vertices, true) << "\" fill=\"#f4a261\" fill-opacity=\"0.6\" stroke=\"#264653\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string cluster_svg(const Cluster& c) {
  const double R = c.radius;
  const double pad = 0.08 * R;
  const double far = 4.0 * R;
  std::ostringstream os;
  os << svg_open({-R - pad, -R - pad, R + pad, R + pad}, 0.004 * R);
  os << "<defs><clipPath id=\"ball\"><circle cx=\"0\" cy=\"0\" r=\"" << num(R) << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#ball)\" stroke=\"none\">\n";

  // Infinite chambers first, the finite chamber on top.
  if (c.kind == ClusterKind::lens) {
    os << "<circle cx=\"0\" cy=\"0\" r=\"" << num(R) << "\" fill=\"" << chamber_fill(3) << "\"/>\n";
    const Vec2 n = c.n_hat.vec();
    const Vec2 left = c.junctions[0] + far * c.ray_directions[0];
    const Vec2 right = c.junctions[1] + far * c.ray_directions[1];
    const std::vector<Vec2> upper{left, c.junctions[0], c.junctions[1], right, right + far * n, left + far * n};
    os << "<path d=\"" << path_of(upper, true) << "\" fill=\"" << chamber_fill(2) << "\"/>\n";
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      const std::vector<Vec2> sector{Vec2{}, far * c.ray_directions[i], far * c.ray_directions[(i + 1) % 3]};
      os << "<path d=\"" << path_of(sector, true) << "\" fill=\"" << chamber_fill(static_cast<int>(i) + 2)
         << "\"/>\n";
    }
  }
  const auto e1 = c.finite_boundary();
  os << "<path d=\"" << path_of(e1, true) << "\" fill=\"" << chamber_fill(1) << "\"/>\n";
  os << "</g>\n";

  os << "<circle cx=\"0\" cy=\"0\" r=\"" << num(R) << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\""
     << num(0.02 * R) << "\"/>\n";
  for (const auto& f : c.interfaces)
    os << "<path d=\"" << path_of(f.points, false) << "\" fill=\"none\" stroke=\"#264653\"/>\n";
  for (const auto& j : c.junctions)
    os << "<circle cx=\"" << num(j.x) << "\" cy=\"" << num(j.y) << "\" r=\"" << num(0.008 * R)
       << "\" fill=\"#e63946\" stroke=\"none\"/>\n";

  const double font = 0.035 * R;
  for (const auto& f : c.interfaces) {
    const Vec2 mid = f.points.size() > 2 ? f.points[f.points.size() / 2] : 0.5 * (f.points.front() + f.points.back());
    os << text_at(mid, "(" + std::to_string(f.first) + "," + std::to_string(f.second) + ")", font);
  }
  Vec2 centroid{};
  for (const auto& p : e1) centroid += p;
  if (!e1.empty()) os << text_at(centroid / static_cast<double>(e1.size()), "E1", font);
  if (c.kind == ClusterKind::lens) {
    os << text_at(0.6 * R * c.n_hat.vec(), "E2", font);
    os << text_at(-0.6 * R * c.n_hat.vec(), "E3", font);
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      Vec2 bis = c.ray_directions[i] + c.ray_directions[(i + 1) % 3];
      bis = bis / std::max(norm(bis), 1e-12);
      os << text_at(0.6 * R * bis, "E" + std::to_string(i + 2), font);
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace wulff::io
