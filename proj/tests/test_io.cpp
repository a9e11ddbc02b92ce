#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "support.hpp"
#include "wulff_clusters/errors.hpp"
#include "wulff_clusters/io.hpp"

using namespace wulff;

TEST_CASE("anisotropy grammar") {
  CHECK(io::parse_anisotropy("euclidean") == Anisotropy::euclidean());
  CHECK(io::parse_anisotropy("l1") == Anisotropy::crystalline_l1());
  CHECK(io::parse_anisotropy("elliptic:2,1") == Anisotropy::elliptic(2, 1));
  CHECK(io::parse_anisotropy("pnorm:4") == Anisotropy::p_norm(4));
  CHECK(io::parse_anisotropy("smoothed_l1:0.05") == Anisotropy::smoothed_l1(0.05));
  CHECK(io::parse_anisotropy("fourier:1,0.05") == Anisotropy::custom_fourier({1.0, 0.05}));
  CHECK(io::parse_anisotropy(R"({"kind":"elliptic","params":{"a":3,"b":1}})") == Anisotropy::elliptic(3, 1));

  const std::string path = "test_io_aniso.json";
  {
    std::ofstream out(path);
    out << R"({"kind":"custom_fourier","params":{"coeffs":[1.0,0.02,0.01]}})";
  }
  CHECK(io::parse_anisotropy("@" + path) == Anisotropy::custom_fourier({1.0, 0.02, 0.01}));
  std::remove(path.c_str());

  CHECK_THROWS_AS(io::parse_anisotropy(""), Error);
  CHECK_THROWS_AS(io::parse_anisotropy("elliptic:2"), Error);
  CHECK_THROWS_AS(io::parse_anisotropy("pnorm:x"), Error);
  CHECK_THROWS_AS(io::parse_anisotropy("{not json"), Error);
  CHECK_THROWS_AS(io::parse_anisotropy("@/nonexistent/file.json"), Error);
  try {
    io::parse_anisotropy("hexagonal");
    FAIL("expected UnsupportedKind");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedKind);
  }
}

TEST_CASE("anisotropy JSON round trip and canonical names") {
  for (const auto& a : testing::all_kinds()) {
    CHECK(io::anisotropy_from_json(io::to_json(a)) == a);
    CHECK(io::parse_anisotropy(a.name()) == a);
  }
}

TEST_CASE("identical inputs give byte-identical JSON") {
  const auto a = Anisotropy::elliptic(2, 1);
  const auto c1 = standard_triod_cluster(a, Direction::from_degrees(30), 1.0, 10.0);
  const auto c2 = standard_triod_cluster(a, Direction::from_degrees(30), 1.0, 10.0);
  CHECK(io::dump(io::to_json(c1)) == io::dump(io::to_json(c2)));

  VerifyConfig cfg;
  cfg.seeds = 2;
  cfg.trials = 20;
  const std::string r1 = io::dump(io::to_json(run_verification(Anisotropy::euclidean(), cfg)));
  cfg.threads = 2;
  const std::string r2 = io::dump(io::to_json(run_verification(Anisotropy::euclidean(), cfg)));
  CHECK(r1 == r2);
}

TEST_CASE("documented fields are present") {
  const auto a = Anisotropy::euclidean();
  const auto c = standard_lens_cluster(a, Direction::from_degrees(90), 1.0, 10.0);
  const auto j = io::to_json(c);
  for (const char* key : {"kind", "n_hat_deg", "R", "m", "lambda", "chambers", "interfaces", "junctions"})
    CHECK(j.contains(key));
  const auto t = io::to_json(solve_young_pair(a, Direction::from_degrees(90)));
  for (const char* key : {"n_hat_deg", "nu1_deg", "nu2_deg", "residual", "A", "B", "C"}) CHECK(t.contains(key));

  GridOptions o;
  o.sweeps = 50;
  o.restarts = 1;
  const auto g = io::to_json(grid_minimize(a, ClusterKind::lens, 1.0, 10.0, 64, o));
  CHECK(g.contains("islands_found"));
  CHECK(g.contains("symmetric_difference"));

  const auto w = io::to_json(boundary_by_gradient_map(a, 64));
  CHECK(w.contains("vertices"));
}

TEST_CASE("svg output") {
  const auto a = Anisotropy::euclidean();
  const std::string s = io::cluster_svg(standard_lens_cluster(a, Direction::from_degrees(90), 1.0, 10.0));
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(io::wulff_svg(boundary_by_gradient_map(a, 64)).find("<path") != std::string::npos);
}
