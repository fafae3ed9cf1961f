#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "hcdyn/atlas.hpp"
#include "hcdyn/cli.hpp"
#include "hcdyn/fixed_points.hpp"
#include "hcdyn/serialize.hpp"

using namespace hcdyn;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("fixed-points json") {
  const Run r = run({"fixed-points", "--theta", "2", "--L", "9", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 3);
  CHECK(j[0]["family"] == "p1*");
  CHECK(j[2]["family"] == "p2");
  CHECK(j[2]["stability"] == "attracting");
  CHECK(j[2]["eigenvalues"].size() == 2);
  CHECK(j[2]["eigenvalues"][0].contains("re"));
  CHECK(j[2]["eigenvalues"][0].contains("im"));
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) {
    keys.push_back(it.key());
  }
  CHECK(keys.size() == 5);
}

TEST_CASE("fixed point records round trip through json") {
  const auto fps = fixed_point_set(Params(22.0, 152.0));
  for (const auto& r : fps) {
    const json j = json::parse(to_json(r).dump());
    const FixedPointRecord back = fixed_point_from_json(j);
    CHECK(back.location == r.location);
    CHECK(back.family == r.family);
    CHECK(back.stability == r.stability);
    CHECK(back.eigenvalues[0] == r.eigenvalues[0]);
    CHECK(back.eigenvalues[1] == r.eigenvalues[1]);
  }
  CHECK_THROWS(fixed_point_from_json(json{{"x", 1.0}}));
}

TEST_CASE("fixed-points csv") {
  const Run r = run({"fixed-points", "--theta", "2", "--L", "9", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "x,y,family,ev1_re,ev1_im,ev2_re,ev2_im,stability");
  const auto cols = split(rows[3], ',');
  REQUIRE(cols.size() == 8);
  CHECK(cols[2] == "p2");
  CHECK(std::abs(std::stod(cols[0]) - 0.2155862027841597) <= 1e-15);
}

TEST_CASE("number formatting") {
  CHECK(format_csv_number(0.1) == "0.10000000000000001");
  CHECK(format_csv_number(9.0) == "9");
  CHECK(std::stod(format_csv_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(json(0.1).dump() == "0.1");
}

TEST_CASE("classify") {
  const Run r = run({"classify", "--theta", "6", "--L", "10"});
  CHECK(r.code == 0);
  CHECK(r.out == "A_1_0\n");
  const Run gap = run({"classify", "--theta", "10", "--L", "42.25"});
  CHECK(gap.code == 1);
  CHECK_FALSE(gap.err.empty());
}

TEST_CASE("trajectory csv") {
  const Run r = run({"trajectory", "--theta", "2", "--L", "9", "--x0", "0.1", "--y0", "5", "--tol", "1e-12"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  CHECK(rows[0] == "step,x,y");
  CHECK(rows[1] == "0,0.10000000000000001,5");
  const auto last = split(rows.back(), ',');
  CHECK(std::abs(std::stod(last[1]) - 0.2155862027841597) <= 1e-10);
  CHECK(std::abs(std::stod(last[2]) - 4.6385157634655248) <= 1e-10);
}

TEST_CASE("trajectory json carries the prediction") {
  const Run r = run({"trajectory", "--theta", "2", "--L", "9", "--x0", "0.1", "--y0", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["converged"] == true);
  CHECK(j["prediction"]["family"] == "p2");
  CHECK(j["prediction"]["rule"].is_string());

  const Run asym = run({"trajectory", "--theta", "2", "--L1", "9", "--L2", "7", "--x0", "0.1", "--y0", "5",
                        "--format", "json"});
  REQUIRE(asym.code == 0);
  CHECK(json::parse(asym.out)["prediction"].is_null());
}

TEST_CASE("bracket") {
  const Run r = run({"bracket", "--theta", "2", "--L", "9", "--n", "3"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "n,l1,l2");
  CHECK(rows[1] == "0,0,9");
  CHECK(rows[2] == "1,0.0625,6.25");
  const Run j = run({"bracket", "--theta", "2", "--L", "9", "--n", "3", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(json::parse(j.out).is_object());
}

TEST_CASE("atlas 3x3") {
  const Run r = run({"atlas", "--thetas", "2,6,22", "--Ls", "9,10,152", "--threads", "2"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "theta,L,region,n_diagonal,n_offdiagonal,lhat1,lhat2,omega_lo,omega_hi,contraction,error");
  auto region_at = [&](const std::string& theta, const std::string& l) {
    for (const auto& row : rows) {
      const auto c = split(row, ',');
      if (c[0] == theta && c[1] == l) {
        return c[2];
      }
    }
    return std::string("missing");
  };
  CHECK(region_at("2", "9") == "A_1_2");
  CHECK(region_at("6", "10") == "A_1_0");
  CHECK(region_at("22", "152") == "A_3_4");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c = split(rows[i], ',');
    REQUIRE(c.size() == 11);
    if (c[10].empty()) {
      const auto label = region_from_string(c[2]);
      REQUIRE(label.has_value());
      CHECK(std::stoi(c[3]) == counts_of(*label).diagonal);
      CHECK(std::stoi(c[4]) == counts_of(*label).offdiagonal);
      CHECK(std::stod(c[7]) <= std::stod(c[8]));
    }
  }
}

TEST_CASE("atlas output does not depend on thread count") {
  AtlasConfig cfg;
  cfg.thetas = linear_grid(0.5, 25.0, 7);
  cfg.ls = linear_grid(0.5, 200.0, 7);
  cfg.threads = 1;
  const std::string one = atlas_csv(atlas_sweep(cfg));
  cfg.threads = 4;
  const std::string four = atlas_csv(atlas_sweep(cfg));
  CHECK(one == four);
  CHECK(lines_of(one).size() == 50);
}

TEST_CASE("atlas records per-cell errors") {
  const Run r = run({"atlas", "--thetas", "10", "--Ls", "40,42.25", "--classify-only"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(split(rows[1], ',')[10].empty());
  CHECK_FALSE(split(rows[2], ',')[10].empty());
}

TEST_CASE("atlas json and nullcline samples") {
  const std::string path = "atlas_nullcline_test.csv";
  const Run r = run({"atlas", "--theta-min", "2", "--theta-max", "6", "--theta-steps", "2", "--L-min", "9",
                     "--L-max", "10", "--L-steps", "2", "--format", "json", "--nullcline-out", path,
                     "--nullcline-samples", "5"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.size() == 4);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto rows = lines_of(ss.str());
  CHECK(rows[0] == "theta,L,x,psi");
  CHECK(rows.size() == 1 + 4 * 5);
  std::remove(path.c_str());
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  setenv("HCDYN_THREADS", "2", 1);
  CHECK(resolve_threads(0) == 2);
  unsetenv("HCDYN_THREADS");
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("lift") {
  const Run r = run({"lift", "--theta", "2", "--L", "9", "--dim", "16", "--seed", "7"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["weights"].size() == 16);
  REQUIRE(j["fixed_points"].size() == 3);
  CHECK(j["fixed_points"][0]["name"] == "P1");
  CHECK(j["run"]["max_abs_difference"].get<double>() <= 1e-8);
  const Run c = run({"lift", "--theta", "2", "--L", "9", "--dim", "4", "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(lines_of(c.out).size() == 1 + 3 * 4);
}

TEST_CASE("output file") {
  const std::string path = "fixed_points_test.json";
  const Run r = run({"fixed-points", "--theta", "6", "--L", "10", "-o", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  CHECK(json::parse(f).size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("check subcommand") {
  const Run r = run({"check", "--criterion", "1", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"classify", "--theta", "2"}).code == 2);
  CHECK(run({"classify", "--theta", "-1", "--L", "10"}).code == 2);
  CHECK(run({"classify", "--theta", "abc", "--L", "10"}).code == 2);
  CHECK(run({"fixed-points", "--theta", "2", "--L", "9", "--format", "xml"}).code == 2);
  CHECK(run({"trajectory", "--theta", "2", "--x0", "1", "--y0", "1"}).code == 2);
  CHECK(run({"check", "--criterion", "9"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("deterministic output") {
  const Run a = run({"fixed-points", "--theta", "22", "--L", "152", "--format", "csv"});
  const Run b = run({"fixed-points", "--theta", "22", "--L", "152", "--format", "csv"});
  CHECK(a.out == b.out);
}
