#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cornerlab/asymptotics.hpp"
#include "cornerlab/eigensolve.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/geometry.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/robin1d.hpp"

using namespace cornerlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent FNV-1a 64 for pinning config_hash.
std::uint64_t ref_fnv(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int count_substr(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos;
       p = hay.find(needle, p + needle.size()))
    ++n;
  return n;
}

const char* kHeader =
    "L,level,E1_fem,E2_fem,res1,res2,E1_extrap,E2_extrap,E1_thm1,E2_thm1,"
    "split_fem,split_thm1,split_quasi,E1_1d,E2_1d";

const char* kGoodConfig =
    "omega=1.5707963267948966\n"
    "beta=1\n"
    "L_values=2,2.5,3\n"
    "mesh_levels=4,5\n"
    "grade_corners=true\n"
    "truncation_tol=1e-06\n"
    "solver_tol=1e-09\n"
    "quad_tol=1e-10\n"
    "outputs=outdir\n";

}  // namespace

TEST_CASE("config parsing, validation, canonical form, and hash") {
  RunConfig cfg = parse_text(kGoodConfig);
  CHECK(cfg.omega == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(cfg.beta == 1.0);
  REQUIRE(cfg.L_values.size() == 3);
  CHECK(cfg.L_values[1] == 2.5);
  REQUIRE(cfg.mesh_levels.size() == 2);
  CHECK(cfg.mesh_levels[0] == 4);
  CHECK(cfg.mesh_levels[1] == 5);
  CHECK(cfg.grade_corners);
  CHECK(cfg.truncation_tol == 1e-6);
  CHECK(cfg.solver_tol == 1e-9);
  CHECK(cfg.quad_tol == 1e-10);
  CHECK(cfg.outputs == "outdir");
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("comments, blank lines, and whitespace are tolerated") {
    RunConfig c = parse_text(
        "# sweep at the right angle\n"
        "\n"
        "  omega = 1.2\n"
        "beta=0.5\n"
        "L_values = 1, 2 ,3\n");
    CHECK(c.omega == 1.2);
    CHECK(c.beta == 0.5);
    CHECK(c.L_values == std::vector<double>{1.0, 2.0, 3.0});
  }

  SUBCASE("defaults survive an empty stream") {
    RunConfig c = parse_text("");
    CHECK_NOTHROW(c.validate());
    CHECK(c.L_values.empty());
  }

  SUBCASE("parse errors") {
    CHECK_THROWS_AS(parse_text("frequency=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("omega\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("beta=1x\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("mesh_levels=4.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("grade_corners=banana\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_text("beta=1\nbeta=2\n"), std::invalid_argument);
  }

  SUBCASE("validation rejects out-of-range fields") {
    RunConfig c = cfg;
    c.truncation_tol = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.solver_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.omega = kPi;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.L_values = {3.0, 2.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.L_values = {2.0, 2.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.mesh_levels = {5, 4};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cfg;
    c.outputs.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }

  SUBCASE("canonical form is a fixpoint and feeds the hash") {
    std::string canon = cfg.canonical();
    RunConfig back = parse_text(canon);
    CHECK(back.canonical() == canon);
    CHECK(cfg.config_hash() == ref_fnv(canon));

    RunConfig other = cfg;
    other.beta = 2.0;
    CHECK(other.config_hash() != cfg.config_hash());
  }

  SUBCASE("hash primitive matches the published FNV-1a vectors") {
    CHECK(ref_fnv("") == 0xcbf29ce484222325ULL);
    CHECK(ref_fnv("a") == 0xaf63dc4c8601ec8cULL);
  }

  SUBCASE("file loader round-trips and reports missing files") {
    fs::path p = fs::temp_directory_path() / "cornerlab_cfg_test.txt";
    {
      std::ofstream os(p);
      os << kGoodConfig;
    }
    RunConfig c = parse_config_file(p.string());
    CHECK(c.canonical() == cfg.canonical());
    fs::remove(p);
    CHECK_THROWS_AS(parse_config_file(p.string()), std::runtime_error);
  }
}

TEST_CASE("richardson step honors the order-two ratio window") {
  const double einf = -2.005, c = 0.3;
  std::vector<double> v;
  for (int l = 4; l <= 6; ++l) v.push_back(einf + c * std::pow(4.0, -l));

  Extrapolation ex = richardson(v);
  REQUIRE(ex.value.has_value());
  CHECK(!ex.flagged);
  CHECK(*ex.value == doctest::Approx(einf).epsilon(1e-13));

  SUBCASE("two levels extrapolate without a ratio check") {
    Extrapolation e2 = richardson({v[1], v[2]});
    REQUIRE(e2.value.has_value());
    CHECK(!e2.flagged);
    CHECK(*e2.value == doctest::Approx(einf).epsilon(1e-13));
  }

  SUBCASE("a ratio outside [3,5] falls back to the finest value") {
    Extrapolation e = richardson({1.0, 0.9, 0.899});
    REQUIRE(e.value.has_value());
    CHECK(e.flagged);
    CHECK(*e.value == 0.899);
  }

  SUBCASE("non-monotone sequences are flagged") {
    Extrapolation e = richardson({0.0, 1.0, 0.5});
    CHECK(e.flagged);
    CHECK(*e.value == 0.5);
  }

  SUBCASE("an exactly converged tail is trusted") {
    Extrapolation e = richardson({1.0, 0.5, 0.5});
    CHECK(!e.flagged);
    CHECK(*e.value == 0.5);
  }

  SUBCASE("fewer than two levels give no value") {
    CHECK(!richardson({}).value.has_value());
    CHECK(!richardson({1.0}).value.has_value());
  }
}

TEST_CASE("log-linear slope fit") {
  SUBCASE("recovers a synthetic exponential exactly") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(7.5 * std::exp(-1.75 * x));
    SlopeFit f = fit_loglinear(xs, ys);
    CHECK(f.slope == doctest::Approx(-1.75).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(7.5)).epsilon(1e-12));
    CHECK(f.r2 >= 1.0 - 1e-12);
  }

  SUBCASE("rejects nonpositive values and short inputs") {
    CHECK_THROWS_AS(fit_loglinear({1, 2, 3}, {1.0, -0.5, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_loglinear({1, 2, 3}, {1.0, 0.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_loglinear({1, 2}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglinear({1, 2, 3}, {1.0, 2.0}),
                    std::invalid_argument);
  }

  SUBCASE("closed-form splitting column fits its own decay rate") {
    const double omega = kPi / 4, beta = 1.0;
    std::vector<SweepRow> rows;
    for (double L : {2.0, 2.5, 3.0}) {
      PredictionRecord pr = theorem1_prediction(omega, L, beta);
      SweepRow r;
      r.L = L;
      r.split_thm1 = pr.splitting;
      rows.push_back(r);
    }
    SlopeFit f = fit_slope(rows, "split_thm1");
    const double want = -2.0 * beta * (1.0 + std::cos(omega)) / std::sin(omega);
    CHECK(f.slope == doctest::Approx(want).epsilon(1e-9));
    const double pref = 8.0 * beta * beta * (1.0 + std::cos(omega)) /
                        std::pow(1.0 - std::cos(omega), 2);
    CHECK(std::exp(f.intercept) == doctest::Approx(pref).epsilon(1e-9));
    CHECK(f.r2 >= 1.0 - 1e-12);

    CHECK_THROWS_AS(fit_slope(rows, "split_fem"), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope(rows, "nonsense"), std::invalid_argument);
  }
}

TEST_CASE("csv schema is pinned and floats round-trip") {
  SweepRow full;
  full.L = 2.0;
  LevelSolve coarse;
  coarse.level = 4;
  coarse.E1 = -2.0004887650156893;
  coarse.E2 = -1.9901234567891234;
  coarse.res1 = 1.25e-11;
  coarse.res2 = 3.5e-11;
  LevelSolve fine = coarse;
  fine.level = 5;
  fine.E1 = -2.0048879012345678;
  full.levels = {coarse, fine};
  full.E1_extrap = -2.0063542799742273;
  full.E2_extrap = -1.9912345;
  full.E1_thm1 = -2.01;
  full.E2_thm1 = -1.98;
  full.split_fem = 0.015;
  full.split_thm1 = 0.0198;
  full.split_quasi = 0.0197;
  full.E1_1d = -2.0050123;
  full.E2_1d = -1.9900456;

  SweepRow bare;
  bare.L = 3.0;
  LevelSolve only;
  only.level = 4;
  only.E1 = -2.1;
  only.E2 = -2.0;
  bare.levels = {only};

  std::string csv = csv_text({full, bare});
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == kHeader);

  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(split_fields(lines[i]).size() == 15);

  // Derived columns ride the finest level row only.
  std::vector<std::string> c0 = split_fields(lines[1]);
  CHECK(c0[6].empty());
  CHECK(c0[14].empty());
  std::vector<std::string> f0 = split_fields(lines[2]);
  CHECK(!f0[6].empty());
  CHECK(!f0[14].empty());
  CHECK(std::strtod(f0[2].c_str(), nullptr) == fine.E1);
  CHECK(std::strtod(f0[6].c_str(), nullptr) == *full.E1_extrap);
  CHECK(std::strtod(f0[12].c_str(), nullptr) == *full.split_quasi);

  // Single-level row: no extrapolation, tails all empty.
  std::vector<std::string> b0 = split_fields(lines[3]);
  CHECK(std::strtod(b0[0].c_str(), nullptr) == 3.0);
  for (int j = 6; j <= 14; ++j) CHECK(b0[j].empty());
}

TEST_CASE("svg artifact is well formed") {
  std::vector<SweepRow> rows;
  for (double L : {4.0, 5.0, 6.0}) {
    PredictionRecord pr = theorem1_prediction(kPi / 4, L, 1.0);
    SweepRow r;
    r.L = L;
    r.split_thm1 = pr.splitting;
    r.split_fem = pr.splitting * 1.07;
    rows.push_back(r);
  }
  std::string svg = svg_text(rows);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_substr(svg, "<polyline") == 2);
  CHECK(svg.find("slope") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);

  SUBCASE("series without two positive points are dropped") {
    rows[0].split_fem.reset();
    rows[1].split_fem.reset();
    rows[2].split_fem.reset();
    std::string one = svg_text(rows);
    CHECK(count_substr(one, "<polyline") == 1);
  }
}

TEST_CASE("sweep at the right angle matches the separated reference") {
  RunConfig cfg;
  cfg.omega = kPi / 2;
  cfg.beta = 1.0;
  cfg.L_values = {3.0};
  cfg.mesh_levels = {4, 5};
  cfg.grade_corners = true;
  cfg.truncation_tol = 1e-10;
  cfg.solver_tol = 1e-9;
  cfg.quad_tol = 1e-10;
  fs::path out = fs::temp_directory_path() / "cornerlab_sweep_test";
  fs::remove_all(out);
  cfg.outputs = out.string();

  SweepResult res = run_sweep(cfg);
  CHECK(!res.solver_failed);
  CHECK(res.failures.empty());
  REQUIRE(res.rows.size() == 1);
  const SweepRow& row = res.rows[0];
  REQUIRE(row.levels.size() == 2);
  CHECK(row.levels[0].level == 4);
  CHECK(row.levels[1].level == 5);
  CHECK(row.levels[0].nodes > 0);
  CHECK(row.levels[1].nodes > row.levels[0].nodes);
  CHECK(row.levels[1].res1 < 1e-8);

  REQUIRE(row.height.has_value());
  DomainSpec spec = DomainSpec::two_corner(cfg.omega, 3.0, cfg.beta);
  CHECK(*row.height == truncation_height(spec, cfg.truncation_tol));

  // The separated composition is exact at the right angle.
  SeparatedReference ref = separated_reference(cfg.beta, 3.0, *row.height);
  REQUIRE(row.E1_extrap.has_value());
  REQUIRE(row.E2_extrap.has_value());
  CHECK(std::abs(*row.E1_extrap - ref.E1) <= 1e-3 * std::abs(ref.E1));
  REQUIRE(ref.E2.has_value());
  CHECK(std::abs(*row.E2_extrap - *ref.E2) <= 1e-3 * std::abs(*ref.E2));

  REQUIRE(row.E1_1d.has_value());
  CHECK(*row.E1_1d == ref.E1);
  REQUIRE(row.E2_1d.has_value());
  CHECK(*row.E2_1d == *ref.E2);

  PredictionRecord pr = theorem1_prediction(cfg.omega, 3.0, cfg.beta);
  REQUIRE(row.split_thm1.has_value());
  CHECK(*row.split_thm1 == pr.splitting);
  CHECK(row.E1_thm1.has_value());

  // Quasimode pencil lands near the closed form already at L = 3.
  REQUIRE(row.split_quasi.has_value());
  CHECK(*row.split_quasi > 0.0);
  CHECK(*row.split_quasi / pr.splitting > 0.8);
  CHECK(*row.split_quasi / pr.splitting < 1.2);
  REQUIRE(row.E1_quasi.has_value());
  CHECK(*row.E1_quasi < *row.E2_quasi);

  REQUIRE(row.count_below.has_value());
  CHECK(*row.count_below == 2);

  // fem splitting clears its own error estimate here
  REQUIRE(row.split_fem.has_value());
  CHECK(*row.split_fem == doctest::Approx(*ref.E2 - ref.E1).epsilon(2e-2));

  // emission produces the three artifacts and reruns are bitwise
  {
    emit(res, cfg.outputs);
    CHECK(fs::exists(out / "sweep.csv"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "splitting.svg"));

    std::ifstream mf(out / "manifest.json");
    nlohmann::json m = nlohmann::json::parse(mf);
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    CHECK(m.at("config_hash").get<std::string>() == hex);
    CHECK(m.at("results").at(0).at("levels").at(0).at("nodes").get<int>() ==
          row.levels[0].nodes);
    CHECK(m.at("results").at(0).at("count_below").get<int>() == 2);
    CHECK(m.at("config").at("solver_tol").get<double>() == cfg.solver_tol);
    CHECK(m.at("versions").contains("eigen"));
    CHECK(!m.contains("timestamp"));

    SweepResult again = run_sweep(cfg);
    CHECK(csv_text(again.rows) == csv_text(res.rows));
    CHECK(manifest_text(again) == manifest_text(res));
    fs::remove_all(out);
  }
}

TEST_CASE("narrow-corner sweep leaves inapplicable columns empty") {
  // 1.2 sits in the angular band where the expansion breaks down, so the
  // closed-form and quasimode columns must be absent, not zero.
  RunConfig cfg;
  cfg.omega = 1.2;
  cfg.beta = 1.0;
  cfg.L_values = {2.0};
  cfg.mesh_levels = {3};
  cfg.outputs = "unused";

  SweepResult res = run_sweep(cfg);
  CHECK(res.failures.empty());
  REQUIRE(res.rows.size() == 1);
  const SweepRow& row = res.rows[0];
  CHECK(!row.height.has_value());
  CHECK(!row.E1_extrap.has_value());
  CHECK(!row.E1_thm1.has_value());
  CHECK(!row.split_quasi.has_value());
  CHECK(!row.E1_1d.has_value());
  CHECK(!row.count_below.has_value());
  REQUIRE(row.levels.size() == 1);
  CHECK(row.levels[0].E1 < row.levels[0].E2);

  std::string csv = csv_text(res.rows);
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  std::vector<std::string> f = split_fields(lines[1]);
  REQUIRE(f.size() == 15);
  for (int j = 6; j <= 14; ++j) CHECK(f[j].empty());
}

TEST_CASE("empty sweep emits a header-only table") {
  RunConfig cfg;
  cfg.L_values = {};
  cfg.mesh_levels = {4};
  fs::path out = fs::temp_directory_path() / "cornerlab_empty_sweep";
  fs::remove_all(out);
  cfg.outputs = out.string();

  SweepResult res = run_sweep(cfg);
  CHECK(res.rows.empty());
  CHECK(!res.solver_failed);
  CHECK(csv_text(res.rows) == std::string(kHeader) + "\n");
  emit(res, cfg.outputs);
  CHECK(fs::exists(out / "sweep.csv"));
  fs::remove_all(out);
}

TEST_CASE("pushing the dirichlet cut out never raises the ground energy") {
  // Heights chosen low enough that the truncation shift dwarfs the
  // level-4 discretization error.
  auto ground = [](double H) {
    DomainSpec spec = DomainSpec::two_corner(kPi / 2, 2.0, 1.0, H);
    Polygon poly = build_domain(spec);
    TriMesh mesh = triangulate(poly, 4, true);
    SparsePencil p = assemble(mesh);
    EigenResult r = lowest_eigenpairs(p, 1.0, 1, -2.5, 1e-9);
    return r.eigenvalues[0];
  };
  double shallow = ground(1.5);
  double tall = ground(3.0);
  CHECK(tall < shallow - 0.1);
}

TEST_CASE("solver failure surfaces its location and keeps partial rows") {
  RunConfig cfg;
  cfg.omega = kPi / 4;
  cfg.beta = 1.0;
  cfg.L_values = {2.0};
  cfg.mesh_levels = {3};
  cfg.solver_tol = 1e-30;  // unreachable, the solver gives up at its cap
  cfg.outputs = "unused";

  SweepResult res = run_sweep(cfg);
  CHECK(res.solver_failed);
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].find("L=2") != std::string::npos);
  CHECK(res.failures[0].find("level=3") != std::string::npos);

  // The analytic columns for the row are still persisted.
  REQUIRE(res.rows.size() == 1);
  CHECK(res.rows[0].levels.empty());
  CHECK(res.rows[0].split_thm1.has_value());
  std::string csv = csv_text(res.rows);
  CHECK(split_lines(csv).size() == 1);  // no solve, no data line
}
