#include "cornerlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cornerlab/asymptotics.hpp"
#include "cornerlab/eigensolve.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/geometry.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/quasimode.hpp"
#include "cornerlab/robin1d.hpp"

namespace cornerlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kVersion = "0.1.0";

const char* kCsvHeader =
    "L,level,E1_fem,E2_fem,res1,res2,E1_extrap,E2_extrap,E1_thm1,E2_thm1,"
    "split_fem,split_thm1,split_quasi,E1_1d,E2_1d";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double_strict(const std::string& s, const std::string& key) {
  if (s.empty())
    throw std::invalid_argument("empty value for config key " + key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("bad number '" + s + "' for config key " +
                                key);
  return v;
}

int parse_int_strict(const std::string& s, const std::string& key) {
  if (s.empty())
    throw std::invalid_argument("empty value for config key " + key);
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size())
    throw std::invalid_argument("bad integer '" + s + "' for config key " +
                                key);
  return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("bad boolean '" + s + "' for config key " + key);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void require_unit_interval(double t, const char* name) {
  if (!(t > 0.0) || !(t < 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  if (!std::isfinite(omega) || !(omega > 0.0) || !(omega < kPi))
    throw std::invalid_argument("omega must lie in (0, pi)");
  if (!std::isfinite(beta) || !(beta > 0.0))
    throw std::invalid_argument("beta must be positive");
  require_unit_interval(truncation_tol, "truncation_tol");
  require_unit_interval(solver_tol, "solver_tol");
  require_unit_interval(quad_tol, "quad_tol");
  for (std::size_t i = 0; i < L_values.size(); ++i) {
    if (!std::isfinite(L_values[i]) || !(L_values[i] > 0.0))
      throw std::invalid_argument("L_values must be positive");
    if (i > 0 && !(L_values[i] > L_values[i - 1]))
      throw std::invalid_argument("L_values must be strictly ascending");
  }
  for (std::size_t i = 0; i < mesh_levels.size(); ++i) {
    if (mesh_levels[i] < 0)
      throw std::invalid_argument("mesh_levels must be nonnegative");
    if (i > 0 && mesh_levels[i] <= mesh_levels[i - 1])
      throw std::invalid_argument("mesh_levels must be strictly ascending");
  }
  if (outputs.empty()) throw std::invalid_argument("outputs must be nonempty");
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "L_values=";
  for (std::size_t i = 0; i < L_values.size(); ++i)
    os << (i ? "," : "") << g17(L_values[i]);
  os << "\nbeta=" << g17(beta);
  os << "\ngrade_corners=" << (grade_corners ? "true" : "false");
  os << "\nmesh_levels=";
  for (std::size_t i = 0; i < mesh_levels.size(); ++i)
    os << (i ? "," : "") << mesh_levels[i];
  os << "\nomega=" << g17(omega);
  os << "\noutputs=" << outputs;
  os << "\nquad_tol=" << g17(quad_tol);
  os << "\nsolver_tol=" << g17(solver_tol);
  os << "\ntruncation_tol=" << g17(truncation_tol) << "\n";
  return os.str();
}

std::uint64_t RunConfig::config_hash() const { return fnv1a64(canonical()); }

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (!seen.insert(key).second)
      throw std::invalid_argument("repeated config key: " + key);
    if (key == "omega") {
      cfg.omega = parse_double_strict(val, key);
    } else if (key == "beta") {
      cfg.beta = parse_double_strict(val, key);
    } else if (key == "L_values") {
      cfg.L_values.clear();
      for (const std::string& s : split_list(val))
        cfg.L_values.push_back(parse_double_strict(s, key));
    } else if (key == "mesh_levels") {
      cfg.mesh_levels.clear();
      for (const std::string& s : split_list(val))
        cfg.mesh_levels.push_back(parse_int_strict(s, key));
    } else if (key == "grade_corners") {
      cfg.grade_corners = parse_bool(val, key);
    } else if (key == "truncation_tol") {
      cfg.truncation_tol = parse_double_strict(val, key);
    } else if (key == "solver_tol") {
      cfg.solver_tol = parse_double_strict(val, key);
    } else if (key == "quad_tol") {
      cfg.quad_tol = parse_double_strict(val, key);
    } else if (key == "outputs") {
      if (val.empty())
        throw std::invalid_argument("empty value for config key outputs");
      cfg.outputs = val;
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  return parse_config(is);
}

Extrapolation richardson(const std::vector<double>& v) {
  Extrapolation out;
  const std::size_t n = v.size();
  if (n < 2) return out;
  const double fine = v[n - 1], coarse = v[n - 2];
  const double d_fine = coarse - fine;
  if (d_fine == 0.0) {
    out.value = fine;
    return out;
  }
  if (n >= 3) {
    const double ratio = (v[n - 3] - coarse) / d_fine;
    if (!(ratio >= 3.0 && ratio <= 5.0)) {
      out.value = fine;
      out.flagged = true;
      return out;
    }
  }
  out.value = fine + (fine - coarse) / 3.0;
  return out;
}

SlopeFit fit_loglinear(const std::vector<double>& xs,
                       const std::vector<double>& values) {
  if (xs.size() != values.size())
    throw std::invalid_argument("slope fit: mismatched lengths");
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("slope fit needs positive values");
    ys[i] = std::log(values[i]);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("slope fit: degenerate abscissae");
  SlopeFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double ybar = sy / n;
  double sstot = 0, ssres = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sstot += (ys[i] - ybar) * (ys[i] - ybar);
    const double r = ys[i] - f.slope * xs[i] - f.intercept;
    ssres += r * r;
  }
  f.r2 = sstot == 0.0 ? 1.0 : 1.0 - ssres / sstot;
  return f;
}

namespace {

std::optional<double> split_column(const SweepRow& r,
                                   const std::string& column) {
  if (column == "split_fem") return r.split_fem;
  if (column == "split_thm1") return r.split_thm1;
  if (column == "split_quasi") return r.split_quasi;
  if (column == "split_1d") {
    if (r.E1_1d && r.E2_1d) return *r.E2_1d - *r.E1_1d;
    return std::nullopt;
  }
  throw std::invalid_argument("unrecognized fit column: " + column);
}

}  // namespace

SlopeFit fit_slope(const std::vector<SweepRow>& rows,
                   const std::string& column) {
  std::vector<double> xs, vals;
  for (const SweepRow& r : rows) {
    std::optional<double> v = split_column(r, column);
    if (!v) continue;
    xs.push_back(r.L);
    vals.push_back(*v);
  }
  return fit_loglinear(xs, vals);
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  SweepResult out;
  out.config = cfg;

  const bool right_angle = std::abs(cfg.omega - kPi / 2) <= 1e-12;
  const bool equilateral = std::abs(cfg.omega - kPi / 3) <= 1e-9;
  const int k = equilateral ? 3 : 2;
  const double center =
      -2.0 * cfg.beta * cfg.beta / (1.0 - std::cos(cfg.omega));
  const double shift = 1.25 * center;

  for (double L : cfg.L_values) {
    SweepRow row;
    row.L = L;
    try {
      DomainSpec spec = DomainSpec::two_corner(cfg.omega, L, cfg.beta);
      if (spec.unbounded_before_truncation()) {
        row.height = truncation_height(spec, cfg.truncation_tol);
        spec.truncation_height = row.height;
      }

      // Reference columns go first so a failed solve cannot lose them.
      try {
        PredictionRecord pr = theorem1_prediction(cfg.omega, L, cfg.beta);
        row.E1_thm1 = pr.E1;
        row.E2_thm1 = pr.E2;
        row.split_thm1 = pr.splitting;
      } catch (const std::invalid_argument&) {
      }
      try {
        // Disjoint cutoff supports make the pencil exactly degenerate,
        // which estimates nothing; the column applies once the shells
        // around the two corners overlap.
        if ((tau_exponent(cfg.omega) - 1.0) * L > 1.0) {
          InteractionData id =
              interaction_data(cfg.omega, L, cfg.beta, cfg.quad_tol);
          row.E1_quasi = id.quasi_energies[0];
          row.E2_quasi = id.quasi_energies[1];
          row.split_quasi = id.quasi_energies[1] - id.quasi_energies[0];
        }
      } catch (const std::invalid_argument&) {
      }
      if (right_angle && row.height) {
        SeparatedReference ref = separated_reference(cfg.beta, L, *row.height);
        row.E1_1d = ref.E1;
        if (ref.E2) row.E2_1d = *ref.E2;
      }

      Polygon poly = build_domain(spec);
      std::optional<SparsePencil> finest;
      for (int level : cfg.mesh_levels) {
        try {
          TriMesh mesh = triangulate(poly, level, cfg.grade_corners);
          SparsePencil p = assemble(mesh);
          EigenResult er =
              lowest_eigenpairs(p, cfg.beta, k, shift, cfg.solver_tol);
          LevelSolve ls;
          ls.level = level;
          ls.E1 = er.eigenvalues[0];
          ls.E2 = er.eigenvalues[1];
          ls.res1 = er.residuals[0];
          ls.res2 = er.residuals[1];
          ls.nodes = static_cast<int>(mesh.nodes.size());
          ls.triangles = static_cast<int>(mesh.triangles.size());
          ls.iterations = er.iterations;
          for (std::size_t j = 2; j < er.eigenvalues.size(); ++j)
            ls.extra_eigenvalues.push_back(er.eigenvalues[j]);
          row.levels.push_back(std::move(ls));
          finest = std::move(p);
        } catch (const std::exception& e) {
          out.failures.push_back("L=" + g17(L) +
                                 " level=" + std::to_string(level) + ": " +
                                 e.what());
        }
      }

      if (row.levels.size() >= 2) {
        std::vector<double> e1s, e2s;
        for (const LevelSolve& ls : row.levels) {
          e1s.push_back(ls.E1);
          e2s.push_back(ls.E2);
        }
        Extrapolation x1 = richardson(e1s);
        Extrapolation x2 = richardson(e2s);
        row.E1_extrap = x1.value;
        row.E2_extrap = x2.value;
        row.extrap_flagged = x1.flagged || x2.flagged;
        if (x1.value && x2.value) {
          // The discretization bias largely cancels in E2 - E1, so the
          // error estimate that gates the column is the movement of the
          // splitting itself, not of the eigenvalues.
          const LevelSolve& f = row.levels.back();
          const LevelSolve& c = row.levels[row.levels.size() - 2];
          const double err_est =
              std::abs((f.E2 - f.E1) - (c.E2 - c.E1)) / 3.0;
          const double split = *x2.value - *x1.value;
          if (split > 10.0 * err_est) row.split_fem = split;
        }
      }

      if (cfg.omega >= kPi / 2 - 1e-12 && finest) {
        const double thr = -cfg.beta * cfg.beta - cfg.solver_tol;
        row.count_below = certify_count_below(*finest, cfg.beta, thr);
      }
    } catch (const std::exception& e) {
      out.failures.push_back("L=" + g17(L) + ": " + e.what());
    }
    out.rows.push_back(std::move(row));
  }

  out.solver_failed = !out.failures.empty();
  return out;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const SweepRow& row : rows) {
    for (std::size_t i = 0; i < row.levels.size(); ++i) {
      const LevelSolve& ls = row.levels[i];
      const bool finest = i + 1 == row.levels.size();
      os << g17(row.L) << ',' << ls.level << ',' << g17(ls.E1) << ','
         << g17(ls.E2) << ',' << g17(ls.res1) << ',' << g17(ls.res2);
      auto cell = [&](const std::optional<double>& v) {
        os << ',';
        if (finest && v) os << g17(*v);
      };
      cell(row.E1_extrap);
      cell(row.E2_extrap);
      cell(row.E1_thm1);
      cell(row.E2_thm1);
      cell(row.split_fem);
      cell(row.split_thm1);
      cell(row.split_quasi);
      cell(row.E1_1d);
      cell(row.E2_1d);
      os << "\n";
    }
  }
  return os.str();
}

std::string manifest_text(const SweepResult& result) {
  using nlohmann::json;
  const RunConfig& c = result.config;
  json m;
  m["config"] = {{"omega", c.omega},
                 {"beta", c.beta},
                 {"L_values", c.L_values},
                 {"mesh_levels", c.mesh_levels},
                 {"grade_corners", c.grade_corners},
                 {"truncation_tol", c.truncation_tol},
                 {"solver_tol", c.solver_tol},
                 {"quad_tol", c.quad_tol},
                 {"outputs", c.outputs}};
  m["config_hash"] = hash_hex(c.config_hash());
  m["failures"] = result.failures;
  m["solver"] = {{"ordering", "amd"}, {"tol", c.solver_tol}};
  m["tolerances"] = {{"quadrature", c.quad_tol},
                     {"solver", c.solver_tol},
                     {"truncation", c.truncation_tol}};
  m["versions"] = {{"cornerlab", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};

  json results = json::array();
  for (const SweepRow& row : result.rows) {
    json j;
    j["L"] = row.L;
    if (row.height) j["height"] = *row.height;
    json levels = json::array();
    for (const LevelSolve& ls : row.levels) {
      json jl = {{"level", ls.level},       {"nodes", ls.nodes},
                 {"triangles", ls.triangles}, {"iterations", ls.iterations},
                 {"E1", ls.E1},             {"E2", ls.E2},
                 {"res1", ls.res1},         {"res2", ls.res2}};
      if (!ls.extra_eigenvalues.empty()) jl["extra"] = ls.extra_eigenvalues;
      levels.push_back(jl);
    }
    j["levels"] = levels;
    if (row.E1_extrap)
      j["extrapolation"] = {{"E1", *row.E1_extrap},
                            {"E2", row.E2_extrap ? json(*row.E2_extrap)
                                                 : json()},
                            {"flagged", row.extrap_flagged}};
    if (row.split_fem) j["split_fem"] = *row.split_fem;
    if (row.count_below) j["count_below"] = *row.count_below;
    json refs;
    if (row.E1_thm1)
      refs["theorem1"] = {{"E1", *row.E1_thm1},
                          {"E2", *row.E2_thm1},
                          {"splitting", *row.split_thm1}};
    if (row.split_quasi)
      refs["quasimode"] = {{"E1", *row.E1_quasi},
                           {"E2", *row.E2_quasi},
                           {"splitting", *row.split_quasi}};
    if (row.E1_1d) {
      json oned = {{"E1", *row.E1_1d}};
      if (row.E2_1d) oned["E2"] = *row.E2_1d;
      refs["separated"] = oned;
    }
    if (std::abs(c.omega - kPi / 3) <= 1e-9) {
      try {
        EquilateralPrediction eq = equilateral_prediction(row.L, c.beta);
        refs["equilateral"] = {
            {"w", eq.w},
            {"pencil", eq.n0_eigenvalues},
            {"expansion", eq.expansion_eigenvalues}};
      } catch (const std::invalid_argument&) {
      }
    }
    if (!refs.is_null()) j["references"] = refs;
    results.push_back(j);
  }
  m["results"] = results;
  return m.dump(2) + "\n";
}

namespace {

struct SvgSeries {
  const char* name;
  const char* color;
  std::vector<double> L;
  std::vector<double> split;
};

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string svg_text(const std::vector<SweepRow>& rows) {
  SvgSeries series[3] = {{"split_thm1", "#1f77b4", {}, {}},
                         {"split_fem", "#d62728", {}, {}},
                         {"split_quasi", "#2ca02c", {}, {}}};
  for (const SweepRow& row : rows) {
    const std::optional<double> vals[3] = {row.split_thm1, row.split_fem,
                                           row.split_quasi};
    for (int s = 0; s < 3; ++s) {
      if (vals[s] && *vals[s] > 0.0 && std::isfinite(*vals[s])) {
        series[s].L.push_back(row.L);
        series[s].split.push_back(*vals[s]);
      }
    }
  }

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const SvgSeries& s : series) {
    if (s.L.size() < 2) continue;
    for (std::size_t i = 0; i < s.L.size(); ++i) {
      xmin = std::min(xmin, s.L[i]);
      xmax = std::max(xmax, s.L[i]);
      const double ly = std::log(s.split[i]);
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  if (xmin > xmax) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymin > ymax) {
    ymin = -1.0;
    ymax = 0.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double px0 = 70, px1 = 610, py0 = 440, py1 = 40;
  auto X = [&](double L) {
    return px0 + (L - xmin) / (xmax - xmin) * (px1 - px0);
  };
  auto Y = [&](double ly) {
    return py0 + (ly - ymin) / (ymax - ymin) * (py1 - py0);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
        "height=\"480\" viewBox=\"0 0 640 480\">\n"
     << "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" "
        "fill=\"white\"/>\n"
     << "  <line x1=\"70\" y1=\"440\" x2=\"610\" y2=\"440\" "
        "stroke=\"black\"/>\n"
     << "  <line x1=\"70\" y1=\"440\" x2=\"70\" y2=\"40\" "
        "stroke=\"black\"/>\n";
  os << "  <text x=\"70\" y=\"460\" font-size=\"12\">L=" << g6(xmin)
     << "</text>\n"
     << "  <text x=\"560\" y=\"460\" font-size=\"12\">L=" << g6(xmax)
     << "</text>\n"
     << "  <text x=\"8\" y=\"444\" font-size=\"12\">" << g6(std::exp(ymin))
     << "</text>\n"
     << "  <text x=\"8\" y=\"44\" font-size=\"12\">" << g6(std::exp(ymax))
     << "</text>\n";

  const SvgSeries* fit_from = nullptr;
  for (const SvgSeries& s : series)
    if (s.L.size() >= 3 && !fit_from) fit_from = &s;

  int legend_y = 60;
  for (const SvgSeries& s : series) {
    if (s.L.size() < 2) continue;
    os << "  <polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.L.size(); ++i) {
      if (i) os << ' ';
      os << g6(X(s.L[i])) << ',' << g6(Y(std::log(s.split[i])));
    }
    os << "\"/>\n";
    os << "  <text x=\"480\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
       << s.color << "\">" << s.name << "</text>\n";
    legend_y += 16;
  }

  if (fit_from) {
    SlopeFit f = fit_loglinear(fit_from->L, fit_from->split);
    const double ya = f.slope * xmin + f.intercept;
    const double yb = f.slope * xmax + f.intercept;
    os << "  <line x1=\"" << g6(X(xmin)) << "\" y1=\"" << g6(Y(ya))
       << "\" x2=\"" << g6(X(xmax)) << "\" y2=\"" << g6(Y(yb))
       << "\" stroke=\"#555555\" stroke-dasharray=\"4 3\"/>\n";
    os << "  <text x=\"90\" y=\"60\" font-size=\"13\">slope " << g6(f.slope)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit(const SweepResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write_file = [&](const char* name, const std::string& text) {
    fs::path p = fs::path(out_dir) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
    os.flush();
    if (!os.good()) throw std::runtime_error("failed writing " + p.string());
  };
  write_file("sweep.csv", csv_text(result.rows));
  write_file("manifest.json", manifest_text(result));
  write_file("splitting.svg", svg_text(result.rows));
}

}  // namespace cornerlab
