#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cornerlab/acceptance.hpp"
#include "cornerlab/asymptotics.hpp"
#include "cornerlab/eigensolve.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/geometry.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/quasimode.hpp"
#include "cornerlab/robin1d.hpp"

using namespace cornerlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 0 ok, 2 config error, 3 solver/computation failure, 4 acceptance failure
template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const solver_error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

struct LevelPrint {
  std::vector<double> E1, E2;
};

LevelPrint solve_levels(const Polygon& poly, double beta, int k, double shift,
                        const std::vector<int>& levels, double tol,
                        bool grade) {
  LevelPrint out;
  for (int level : levels) {
    TriMesh mesh = triangulate(poly, level, grade);
    SparsePencil p = assemble(mesh);
    EigenResult er = lowest_eigenpairs(p, beta, k, shift, tol);
    std::printf("level %d  nodes %zu  ", level, mesh.nodes.size());
    for (int j = 0; j < k; ++j)
      std::printf("E%d %.12g  ", j + 1, er.eigenvalues[j]);
    std::printf("res %.2e\n", er.residuals[0]);
    out.E1.push_back(er.eigenvalues[0]);
    if (k > 1) out.E2.push_back(er.eigenvalues[1]);
  }
  return out;
}

void print_extrap(const char* name, const std::vector<double>& vals) {
  Extrapolation ex = richardson(vals);
  if (!ex.value) return;
  std::printf("%s extrapolated %.12g%s\n", name, *ex.value,
              ex.flagged ? "  (ratio outside [3,5]; finest raw value)" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for robin corner tunneling"};
  app.require_subcommand(1);

  auto* sec = app.add_subcommand(
      "sector", "ground energy of the truncated corner sector");
  double s_alpha = kPi / 4, s_beta = 1.0, s_trunc = 1e-8, s_tol = 1e-9;
  std::vector<int> s_levels;
  sec->add_option("--alpha", s_alpha, "sector half-angle in (0, pi/2)")
      ->required();
  sec->add_option("--beta", s_beta, "robin coupling")->required();
  sec->add_option("--levels", s_levels, "mesh refinement levels")
      ->required()
      ->delimiter(',');
  sec->add_option("--trunc-tol", s_trunc, "truncation tolerance");
  sec->add_option("--solver-tol", s_tol, "eigensolver residual tolerance");

  auto* sol = app.add_subcommand(
      "solve", "two lowest eigenvalues of the two-corner domain");
  double v_omega = kPi / 2, v_beta = 1.0, v_L = 2.0, v_trunc = 1e-8,
         v_tol = 1e-9;
  std::optional<double> v_height;
  std::vector<int> v_levels;
  sol->add_option("--omega", v_omega, "corner opening in (0, pi)")->required();
  sol->add_option("--beta", v_beta, "robin coupling")->required();
  sol->add_option("--L", v_L, "corner half-distance")->required();
  sol->add_option("--levels", v_levels, "mesh refinement levels")
      ->required()
      ->delimiter(',');
  auto* oh = sol->add_option("--height", v_height,
                             "dirichlet cut height (unbounded domains)");
  sol->add_option("--trunc-tol", v_trunc, "truncation tolerance")
      ->excludes(oh);
  sol->add_option("--solver-tol", v_tol, "eigensolver residual tolerance");

  auto* swp = app.add_subcommand("sweep", "run a configured L sweep");
  std::string config_path;
  swp->add_option("--config", config_path, "key=value config file")
      ->required();

  auto* oned = app.add_subcommand("oned", "1d robin interval references");
  double o_beta = 1.0, o_ell = 3.0;
  oned->add_option("--beta", o_beta, "robin coupling")->required();
  oned->add_option("--ell", o_ell, "interval half-length")->required();

  auto* qm = app.add_subcommand("quasimode",
                                "quadrature interaction data of the two "
                                "corner quasimodes");
  double q_omega = kPi / 2, q_beta = 1.0, q_L = 4.0, q_tol = 1e-9;
  qm->add_option("--omega", q_omega, "corner opening")->required();
  qm->add_option("--beta", q_beta, "robin coupling")->required();
  qm->add_option("--L", q_L, "corner half-distance")->required();
  qm->add_option("--quad-tol", q_tol, "quadrature absolute tolerance");

  auto* ver =
      app.add_subcommand("verify", "run the acceptance checks and report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sec->parsed()) {
    return guarded([&] {
      DomainSpec spec = DomainSpec::sector(s_alpha, s_beta);
      spec.truncation_height = truncation_height(spec, s_trunc);
      std::printf("sector alpha=%.12g beta=%.12g H=%.6g\n", s_alpha, s_beta,
                  *spec.truncation_height);
      Polygon poly = build_domain(spec);
      const double exact = sector_ground_energy(s_alpha, s_beta);
      LevelPrint lp =
          solve_levels(poly, s_beta, 1, 1.25 * exact, s_levels, s_tol, true);
      print_extrap("E1", lp.E1);
      Extrapolation ex = richardson(lp.E1);
      const double best = ex.value ? *ex.value : lp.E1.back();
      std::printf("closed form %.12g  relative error %.3e\n", exact,
                  std::abs(best - exact) / std::abs(exact));
      return 0;
    });
  }

  if (sol->parsed()) {
    return guarded([&] {
      DomainSpec spec = DomainSpec::two_corner(v_omega, v_L, v_beta);
      if (spec.unbounded_before_truncation()) {
        spec.truncation_height =
            v_height ? *v_height : truncation_height(spec, v_trunc);
        std::printf("two-corner omega=%.12g L=%.12g beta=%.12g H=%.6g\n",
                    v_omega, v_L, v_beta, *spec.truncation_height);
      } else {
        if (v_height)
          throw std::invalid_argument(
              "--height only applies to unbounded domains (omega >= pi/2)");
        std::printf("two-corner omega=%.12g L=%.12g beta=%.12g (bounded)\n",
                    v_omega, v_L, v_beta);
      }
      Polygon poly = build_domain(spec);
      const bool equi = std::abs(v_omega - kPi / 3) <= 1e-9;
      const double center =
          -2.0 * v_beta * v_beta / (1.0 - std::cos(v_omega));
      LevelPrint lp = solve_levels(poly, v_beta, equi ? 3 : 2, 1.25 * center,
                                   v_levels, v_tol, true);
      print_extrap("E1", lp.E1);
      print_extrap("E2", lp.E2);
      try {
        PredictionRecord pr = theorem1_prediction(v_omega, v_L, v_beta);
        std::printf("expansion E1 %.12g  E2 %.12g  splitting %.6g\n", pr.E1,
                    pr.E2, pr.splitting);
      } catch (const std::invalid_argument&) {
      }
      if (std::abs(v_omega - kPi / 2) <= 1e-12 && spec.truncation_height) {
        SeparatedReference ref =
            separated_reference(v_beta, v_L, *spec.truncation_height);
        std::printf("separated E1 %.12g", ref.E1);
        if (ref.E2) std::printf("  E2 %.12g", *ref.E2);
        std::printf("\n");
      }
      return 0;
    });
  }

  if (swp->parsed()) {
    return guarded([&] {
      RunConfig cfg;
      try {
        cfg = parse_config_file(config_path);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      SweepResult res = run_sweep(cfg);
      emit(res, cfg.outputs);
      std::printf("sweep: %zu L values, artifacts in %s\n", res.rows.size(),
                  cfg.outputs.c_str());
      for (const char* col : {"split_fem", "split_thm1", "split_quasi"}) {
        try {
          SlopeFit f = fit_slope(res.rows, col);
          std::printf("%s slope %.6g  intercept %.6g  r2 %.6f\n", col,
                      f.slope, f.intercept, f.r2);
        } catch (const std::invalid_argument&) {
        }
      }
      for (const std::string& f : res.failures)
        std::fprintf(stderr, "failure: %s\n", f.c_str());
      return res.solver_failed ? 3 : 0;
    });
  }

  if (oned->parsed()) {
    return guarded([&] {
      OneDResult n = neumann_robin_k(o_beta, o_ell);
      std::printf("neumann   k %.12g  energy %.12g  expansion %.12g  "
                  "|residual| %.3e\n",
                  n.k, n.energy, n.expansion_energy,
                  std::abs(expansion_error(OneDKind::neumann, o_beta, o_ell)));
      if (dirichlet_bound_state_exists(o_beta, o_ell)) {
        OneDResult d = dirichlet_robin_k(o_beta, o_ell);
        std::printf("dirichlet k %.12g  energy %.12g  expansion %.12g  "
                    "|residual| %.3e\n",
                    d.k, d.energy, d.expansion_energy,
                    std::abs(
                        expansion_error(OneDKind::dirichlet, o_beta, o_ell)));
        std::printf("interval splitting %.12g\n", d.energy - n.energy);
      } else {
        std::printf("dirichlet bound state absent (beta*ell <= 1)\n");
      }
      return 0;
    });
  }

  if (qm->parsed()) {
    return guarded([&] {
      InteractionData id = interaction_data(q_omega, q_L, q_beta, q_tol);
      std::printf("gram        [%.12g, %.12g; %.12g, %.12g]\n", id.gram(0, 0),
                  id.gram(0, 1), id.gram(1, 0), id.gram(1, 1));
      std::printf("coupling    w12 %.6e  w21 %.6e\n", id.w12, id.w21);
      std::printf("residuals   %.3e  %.3e\n", id.residual[0], id.residual[1]);
      std::printf("separation  %.6g\n", id.support_separation);
      std::printf("energies    %.12g  %.12g  split %.6e\n",
                  id.quasi_energies[0], id.quasi_energies[1],
                  id.quasi_energies[1] - id.quasi_energies[0]);
      std::printf("closed form w %.6e  splitting %.6e\n",
                  coupling_w(q_omega / 2, q_L, q_beta),
                  theorem1_prediction(q_omega, q_L, q_beta).splitting);
      if ((tau_exponent(q_omega) - 1.0) * q_L <= 1.0)
        std::printf("note: cutoff supports are disjoint at this L; the "
                    "numeric coupling vanishes identically\n");
      return 0;
    });
  }

  if (ver->parsed()) {
    return guarded(
        [&] { return run_acceptance(std::cout) == 0 ? 0 : 4; });
  }

  return 0;
}
