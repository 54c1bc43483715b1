#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "cornerlab/asymptotics.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/quasimode.hpp"
#include "cornerlab/robin1d.hpp"

namespace py = pybind11;
using namespace cornerlab;

namespace {

py::dict oned_dict(const OneDResult& r) {
  py::dict d;
  d["k"] = r.k;
  d["offset"] = r.offset;
  d["energy"] = r.energy;
  d["expansion_energy"] = r.expansion_energy;
  return d;
}

py::object opt(const std::optional<double>& v) {
  if (v) return py::float_(*v);
  return py::none();
}

py::dict solve_two_corner(double omega, double beta, double L,
                          std::vector<int> levels, double trunc_tol,
                          double solver_tol, bool grade_corners) {
  RunConfig cfg;
  cfg.omega = omega;
  cfg.beta = beta;
  cfg.L_values = {L};
  cfg.mesh_levels = std::move(levels);
  cfg.grade_corners = grade_corners;
  cfg.truncation_tol = trunc_tol;
  cfg.solver_tol = solver_tol;
  SweepResult res = run_sweep(cfg);
  if (!res.failures.empty()) throw std::runtime_error(res.failures.front());
  const SweepRow& row = res.rows.at(0);
  py::dict d;
  d["L"] = row.L;
  d["height"] = opt(row.height);
  py::list lv;
  for (const LevelSolve& ls : row.levels) {
    py::dict jl;
    jl["level"] = ls.level;
    jl["nodes"] = ls.nodes;
    jl["E1"] = ls.E1;
    jl["E2"] = ls.E2;
    jl["res1"] = ls.res1;
    jl["res2"] = ls.res2;
    lv.append(jl);
  }
  d["levels"] = lv;
  d["E1_extrap"] = opt(row.E1_extrap);
  d["E2_extrap"] = opt(row.E2_extrap);
  d["extrap_flagged"] = row.extrap_flagged;
  d["E1_thm1"] = opt(row.E1_thm1);
  d["E2_thm1"] = opt(row.E2_thm1);
  d["split_thm1"] = opt(row.split_thm1);
  d["split_fem"] = opt(row.split_fem);
  d["split_quasi"] = opt(row.split_quasi);
  d["E1_1d"] = opt(row.E1_1d);
  d["E2_1d"] = opt(row.E2_1d);
  if (row.count_below) d["count_below"] = *row.count_below;
  return d;
}

}  // namespace

PYBIND11_MODULE(cornerlab, m) {
  m.doc() = "corner-localized robin eigenvalue laboratory";
  m.attr("__version__") = "0.1.0";

  m.def("sector_ground_energy", &sector_ground_energy, py::arg("alpha"),
        py::arg("beta"), "closed-form sector ground energy -beta^2/sin^2");
  m.def("essential_threshold", &essential_threshold, py::arg("beta"));
  m.def("sector_ground_state", &sector_ground_state, py::arg("alpha"),
        py::arg("beta"), py::arg("x1"), py::arg("x2"));
  m.def("tau_exponent", &tau_exponent, py::arg("omega"));
  m.def("delta_exponent", &delta_exponent, py::arg("omega"));
  m.def("coupling_w", &coupling_w, py::arg("alpha"), py::arg("L"),
        py::arg("beta"));

  m.def(
      "theorem1_prediction",
      [](double omega, double L, double beta) {
        PredictionRecord p = theorem1_prediction(omega, L, beta);
        py::dict d;
        d["omega"] = p.omega;
        d["L"] = p.L;
        d["beta"] = p.beta;
        d["E1"] = p.E1;
        d["E2"] = p.E2;
        d["splitting"] = p.splitting;
        d["tau"] = p.tau;
        d["delta"] = p.delta;
        d["w_closed"] = p.w_closed;
        d["n0_eigenvalues"] =
            std::vector<double>(p.n0_eigenvalues.begin(),
                                p.n0_eigenvalues.end());
        return d;
      },
      py::arg("omega"), py::arg("L"), py::arg("beta"));

  m.def(
      "equilateral_prediction",
      [](double L, double beta) {
        EquilateralPrediction e = equilateral_prediction(L, beta);
        py::dict d;
        d["L"] = e.L;
        d["beta"] = e.beta;
        d["w"] = e.w;
        d["n0_eigenvalues"] = std::vector<double>(e.n0_eigenvalues.begin(),
                                                  e.n0_eigenvalues.end());
        d["expansion_eigenvalues"] =
            std::vector<double>(e.expansion_eigenvalues.begin(),
                                e.expansion_eigenvalues.end());
        d["note"] = e.note;
        return d;
      },
      py::arg("L"), py::arg("beta"));

  m.def(
      "neumann_robin_k",
      [](double beta, double ell) {
        return oned_dict(neumann_robin_k(beta, ell));
      },
      py::arg("beta"), py::arg("ell"));
  m.def(
      "dirichlet_robin_k",
      [](double beta, double ell) {
        return oned_dict(dirichlet_robin_k(beta, ell));
      },
      py::arg("beta"), py::arg("ell"));
  m.def("dirichlet_bound_state_exists", &dirichlet_bound_state_exists,
        py::arg("beta"), py::arg("ell"));
  m.def(
      "expansion_error",
      [](const std::string& kind, double beta, double ell) {
        if (kind != "neumann" && kind != "dirichlet")
          throw std::invalid_argument("kind must be neumann or dirichlet");
        return expansion_error(kind == "neumann" ? OneDKind::neumann
                                                 : OneDKind::dirichlet,
                               beta, ell);
      },
      py::arg("kind"), py::arg("beta"), py::arg("ell"));

  m.def(
      "interval_robin_pair",
      [](double beta, double ell) {
        IntervalPair p = interval_robin_pair(beta, ell);
        py::dict d;
        d["even"] = oned_dict(p.even);
        d["odd"] = p.odd ? py::object(oned_dict(*p.odd)) : py::none();
        return d;
      },
      py::arg("beta"), py::arg("ell"));

  m.def(
      "separated_reference",
      [](double beta, double L, py::object H) {
        std::optional<double> h;
        if (!H.is_none()) h = H.cast<double>();
        SeparatedReference r = separated_reference(beta, L, h);
        py::dict d;
        d["transverse"] = r.transverse;
        d["E1"] = r.E1;
        d["E2"] = opt(r.E2);
        return d;
      },
      py::arg("beta"), py::arg("L"), py::arg("H") = py::none());

  m.def("coupling_numeric", &coupling_numeric, py::arg("omega"), py::arg("L"),
        py::arg("beta"), py::arg("quad_tol") = 1e-9);
  m.def("overlap_numeric", &overlap_numeric, py::arg("omega"), py::arg("L"),
        py::arg("beta"), py::arg("quad_tol") = 1e-9);

  m.def(
      "interaction_data",
      [](double omega, double L, double beta, double quad_tol) {
        InteractionData id = interaction_data(omega, L, beta, quad_tol);
        py::dict d;
        d["gram"] = std::vector<std::vector<double>>{
            {id.gram(0, 0), id.gram(0, 1)}, {id.gram(1, 0), id.gram(1, 1)}};
        d["w12"] = id.w12;
        d["w21"] = id.w21;
        d["residuals"] =
            std::vector<double>(id.residual.begin(), id.residual.end());
        d["support_separation"] = id.support_separation;
        d["quasi_energies"] = std::vector<double>(id.quasi_energies.begin(),
                                                  id.quasi_energies.end());
        return d;
      },
      py::arg("omega"), py::arg("L"), py::arg("beta"),
      py::arg("quad_tol") = 1e-9);

  m.def("solve", &solve_two_corner, py::arg("omega"), py::arg("beta"),
        py::arg("L"), py::arg("levels"), py::arg("trunc_tol") = 1e-8,
        py::arg("solver_tol") = 1e-9, py::arg("grade_corners") = true,
        "FEM eigenvalues of the two-corner domain across mesh levels with "
        "Richardson extrapolation and reference columns");
}
