#include "cornerlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cornerlab {
namespace {

constexpr double pi = std::numbers::pi;

void require_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

}  // namespace

double essential_threshold(double beta) {
  require_beta(beta);
  return -beta * beta;
}

double sector_ground_energy(double alpha, double beta) {
  require_beta(beta);
  if (!(alpha > 0.0) || !(alpha < pi))
    throw std::invalid_argument("sector half-angle must lie in (0, pi)");
  if (alpha >= pi / 2) return -beta * beta;
  double s = std::sin(alpha);
  return -beta * beta / (s * s);
}

double sector_ground_state(double alpha, double beta, double x1, double x2) {
  require_beta(beta);
  if (!(alpha > 0.0) || !(alpha < pi / 2))
    throw std::invalid_argument(
        "sector ground state exists only for half-angle below pi/2");
  (void)x2;  // profile is flat across the sector
  double s = std::sin(alpha);
  double norm = beta * std::sqrt(2.0 * std::cos(alpha) / (s * s * s));
  return norm * std::exp(-beta * x1 / s);
}

double tau_exponent(double omega) {
  if (omega > 0.0 && omega < pi / 3) return 1.0 / std::cos(omega);
  if (omega >= pi / 2 && omega < pi) return 2.0;
  throw std::invalid_argument(
      "tau is defined on (0, pi/3) and [pi/2, pi) only");
}

double delta_exponent(double omega) { return 2.0 * (tau_exponent(omega) - 1.0); }

double coupling_w(double alpha, double L, double beta) {
  require_beta(beta);
  if (!(alpha > 0.0) || !(alpha < pi / 2))
    throw std::invalid_argument("coupling_w needs half-angle in (0, pi/2)");
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  double s = std::sin(alpha), c = std::cos(alpha);
  double s2 = s * s;
  return 2.0 * beta * beta * c * c / (s2 * s2) *
         std::exp(-2.0 * beta * L * c / s);
}

PredictionRecord theorem1_prediction(double omega, double L, double beta) {
  require_beta(beta);
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  double tau = tau_exponent(omega);  // also validates the omega range
  double c = std::cos(omega), s = std::sin(omega);
  double center = -2.0 * beta * beta / (1.0 - c);
  double split = 8.0 * beta * beta * (1.0 + c) / ((1.0 - c) * (1.0 - c)) *
                 std::exp(-2.0 * beta * (1.0 + c) * L / s);
  PredictionRecord p;
  p.omega = omega;
  p.L = L;
  p.beta = beta;
  p.E1 = center - 0.5 * split;
  p.E2 = center + 0.5 * split;
  p.splitting = split;
  p.tau = tau;
  p.delta = 2.0 * (tau - 1.0);
  p.w_closed = coupling_w(omega / 2, L, beta);
  double e_alpha = sector_ground_energy(omega / 2, beta);
  auto n0 = interaction_matrix_eigenvalues(e_alpha, p.w_closed, 2);
  p.n0_eigenvalues = {n0[0], n0[1]};
  return p;
}

Eigen::MatrixXd interaction_matrix(double E, double w, int corners) {
  if (corners != 2 && corners != 3)
    throw std::invalid_argument("interaction matrix supports 2 or 3 corners");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(corners, corners, w);
  m.diagonal().setConstant(E);
  return m;
}

std::vector<double> interaction_matrix_eigenvalues(double E, double w,
                                                   int corners) {
  if (corners != 2 && corners != 3)
    throw std::invalid_argument("interaction matrix supports 2 or 3 corners");
  std::vector<double> vals;
  if (corners == 2)
    vals = {E - std::fabs(w), E + std::fabs(w)};
  else
    // E - w appears twice as the same expression, so the degeneracy is exact
    vals = {E - w, E - w, E + 2.0 * w};
  std::sort(vals.begin(), vals.end());
  return vals;
}

EquilateralPrediction equilateral_prediction(double L, double beta) {
  require_beta(beta);
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  EquilateralPrediction eq;
  eq.L = L;
  eq.beta = beta;
  eq.w = 24.0 * beta * beta * std::exp(-2.0 * std::sqrt(3.0) * beta * L);
  double E = sector_ground_energy(pi / 6, beta);
  auto n0 = interaction_matrix_eigenvalues(E, eq.w, 3);
  eq.n0_eigenvalues = {n0[0], n0[1], n0[2]};
  eq.expansion_eigenvalues = {E - eq.w, E + eq.w, E + eq.w};
  eq.note =
      "the constant off-diagonal coupling matrix puts the double level below "
      "the simple one (E-w, E-w, E+2w), while the companion expansion puts it "
      "above (E-w, E+w, E+w); the two layouts disagree and neither is "
      "asserted here. The exponent keeps the coupling constant in it, "
      "w = 24 beta^2 exp(-2 sqrt(3) beta L).";
  return eq;
}

}  // namespace cornerlab
