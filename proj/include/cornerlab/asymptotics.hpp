#pragma once
// Closed-form spectral quantities for the infinite Robin sector and the
// two-corner tunneling predictions assembled from them.
#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace cornerlab {

// Ground energy of the Robin sector of half-angle alpha: -beta^2/sin^2(alpha)
// for alpha < pi/2 (an isolated simple eigenvalue), and the essential
// threshold -beta^2 from the half-plane on.  alpha in (0, pi), beta > 0.
double sector_ground_energy(double alpha, double beta);

double essential_threshold(double beta);  // -beta^2

// L2-normalized sector ground state for alpha < pi/2, in sector coordinates
// with the bisector along +x1:
//   beta sqrt(2 cos a / sin^3 a) exp(-beta x1 / sin a),
// independent of x2.
double sector_ground_state(double alpha, double beta, double x1, double x2);

// Quasimode cutoff radius factor: 1/cos(omega) on (0, pi/3), 2 on [pi/2, pi).
// The band [pi/3, pi/2) is outside the validity range and throws.
double tau_exponent(double omega);

// Remainder exponent margin 2 (tau - 1), on both branches.
double delta_exponent(double omega);

// Closed-form coupling between the two corner states at half-angle alpha:
//   (2 beta^2 cos^2 a / sin^4 a) e^{-2 beta L cot a}.
double coupling_w(double alpha, double L, double beta);

// Two-term prediction for the two lowest eigenvalues of the two-corner
// domain.  splitting is evaluated through the full-angle route
//   8 b^2 (1+cos w)/(1-cos w)^2 e^{-2 b (1+cos w) L / sin w}
// so it can be checked against 2*coupling_w(omega/2, L, beta), which is the
// same number through a genuinely different floating-point expression.
struct PredictionRecord {
  double omega, L, beta;
  double E1, E2, splitting;
  double tau, delta;
  double w_closed;                       // coupling_w(omega/2, L, beta)
  std::array<double, 2> n0_eigenvalues;  // {E_alpha - w, E_alpha + w}
};
PredictionRecord theorem1_prediction(double omega, double L, double beta);

// corners x corners matrix with constant diagonal E and constant
// off-diagonal w (corners = 2 or 3), plus its exact spectrum in ascending
// order.  For corners = 3 and w > 0 the lower level E - w is exactly double.
Eigen::MatrixXd interaction_matrix(double E, double w, int corners);
std::vector<double> interaction_matrix_eigenvalues(double E, double w,
                                                   int corners);

// Equilateral case omega = pi/3: three identical corners, E = -4 beta^2.
// Two mutually inconsistent level layouts exist for the triple coupling; see
// the note field.  Both are reported, neither is asserted anywhere.
struct EquilateralPrediction {
  double L, beta;
  double w;                                     // 24 b^2 e^{-2 sqrt(3) b L}
  std::array<double, 3> n0_eigenvalues;         // {E-w, E-w, E+2w}
  std::array<double, 3> expansion_eigenvalues;  // {E-w, E+w, E+w}
  std::string note;
};
EquilateralPrediction equilateral_prediction(double L, double beta);

}  // namespace cornerlab
