#pragma once
// Trial states for the two-corner domain: the explicit sector ground state
// carried into each corner frame and shut off by a smooth radial/axial
// cutoff before it can see the opposite corner.  Everything downstream
// (overlaps, the coupling integral, defect norms) is adaptive quadrature
// over the supports; no meshes are involved.
#include <Eigen/Core>

#include <array>
#include <vector>

#include "cornerlab/geometry.hpp"

namespace cornerlab {

// Smooth transition 1 -> 0 over t in [-1, 0], identically 1 left of -1 and
// 0 right of 0.  Built from the standard exp(-1/s) bump quotient, so every
// derivative vanishes at both plateau edges.
double cutoff_chi(double t);
double cutoff_chi_d1(double t);
double cutoff_chi_d2(double t);

// Product cutoff in sector coordinates: an axial factor in y1 that shuts
// off at y1 = ell cos(alpha) and a radial factor that shuts off at
// |y| = ell - 1.  Requires ell cos(alpha) > 2 so that the inner plateau
// actually contains a neighbourhood of the corner; throws otherwise.
double phi_cutoff(double alpha, double ell, const Eigen::Vector2d& y);

struct Quasimode {
  int corner = 1;  // 1 = left, 2 = right
  double omega = 0, L = 0, beta = 0;
  double alpha = 0;  // omega / 2
  double tau = 0;    // cutoff reach exponent, from tau_exponent(omega)
  double ell = 0;    // tau * L
  Eigen::Matrix2d rot;   // y = rot * (x - apex)
  Eigen::Vector2d apex;

  Eigen::Vector2d frame(const Eigen::Vector2d& x) const;

  double cutoff(const Eigen::Vector2d& x) const;         // v_j
  Eigen::Vector2d cutoff_grad(const Eigen::Vector2d& x) const;   // in x frame
  double cutoff_laplacian(const Eigen::Vector2d& x) const;

  double ground(const Eigen::Vector2d& x) const;         // U_j
  Eigen::Vector2d ground_grad(const Eigen::Vector2d& x) const;   // in x frame

  double value(const Eigen::Vector2d& x) const;          // v_j U_j

  // (-Laplace - E_alpha) applied to the mode, in closed form.  Supported in
  // the cutoff transition shell; exactly zero on the inner plateau and past
  // the support radius.
  double defect(const Eigen::Vector2d& x) const;

  double support_radius() const { return ell - 1.0; }
};

// Frames: the left mode rotates the lower edge onto the lower sector ray,
// the right mode is its mirror image.  Evaluating the right mode at
// (-x1, x2) reproduces the left mode at (x1, x2) bitwise.
Quasimode make_quasimode(int corner, double omega, double L, double beta);

// Overlap matrix of the two modes over the (uncut) domain.  Both
// off-diagonal products are accumulated in the same traversal, so
// G(0,1) == G(1,0) holds bitwise.
Eigen::Matrix2d gram_matrix(double omega, double L, double beta,
                            double quad_tol);

// Off-diagonal overlap alone, over the support intersection.  The full
// gram matrix shares one absolute error budget across an order-one
// diagonal, which caps how small a tolerance is reachable; this variant
// stays meaningful down to overlaps near machine size.
double overlap_numeric(double omega, double L, double beta, double quad_tol);

// The interaction integral
//   w12 = int v_2 (U_1 grad U_2 - U_2 grad U_1) . grad v_1
// over the support intersection; returns the 1 -> 2 orientation.
double coupling_numeric(double omega, double L, double beta, double quad_tol);

// L2 norm of defect() over the support of the requested corner's mode.
double residual_norm(double omega, double L, double beta, int corner,
                     double quad_tol);

struct InteractionData {
  Eigen::Matrix2d gram;
  double w12 = 0, w21 = 0;       // both orientations of the coupling
  std::array<double, 2> residual{};  // defect norms of the two modes
  Eigen::Matrix2d b;     // b_jk = int defect_j psi_k  (diagnostic)
  Eigen::Matrix2d eps;   // eps_jk = int U_j U_k grad v_j . grad v_k
  double support_separation = 0;  // (tau-1) L cot(alpha) - 2 / sin(alpha)
  std::array<double, 2> quasi_energies{};  // 2x2 Rayleigh-Ritz on the pair
};
InteractionData interaction_data(double omega, double L, double beta,
                                 double quad_tol);

// (1/a) sqrt(n / lambda_min(gram)) max_j residuals[j].  a must be positive
// and gram positive definite; never guesses a spectral gap on its own.
double subspace_distance_bound(const std::vector<double>& residuals,
                               const Eigen::MatrixXd& gram, double gap_a);

// Samples of n . grad(phi_cutoff) along both boundary rays of the sector at
// the requested distances from the vertex.  The radial cutoff factor is
// constant along each ray, so the defect reduces to the axial term; the
// values are reported, not asserted to vanish, because they do not.
struct BoundaryDefectSample {
  Eigen::Vector2d point;
  int ray = -1;                   // -1 lower ray, +1 upper ray
  double normal_derivative = 0;   // closed form
  double fd_value = 0;            // central difference along the normal
  double axial_term = 0;          // contribution of the axial factor alone
};
struct BoundaryDefectReport {
  std::vector<BoundaryDefectSample> samples;
  double max_abs = 0;
  Eigen::Vector2d argmax{0, 0};
};
BoundaryDefectReport boundary_normal_derivative_diagnostic(
    double alpha, double ell, const std::vector<double>& distances);

}  // namespace cornerlab
