#include "cornerlab/quasimode.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cornerlab/asymptotics.hpp"
#include "cornerlab/quadrature.hpp"

namespace cornerlab {

namespace {

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double cutoff_chi(double t) {
  if (t <= -1.0) return 1.0;
  if (t >= 0.0) return 0.0;
  double p = bump(-t), q = bump(1.0 + t);
  return p / (p + q);
}

double cutoff_chi_d1(double t) {
  if (t <= -1.0 || t >= 0.0) return 0.0;
  double p = bump(-t), q = bump(1.0 + t);
  // this close to an edge one factor underflows and the quotient is flat
  if (p == 0.0 || q == 0.0) return 0.0;
  double pd = -p / (t * t);
  double qd = q / ((1.0 + t) * (1.0 + t));
  double d = p + q;
  return (pd * q - p * qd) / (d * d);
}

double cutoff_chi_d2(double t) {
  if (t <= -1.0 || t >= 0.0) return 0.0;
  double p = bump(-t), q = bump(1.0 + t);
  if (p == 0.0 || q == 0.0) return 0.0;
  double t2 = t * t, u = 1.0 + t, u2 = u * u;
  double pd = -p / t2;
  double qd = q / u2;
  double pdd = p * (1.0 + 2.0 * t) / (t2 * t2);
  double qdd = -q * (1.0 + 2.0 * t) / (u2 * u2);
  double d = p + q;
  double n = pd * q - p * qd;
  double nd = pdd * q - p * qdd;
  return (nd - 2.0 * n * (pd + qd) / d) / (d * d);
}

double phi_cutoff(double alpha, double ell, const Eigen::Vector2d& y) {
  if (!(ell * std::cos(alpha) > 2.0))
    throw std::invalid_argument("cutoff plateau needs ell cos(alpha) > 2");
  return cutoff_chi(y.x() - ell * std::cos(alpha)) *
         cutoff_chi(y.norm() - (ell - 1.0));
}

Eigen::Vector2d Quasimode::frame(const Eigen::Vector2d& x) const {
  // spelled out so that mirrored inputs hit sign-symmetric float paths
  const double d0 = x.x() - apex.x();
  const double d1 = x.y() - apex.y();
  return {rot(0, 0) * d0 + rot(0, 1) * d1, rot(1, 0) * d0 + rot(1, 1) * d1};
}

double Quasimode::cutoff(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  return cutoff_chi(y.x() - ell * std::cos(alpha)) *
         cutoff_chi(y.norm() - (ell - 1.0));
}

Eigen::Vector2d Quasimode::cutoff_grad(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  double r = y.norm();
  double t1 = y.x() - ell * std::cos(alpha);
  double t2 = r - (ell - 1.0);
  Eigen::Vector2d gy(cutoff_chi_d1(t1) * cutoff_chi(t2), 0.0);
  double g2 = cutoff_chi(t1) * cutoff_chi_d1(t2);
  if (g2 != 0.0 && r > 0.0) gy += (g2 / r) * y;
  return rot.transpose() * gy;
}

double Quasimode::cutoff_laplacian(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  double r = y.norm();
  double t1 = y.x() - ell * std::cos(alpha);
  double t2 = r - (ell - 1.0);
  double lap = cutoff_chi_d2(t1) * cutoff_chi(t2);
  if (r > 0.0) {
    double d2 = cutoff_chi_d1(t2);
    lap += 2.0 * cutoff_chi_d1(t1) * d2 * (y.x() / r) +
           cutoff_chi(t1) * (cutoff_chi_d2(t2) + d2 / r);
  }
  return lap;
}

double Quasimode::ground(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  double s = std::sin(alpha);
  double amp = beta * std::sqrt(2.0 * std::cos(alpha) / (s * s * s));
  return amp * std::exp(-beta * y.x() / s);
}

Eigen::Vector2d Quasimode::ground_grad(const Eigen::Vector2d& x) const {
  double rate = beta / std::sin(alpha);
  return rot.transpose() * Eigen::Vector2d(-rate * ground(x), 0.0);
}

double Quasimode::value(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  double s = std::sin(alpha);
  double amp = beta * std::sqrt(2.0 * std::cos(alpha) / (s * s * s));
  double t1 = y.x() - ell * std::cos(alpha);
  double t2 = y.norm() - (ell - 1.0);
  return cutoff_chi(t1) * cutoff_chi(t2) * amp * std::exp(-beta * y.x() / s);
}

double Quasimode::defect(const Eigen::Vector2d& x) const {
  Eigen::Vector2d y = frame(x);
  double r = y.norm();
  double cA = std::cos(alpha), s = std::sin(alpha);
  double t1 = y.x() - ell * cA;
  double t2 = r - (ell - 1.0);
  double c1 = cutoff_chi(t1), c2 = cutoff_chi(t2);
  double d1 = cutoff_chi_d1(t1), d2 = cutoff_chi_d1(t2);
  double axial = d1 * c2;
  double radial = 0.0;
  double lap = cutoff_chi_d2(t1) * c2;
  if (r > 0.0) {
    radial = c1 * d2 * (y.x() / r);
    lap += 2.0 * d1 * d2 * (y.x() / r) + c1 * (cutoff_chi_d2(t2) + d2 / r);
  }
  if (axial == 0.0 && radial == 0.0 && lap == 0.0) return 0.0;
  double rate = beta / s;
  double u = beta * std::sqrt(2.0 * cA / (s * s * s)) *
             std::exp(-beta * y.x() / s);
  // (-Lap - E)(v U) = -(2 grad v . grad U + (Lap v) U), grad U = -rate U e1
  return u * (2.0 * rate * (axial + radial) - lap);
}

Quasimode make_quasimode(int corner, double omega, double L, double beta) {
  if (corner != 1 && corner != 2)
    throw std::invalid_argument("corner must be 1 or 2");
  if (!(omega > 0.0) || !(omega < std::numbers::pi))
    throw std::invalid_argument("opening angle must lie in (0, pi)");
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  Quasimode q;
  q.corner = corner;
  q.omega = omega;
  q.L = L;
  q.beta = beta;
  q.alpha = 0.5 * omega;
  q.tau = tau_exponent(omega);  // throws on the excluded angle band
  q.ell = q.tau * L;
  if (!(q.ell * std::cos(q.alpha) > 2.0))
    throw std::invalid_argument(
        "corners too close: cutoff plateau needs tau L cos(omega/2) > 2");
  double c = std::cos(q.alpha), s = std::sin(q.alpha);
  if (corner == 1) {
    q.apex = {-L, 0.0};
    q.rot << c, s, -s, c;
  } else {
    q.apex = {L, 0.0};
    q.rot << -c, s, -s, -c;
  }
  return q;
}

namespace {

// Half-planes of the untruncated domain; the trial states live on the
// uncut set and die well before any artificial edge.
std::vector<HalfPlane> uncut_planes(double omega, double L, double beta) {
  DomainSpec spec = DomainSpec::two_corner(omega, L, beta);
  if (spec.unbounded_before_truncation()) spec.truncation_height = 1.0;
  return domain_halfplanes(spec, false);
}

Box2 mode_box(const Quasimode& q) {
  double R = q.support_radius();
  return {{q.apex.x() - R, 0.0}, {q.apex.x() + R, R}};
}

Box2 box_union(const Box2& a, const Box2& b) {
  return {{std::min(a.lo.x(), b.lo.x()), std::min(a.lo.y(), b.lo.y())},
          {std::max(a.hi.x(), b.hi.x()), std::max(a.hi.y(), b.hi.y())}};
}

Box2 box_intersection(const Box2& a, const Box2& b) {
  Box2 r{{std::max(a.lo.x(), b.lo.x()), std::max(a.lo.y(), b.lo.y())},
         {std::min(a.hi.x(), b.hi.x()), std::min(a.hi.y(), b.hi.y())}};
  if (r.lo.x() > r.hi.x() || r.lo.y() > r.hi.y()) r.hi = r.lo;  // disjoint
  return r;
}

}  // namespace

Eigen::Matrix2d gram_matrix(double omega, double L, double beta,
                            double quad_tol) {
  Quasimode q1 = make_quasimode(1, omega, L, beta);
  Quasimode q2 = make_quasimode(2, omega, L, beta);
  auto planes = uncut_planes(omega, L, beta);
  Box2 box = box_union(mode_box(q1), mode_box(q2));
  auto f = [&](double x, double y, double* out) {
    Eigen::Vector2d p(x, y);
    double a = q1.value(p), b = q2.value(p);
    out[0] = a * a;
    out[1] = a * b;
    out[2] = b * a;  // same products, commuted; sums stay bitwise equal
    out[3] = b * b;
  };
  QuadResultN r = integrate_adaptive_n(f, 4, box, planes, quad_tol);
  Eigen::Matrix2d G;
  G << r.value[0], r.value[1], r.value[2], r.value[3];
  return G;
}

double overlap_numeric(double omega, double L, double beta, double quad_tol) {
  Quasimode q1 = make_quasimode(1, omega, L, beta);
  Quasimode q2 = make_quasimode(2, omega, L, beta);
  auto planes = uncut_planes(omega, L, beta);
  Box2 box = box_intersection(mode_box(q1), mode_box(q2));
  auto f = [&](double x, double y, double* out) {
    Eigen::Vector2d p(x, y);
    out[0] = q1.value(p) * q2.value(p);
  };
  return integrate_adaptive_n(f, 1, box, planes, quad_tol).value[0];
}

double coupling_numeric(double omega, double L, double beta, double quad_tol) {
  Quasimode q1 = make_quasimode(1, omega, L, beta);
  Quasimode q2 = make_quasimode(2, omega, L, beta);
  auto planes = uncut_planes(omega, L, beta);
  Box2 box = box_intersection(mode_box(q1), mode_box(q2));
  auto f = [&](double x, double y, double* out) {
    Eigen::Vector2d p(x, y);
    Eigen::Vector2d cross =
        q1.ground(p) * q2.ground_grad(p) - q2.ground(p) * q1.ground_grad(p);
    out[0] = q2.cutoff(p) * cross.dot(q1.cutoff_grad(p));
  };
  return integrate_adaptive_n(f, 1, box, planes, quad_tol).value[0];
}

double residual_norm(double omega, double L, double beta, int corner,
                     double quad_tol) {
  Quasimode q = make_quasimode(corner, omega, L, beta);
  auto planes = uncut_planes(omega, L, beta);
  auto f = [&](double x, double y, double* out) {
    double d = q.defect({x, y});
    out[0] = d * d;
  };
  return std::sqrt(
      integrate_adaptive_n(f, 1, mode_box(q), planes, quad_tol).value[0]);
}

InteractionData interaction_data(double omega, double L, double beta,
                                 double quad_tol) {
  Quasimode q1 = make_quasimode(1, omega, L, beta);
  Quasimode q2 = make_quasimode(2, omega, L, beta);
  auto planes = uncut_planes(omega, L, beta);
  Box2 box = box_union(mode_box(q1), mode_box(q2));
  auto f = [&](double x, double y, double* out) {
    Eigen::Vector2d p(x, y);
    double v1 = q1.cutoff(p), v2 = q2.cutoff(p);
    double u1 = q1.ground(p), u2 = q2.ground(p);
    double s1 = v1 * u1, s2 = v2 * u2;
    Eigen::Vector2d gv1 = q1.cutoff_grad(p), gv2 = q2.cutoff_grad(p);
    Eigen::Vector2d gu1 = q1.ground_grad(p), gu2 = q2.ground_grad(p);
    double d1 = q1.defect(p), d2 = q2.defect(p);
    out[0] = s1 * s1;
    out[1] = s1 * s2;
    out[2] = s2 * s1;
    out[3] = s2 * s2;
    out[4] = v2 * (u1 * gu2 - u2 * gu1).dot(gv1);
    out[5] = v1 * (u2 * gu1 - u1 * gu2).dot(gv2);
    out[6] = d1 * d1;
    out[7] = d2 * d2;
    out[8] = d1 * s1;
    out[9] = d1 * s2;
    out[10] = d2 * s1;
    out[11] = d2 * s2;
    out[12] = (u1 * u1) * gv1.dot(gv1);
    out[13] = (u1 * u2) * gv1.dot(gv2);
    out[14] = (u1 * u2) * gv2.dot(gv1);
    out[15] = (u2 * u2) * gv2.dot(gv2);
  };
  QuadResultN r = integrate_adaptive_n(f, 16, box, planes, quad_tol);

  InteractionData data;
  data.gram << r.value[0], r.value[1], r.value[2], r.value[3];
  data.w12 = r.value[4];
  data.w21 = r.value[5];
  data.residual = {std::sqrt(r.value[6]), std::sqrt(r.value[7])};
  data.b << r.value[8], r.value[9], r.value[10], r.value[11];
  data.eps << r.value[12], r.value[13], r.value[14], r.value[15];

  double a = 0.5 * omega;
  double cot = std::cos(a) / std::sin(a);
  data.support_separation =
      (tau_exponent(omega) - 1.0) * L * cot - 2.0 / std::sin(a);

  // 2x2 Rayleigh-Ritz on span{psi_1, psi_2}: the quadratic form evaluates
  // to E_alpha G + W exactly up to overlap-sized remainders, so the pencil
  // (E_alpha G + sym W, G) carries the tunneling pair
  double Ea = sector_ground_energy(a, beta);
  double wbar = 0.5 * (data.w12 + data.w21);
  Eigen::Matrix2d Mq = Ea * data.gram;
  Mq(0, 1) += wbar;
  Mq(1, 0) += wbar;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges(
      Mq, data.gram, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  data.quasi_energies = {ges.eigenvalues()(0), ges.eigenvalues()(1)};
  return data;
}

double subspace_distance_bound(const std::vector<double>& residuals,
                               const Eigen::MatrixXd& gram, double gap_a) {
  if (!(gap_a > 0.0))
    throw std::invalid_argument("spectral gap parameter must be positive");
  const auto n = static_cast<Eigen::Index>(residuals.size());
  if (n == 0 || gram.rows() != n || gram.cols() != n)
    throw std::invalid_argument("gram size must match the residual count");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  double lam = es.eigenvalues()(0);
  if (!(lam > 0.0))
    throw std::invalid_argument("gram matrix must be positive definite");
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, std::fabs(r));
  return (1.0 / gap_a) * std::sqrt(double(n) / lam) * worst;
}

BoundaryDefectReport boundary_normal_derivative_diagnostic(
    double alpha, double ell, const std::vector<double>& distances) {
  if (!(ell * std::cos(alpha) > 2.0))
    throw std::invalid_argument("cutoff plateau needs ell cos(alpha) > 2");
  double c = std::cos(alpha), s = std::sin(alpha);
  BoundaryDefectReport rep;
  for (double d : distances) {
    if (!(d > 0.0))
      throw std::invalid_argument("sample distances must be positive");
    for (int ray : {-1, +1}) {
      Eigen::Vector2d y(d * c, ray * d * s);
      Eigen::Vector2d nrm(-s, ray * c);
      double t1 = y.x() - ell * c;
      double t2 = d - (ell - 1.0);
      BoundaryDefectSample smp;
      smp.point = y;
      smp.ray = ray;
      smp.axial_term = nrm.x() * cutoff_chi_d1(t1) * cutoff_chi(t2);
      // the radial factor's direction is y/|y|, orthogonal to the normal,
      // so its share is pure roundoff; keep it so the report is the full
      // chain-rule value and not a simplification of it
      double radial = cutoff_chi(t1) * cutoff_chi_d1(t2) * (nrm.dot(y) / d);
      smp.normal_derivative = smp.axial_term + radial;
      double h = 1e-4;
      smp.fd_value = (phi_cutoff(alpha, ell, y + h * nrm) -
                      phi_cutoff(alpha, ell, y - h * nrm)) /
                     (2.0 * h);
      if (std::fabs(smp.normal_derivative) > rep.max_abs) {
        rep.max_abs = std::fabs(smp.normal_derivative);
        rep.argmax = y;
      }
      rep.samples.push_back(smp);
    }
  }
  return rep;
}

}  // namespace cornerlab
