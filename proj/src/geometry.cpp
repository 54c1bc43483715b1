#include "cornerlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cornerlab {
namespace {
constexpr double pi = std::numbers::pi;
}

DomainSpec DomainSpec::two_corner(double omega, double L, double beta,
                                  std::optional<double> H) {
  return {DomainKind::two_corner, omega, L, beta, H};
}

DomainSpec DomainSpec::sector(double alpha, double beta,
                              std::optional<double> H) {
  return {DomainKind::sector, 2.0 * alpha, 1.0, beta, H};
}

DomainSpec DomainSpec::equilateral(double L, double beta) {
  return {DomainKind::equilateral, pi / 3, L, beta, std::nullopt};
}

DomainSpec DomainSpec::rectangle(double L, double beta, double H) {
  return {DomainKind::rectangle_reference, pi / 2, L, beta, H};
}

bool DomainSpec::unbounded_before_truncation() const {
  switch (kind) {
    case DomainKind::two_corner:
      return omega >= pi / 2;
    case DomainKind::equilateral:
      return false;
    case DomainKind::sector:
    case DomainKind::rectangle_reference:
      return true;
  }
  return false;
}

void DomainSpec::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!(omega > 0.0) || !(omega < pi))
    throw std::invalid_argument("opening angle must lie in (0, pi)");
  if (kind == DomainKind::equilateral && std::fabs(omega - pi / 3) > 1e-12)
    throw std::invalid_argument("equilateral domain requires omega = pi/3");
  if (unbounded_before_truncation()) {
    if (!truncation_height)
      throw std::invalid_argument("unbounded domain needs a truncation height");
    if (!(*truncation_height > 0.0))
      throw std::invalid_argument("truncation height must be positive");
  } else if (truncation_height) {
    throw std::invalid_argument(
        "bounded domain must not carry a truncation height");
  }
}

double Polygon::signed_area() const {
  double a = 0.0;
  const size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Polygon build_domain(const DomainSpec& spec) {
  spec.validate();
  Polygon p;
  const double L = spec.L;
  switch (spec.kind) {
    case DomainKind::two_corner:
    case DomainKind::equilateral: {
      if (spec.omega < pi / 2) {
        p.vertices = {{-L, 0.0}, {L, 0.0}, {0.0, L * std::tan(spec.omega)}};
        p.edge_tags = {EdgeTag::robin, EdgeTag::robin, EdgeTag::robin};
      } else {
        double H = *spec.truncation_height;
        // for omega > pi/2 the cut is wider than the base, cot(omega) < 0
        double px = L - H * std::cos(spec.omega) / std::sin(spec.omega);
        p.vertices = {{-L, 0.0}, {L, 0.0}, {px, H}, {-px, H}};
        p.edge_tags = {EdgeTag::robin, EdgeTag::robin, EdgeTag::artificial,
                       EdgeTag::robin};
      }
      break;
    }
    case DomainKind::sector: {
      double H = *spec.truncation_height;
      double t = H * std::tan(spec.corner_half_angle());
      p.vertices = {{0.0, 0.0}, {H, -t}, {H, t}};
      p.edge_tags = {EdgeTag::robin, EdgeTag::artificial, EdgeTag::robin};
      break;
    }
    case DomainKind::rectangle_reference: {
      double H = *spec.truncation_height;
      p.vertices = {{-L, 0.0}, {L, 0.0}, {L, H}, {-L, H}};
      p.edge_tags = {EdgeTag::robin, EdgeTag::robin, EdgeTag::artificial,
                     EdgeTag::robin};
      break;
    }
  }
  return p;
}

double AgmonWeight::operator()(const Eigen::Vector2d& x) const {
  double best = cap;
  for (size_t j = 0; j < corners.size(); ++j) {
    double cot = std::cos(half_angles[j]) / std::sin(half_angles[j]);
    best = std::min(best, cot * (x - corners[j]).norm());
  }
  return beta * best;
}

AgmonWeight agmon_weight(const DomainSpec& spec) {
  spec.validate();
  AgmonWeight w;
  w.beta = spec.beta;
  w.cap = 10.0 * spec.L;
  const double L = spec.L;
  switch (spec.kind) {
    case DomainKind::two_corner:
    case DomainKind::equilateral:
      w.corners = {{-L, 0.0}, {L, 0.0}};
      w.half_angles = {spec.corner_half_angle(), spec.corner_half_angle()};
      if (spec.omega < pi / 2) {
        w.corners.push_back({0.0, L * std::tan(spec.omega)});
        w.half_angles.push_back(pi / 2 - spec.omega);
      }
      break;
    case DomainKind::sector:
      w.corners = {{0.0, 0.0}};
      w.half_angles = {spec.corner_half_angle()};
      break;
    case DomainKind::rectangle_reference:
      w.corners = {{-L, 0.0}, {L, 0.0}};
      w.half_angles = {pi / 4, pi / 4};
      break;
  }
  return w;
}

double truncation_height(const DomainSpec& spec, double tol) {
  if (!(spec.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!spec.unbounded_before_truncation())
    throw std::invalid_argument(
        "truncation height applies to unbounded domains only");
  if (!(tol > 0.0) || !(tol <= 1.0))
    throw std::invalid_argument("truncation tol must lie in (0, 1]");
  double a = spec.corner_half_angle();
  double cot = std::cos(a) / std::sin(a);
  // distance from the cut line to the nearest physical corner equals H for
  // both the two-corner strip and the sector, so the decayed magnitude on
  // the cut is exp(-beta cot(a) H); ask for ln(1/tol) with a 10% margin
  return std::max(-std::log(tol) / (0.9 * spec.beta * cot), 1.0);
}

std::vector<HalfPlane> domain_halfplanes(const DomainSpec& spec,
                                         bool include_cut) {
  spec.validate();
  std::vector<HalfPlane> planes;
  const double L = spec.L;
  switch (spec.kind) {
    case DomainKind::two_corner:
    case DomainKind::equilateral: {
      double s = std::sin(spec.omega), c = std::cos(spec.omega);
      planes.push_back({{0.0, 1.0}, 0.0});
      planes.push_back({{s, -c}, s * L});
      planes.push_back({{-s, -c}, s * L});
      if (include_cut && spec.truncation_height)
        planes.push_back({{0.0, -1.0}, *spec.truncation_height});
      break;
    }
    case DomainKind::sector: {
      double a = spec.corner_half_angle();
      planes.push_back({{std::sin(a), -std::cos(a)}, 0.0});
      planes.push_back({{std::sin(a), std::cos(a)}, 0.0});
      if (include_cut)
        planes.push_back({{-1.0, 0.0}, *spec.truncation_height});
      break;
    }
    case DomainKind::rectangle_reference: {
      planes.push_back({{0.0, 1.0}, 0.0});
      planes.push_back({{1.0, 0.0}, L});
      planes.push_back({{-1.0, 0.0}, L});
      if (include_cut)
        planes.push_back({{0.0, -1.0}, *spec.truncation_height});
      break;
    }
  }
  return planes;
}

std::vector<Eigen::Vector2d> clip_convex(std::vector<Eigen::Vector2d> poly,
                                         const std::vector<HalfPlane>& planes) {
  for (const auto& hp : planes) {
    std::vector<Eigen::Vector2d> out;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& a = poly[i];
      const Eigen::Vector2d& b = poly[(i + 1) % n];
      double va = hp.n.dot(a) + hp.c;
      double vb = hp.n.dot(b) + hp.c;
      if (va >= 0.0) out.push_back(a);
      if ((va > 0.0 && vb < 0.0) || (va < 0.0 && vb > 0.0))
        out.push_back(a + (va / (va - vb)) * (b - a));
    }
    poly = std::move(out);
    if (poly.empty()) break;
  }
  return poly;
}

}  // namespace cornerlab
