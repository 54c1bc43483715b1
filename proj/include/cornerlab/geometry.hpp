#pragma once
// Domain family: two corners of opening omega at (-L,0) and (L,0) joined by
// a straight bottom edge.  Below omega = pi/2 the domain closes into a
// triangle; from pi/2 on it is an unbounded strip-like set and is cut at a
// computed height by an artificial Dirichlet edge.  A single truncated
// sector and an axis-aligned rectangle are carried along as references.
#include <Eigen/Core>

#include <optional>
#include <vector>

namespace cornerlab {

enum class DomainKind { two_corner, sector, equilateral, rectangle_reference };
enum class EdgeTag { robin, artificial };

struct DomainSpec {
  DomainKind kind = DomainKind::two_corner;
  double omega = 1.5707963267948966;  // full opening at the bottom corners;
                                      // for the sector kind twice the
                                      // sector half-angle
  double L = 1.0;                     // half distance between the corners
  double beta = 1.0;                  // Robin coupling, positive
  std::optional<double> truncation_height;  // present iff the untruncated
                                            // domain is unbounded

  static DomainSpec two_corner(double omega, double L, double beta,
                               std::optional<double> H = {});
  static DomainSpec sector(double alpha, double beta,
                           std::optional<double> H = {});
  static DomainSpec equilateral(double L, double beta);
  static DomainSpec rectangle(double L, double beta, double H);

  double corner_half_angle() const { return 0.5 * omega; }
  bool unbounded_before_truncation() const;
  void validate() const;  // throws std::invalid_argument
};

struct Polygon {
  std::vector<Eigen::Vector2d> vertices;  // CCW, convex
  std::vector<EdgeTag> edge_tags;         // edge i joins vertex i to i+1 mod n
  double signed_area() const;
};

Polygon build_domain(const DomainSpec& spec);

// Decay weight beta * min(cap, min_j cot(a_j) |x - A_j|) over the physical
// (robin-robin) corners A_j with half-angles a_j.  cap = 10 L; with that
// constant the cap never binds on the bounded domains.
struct AgmonWeight {
  double beta = 1.0;
  double cap = 0.0;
  std::vector<Eigen::Vector2d> corners;
  std::vector<double> half_angles;
  double operator()(const Eigen::Vector2d& x) const;
};
AgmonWeight agmon_weight(const DomainSpec& spec);

// Smallest cut height H such that 0.9 times the (uncapped) corner decay
// rate beta cot(omega/2) times the cut-to-corner distance (= H for every
// domain here) reaches ln(1/tol); clamped below at 1.  tol in (0, 1].
double truncation_height(const DomainSpec& spec, double tol);

// Half-plane {x : n.x + c >= 0}; the domains are intersections of a few.
struct HalfPlane {
  Eigen::Vector2d n;
  double c = 0.0;
  bool contains(const Eigen::Vector2d& x, double tol = 0.0) const {
    return n.dot(x) + c >= -tol;
  }
};

// Defining half-planes of the (possibly uncut) domain, in the same frame as
// build_domain.  include_cut is ignored for bounded domains.
std::vector<HalfPlane> domain_halfplanes(const DomainSpec& spec,
                                         bool include_cut);

// Sutherland-Hodgman clip of a convex CCW polygon; result may be empty.
std::vector<Eigen::Vector2d> clip_convex(std::vector<Eigen::Vector2d> poly,
                                         const std::vector<HalfPlane>& planes);

}  // namespace cornerlab
