#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "cornerlab/geometry.hpp"

namespace cornerlab {

struct Box2 {
  Eigen::Vector2d lo, hi;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long cells = 0;
};

struct QuadResultN {
  Eigen::VectorXd value;
  double err_estimate = 0.0;
  long cells = 0;
};

// Adaptive tensor Gauss-Legendre (8 points per axis) over box intersected
// with the half-plane domain.  Cells cut by the domain boundary integrate
// over the clipped polygon through a fan of tensor rules on triangles.  A
// cell is accepted when the one-level Richardson discrepancy fits within
// its share abs_tol * cell_area / box_area of the absolute budget, so the
// total error estimate stays below abs_tol.  Traversal order is fixed;
// reruns are bitwise identical.  Throws std::runtime_error if some cell
// still misses its budget at max_depth.
QuadResultN integrate_adaptive_n(
    const std::function<void(double, double, double*)>& f, int dims,
    const Box2& box, const std::vector<HalfPlane>& domain, double abs_tol,
    int max_depth = 26);

QuadResult integrate_adaptive(const std::function<double(double, double)>& f,
                              const Box2& box,
                              const std::vector<HalfPlane>& domain,
                              double abs_tol, int max_depth = 26);

}  // namespace cornerlab
