#include "cornerlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cornerlab {

namespace {

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 8> kGx = {
    -0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
    -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
    0.79666647741362674,  0.96028985649753623};
constexpr std::array<double, 8> kGw = {
    0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
    0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

using Fn = std::function<void(double, double, double*)>;

struct Work {
  const Fn* f = nullptr;
  int dims = 0;
  const std::vector<HalfPlane>* planes = nullptr;
  double inv_root_area = 0.0;
  double tol = 0.0;
  int max_depth = 0;
  long cells = 0;
  double err_sum = 0.0;
  std::vector<double> acc;
  // scratch reused across calls to avoid churn
  std::vector<double> q1, q2, tmp;
};

void rect_rule(Work& w, double x0, double x1, double y0, double y1,
               double* out) {
  const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  for (int d = 0; d < w.dims; ++d) out[d] = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      (*w.f)(cx + hx * kGx[i], cy + hy * kGx[j], w.tmp.data());
      double wt = kGw[i] * kGw[j] * hx * hy;
      for (int d = 0; d < w.dims; ++d) out[d] += wt * w.tmp[d];
    }
}

// Duffy-style collapsed tensor rule on a triangle
void tri_rule(Work& w, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
              const Eigen::Vector2d& c, double* out) {
  const double twice_area = (b.x() - a.x()) * (c.y() - a.y()) -
                            (c.x() - a.x()) * (b.y() - a.y());
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      double u = 0.5 * (kGx[i] + 1.0), v = 0.5 * (kGx[j] + 1.0);
      Eigen::Vector2d p = a + u * ((b - a) + v * (c - b));
      (*w.f)(p.x(), p.y(), w.tmp.data());
      double wt = 0.25 * kGw[i] * kGw[j] * u * std::fabs(twice_area);
      for (int d = 0; d < w.dims; ++d) out[d] += wt * w.tmp[d];
    }
}

void fan_rule(Work& w, const std::vector<Eigen::Vector2d>& poly, bool refined,
              double* out) {
  for (int d = 0; d < w.dims; ++d) out[d] = 0.0;
  for (size_t i = 1; i + 1 < poly.size(); ++i) {
    const Eigen::Vector2d &a = poly[0], &b = poly[i], &c = poly[i + 1];
    if (!refined) {
      tri_rule(w, a, b, c, out);
    } else {
      Eigen::Vector2d ab = 0.5 * (a + b), bc = 0.5 * (b + c),
                      ca = 0.5 * (c + a);
      tri_rule(w, a, ab, ca, out);
      tri_rule(w, ab, b, bc, out);
      tri_rule(w, ca, bc, c, out);
      tri_rule(w, ab, bc, ca, out);
    }
  }
}

void refine_cell(Work& w, double x0, double x1, double y0, double y1,
                 int depth) {
  const double area = (x1 - x0) * (y1 - y0);
  if (!(area > 0.0)) return;

  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y0),
      Eigen::Vector2d(x1, y1), Eigen::Vector2d(x0, y1)};
  bool inside = true;
  for (const auto& pl : *w.planes)
    for (const auto& p : corners)
      if (!pl.contains(p)) {
        inside = false;
        break;
      }

  std::vector<Eigen::Vector2d> poly;
  if (!inside) {
    poly = clip_convex({corners.begin(), corners.end()}, *w.planes);
    if (poly.size() < 3) return;  // cell entirely outside the domain
  }

  if (inside) {
    rect_rule(w, x0, x1, y0, y1, w.q1.data());
    for (int d = 0; d < w.dims; ++d) w.q2[d] = 0.0;
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    std::vector<double> part(w.dims);
    for (auto [a, b, c, e] : {std::array<double, 4>{x0, xm, y0, ym},
                              {xm, x1, y0, ym},
                              {x0, xm, ym, y1},
                              {xm, x1, ym, y1}}) {
      rect_rule(w, a, b, c, e, part.data());
      for (int d = 0; d < w.dims; ++d) w.q2[d] += part[d];
    }
  } else {
    fan_rule(w, poly, false, w.q1.data());
    fan_rule(w, poly, true, w.q2.data());
  }

  double err = 0.0;
  for (int d = 0; d < w.dims; ++d) err += std::fabs(w.q1[d] - w.q2[d]);
  const double budget = w.tol * area * w.inv_root_area;
  if (err <= budget) {
    for (int d = 0; d < w.dims; ++d) w.acc[d] += w.q2[d];
    w.err_sum += err;
    ++w.cells;
    return;
  }
  if (depth >= w.max_depth) {
    std::ostringstream msg;
    msg << "quadrature did not converge: cell [" << x0 << "," << x1 << "]x["
        << y0 << "," << y1 << "] error " << err << " exceeds budget " << budget
        << " at depth " << depth;
    throw std::runtime_error(msg.str());
  }
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  refine_cell(w, x0, xm, y0, ym, depth + 1);
  refine_cell(w, xm, x1, y0, ym, depth + 1);
  refine_cell(w, x0, xm, ym, y1, depth + 1);
  refine_cell(w, xm, x1, ym, y1, depth + 1);
}

}  // namespace

QuadResultN integrate_adaptive_n(const Fn& f, int dims, const Box2& box,
                                 const std::vector<HalfPlane>& domain,
                                 double abs_tol, int max_depth) {
  if (dims < 1) throw std::invalid_argument("integrand needs dims >= 1");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
  QuadResultN r;
  r.value = Eigen::VectorXd::Zero(dims);
  const double area = (box.hi.x() - box.lo.x()) * (box.hi.y() - box.lo.y());
  if (!(area > 0.0)) return r;
  Work w;
  w.f = &f;
  w.dims = dims;
  w.planes = &domain;
  w.inv_root_area = 1.0 / area;
  w.tol = abs_tol;
  w.max_depth = max_depth;
  w.acc.assign(dims, 0.0);
  w.q1.resize(dims);
  w.q2.resize(dims);
  w.tmp.resize(dims);
  refine_cell(w, box.lo.x(), box.hi.x(), box.lo.y(), box.hi.y(), 0);
  for (int d = 0; d < dims; ++d) r.value[d] = w.acc[d];
  r.err_estimate = w.err_sum;
  r.cells = w.cells;
  return r;
}

QuadResult integrate_adaptive(const std::function<double(double, double)>& f,
                              const Box2& box,
                              const std::vector<HalfPlane>& domain,
                              double abs_tol, int max_depth) {
  auto fn = [&f](double x, double y, double* out) { out[0] = f(x, y); };
  QuadResultN rn = integrate_adaptive_n(fn, 1, box, domain, abs_tol, max_depth);
  return {rn.value[0], rn.err_estimate, rn.cells};
}

}  // namespace cornerlab
