#include "cornerlab/fem.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cornerlab {

namespace {

void append_float(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

SparsePencil assemble(const TriMesh& mesh) {
  using T = Eigen::Triplet<double>;
  const int n = static_cast<int>(mesh.nodes.size());
  std::vector<T> tk, tm, tb;
  tk.reserve(mesh.triangles.size() * 9);
  tm.reserve(mesh.triangles.size() * 9);

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d& p0 = mesh.nodes[tri[0]];
    const Eigen::Vector2d& p1 = mesh.nodes[tri[1]];
    const Eigen::Vector2d& p2 = mesh.nodes[tri[2]];
    double twice_area = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                        (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (!(twice_area > 0.0)) {
      std::ostringstream msg;
      msg << "inverted triangle " << t << " (signed doubled area " << twice_area
          << ")";
      throw std::runtime_error(msg.str());
    }
    // constant hat gradients: grad lambda_i = (b_i, c_i) / (2A)
    double b[3] = {p1.y() - p2.y(), p2.y() - p0.y(), p0.y() - p1.y()};
    double c[3] = {p2.x() - p1.x(), p0.x() - p2.x(), p1.x() - p0.x()};
    double area = 0.5 * twice_area;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(tri[i], tri[j],
                        (b[i] * b[j] + c[i] * c[j]) / (2.0 * twice_area));
        tm.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }

  std::set<int> fixed;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == EdgeTag::artificial) {
      fixed.insert(e.a);
      fixed.insert(e.b);
      continue;
    }
    double len = (mesh.nodes[e.b] - mesh.nodes[e.a]).norm();
    tb.emplace_back(e.a, e.a, len / 3.0);
    tb.emplace_back(e.b, e.b, len / 3.0);
    tb.emplace_back(e.a, e.b, len / 6.0);
    tb.emplace_back(e.b, e.a, len / 6.0);
  }

  SparsePencil p;
  p.n = n;
  p.K.resize(n, n);
  p.M.resize(n, n);
  p.B.resize(n, n);
  p.K.setFromTriplets(tk.begin(), tk.end());
  p.M.setFromTriplets(tm.begin(), tm.end());
  p.B.setFromTriplets(tb.begin(), tb.end());
  p.dirichlet.assign(fixed.begin(), fixed.end());
  return p;
}

double rayleigh(const SparsePencil& p, double beta, const Eigen::VectorXd& u) {
  if (u.size() != p.n) throw std::invalid_argument("rayleigh: size mismatch");
  double mass = u.dot(p.M * u);
  if (!(mass > 0.0)) throw std::invalid_argument("rayleigh: zero vector");
  return (u.dot(p.K * u) - beta * u.dot(p.B * u)) / mass;
}

void write_matrix(const Eigen::SparseMatrix<double>& mat, std::ostream& os) {
  assert(mat.rows() == mat.cols());
  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> entries;
  for (int k = 0; k < mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat, k); it; ++it)
      if (it.row() <= it.col())
        entries.push_back({int(it.row()), int(it.col()), it.value()});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::string out = "symmetric " + std::to_string(mat.rows()) + ' ' +
                    std::to_string(entries.size()) + '\n';
  for (const auto& e : entries) {
    out += std::to_string(e.i);
    out += ' ';
    out += std::to_string(e.j);
    out += ' ';
    append_float(out, e.v);
    out += '\n';
  }
  os << out;
}

Eigen::SparseMatrix<double> read_matrix(std::istream& is) {
  std::string tag;
  long n = 0, nnz = 0;
  if (!(is >> tag >> n >> nnz) || tag != "symmetric" || n < 0 || nnz < 0)
    throw std::runtime_error("bad matrix header");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(2 * nnz));
  for (long k = 0; k < nnz; ++k) {
    long i, j;
    std::string val;
    if (!(is >> i >> j >> val)) throw std::runtime_error("truncated matrix");
    if (i < 0 || j < i || j >= n) throw std::runtime_error("bad matrix entry");
    double v;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc{} || res.ptr != val.data() + val.size())
      throw std::runtime_error("bad matrix value");
    trip.emplace_back(int(i), int(j), v);
    if (i != j) trip.emplace_back(int(j), int(i), v);
  }
  Eigen::SparseMatrix<double> mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

}  // namespace cornerlab
