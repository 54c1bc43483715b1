#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <sstream>

#include "cornerlab/fem.hpp"
#include "cornerlab/geometry.hpp"
#include "cornerlab/mesh.hpp"

using namespace cornerlab;
using Eigen::Vector2d;

namespace {

TriMesh unit_right_triangle() {
  TriMesh m;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{0, 1, EdgeTag::robin},
                      {1, 2, EdgeTag::robin},
                      {2, 0, EdgeTag::robin}};
  return m;
}

}  // namespace

TEST_CASE("unit right triangle stiffness by hand") {
  SparsePencil p = assemble(unit_right_triangle());
  Eigen::Matrix3d K_ref;
  K_ref << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  K_ref *= 0.5;
  Eigen::Matrix3d K = Eigen::MatrixXd(p.K);
  CHECK((K - K_ref).cwiseAbs().maxCoeff() < 1e-15);
  // mass: area/12 [2 1 1; 1 2 1; 1 1 2]
  Eigen::Matrix3d M_ref;
  M_ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  M_ref *= 0.5 / 12.0;
  CHECK((Eigen::MatrixXd(p.M) - M_ref).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("stiffness annihilates constants") {
  Polygon poly = build_domain(DomainSpec::two_corner(2.0, 1.0, 1.0, 2.0));
  SparsePencil p = assemble(triangulate(poly, 3, true));
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(p.n);
  CHECK((p.K * ones).cwiseAbs().maxCoeff() < 1e-12);
  // total mass equals the domain area
  Polygon ref = poly;
  CHECK(ones.dot(p.M * ones) == doctest::Approx(ref.signed_area()).epsilon(1e-13));
}

TEST_CASE("robin edge mass block") {
  // single edge of length 2 between two nodes: (1/3)[2 1; 1 2]
  TriMesh m;
  m.nodes = {{0, 0}, {2, 0}, {0, 2}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{0, 1, EdgeTag::robin},
                      {1, 2, EdgeTag::artificial},
                      {2, 0, EdgeTag::artificial}};
  SparsePencil p = assemble(m);
  CHECK(p.B.coeff(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.B.coeff(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.B.coeff(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.B.coeff(2, 2) == 0.0);
  // artificial edges flagged for elimination
  CHECK(p.dirichlet == std::vector<int>{0, 1, 2});
}

TEST_CASE("rayleigh quotient of the constant on the reference rectangle") {
  // robin bottom+sides of total length 6, area 4: (0 - 1*6)/4 = -1.5
  Polygon rect = build_domain(DomainSpec::rectangle(1.0, 1.0, 2.0));
  SparsePencil p = assemble(triangulate(rect, 2, false));
  Eigen::VectorXd u = Eigen::VectorXd::Ones(p.n);
  CHECK(rayleigh(p, 1.0, u) == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK_THROWS_AS((void)rayleigh(p, 1.0, Eigen::VectorXd::Zero(p.n)),
                  std::invalid_argument);
}

TEST_CASE("matrices are symmetric and M is positive definite") {
  Polygon poly = build_domain(DomainSpec::two_corner(0.8, 1.0, 1.0));
  SparsePencil p = assemble(triangulate(poly, 2, true));
  Eigen::MatrixXd K = p.K, M = p.M, B = p.B;
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((B - B.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("exact scaling of the pencil at matrix level") {
  Polygon poly = build_domain(DomainSpec::two_corner(0.9, 1.2, 1.0));
  TriMesh mesh = triangulate(poly, 2, false);
  SparsePencil p = assemble(mesh);
  double s = 2.5;
  TriMesh scaled = mesh;
  for (auto& nd : scaled.nodes) nd *= s;
  SparsePencil q = assemble(scaled);
  auto rel_diff = [](const Eigen::SparseMatrix<double>& a,
                     const Eigen::SparseMatrix<double>& b) {
    Eigen::MatrixXd d = Eigen::MatrixXd(a) - Eigen::MatrixXd(b);
    double scale = Eigen::MatrixXd(a).cwiseAbs().maxCoeff();
    return d.cwiseAbs().maxCoeff() / scale;
  };
  // K -> K, M -> s^2 M, B -> s B
  CHECK(rel_diff(q.K, p.K) < 1e-12);
  Eigen::SparseMatrix<double> Ms = (s * s) * p.M;
  Eigen::SparseMatrix<double> Bs = s * p.B;
  CHECK(rel_diff(q.M, Ms) < 1e-12);
  CHECK(rel_diff(q.B, Bs) < 1e-12);
}

TEST_CASE("reflection permutation leaves the pencil invariant") {
  Polygon poly = build_domain(DomainSpec::two_corner(2.2, 1.0, 1.0, 2.0));
  TriMesh mesh = triangulate(poly, 2, true);
  SparsePencil p = assemble(mesh);
  std::map<std::pair<double, double>, int> lookup;
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    lookup[{mesh.nodes[i].x(), mesh.nodes[i].y()}] = int(i);
  std::vector<int> perm(mesh.nodes.size());
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    auto it = lookup.find({-mesh.nodes[i].x(), mesh.nodes[i].y()});
    REQUIRE(it != lookup.end());
    perm[i] = it->second;
  }
  for (const auto* mat : {&p.K, &p.M, &p.B}) {
    double worst = 0.0;
    for (int k = 0; k < mat->outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(*mat, k); it; ++it) {
        double mirrored = mat->coeff(perm[it.row()], perm[it.col()]);
        worst = std::max(worst, std::fabs(mirrored - it.value()));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("matrix text format round-trips") {
  Polygon poly = build_domain(DomainSpec::two_corner(0.8, 1.0, 1.0));
  SparsePencil p = assemble(triangulate(poly, 1, false));
  std::ostringstream os;
  write_matrix(p.K, os);
  CHECK(os.str().rfind("symmetric ", 0) == 0);
  std::istringstream is(os.str());
  Eigen::SparseMatrix<double> K = read_matrix(is);
  CHECK((Eigen::MatrixXd(K) - Eigen::MatrixXd(p.K)).cwiseAbs().maxCoeff() == 0.0);
}
