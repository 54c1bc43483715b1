#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "cornerlab/mesh.hpp"

namespace cornerlab {

// P1 discretization of the Robin form on a triangle mesh.  The three matrices
// keep the boundary coupling separate so one assembly serves every beta:
//   stiffness K, mass M, robin boundary mass B (entries only on robin edges).
// Dirichlet nodes (artificial boundary) are flagged, never eliminated here;
// the eigensolver restricts to the free set itself.
struct SparsePencil {
  int n = 0;
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> M;
  Eigen::SparseMatrix<double> B;
  std::vector<int> dirichlet;  // sorted node indices on artificial edges
};

// Exact integrals of the P1 element matrices, assembled in mesh order.
// Throws std::runtime_error on an inverted (clockwise or degenerate) triangle.
SparsePencil assemble(const TriMesh& mesh);

// (u'Ku - beta u'Bu) / (u'Mu).  Throws std::invalid_argument on u = 0 or a
// size mismatch.  Upper-bounds the ground energy when u vanishes on the
// dirichlet set; the quotient itself is defined for any nonzero u.
double rayleigh(const SparsePencil& p, double beta, const Eigen::VectorXd& u);

// Text form: header "symmetric n nnz", then one "i j value" line per stored
// upper-triangle entry sorted by (i,j), floats at shortest round-trip length.
void write_matrix(const Eigen::SparseMatrix<double>& mat, std::ostream& os);
Eigen::SparseMatrix<double> read_matrix(std::istream& is);

}  // namespace cornerlab
