#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <stdexcept>
#include <vector>

#include "cornerlab/fem.hpp"

namespace cornerlab {

class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LDL' of a symmetric sparse matrix with AMD fill-reducing ordering.  The
// pivot signs give the inertia (Sylvester), which backs the eigenvalue
// counting certificates.  A factor whose smallest pivot magnitude falls
// under 1e-13 * max|S| is flagged singular and refuses to solve.
class LdltFactor {
 public:
  explicit LdltFactor(const Eigen::SparseMatrix<double>& S);
  bool singular() const { return singular_; }
  int negative_pivots() const { return negative_pivots_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  static const char* ordering() { return "amd"; }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      ldlt_;
  bool singular_ = false;
  int negative_pivots_ = 0;
};

LdltFactor ldlt_factor(const Eigen::SparseMatrix<double>& S);

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending, clusters kept adjacent
  Eigen::MatrixXd eigenvectors;     // n x k, zero rows at dirichlet nodes
  std::vector<double> residuals;    // ||A u - lambda M u|| / ||u||_M per pair
  int iterations = 0;               // operator applications spent
  double shift_used = 0.0;
};

// k lowest eigenpairs of (K - beta B, M) restricted to the non-dirichlet
// nodes, by shift-invert Lanczos with full reorthogonalization.  The shift
// must be finite; if the factorization shows eigenvalues at or below it,
// the shift is walked down automatically.  Results are certified against
// the factorization inertia: a count mismatch that cannot be explained by
// a cluster at the cut point raises solver_error instead of returning.
// Eigenvectors come back M-orthonormal, residuals re-checked by a plain
// triplet-loop multiply that shares no code with the iteration.
EigenResult lowest_eigenpairs(const SparsePencil& p, double beta, int k,
                              double shift, double tol = 1e-10);

// Number of pencil eigenvalues below the threshold, from the inertia of
// A - t M.  A singular factorization perturbs t downward by 1e-9 (1 + |t|)
// and retries, so a threshold sitting exactly on an eigenvalue resolves to
// the count strictly below it.
int certify_count_below(const SparsePencil& p, double beta, double threshold);

}  // namespace cornerlab
