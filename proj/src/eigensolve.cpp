#include "cornerlab/eigensolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>

namespace cornerlab {

LdltFactor::LdltFactor(const Eigen::SparseMatrix<double>& S) {
  ldlt_.compute(S);
  if (ldlt_.info() != Eigen::Success) {
    singular_ = true;
    return;
  }
  double max_entry = 0.0;
  for (int k = 0; k < S.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, k); it; ++it)
      max_entry = std::max(max_entry, std::fabs(it.value()));
  const auto& d = ldlt_.vectorD();
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    min_pivot = std::min(min_pivot, std::fabs(d(i)));
    if (d(i) < 0.0) ++negative_pivots_;
  }
  singular_ = !(min_pivot >= 1e-13 * max_entry);
}

Eigen::VectorXd LdltFactor::solve(const Eigen::VectorXd& b) const {
  if (singular_) throw solver_error("solve on a singular factorization");
  return ldlt_.solve(b);
}

LdltFactor ldlt_factor(const Eigen::SparseMatrix<double>& S) {
  return LdltFactor(S);
}

namespace {

struct FreeSystem {
  std::vector<int> to_full;          // free index -> node index
  std::vector<char> fixed;           // node level mask
  Eigen::SparseMatrix<double> A, M;  // restricted K - beta B and mass
};

FreeSystem build_free(const SparsePencil& p, double beta) {
  FreeSystem s;
  s.fixed.assign(p.n, 0);
  for (int idx : p.dirichlet) {
    if (idx < 0 || idx >= p.n)
      throw std::invalid_argument("dirichlet index out of range");
    s.fixed[idx] = 1;
  }
  std::vector<int> to_free(p.n, -1);
  for (int i = 0; i < p.n; ++i)
    if (!s.fixed[i]) {
      to_free[i] = int(s.to_full.size());
      s.to_full.push_back(i);
    }
  const int nf = int(s.to_full.size());
  std::vector<Eigen::Triplet<double>> ta, tm;
  auto gather = [&](const Eigen::SparseMatrix<double>& src, double coef,
                    std::vector<Eigen::Triplet<double>>& dst) {
    for (int k = 0; k < src.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(src, k); it; ++it) {
        int r = to_free[it.row()], c = to_free[it.col()];
        if (r >= 0 && c >= 0) dst.emplace_back(r, c, coef * it.value());
      }
  };
  gather(p.K, 1.0, ta);
  if (beta != 0.0) gather(p.B, -beta, ta);
  gather(p.M, 1.0, tm);
  s.A.resize(nf, nf);
  s.M.resize(nf, nf);
  s.A.setFromTriplets(ta.begin(), ta.end());
  s.M.setFromTriplets(tm.begin(), tm.end());
  return s;
}

int count_below(const FreeSystem& sys, double t) {
  for (int tries = 0; tries < 10; ++tries) {
    Eigen::SparseMatrix<double> S = sys.A - t * sys.M;
    LdltFactor f(S);
    if (!f.singular()) return f.negative_pivots();
    t -= 1e-9 * (1.0 + std::fabs(t));
  }
  throw solver_error("inertia count: factorization kept failing near threshold");
}

struct Lcg {
  std::uint64_t state = 0x6a09e667f3bcc909ULL;
  double next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(state >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }
};

// plain triplet-loop residual, deliberately sharing nothing with the solver
double naive_residual(const SparsePencil& p, double beta, double lam,
                      const Eigen::VectorXd& u, const std::vector<char>& fixed) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(p.n);
  auto add = [&](const Eigen::SparseMatrix<double>& mat, double coef) {
    if (coef == 0.0) return;
    for (int k = 0; k < mat.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(mat, k); it; ++it)
        y(it.row()) += coef * it.value() * u(it.col());
  };
  add(p.K, 1.0);
  add(p.B, -beta);
  add(p.M, -lam);
  double num = 0.0, mass = 0.0;
  for (int i = 0; i < p.n; ++i)
    if (!fixed[i]) num += y(i) * y(i);
  for (int k = 0; k < p.M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(p.M, k); it; ++it)
      mass += u(it.row()) * it.value() * u(it.col());
  return std::sqrt(num) / std::sqrt(mass);
}

}  // namespace

EigenResult lowest_eigenpairs(const SparsePencil& p, double beta, int k,
                              double shift, double tol) {
  if (k < 1) throw std::invalid_argument("need k >= 1 eigenpairs");
  if (!std::isfinite(shift)) throw std::invalid_argument("shift must be finite");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  FreeSystem sys = build_free(p, beta);
  const int nf = int(sys.to_full.size());
  if (k > nf)
    throw std::invalid_argument("more eigenpairs requested than free nodes");

  // settle the shift: factorable and strictly below the spectrum
  double sigma = shift;
  std::optional<LdltFactor> fac;
  int singular_tries = 0, inertia_tries = 0;
  while (true) {
    Eigen::SparseMatrix<double> S = sys.A - sigma * sys.M;
    fac.emplace(S);
    if (fac->singular()) {
      if (++singular_tries > 5)
        throw solver_error("shift keeps producing a singular matrix");
      sigma -= 0.05 * std::max(std::fabs(sigma), 1.0);
      continue;
    }
    if (fac->negative_pivots() > 0) {
      if (++inertia_tries > 120)
        throw solver_error("no shift below the spectrum found");
      sigma -= 0.2 * std::max(std::fabs(sigma), 1.0);
      continue;
    }
    break;
  }

  const int max_ops = 500;
  int ops = 0;
  Eigen::MatrixXd locked(nf, 0), mlocked(nf, 0);
  std::vector<double> locked_vals;
  Lcg rng;

  auto deflate = [&](Eigen::VectorXd& w) {
    if (locked.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass)
      w -= locked * (mlocked.transpose() * w);
  };
  auto m_normalize = [&](Eigen::VectorXd& w) {
    double q = w.dot(sys.M * w);
    double nrm = q > 0.0 ? std::sqrt(q) : 0.0;
    if (nrm > 0.0) w /= nrm;
    return nrm;
  };
  auto fresh_vector = [&]() {
    Eigen::VectorXd v(nf);
    for (int attempt = 0; attempt < 32; ++attempt) {
      for (int i = 0; i < nf; ++i) v(i) = rng.next();
      deflate(v);
      if (m_normalize(v) > 1e-8) return v;
    }
    throw solver_error("could not draw a start vector outside the locked span");
  };

  Eigen::VectorXd v = fresh_vector();
  while (true) {
    if (int(locked_vals.size()) >= k) {
      std::vector<int> order(locked_vals.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return locked_vals[a] < locked_vals[b];
      });
      double vk = locked_vals[order[k - 1]];
      double delta = std::max(tol, 2e-9) * (1.0 + std::fabs(vk));
      int below_hi = count_below(sys, vk + delta);
      if (below_hi < k)
        throw solver_error("inertia certificate rejects a returned eigenvalue");
      int mine_lo = 0;
      for (int i = 0; i < k; ++i)
        if (locked_vals[order[i]] <= vk - delta) ++mine_lo;
      int below_lo = count_below(sys, vk - delta);
      if (below_lo <= mine_lo) {
        // certified: package the k lowest
        EigenResult r;
        r.iterations = ops;
        r.shift_used = sigma;
        r.eigenvectors = Eigen::MatrixXd::Zero(p.n, k);
        for (int i = 0; i < k; ++i) {
          double lam = locked_vals[order[i]];
          Eigen::VectorXd uf = locked.col(order[i]);
          // deterministic sign: largest-magnitude component positive
          int arg = 0;
          for (int j = 1; j < nf; ++j)
            if (std::fabs(uf(j)) > std::fabs(uf(arg))) arg = j;
          if (uf(arg) < 0.0) uf = -uf;
          Eigen::VectorXd full = Eigen::VectorXd::Zero(p.n);
          for (int j = 0; j < nf; ++j) full(sys.to_full[j]) = uf(j);
          double res = naive_residual(p, beta, lam, full, sys.fixed);
          if (!(res <= tol))
            throw solver_error("independent residual check failed");
          r.eigenvalues.push_back(lam);
          r.residuals.push_back(res);
          r.eigenvectors.col(i) = full;
        }
        return r;
      }
      // inertia says something below vk was missed; hunt with a fresh start
      v = fresh_vector();
    }
    if (ops >= max_ops)
      throw solver_error("no convergence within 500 operator applications");

    const int m = std::min<int>(nf - int(locked.cols()),
                                std::max(2 * k + 16, 24));
    if (m < 1) throw solver_error("free space exhausted before certification");
    Eigen::MatrixXd V(nf, m), MV(nf, m);
    std::vector<double> al, be;
    double scale = 0.0, bnext = 0.0;
    int dim = 0;
    for (int j = 0; j < m; ++j) {
      if (ops >= max_ops) break;
      V.col(j) = v;
      MV.col(j) = sys.M * v;
      Eigen::VectorXd w = fac->solve(MV.col(j));
      ++ops;
      al.push_back(w.dot(MV.col(j)));
      for (int pass = 0; pass < 2; ++pass) {
        if (locked.cols() > 0) w -= locked * (mlocked.transpose() * w);
        w -= V.leftCols(j + 1) * (MV.leftCols(j + 1).transpose() * w);
      }
      dim = j + 1;
      double b2 = w.dot(sys.M * w);
      bnext = b2 > 0.0 ? std::sqrt(b2) : 0.0;
      scale = std::max(scale, std::fabs(al[j]) + bnext);
      if (j == m - 1 || bnext <= 1e-13 * std::max(scale, 1e-300)) break;
      be.push_back(bnext);
      v = w / bnext;
    }
    if (dim == 0) continue;  // ops exhausted, outer loop raises

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      T(i, i) = al[i];
      if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = be[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

    // walk Ritz values from the largest theta (lowest lambda) down
    bool have_next = false;
    Eigen::VectorXd next_v;
    int examined = 0;
    for (int i = dim - 1; i >= 0 && examined < k + 2; --i) {
      double theta = es.eigenvalues()(i);
      if (!(theta > 0.0)) continue;
      ++examined;
      Eigen::VectorXd u = V.leftCols(dim) * es.eigenvectors().col(i);
      deflate(u);
      if (m_normalize(u) < 1e-6) continue;
      Eigen::VectorXd au = sys.A * u, mu = sys.M * u;
      double lam = u.dot(au);
      double res = (au - lam * mu).norm();
      if (res <= tol) {
        locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
        mlocked.conservativeResize(Eigen::NoChange, mlocked.cols() + 1);
        locked.col(locked.cols() - 1) = u;
        mlocked.col(mlocked.cols() - 1) = mu;
        locked_vals.push_back(lam);
      } else if (!have_next) {
        have_next = true;
        next_v = u;
      }
    }
    // only line up another start vector if more pairs are still needed;
    // the certification path at the top draws its own when it finds a miss
    if (int(locked_vals.size()) < k) v = have_next ? next_v : fresh_vector();
  }
}

int certify_count_below(const SparsePencil& p, double beta, double threshold) {
  FreeSystem sys = build_free(p, beta);
  return count_below(sys, threshold);
}

}  // namespace cornerlab
