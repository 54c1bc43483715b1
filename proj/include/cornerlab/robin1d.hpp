#pragma once
// One dimensional Robin problems on an interval.  These are exactly solvable
// up to a scalar transcendental equation and serve as independent references
// for the 2D solves: the right-angle case separates into two of them.
#include <optional>

namespace cornerlab {

struct OneDResult {
  double k;       // decay rate of the bound state, energy = -k^2
  double offset;  // |k - beta| to full relative precision (k itself loses the
                  // gap to rounding once it shrinks below ~1e-16*beta)
  double energy;
  double expansion_energy;  // three-term exponential expansion of the energy
};

enum class OneDKind { neumann, dirichlet };

// Robin u'(0) = -beta u(0), Neumann u'(ell) = 0.  Unique negative eigenvalue
// -k^2 with k tanh(k ell) = beta, k > beta.  Eigenfunction cosh(k(x-ell)).
OneDResult neumann_robin_k(double beta, double ell);

// Robin at 0, Dirichlet at ell.  Negative eigenvalue -k^2 with
// k coth(k ell) = beta exists iff beta*ell > 1, and beta - 1/ell < k < beta.
// Throws std::invalid_argument when there is no bound state.
OneDResult dirichlet_robin_k(double beta, double ell);

bool dirichlet_bound_state_exists(double beta, double ell);

// The printed three-term expansion of the energy:
//   neumann:   -beta^2 - 4 beta^2 e^{-2 beta ell} + 8 beta^2 (2 beta ell - 1) e^{-4 beta ell}
//   dirichlet: -beta^2 + 4 beta^2 e^{-2 beta ell} + 8 beta^2 (2 beta ell - 1) e^{-4 beta ell}
double expansion_1d(OneDKind kind, double beta, double ell);

// energy - expansion_energy without catastrophic cancellation.  The naive
// difference underflows the double spacing of the energy once beta*ell >~ 6;
// this path rewrites it through the offset variable so the remainder of order
// ell^2 e^{-6 beta ell} stays measurable.
double expansion_error(OneDKind kind, double beta, double ell);

// Robin condition on both ends of (-ell, ell).  The even state reduces to the
// Neumann problem on (0, ell), the odd one to the Dirichlet problem and so
// exists iff beta*ell > 1.
struct IntervalPair {
  OneDResult even;
  std::optional<OneDResult> odd;
};
IntervalPair interval_robin_pair(double beta, double ell);

// Two lowest eigenvalues of the strip (-L, L) x (0, inf) with Robin on the
// bottom and the sides, by separation of variables.  With a cut at height H
// (Dirichlet there) the transverse factor becomes the mixed problem on (0, H),
// which maps to the Dirichlet-Robin interval problem and needs beta*H > 1.
struct SeparatedReference {
  double transverse;
  double E1;
  std::optional<double> E2;
};
SeparatedReference separated_reference(double beta, double L,
                                       std::optional<double> H);

}  // namespace cornerlab
