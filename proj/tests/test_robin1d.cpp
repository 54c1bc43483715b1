// Oracle tests for the 1D Robin interval problems.  The oracles here find the
// secular roots by plain bisection on the tanh/coth forms, independent of the
// log-form Newton iteration used by the library.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "cornerlab/robin1d.hpp"

using namespace cornerlab;

namespace {

// k tanh(k ell) = beta, root in (beta, inf)
double oracle_neumann_k(double beta, double ell) {
  auto f = [&](double k) { return k * std::tanh(k * ell) - beta; };
  double lo = beta, hi = beta + 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// k coth(k ell) = beta, root in (0, beta), exists iff beta*ell > 1
double oracle_dirichlet_k(double beta, double ell) {
  auto f = [&](double k) { return k / std::tanh(k * ell) - beta; };
  double lo = 1e-12 * beta, hi = beta * (1.0 - 1e-15);
  REQUIRE(f(lo) < 0.0);
  REQUIRE(f(hi) > 0.0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("neumann root matches bisection oracle") {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double ell : {0.3, 1.0, 3.0, 8.0}) {
      OneDResult r = neumann_robin_k(beta, ell);
      double k_ref = oracle_neumann_k(beta, ell);
      CHECK(r.k > beta);
      CHECK(r.k == doctest::Approx(k_ref).epsilon(1e-12));
      CHECK(r.energy == doctest::Approx(-k_ref * k_ref).epsilon(1e-12));
      // offset carries k - beta at full relative precision; the oracle's
      // k_ref - beta is only good to ~ulp(k)/offset here
      CHECK(r.offset == doctest::Approx(k_ref - beta).epsilon(1e-8));
      // log-form secular residual in the offset variable
      double g = std::log1p(2.0 * beta / r.offset) - 2.0 * (beta + r.offset) * ell;
      CHECK(std::fabs(g) < 1e-14);
    }
  }
  // value quoted to four digits for beta=1, ell=1
  CHECK(neumann_robin_k(1.0, 1.0).k == doctest::Approx(1.1997).epsilon(1e-4));
}

TEST_CASE("neumann root survives tiny beta*ell") {
  // the naive bracket beta + 2 beta exp(-beta ell) + 1 misses the root here
  OneDResult r = neumann_robin_k(1.0, 0.01);
  double k_ref = oracle_neumann_k(1.0, 0.01);
  CHECK(r.k == doctest::Approx(k_ref).epsilon(1e-12));
  CHECK(r.k > 9.0);  // root ~ sqrt(beta/ell) = 10
}

TEST_CASE("dirichlet root matches bisection oracle") {
  for (double beta : {0.7, 1.0, 2.0}) {
    for (double ell : {2.0, 4.0, 8.0}) {
      if (beta * ell <= 1.0) continue;
      OneDResult r = dirichlet_robin_k(beta, ell);
      double k_ref = oracle_dirichlet_k(beta, ell);
      CHECK(r.k < beta);
      CHECK(r.k > beta - 1.0 / ell);
      CHECK(r.k == doctest::Approx(k_ref).epsilon(1e-12));
      double g = std::log(2.0 * beta / r.offset - 1.0) - 2.0 * (beta - r.offset) * ell;
      CHECK(std::fabs(g) < 1e-14);
    }
  }
  CHECK(dirichlet_robin_k(1.0, 2.0).k == doctest::Approx(0.957).epsilon(1e-3));
}

TEST_CASE("dirichlet bound state threshold") {
  CHECK(!dirichlet_bound_state_exists(1.0, 1.0));
  CHECK(!dirichlet_bound_state_exists(0.5, 2.0));
  CHECK(dirichlet_bound_state_exists(1.0, 1.0 + 1e-9));
  CHECK_THROWS_AS((void)dirichlet_robin_k(1.0, 0.9), std::invalid_argument);
}

TEST_CASE("three-term expansion error is at remainder order") {
  // remainder scale ell^2 exp(-6 beta ell); the direct difference of energy
  // and expansion underflows double spacing at ell=8, the dedicated
  // cancellation-free path must not
  double beta = 1.0;
  double prev_n = std::numeric_limits<double>::max();
  double prev_d = std::numeric_limits<double>::max();
  for (double ell : {4.0, 6.0, 8.0}) {
    double scale = ell * ell * std::exp(-6.0 * beta * ell);
    double en = expansion_error(OneDKind::neumann, beta, ell);
    double ed = expansion_error(OneDKind::dirichlet, beta, ell);
    CHECK(std::fabs(en) < 100.0 * scale);
    CHECK(std::fabs(ed) < 100.0 * scale);
    CHECK(std::fabs(en) > 0.0);
    CHECK(std::fabs(ed) > 0.0);
    CHECK(std::fabs(en) < prev_n);
    CHECK(std::fabs(ed) < prev_d);
    prev_n = std::fabs(en);
    prev_d = std::fabs(ed);
  }
  // expansion values themselves agree with the energies coarsely
  OneDResult rn = neumann_robin_k(beta, 4.0);
  CHECK(rn.expansion_energy == doctest::Approx(rn.energy).epsilon(1e-6));
}

TEST_CASE("full interval pair orders even below odd") {
  double beta = 1.0, ell = 3.0;
  IntervalPair p = interval_robin_pair(beta, ell);
  REQUIRE(p.odd.has_value());
  CHECK(p.even.energy < p.odd->energy);
  // gap ~ 8 beta^2 exp(-2 beta ell) with relative remainder O(ell^2 e^{-2 beta ell})
  double gap = p.odd->energy - p.even.energy;
  CHECK(gap == doctest::Approx(8.0 * std::exp(-6.0)).epsilon(0.1));
  CHECK(!interval_robin_pair(1.0, 0.8).odd.has_value());
}

TEST_CASE("separated reference composes transverse and longitudinal parts") {
  double beta = 1.0, L = 3.0;
  SeparatedReference free_ref = separated_reference(beta, L, {});
  CHECK(free_ref.transverse == -beta * beta);
  CHECK(free_ref.E1 ==
        free_ref.transverse + neumann_robin_k(beta, L).energy);
  REQUIRE(free_ref.E2.has_value());
  CHECK(*free_ref.E2 ==
        free_ref.transverse + dirichlet_robin_k(beta, L).energy);
  // remark form -2 beta^2 -/+ 4 beta^2 exp(-2 beta L)
  CHECK(free_ref.E1 == doctest::Approx(-2.0 - 4.0 * std::exp(-6.0)).epsilon(1e-4));

  SeparatedReference cut_ref = separated_reference(beta, L, 25.0);
  CHECK(cut_ref.transverse == dirichlet_robin_k(beta, 25.0).energy);
  // at beta*H = 25 the gap to -beta^2 underflows double spacing of the energy
  CHECK(cut_ref.transverse >= -beta * beta);
  CHECK(dirichlet_robin_k(beta, 25.0).offset > 0.0);
  SeparatedReference low_cut = separated_reference(beta, L, 4.0);
  CHECK(low_cut.transverse > -beta * beta);
  CHECK_THROWS_AS((void)separated_reference(1.0, 3.0, 0.5), std::invalid_argument);

  // no odd longitudinal state when beta*L <= 1
  CHECK(!separated_reference(0.2, 3.0, {}).E2.has_value());
}

TEST_CASE("roots are deterministic") {
  OneDResult a = neumann_robin_k(1.3, 2.7);
  OneDResult b = neumann_robin_k(1.3, 2.7);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}
