#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sgspec/monodromy.hpp"
#include "sgspec/numerics.hpp"
#include "sgspec/potential.hpp"
#include "sgspec/types.hpp"

using namespace sgspec;

namespace {

double mrel(const Matrix2C& got, const Matrix2C& want) {
  return (got - want).norm() / std::max(1e-300, want.norm());
}

}  // namespace

// ── connection matrix ──

TEST_CASE("vacuum connection at lambda = 1") {
  Matrix2C A = alpha_x(vacuum(), 0.3, 1.0);
  CHECK(std::abs(A.a) == 0.0);
  CHECK(std::abs(A.b + 0.5) < 1e-16);
  CHECK(std::abs(A.c - 0.5) < 1e-16);
  CHECK(std::abs(A.trace()) == 0.0);
  CHECK_THROWS_AS(alpha_x(vacuum(), 0.0, cplx(0.0)), InputError);
}

TEST_CASE("cached connection matches the pointwise one") {
  PeriodicPotential p = random_potential(2, 5, 0.4, 0.3);
  MonodromyEvaluator ev(p);
  for (double x : {0.0, 0.21, 0.68, 0.999}) {
    for (cplx lam : {cplx(1.0), cplx(-2.5, 0.4), cplx(0.05, 0.0)}) {
      Matrix2C direct = alpha_x(p, x, lam);
      Matrix2C cached = alpha_cached_probe(ev, x, lam);
      CHECK(mrel(cached, direct) < 1e-12);
    }
  }
}

// ── vacuum closed forms ──

TEST_CASE("zeta values and branch independence") {
  CHECK(std::abs(zeta(1.0) - 0.5) < 1e-16);
  CHECK(std::abs(zeta(-1.0)) < 1e-16);
  CHECK_THROWS_AS(zeta(cplx(0.0)), InputError);
  // divided difference: exact secant of zeta, and derivative on the diagonal
  cplx a(2.0, 1.0), b(0.5, -0.3);
  CHECK(std::abs(zeta_dd(a, b) * (a - b) - (zeta(a) - zeta(b))) < 1e-15);
  CHECK(std::abs(zeta_dd(a, a) - zeta_prime(a)) < 1e-15);
}

TEST_CASE("vacuum double points") {
  CHECK(lambda_k0(0) == -1.0);
  CHECK(std::abs(lambda_k0(1) - 155.90725634778715) < 1e-10);
  CHECK(std::abs(lambda_k0(2) - 629.65309349361002) < 1e-9);
  CHECK(std::abs(lambda_k0(3) - 1419.2223291456313) < 1e-9);
  for (int k = 1; k <= 4; ++k) {
    double lk = lambda_k0(k);
    CHECK(lambda_k0(-k) == 1.0 / lk);  // reciprocal by construction
    double pk = pi * k;
    CHECK(lk + 1.0 / lk == doctest::Approx(16 * pk * pk - 2).epsilon(1e-14));
    // they are zeros of sin zeta: Delta_0 = 2 (-1)^k there
    CHECK(std::abs(delta0(lk) - 2.0 * mu_k0(k)) < 1e-12);
    CHECK(std::abs(delta0(1.0 / lk) - 2.0 * mu_k0(k)) < 1e-12);
  }
  CHECK(mu_k0(0) == 1);
  CHECK(mu_k0(1) == -1);
  CHECK(mu_k0(-1) == -1);
  CHECK(mu_k0(2) == 1);
  CHECK(mu_k0(-3) == -1);
}

TEST_CASE("vacuum monodromy closed form") {
  Matrix2C M = vacuum_monodromy(1.0);
  CHECK(std::abs(M.a - 0.87758256189037272) < 1e-15);
  CHECK(std::abs(M.b + 0.479425538604203) < 1e-15);
  CHECK(std::abs(M.c - 0.479425538604203) < 1e-15);
  CHECK(std::abs(M.det() - 1.0) < 1e-15);
  // entries are even in sqrt(lambda): the flipped branch gives the same matrix
  for (cplx lam : {cplx(2.3, 1.1), cplx(-0.4, 0.2), cplx(9.0, -3.0)}) {
    cplx s = -std::sqrt(lam);  // opposite branch
    cplx z = 0.25 * (s + 1.0 / s);
    Matrix2C flip{std::cos(z), -std::sin(z) / s, s * std::sin(z), std::cos(z)};
    CHECK(mrel(flip, vacuum_monodromy(lam)) < 1e-14);
  }
}

// ── integrator against closed forms ──

TEST_CASE("integrated vacuum monodromy matches the closed form") {
  PeriodicPotential p = vacuum();
  MonodromyEvaluator ev(p);
  std::vector<cplx> lambdas = {cplx(1.0),          cplx(2.0),
                               cplx(-0.7),         cplx(0.01),
                               cplx(400.0),        cplx(3.0, 4.0),
                               cplx(-5.0, 0.1),    cplx(0.02, -0.05),
                               cplx(155.9, 0.0)};
  for (cplx lam : lambdas) {
    CHECK(mrel(ev(lam), vacuum_monodromy(lam)) < 1e-8);
  }
  // lambda = -1 is the k = 0 double point: the monodromy is the identity
  CHECK((ev(cplx(-1.0)) - Matrix2C::identity()).norm() < 1e-10);
}

TEST_CASE("constant data reduces to a matrix exponential") {
  PeriodicPotential p = make_potential({{0, 0.4}}, {{0, -0.2}});
  for (cplx lam : {cplx(1.5), cplx(-2.0, 0.3), cplx(0.1, 0.1)}) {
    Matrix2C want = expm_tracefree(alpha_x(p, 0.0, lam));
    CHECK(mrel(monodromy(p, lam), want) < 1e-9);
  }
}

TEST_CASE("extended frame interpolates the flow") {
  PeriodicPotential p = vacuum();
  cplx lam(1.7, 0.0);
  auto fr = extended_frame(p, lam, {0.0, 0.5, 1.0});
  REQUIRE(fr.size() == 3);
  CHECK((fr[0].F - Matrix2C::identity()).norm() == 0.0);
  Matrix2C half = expm_tracefree(0.5 * alpha_x(p, 0.0, lam));
  CHECK(mrel(fr[1].F, half) < 1e-9);
  CHECK(mrel(fr[2].F, vacuum_monodromy(lam)) < 1e-9);
  for (const auto& s : fr) CHECK(std::abs(s.F.det() - 1.0) < 1e-10);
  CHECK_THROWS_AS(extended_frame(p, lam, {0.5, 0.2}), InputError);
  CHECK_THROWS_AS(extended_frame(p, lam, {0.5, 1.2}), InputError);
}

TEST_CASE("unimodularity on perturbed data") {
  PeriodicPotential p = random_potential(1, 6, 0.25, 0.35);
  MonodromyEvaluator ev(p);
  for (cplx lam : {cplx(1.0), cplx(-3.0, 0.5), cplx(40.0, -2.0), cplx(0.04)}) {
    CHECK(std::abs(ev(lam).det() - 1.0) < 1e-9);
  }
}

TEST_CASE("batch agrees with single evaluations in order") {
  PeriodicPotential p = random_potential(6, 4, 0.3, 0.4);
  MonodromyEvaluator ev(p);
  std::vector<cplx> lambdas;
  for (int i = 0; i < 17; ++i)
    lambdas.push_back(cplx(0.5 + 0.3 * i, (i % 3 - 1) * 0.2));
  auto got = ev.batch(lambdas, 4);
  REQUIRE(got.size() == lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i)
    CHECK(mrel(got[i], ev(lambdas[i])) < 1e-12);
}

TEST_CASE("monodromy entries are holomorphic in lambda") {
  // central differences along the real and imaginary axes agree for analytic
  // functions to O(h^2); halving h shrinks the mismatch about fourfold
  PeriodicPotential p = random_potential(1, 6, 0.25, 0.35);
  OdeOptions opt;
  opt.rtol = 1e-12;
  MonodromyEvaluator ev(p, opt);
  cplx lam(0.3, 0.2);
  auto mismatch = [&](double h) {
    Matrix2C dre = (1.0 / (2 * h)) * (ev(lam + h) - ev(lam - h));
    Matrix2C dim = (1.0 / (2 * h * cplx(0, 1))) *
                   (ev(lam + cplx(0, h)) - ev(lam - cplx(0, h)));
    return (dre - dim).norm();
  };
  double r1 = mismatch(0.05), r2 = mismatch(0.025);
  CHECK(r1 > 1e-9);  // signal well above integrator noise
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("reality symmetry couples lambda with 1/conj(lambda)") {
  // for real (u, u_y) the connection satisfies conj(A(1/conj(lambda))) =
  // J A(lambda) J^{-1} with J = [[0,1],[-1,0]]; integrated over a period this
  // swaps a <-> conj(d) and b <-> -conj(c)
  PeriodicPotential p = make_potential({{-1, 0.15}, {1, 0.15}}, {});
  MonodromyEvaluator ev(p);
  for (cplx lam : {cplx(2.0, 0.5), cplx(0.3, -0.2), cplx(-1.4, 0.7)}) {
    Matrix2C M1 = ev(lam);
    Matrix2C M2 = ev(1.0 / std::conj(lam));
    double scale = std::max(M1.norm(), M2.norm());
    CHECK(std::abs(M2.a - std::conj(M1.d)) < 1e-8 * scale);
    CHECK(std::abs(M2.b + std::conj(M1.c)) < 1e-8 * scale);
    CHECK(std::abs(M2.c + std::conj(M1.b)) < 1e-8 * scale);
    CHECK(std::abs(M2.d - std::conj(M1.a)) < 1e-8 * scale);
  }
  // on |lambda| = 1 the two points coincide: M is unitary there
  cplx on_circle = std::polar(1.0, 0.83);
  Matrix2C M = ev(on_circle);
  Matrix2C Mh{std::conj(M.a), std::conj(M.c), std::conj(M.b), std::conj(M.d)};
  CHECK((M * Mh - Matrix2C::identity()).norm() < 1e-8);
}

TEST_CASE("exhausted step budget raises a numerical error") {
  OdeOptions opt;
  opt.max_steps = 5;
  CHECK_THROWS_AS(monodromy(vacuum(), cplx(400.0), opt), NumericalError);
}
