#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "sgspec/potential.hpp"
#include "sgspec/types.hpp"

using namespace sgspec;

namespace {

double dist(const PeriodicPotential& p, const PeriodicPotential& q) {
  return pot_norm(add_scaled(p, -1.0, q));
}

PeriodicPotential cosine(double amp) {
  return make_potential({{-1, amp / 2}, {1, amp / 2}}, {});
}

// independent pendulum reference for constant-in-x data: u'' = -sinh u
void pendulum_rk4(double& u, double& v, double y, int n) {
  double h = y / n;
  for (int i = 0; i < n; ++i) {
    auto f = [](double uu, double vv) { return std::pair{vv, -std::sinh(uu)}; };
    auto [k1u, k1v] = f(u, v);
    auto [k2u, k2v] = f(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    auto [k3u, k3v] = f(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    auto [k4u, k4v] = f(u + h * k3u, v + h * k3v);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
}

}  // namespace

// ── construction and evaluation ──

TEST_CASE("vacuum is identically zero") {
  PeriodicPotential p = vacuum();
  for (double x : {0.0, 0.3, 0.77}) {
    PotentialValue v = evaluate(p, x);
    CHECK(std::abs(v.u) == 0.0);
    CHECK(std::abs(v.uy) == 0.0);
  }
  CHECK(pot_norm(p) == 0.0);
  CHECK(std::abs(tau_of(p) - 1.0) == 0.0);
}

TEST_CASE("constant mode and tau") {
  PeriodicPotential p = make_potential({{0, 0.3}}, {});
  CHECK(std::abs(evaluate(p, 0.42).u - 0.3) < 1e-16);
  CHECK(std::abs(tau_of(p) - 0.86070797642505781) < 1e-15);
  // u = 2 pi i turns tau around the unit circle to -1
  PeriodicPotential q = make_potential({{0, cplx(0.0, 2 * pi)}}, {});
  CHECK(std::abs(tau_of(q) + 1.0) < 1e-14);
}

TEST_CASE("cosine data evaluates with correct derivative") {
  PeriodicPotential p = cosine(0.3);
  PotentialValue v0 = evaluate(p, 0.0);
  CHECK(std::abs(v0.u - 0.3) < 1e-15);
  CHECK(std::abs(v0.ux) < 1e-15);
  PotentialValue vq = evaluate(p, 0.25);
  CHECK(std::abs(vq.u) < 1e-15);
  CHECK(std::abs(vq.ux + 0.6 * pi) < 1e-13);
  // period 1
  PotentialValue v1 = evaluate(p, 1.0);
  CHECK(std::abs(v1.u - v0.u) < 1e-14);
}

TEST_CASE("norm matches direct quadrature of the Sobolev pairing") {
  PeriodicPotential p = cosine(1.0);
  // trapezoid on the periodic grid is spectrally exact for trig polynomials
  int M = 512;
  double s = 0.0;
  for (int n = 0; n < M; ++n) {
    PotentialValue v = evaluate(p, static_cast<double>(n) / M);
    s += std::norm(v.u) + std::norm(v.ux) + std::norm(v.uy);
  }
  s /= M;
  CHECK(pot_norm(p) == doctest::Approx(std::sqrt(s)).epsilon(1e-13));
  CHECK(pot_norm(p) == doctest::Approx(4.4988008182379799).epsilon(1e-13));
}

TEST_CASE("inner product is conjugate symmetric and recovers the norm") {
  PeriodicPotential p = random_potential(3, 4, 0.5, 0.3);
  PeriodicPotential q = random_potential(4, 6, 0.5, 0.3);
  cplx pq = pot_inner(p, q), qp = pot_inner(q, p);
  CHECK(std::abs(pq - std::conj(qp)) < 1e-14 * (1 + std::abs(pq)));
  cplx pp = pot_inner(p, p);
  CHECK(std::abs(pp.imag()) < 1e-16);
  CHECK(std::sqrt(pp.real()) == doctest::Approx(pot_norm(p)).epsilon(1e-14));
}

TEST_CASE("add_scaled pads bands and is linear") {
  PeriodicPotential p = cosine(0.3);
  PeriodicPotential v = make_potential({{3, cplx(0.0, 0.1)}, {-3, cplx(0.0, -0.1)}},
                                       {{0, 0.2}});
  PeriodicPotential s = add_scaled(p, 2.0, v);
  CHECK(s.J == 3);
  CHECK(std::abs(s.u_mode(1) - 0.15) < 1e-16);
  CHECK(std::abs(s.u_mode(3) - cplx(0.0, 0.2)) < 1e-16);
  CHECK(std::abs(s.uy_mode(0) - 0.4) < 1e-16);
  PotentialValue a = evaluate(s, 0.37);
  PotentialValue b0 = evaluate(p, 0.37), b1 = evaluate(v, 0.37);
  CHECK(std::abs(a.u - (b0.u + 2.0 * b1.u)) < 1e-14);
}

// ── translation ──

TEST_CASE("translation composes, preserves norm, and has period 1") {
  PeriodicPotential p = random_potential(11, 5, 0.4, 0.3);
  PeriodicPotential pa = translate_x(translate_x(p, 0.2), 0.3);
  PeriodicPotential pb = translate_x(p, 0.5);
  CHECK(dist(pa, pb) < 1e-13);
  CHECK(pot_norm(pa) == doctest::Approx(pot_norm(p)).epsilon(1e-13));
  CHECK(dist(translate_x(p, 1.0), p) < 1e-12);
  // pointwise: (T_a u)(x) = u(x + a)
  PotentialValue lhs = evaluate(translate_x(p, 0.15), 0.3);
  PotentialValue rhs = evaluate(p, 0.45);
  CHECK(std::abs(lhs.u - rhs.u) < 1e-13);
  CHECK(std::abs(lhs.uy - rhs.uy) < 1e-13);
}

// ── random data ──

TEST_CASE("random data is deterministic, bounded, and real") {
  PeriodicPotential a = random_potential(7, 6, 0.25, 0.35);
  PeriodicPotential b = random_potential(7, 6, 0.25, 0.35);
  CHECK(a.cu == b.cu);
  CHECK(a.cuy == b.cuy);
  PeriodicPotential c = random_potential(8, 6, 0.25, 0.35);
  CHECK(dist(a, c) > 1e-3);  // different seeds differ
  for (int j = -6; j <= 6; ++j) {
    CHECK(std::abs(a.u_mode(j)) <= 0.25 * std::exp(-0.35 * std::abs(j)) + 1e-16);
    CHECK(std::abs(a.u_mode(-j) - std::conj(a.u_mode(j))) < 1e-16);
    CHECK(std::abs(a.uy_mode(-j) - std::conj(a.uy_mode(j))) < 1e-16);
  }
  for (double x : {0.1, 0.6}) {
    PotentialValue v = evaluate(a, x);
    CHECK(std::abs(v.u.imag()) < 1e-14);
    CHECK(std::abs(v.uy.imag()) < 1e-14);
  }
  PeriodicPotential z = random_potential(7, 6, 0.0, 0.35);
  CHECK(pot_norm(z) == 0.0);
}

// ── y-extension ──

TEST_CASE("y-extension fixes the vacuum and the zero time") {
  PeriodicPotential p = random_potential(5, 4, 0.2, 0.4);
  CHECK(dist(evolve_y(p, 0.0, 10, 8), p) < 1e-15);
  PeriodicPotential v = evolve_y(vacuum(), 0.05, 200, 8);
  CHECK(pot_norm(v) < 1e-14);
}

TEST_CASE("y-extension of constant data follows the pendulum") {
  PeriodicPotential p = make_potential({{0, 0.4}}, {{0, 0.1}});
  PeriodicPotential q = evolve_y(p, 0.1, 4000, 4);
  double u = 0.4, v = 0.1;
  pendulum_rk4(u, v, 0.1, 20000);
  CHECK(std::abs(u - 0.40793006657016713) < 1e-12);  // reference cross-check
  CHECK(std::abs(q.u_mode(0) - u) < 1e-6 * std::abs(u));
  CHECK(std::abs(q.uy_mode(0) - v) < 1e-6);

  // second-order stepping: error drops by ~4 when steps double
  auto err = [&](int n) {
    PeriodicPotential r = evolve_y(p, 0.1, n, 4);
    return std::abs(r.u_mode(0) - u);
  };
  double e1 = err(50), e2 = err(100);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("y-extension round trip returns near the start") {
  PeriodicPotential p = random_potential(9, 3, 0.15, 0.5);
  for (int n : {100, 200, 400}) {
    PeriodicPotential fwd = evolve_y(p, 0.02, n, 6);
    PeriodicPotential back = evolve_y(fwd, -0.02, n, 6);
    CHECK(dist(back, p) < 1e-8);
  }
}

TEST_CASE("y-extension reports blow-up") {
  // x-dependent modes feed the elliptic instability (rate ~ 2 pi |j|); constant
  // data would merely swing like a pendulum.  The mode passes 1.0 near y = 0.3.
  PeriodicPotential p = make_potential({{-2, 0.1}, {2, 0.1}}, {});
  CHECK_THROWS_AS(evolve_y(p, 0.4, 800, 4, 1.0), NumericalError);
}
