#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sgspec/monodromy.hpp"
#include "sgspec/potential.hpp"
#include "sgspec/reconstruct.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

using namespace sgspec;

namespace {

// synthetic tame divisor: node offsets 0.3 e^{-0.8|k|} e^{+-0.4i} off the
// vacuum double points, optionally with small deviations planted on mu so
// that b does not vanish at the nodes
SpectralDivisor planted(int K, bool perturb_mu) {
  SpectralDivisor D = vacuum_divisor(K);
  for (int k = -K; k <= K; ++k) {
    double s = (k >= 0) ? 1.0 : -1.0;
    D.at(k).lambda =
        lambda_k0(k) *
        (1.0 + 0.3 * std::exp(-0.8 * std::abs(k)) * std::polar(1.0, 0.4 * s));
    if (perturb_mu)
      D.at(k).mu *= 1.0 + 0.05 * std::exp(-0.3 * std::abs(k)) *
                              std::polar(1.0, 0.2 * k);
  }
  return D;
}

// fixed evaluation grid: log-spaced radii covering both sides of the unit
// circle, golden-angle phases so no point is special
std::vector<cplx> grid20() {
  std::vector<cplx> g;
  for (int j = 0; j < 20; ++j) {
    double rho =
        std::exp(std::log(0.02) + j * (std::log(50.0) - std::log(0.02)) / 19.0);
    g.push_back(std::polar(rho, 2.0 * pi * 0.6180339887498949 * j));
  }
  return g;
}

PeriodicPotential cosine(double amp) {
  return make_potential({{-1, amp / 2}, {1, amp / 2}}, {});
}

}  // namespace

// ── node products ──

TEST_CASE("node product reproduces the vacuum c and its derivative") {
  std::vector<cplx> lam;
  for (int k = -8; k <= 8; ++k) lam.push_back(lambda_k0(k));
  NodeProduct np(lam, 8, 1.0);
  // with vacuum nodes the ratio product is 1: np is c0 itself
  for (cplx z : {cplx(2.0), cplx(-3.0), cplx(0.0, 0.5)})
    CHECK(std::abs(np(z) - vacuum_monodromy(z).c) < 1e-13);
  for (int k : {-3, -1, 0, 1, 2}) CHECK(std::abs(np(cplx(lambda_k0(k)))) < 1e-14);
  for (int k : {1, 2}) {
    // closed form c0'(lambda_{k,0}) = (-1)^k (1 - 1/lambda_{k,0})/8
    double closed =
        ((k % 2 == 0) ? 1.0 : -1.0) * (1.0 - 1.0 / lambda_k0(k)) / 8.0;
    CHECK(std::abs(np.deriv_at_node(k) - closed) < 1e-13);
    // independent derivative: trapezoid Cauchy integral on a circle inside
    // the gap to the nearest other node
    double gap = 1e300;
    for (int j = -8; j <= 8; ++j)
      if (j != k) gap = std::min(gap, std::abs(lambda_k0(k) - lambda_k0(j)));
    cplx acc = 0;
    for (int j = 0; j < 32; ++j) {
      cplx z = std::polar(0.3 * gap, 2.0 * pi * j / 32);
      acc += np(lambda_k0(k) + z) / z;
    }
    CHECK(std::abs(np.deriv_at_node(k) - acc / 32.0) < 1e-12);
  }
}

TEST_CASE("vacuum divisor reconstructs the vacuum monodromy") {
  ReconstructedMonodromy R(vacuum_divisor(8));
  CHECK(std::abs(R.tau() - 1.0) < 1e-15);
  CHECK(!R.tau_branch_ambiguous());
  for (cplx z : {cplx(2.0), cplx(-3.0), cplx(0.0, 0.5)}) {
    Matrix2C M = R.monodromy(z), V = vacuum_monodromy(z);
    CHECK(std::abs(M.a - V.a) < 1e-12);
    CHECK(std::abs(M.b - V.b) < 1e-12);
    CHECK(std::abs(M.c - V.c) < 1e-12);
    CHECK(std::abs(M.d - V.d) < 1e-12);
    CHECK(std::abs(M.det() - 1.0) < 1e-12);
  }
}

// ── tau from the divisor ──

TEST_CASE("tau homotopy lands on the analytic branch") {
  SpectralDivisor D16 = planted(16, false), D32 = planted(32, false);
  ReconstructedMonodromy R16(D16), R32(D32);
  CHECK(!R16.tau_branch_ambiguous());
  CHECK(!R32.tau_branch_ambiguous());
  CHECK(std::abs(tau_from_divisor(D16) - R16.tau()) < 1e-15);
  // independent branch: sum of principal logs, each factor near 1
  cplx s = 0;
  for (int k = -16; k <= 16; ++k)
    s += std::log(D16.at(k).lambda / cplx(lambda_k0(k)));
  CHECK(std::abs(R16.tau() - std::exp(-0.5 * s)) < 1e-12);
  // the offsets decay but do not pair up, so widening the band moves tau a
  // little; the drift is real and small
  double drift = std::abs(R16.tau() - R32.tau());
  CHECK(drift > 1e-12);
  CHECK(drift < 1e-6);
}

TEST_CASE("relabeling the enumeration changes values only through the flag") {
  SpectralDivisor D = planted(12, true);
  SpectralDivisor Ds = D;
  // rotate the payload of slots -2..2 and relabel: same divisor as a set,
  // different enumeration
  std::vector<DivisorEntry> w(Ds.entries.begin() + 10, Ds.entries.begin() + 15);
  std::rotate(w.begin(), w.begin() + 1, w.end());
  for (int i = 0; i < 5; ++i) Ds.entries[10 + i] = w[i];
  for (int k = -12; k <= 12; ++k) Ds.entries[k + 12].k = k;
  ReconstructedMonodromy R(D), Rs(Ds);
  CHECK(std::abs(R.tau() - Rs.tau()) < 1e-10);
  for (cplx z : {cplx(3.7, 1.1), cplx(-0.4, 0.2)}) {
    CHECK(std::abs(R.a(z) - Rs.a(z)) < 1e-10);
    CHECK(std::abs(R.c(z) - Rs.c(z)) < 1e-10);
    CHECK(std::abs(R.b(z) - Rs.b(z)) < 1e-10);
  }
  // the canonical labels give clean homotopy paths; the rotated ones drive
  // one path across zero and the flag must say so
  CHECK(!R.tau_branch_ambiguous());
  CHECK(Rs.tau_branch_ambiguous());
}

// ── reconstruction from extracted divisors ──

TEST_CASE("constant potential: nodes interpolate exactly and det stays 1") {
  PeriodicPotential p = make_potential({{0, 0.3}}, {});
  SpectralDivisor D = find_divisor(p, 12);
  ReconstructedMonodromy R(D);
  CHECK(std::abs(R.tau() - std::exp(-0.15)) < 1e-10);
  CHECK(!R.tau_branch_ambiguous());
  for (int k = -12; k <= 12; ++k) {
    CHECK(std::abs(R.a(D.at(k).lambda) - D.at(k).mu) < 1e-7);
    CHECK(std::abs(R.d(D.at(k).lambda) - 1.0 / D.at(k).mu) < 1e-7);
  }
  unsigned s = 12345u;
  auto rnd = [&]() {
    s = s * 1664525u + 1013904223u;
    return (double)s / 4294967296.0;
  };
  for (int i = 0; i < 20; ++i) {
    cplx z = std::polar(0.05 + 30.0 * rnd(), 2.0 * pi * rnd());
    CHECK(std::abs(R.monodromy(z).det() - 1.0) < 1e-12);
  }
}

TEST_CASE("vacuum potential roundtrip is exact to solver accuracy") {
  RoundtripReport rep = roundtrip_report(make_potential({}, {}), 8, grid20());
  CHECK(rep.max_rel < 1e-8);
  CHECK(rep.trace_err < 1e-8);
  CHECK(rep.tau_err < 1e-10);
}

TEST_CASE("cosine potential roundtrip converges as the band widens") {
  PeriodicPotential p = cosine(0.3);
  std::vector<cplx> g = grid20();
  RoundtripReport r12 = roundtrip_report(p, 12, g);
  RoundtripReport r24 = roundtrip_report(p, 24, g);
  RoundtripReport r48 = roundtrip_report(p, 48, g);
  CHECK(r12.K == 12);
  // off-diagonal entries carry the tail deficit of the truncated node
  // product; it is a small constant that halves as K doubles
  CHECK(r24.max_rel > 1e-4);
  CHECK(r24.max_rel < 1e-3);
  CHECK(r24.max_rel < 0.8 * r12.max_rel);
  CHECK(r48.max_rel < 0.8 * r24.max_rel);
  for (const RoundtripReport& r : {r12, r24, r48}) {
    // diagonal entries interpolate the deviation data and converge much
    // faster than the off-diagonal pair
    CHECK(r.max_rel_a < 1e-7);
    CHECK(r.max_rel_d < 1e-7);
    CHECK(r.trace_err < 1e-7);
    CHECK(r.tau_err < 1e-10);
  }
  // for an even real potential the tail factors of tau pair up and cancel
  CHECK(std::abs(r12.tau - r24.tau) < 1e-6);
}

// ── b near the nodes ──

TEST_CASE("b crosses the quotient/circle switch continuously") {
  SpectralDivisor D = planted(8, true);
  ReconstructedMonodromy R(D);
  for (int k : {-2, 0, 1, 3}) {
    cplx lk = D.at(k).lambda;
    cplx bk = R.b(lk);
    CHECK(std::abs(bk) > 0);
    double t0 = 1e-7 * std::abs(lk);  // switch radius for this node
    for (int i = 0; i < 4; ++i) {
      cplx z = lk + 1.5 * t0 * std::polar(1.0, 0.25 * pi + 0.5 * pi * i);
      CHECK(std::abs(R.b(z) - bk) / std::abs(bk) < 1e-5);
    }
  }
}

TEST_CASE("b at a node agrees with the direct flow") {
  PeriodicPotential p = cosine(0.3);
  SpectralDivisor D = find_divisor(p, 12);
  ReconstructedMonodromy R(D);
  MonodromyEvaluator eval(p);
  cplx l1 = D.at(1).lambda;
  cplx want = eval(l1).b;
  // K = 12 leaves the constant tail deficit of about 9e-4 in b
  CHECK(std::abs(R.b(l1) - want) / std::abs(want) < 5e-3);
}

// ── multiple nodes ──

TEST_CASE("hermite block degenerates to the simple-node coefficient") {
  PeriodicPotential p = cosine(0.3);
  SpectralDivisor D = find_divisor(p, 12);
  ReconstructedMonodromy R(D);
  std::vector<cplx> lam;
  for (int k = -12; k <= 12; ++k) lam.push_back(D.at(k).lambda);
  NodeProduct np(lam, 12, R.tau());
  cplx mu2 = D.at(2).mu;
  std::vector<cplx> t = hermite_block(D, 2, [&](cplx) { return mu2; });
  REQUIRE(t.size() == 1);
  CHECK(std::abs(t[0] - mu2 / np.deriv_at_node(2)) < 1e-12);
}

TEST_CASE("double node carries the curve jet") {
  cplx lstar = 0.5 * (lambda_k0(2) + lambda_k0(3));
  auto curve = [&](cplx l) { return std::cos(zeta(l)) + 0.1 * (l - lstar); };
  SpectralDivisor H = vacuum_divisor(6);
  for (int k : {2, 3}) {
    H.at(k).lambda = lstar;
    H.at(k).mu = curve(lstar);
  }
  std::vector<cplx> t =
      hermite_block(H, 2, [&](cplx l) { return curve(l) - std::cos(zeta(l)); });
  REQUIRE(t.size() == 2);
  auto aH = [&](cplx l) {
    cplx c = c_from_divisor(H, l);
    return std::cos(zeta(l)) + t[0] * c / (l - lstar) +
           t[1] * c / ((l - lstar) * (l - lstar));
  };
  // value and derivative at the double node by a wide Cauchy circle
  cplx v0 = 0, v1 = 0;
  for (int j = 0; j < 96; ++j) {
    cplx z = std::polar(40.0, 2.0 * pi * j / 96);
    v0 += aH(lstar + z);
    v1 += aH(lstar + z) / z;
  }
  CHECK(std::abs(v0 / 96.0 - std::cos(zeta(lstar))) < 1e-10);
  CHECK(std::abs(v1 / 96.0 -
                 (-std::sin(zeta(lstar)) * zeta_prime(lstar) + 0.1)) < 1e-10);
  // splitting the node by +-eps and recombining must converge quadratically
  // to the confluent assembly
  cplx ltest(777.0, 55.0);
  auto asplit = [&](double eps) {
    SpectralDivisor S = vacuum_divisor(6);
    S.at(2).lambda = lstar - eps;
    S.at(2).mu = curve(lstar - eps);
    S.at(3).lambda = lstar + eps;
    S.at(3).mu = curve(lstar + eps);
    return a_from_divisor(S, ltest);
  };
  cplx rich = (4.0 * asplit(0.2) - asplit(0.4)) / 3.0;
  CHECK(std::abs(aH(ltest) - rich) < 1e-9);
}

// ── input validation ──

TEST_CASE("tame reconstruction rejects what it cannot represent") {
  cplx lstar = 0.5 * (lambda_k0(2) + lambda_k0(3));
  SpectralDivisor H = vacuum_divisor(6);
  for (int k : {2, 3}) {
    H.at(k).lambda = lstar;
    H.at(k).mu = std::cos(zeta(lstar));
  }
  CHECK_THROWS_AS(ReconstructedMonodromy{H}, InputError);
  CHECK_THROWS_AS(a_from_divisor(H, cplx(2.0)), InputError);
  // c and tau only need the node set and survive repeated nodes
  CHECK(std::abs(c_from_divisor(H, lstar)) < 1e-14);
  CHECK(std::isfinite(std::abs(tau_from_divisor(H))));

  SpectralDivisor Dm = vacuum_divisor(4);
  Dm.at(1).mult = 2;
  CHECK_THROWS_AS(ReconstructedMonodromy{Dm}, InputError);
  SpectralDivisor Dz = vacuum_divisor(4);
  Dz.at(1).mu = 0;
  CHECK_THROWS_AS(ReconstructedMonodromy{Dz}, InputError);

  CHECK_THROWS_AS(hermite_block(H, 99, [](cplx) { return cplx(1.0); }),
                  InputError);
}
