#include "sgspec/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgspec/numerics.hpp"
#include "sgspec/parallel.hpp"

namespace sgspec {

Matrix2C alpha_x(const PeriodicPotential& p, double x, cplx lambda) {
  if (lambda == cplx(0.0)) throw InputError("alpha_x: lambda = 0");
  PotentialValue v = evaluate(p, x);
  cplx ep = std::exp(v.u / 2.0), em = std::exp(-v.u / 2.0);
  cplx iuy = cplx(0.0, 1.0) * v.uy;
  return Matrix2C{0.25 * iuy, -0.25 * (ep + em / lambda),
                  0.25 * (ep + lambda * em), -0.25 * iuy};
}

// ── cached trigonometric data ──

MonodromyEvaluator::MonodromyEvaluator(const PeriodicPotential& p, OdeOptions opt)
    : opt_(opt) {
  // e^{+-u/2} are entire in the trig-polynomial u, so their Fourier modes decay
  // super-exponentially; a margin of 6J+32 modes reaches the 5e-17 trim level
  // for amplitudes well beyond the ones used here.
  int M = 64;
  while (M < 6 * p.J + 32) M *= 2;
  std::vector<cplx> ep(M), em(M), uy(M);
  for (int n = 0; n < M; ++n) {
    PotentialValue v = evaluate(p, static_cast<double>(n) / M);
    ep[static_cast<size_t>(n)] = std::exp(v.u / 2.0);
    em[static_cast<size_t>(n)] = std::exp(-v.u / 2.0);
    uy[static_cast<size_t>(n)] = v.uy;
  }
  int Jmax = M / 2 - 1;
  std::vector<std::array<cplx, 3>> full(static_cast<size_t>(2 * Jmax + 1));
  double maxabs = 0.0;
  for (int j = -Jmax; j <= Jmax; ++j) {
    std::array<cplx, 3> acc{cplx(0.0), cplx(0.0), cplx(0.0)};
    for (int n = 0; n < M; ++n) {
      double th = -2.0 * pi * j * n / static_cast<double>(M);
      cplx e(std::cos(th), std::sin(th));
      acc[0] += ep[static_cast<size_t>(n)] * e;
      acc[1] += em[static_cast<size_t>(n)] * e;
      acc[2] += uy[static_cast<size_t>(n)] * e;
    }
    for (auto& a : acc) a /= static_cast<double>(M);
    full[static_cast<size_t>(j + Jmax)] = acc;
    for (const auto& a : acc) maxabs = std::max(maxabs, std::abs(a));
  }
  int Jt = 0;
  const double trim = 5e-17 * maxabs;
  for (int j = 0; j <= Jmax; ++j)
    for (int s : {-1, 1})
      for (const auto& a : full[static_cast<size_t>(s * j + Jmax)])
        if (std::abs(a) > trim) Jt = std::max(Jt, j);
  modes_.Jt = Jt;
  modes_.c.assign(static_cast<size_t>(2 * Jt + 1), {cplx(0.0), cplx(0.0), cplx(0.0)});
  for (int j = -Jt; j <= Jt; ++j)
    modes_.c[static_cast<size_t>(j + Jt)] = full[static_cast<size_t>(j + Jmax)];
}

void MonodromyEvaluator::rhs_coeffs(double x, cplx& ep, cplx& em, cplx& uy) const {
  const int Jt = modes_.Jt;
  cplx E(std::cos(2.0 * pi * x), std::sin(2.0 * pi * x));
  cplx w = 1.0;
  for (int j = 0; j < Jt; ++j) w *= std::conj(E);  // w = E^{-Jt}
  ep = em = uy = 0.0;
  for (int idx = 0; idx <= 2 * Jt; ++idx) {
    const auto& c = modes_.c[static_cast<size_t>(idx)];
    ep += c[0] * w;
    em += c[1] * w;
    uy += c[2] * w;
    w *= E;
  }
}

// Test hook: the connection matrix assembled from the cached modes, for
// comparison against the direct pointwise alpha_x.
Matrix2C alpha_cached_probe(const MonodromyEvaluator& ev, double x, cplx lambda) {
  if (lambda == cplx(0.0)) throw InputError("alpha_x: lambda = 0");
  cplx ep, em, uy;
  ev.rhs_coeffs(x, ep, em, uy);
  cplx iuy = cplx(0.0, 1.0) * uy;
  return Matrix2C{0.25 * iuy, -0.25 * (ep + em / lambda),
                  0.25 * (ep + lambda * em), -0.25 * iuy};
}

// ── Dormand-Prince 5(4), FSAL ──

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                 e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Matrix2C MonodromyEvaluator::integrate(cplx lambda, double x0, double x1,
                                       Matrix2C F) const {
  if (lambda == cplx(0.0)) throw InputError("monodromy: lambda = 0");
  if (x1 <= x0) return F;
  const cplx ilam = 1.0 / lambda;
  auto deriv = [&](double x, const Matrix2C& G) -> Matrix2C {
    cplx ep, em, uy;
    rhs_coeffs(x, ep, em, uy);
    cplx Aa = 0.25 * cplx(0.0, 1.0) * uy;
    cplx Ab = -0.25 * (ep + em * ilam);
    cplx Ac = 0.25 * (ep + lambda * em);
    return Matrix2C{Aa * G.a + Ab * G.c, Aa * G.b + Ab * G.d,
                    Ac * G.a - Aa * G.c, Ac * G.b - Aa * G.d};
  };
  // The vacuum phase is zeta ~ (|lambda|^{1/2} + |lambda|^{-1/2})/4; start with
  // a fraction of one oscillation so the controller settles immediately.
  double sq = std::sqrt(std::abs(lambda));
  double omega = 0.25 * (sq + 1.0 / sq);
  double h = std::min({0.1, 0.4 / omega, x1 - x0});
  double x = x0;
  Matrix2C k1 = deriv(x, F);
  long steps = 0;
  while (x < x1) {
    if (++steps > opt_.max_steps) {
      std::ostringstream os;
      os << "monodromy: step budget exhausted at lambda = " << lambda.real()
         << (lambda.imag() < 0 ? " - " : " + ") << std::abs(lambda.imag()) << "i";
      throw NumericalError(os.str());
    }
    h = std::min(h, x1 - x);
    if (h < 1e-14) {
      std::ostringstream os;
      os << "monodromy: step size underflow at lambda = " << lambda.real()
         << (lambda.imag() < 0 ? " - " : " + ") << std::abs(lambda.imag()) << "i";
      throw NumericalError(os.str());
    }
    Matrix2C k2 = deriv(x + c2 * h, F + (h * a21) * k1);
    Matrix2C k3 = deriv(x + c3 * h, F + (h * a31) * k1 + (h * a32) * k2);
    Matrix2C k4 =
        deriv(x + c4 * h, F + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
    Matrix2C k5 = deriv(x + c5 * h, F + (h * a51) * k1 + (h * a52) * k2 +
                                        (h * a53) * k3 + (h * a54) * k4);
    Matrix2C k6 = deriv(x + h, F + (h * a61) * k1 + (h * a62) * k2 +
                                   (h * a63) * k3 + (h * a64) * k4 + (h * a65) * k5);
    Matrix2C F5 = F + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 +
                  (h * b5) * k5 + (h * b6) * k6;
    Matrix2C k7 = deriv(x + h, F5);
    Matrix2C E = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                 (h * e6) * k6 + (h * e7) * k7;
    double scale = opt_.atol + opt_.rtol * std::max(F.norm(), F5.norm());
    double err = E.norm() / scale;
    if (err <= 1.0) {
      x += h;
      F = F5;
      k1 = k7;  // FSAL
      double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
    }
  }
  return F;
}

Matrix2C MonodromyEvaluator::operator()(cplx lambda) const {
  return integrate(lambda, 0.0, 1.0, Matrix2C::identity());
}

std::vector<FrameSample> MonodromyEvaluator::frames(
    cplx lambda, const std::vector<double>& x_samples) const {
  for (size_t i = 0; i < x_samples.size(); ++i) {
    if (x_samples[i] < 0.0 || x_samples[i] > 1.0)
      throw InputError("extended_frame: samples must lie in [0, 1]");
    if (i > 0 && x_samples[i] < x_samples[i - 1])
      throw InputError("extended_frame: samples must be sorted");
  }
  std::vector<FrameSample> out;
  out.reserve(x_samples.size());
  Matrix2C F = Matrix2C::identity();
  double x = 0.0;
  for (double xs : x_samples) {
    F = integrate(lambda, x, xs, F);
    x = xs;
    out.push_back(FrameSample{xs, F});
  }
  return out;
}

std::vector<Matrix2C> MonodromyEvaluator::batch(const std::vector<cplx>& lambdas,
                                                int threads) const {
  std::vector<Matrix2C> out(lambdas.size());
  parallel_for(
      static_cast<int>(lambdas.size()),
      [&](int i) { out[static_cast<size_t>(i)] = (*this)(lambdas[static_cast<size_t>(i)]); },
      threads);
  return out;
}

Matrix2C monodromy(const PeriodicPotential& p, cplx lambda, OdeOptions opt) {
  return MonodromyEvaluator(p, opt)(lambda);
}

std::vector<FrameSample> extended_frame(const PeriodicPotential& p, cplx lambda,
                                        const std::vector<double>& x_samples,
                                        OdeOptions opt) {
  return MonodromyEvaluator(p, opt).frames(lambda, x_samples);
}

std::vector<Matrix2C> monodromy_batch(const PeriodicPotential& p,
                                      const std::vector<cplx>& lambdas,
                                      OdeOptions opt, int threads) {
  return MonodromyEvaluator(p, opt).batch(lambdas, threads);
}

// ── vacuum closed forms ──

cplx zeta(cplx lambda) {
  if (lambda == cplx(0.0)) throw InputError("zeta: lambda = 0");
  cplx s = std::sqrt(lambda);
  return 0.25 * (s + 1.0 / s);
}

Matrix2C vacuum_monodromy(cplx lambda) {
  if (lambda == cplx(0.0)) throw InputError("vacuum_monodromy: lambda = 0");
  cplx s = std::sqrt(lambda);
  cplx z = 0.25 * (s + 1.0 / s);
  cplx cz = std::cos(z), sz = std::sin(z);
  // All entries are even in s, so the sqrt branch cancels.
  return Matrix2C{cz, -sz / s, s * sz, cz};
}

cplx delta0(cplx lambda) { return 2.0 * std::cos(zeta(lambda)); }

double lambda_k0(int k) {
  if (k == 0) return -1.0;
  if (k < 0) return 1.0 / lambda_k0(-k);
  double pk = pi * static_cast<double>(k);
  return 8.0 * pk * pk + 4.0 * pk * std::sqrt(4.0 * pk * pk - 1.0) - 1.0;
}

int mu_k0(int k) { return (k % 2 == 0) ? 1 : -1; }

cplx zeta_prime(cplx lambda) {
  cplx s = std::sqrt(lambda);
  return (1.0 - 1.0 / lambda) / (8.0 * s);
}

cplx zeta_dd(cplx a, cplx b) {
  cplx sa = std::sqrt(a), sb = std::sqrt(b);
  return (1.0 - 1.0 / (sa * sb)) / (4.0 * (sa + sb));
}

double entry_noise(cplx lambda, double entry_magnitude) {
  double r = std::sqrt(std::abs(lambda));
  double omega = 0.25 * (r + 1.0 / r);
  return 4e-11 * std::max(1.0, omega / pi) * std::max(1.0, entry_magnitude);
}

}  // namespace sgspec
