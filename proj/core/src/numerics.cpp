#include "sgspec/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace sgspec {

cplx sinc_c(cplx w) {
  // sin(w)/w; even in w, so the branch of any square root feeding w is moot.
  if (std::abs(w) < 1e-4) {
    cplx w2 = w * w;
    return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0));
  }
  return std::sin(w) / w;
}

static cplx sinhc_c(cplx w) {
  // sinh(w)/w with the same small-argument series guard.
  if (std::abs(w) < 1e-4) {
    cplx w2 = w * w;
    return 1.0 + w2 / 6.0 * (1.0 + w2 / 20.0 * (1.0 + w2 / 42.0));
  }
  return std::sinh(w) / w;
}

Matrix2C expm_tracefree(const Matrix2C& A) {
  // Cayley-Hamilton for trace-free A: A^2 = -det(A) 1l, so with w^2 = -det(A)
  // exp(A) = cosh(w) 1l + sinh(w)/w A.  Both terms are even in w.
  cplx w = std::sqrt(-A.det());
  cplx ch = std::cosh(w);
  cplx sc = sinhc_c(w);
  return Matrix2C{ch + sc * A.a, sc * A.b, sc * A.c, ch + sc * A.d};
}

std::vector<cplx> cauchy_taylor(const std::function<cplx(cplx)>& f, cplx center,
                                double radius, int n_coeffs, int m_points) {
  if (radius <= 0.0 || n_coeffs < 1 || m_points < 2 * n_coeffs)
    throw InputError("cauchy_taylor: need radius > 0 and m_points >= 2*n_coeffs");
  std::vector<cplx> fv(m_points);
  for (int t = 0; t < m_points; ++t) {
    double th = 2.0 * pi * t / m_points;
    fv[t] = f(center + radius * cplx(std::cos(th), std::sin(th)));
  }
  std::vector<cplx> out(n_coeffs);
  double rl = 1.0;
  for (int l = 0; l < n_coeffs; ++l) {
    cplx acc = 0.0;
    for (int t = 0; t < m_points; ++t) {
      double th = -2.0 * pi * l * t / m_points;
      acc += fv[t] * cplx(std::cos(th), std::sin(th));
    }
    out[l] = acc / (static_cast<double>(m_points) * rl);
    rl *= radius;
  }
  return out;
}

int winding_number(const std::vector<cplx>& f_samples) {
  const size_t m = f_samples.size();
  if (m < 8) throw InputError("winding_number: too few samples");
  double maxmod = 0.0;
  for (const cplx& v : f_samples) maxmod = std::max(maxmod, std::abs(v));
  if (!(maxmod > 0.0)) throw NumericalError("winding_number: zero on contour");
  // A zero on the contour shows up as a local dip, so compare each sample
  // against its neighbours rather than the global max: smooth integrands with
  // large dynamic range (exponential level curves) must not trip the guard.
  for (size_t t = 0; t < m; ++t) {
    const double here = std::abs(f_samples[t]);
    const double near = std::max(std::abs(f_samples[(t + 1) % m]),
                                 std::abs(f_samples[(t + m - 1) % m]));
    if (here < 1e-13 * near)
      throw NumericalError("winding_number: zero on contour");
  }
  double total = 0.0;
  for (size_t t = 0; t < m; ++t) {
    const cplx a = f_samples[t];
    const cplx b = f_samples[(t + 1) % m];
    double inc = std::arg(b * std::conj(a));
    if (std::abs(inc) > 2.9)
      throw NumericalError("winding_number: sampling too coarse");
    total += inc;
  }
  double w = total / (2.0 * pi);
  long n = std::lround(w);
  if (std::abs(w - static_cast<double>(n)) > 0.25)
    throw NumericalError("winding_number: non-integer winding");
  return static_cast<int>(n);
}

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw InputError("linear_fit: need >= 2 paired points");
  double sx = 0, sy = 0;
  for (size_t t = 0; t < n; ++t) { sx += x[t]; sy += y[t]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t t = 0; t < n; ++t) {
    sxx += (x[t] - mx) * (x[t] - mx);
    sxy += (x[t] - mx) * (y[t] - my);
  }
  if (!(sxx > 0.0)) throw InputError("linear_fit: degenerate abscissae");
  LinFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t t = 0; t < n; ++t) {
    double r = y[t] - (out.slope * x[t] + out.intercept);
    ss_res += r * r;
    ss_tot += (y[t] - my) * (y[t] - my);
  }
  out.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

LinFitC linear_fit_c(const std::vector<double>& x, const std::vector<cplx>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw InputError("linear_fit_c: need >= 2 paired points");
  double sx = 0;
  cplx sy = 0;
  for (size_t t = 0; t < n; ++t) { sx += x[t]; sy += y[t]; }
  const double mx = sx / static_cast<double>(n);
  const cplx my = sy / static_cast<double>(n);
  double sxx = 0;
  cplx sxy = 0;
  for (size_t t = 0; t < n; ++t) {
    sxx += (x[t] - mx) * (x[t] - mx);
    sxy += (x[t] - mx) * (y[t] - my);
  }
  if (!(sxx > 0.0)) throw InputError("linear_fit_c: degenerate abscissae");
  LinFitC out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  for (size_t t = 0; t < n; ++t)
    out.resid_max = std::max(out.resid_max,
                             std::abs(y[t] - (out.slope * x[t] + out.intercept)));
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InputError("gauss_legendre: n >= 1 required");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sgspec
