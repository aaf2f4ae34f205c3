#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace sgspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Thrown when an algorithm fails to converge or a computation leaves its
// domain of validity (step size underflow, blow-up guard, root not found).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed or inconsistent user input (bad JSON, wrong sizes,
// out-of-range parameters).
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Dense 2x2 complex matrix, row-major [[a, b], [c, d]].  Kept as a plain
// aggregate: the transfer matrices are tiny and live on hot paths, so we
// avoid any dynamic allocation.
struct Matrix2C {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Matrix2C identity() { return {1.0, 0.0, 0.0, 1.0}; }

  cplx trace() const { return a + d; }
  cplx det() const { return a * d - b * c; }

  Matrix2C operator+(const Matrix2C& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  Matrix2C operator-(const Matrix2C& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  Matrix2C operator*(const Matrix2C& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Matrix2C operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }

  // Frobenius norm.
  double norm() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }
};

inline Matrix2C operator*(cplx s, const Matrix2C& m) { return m * s; }

// exp(A) for trace-free A via Cayley-Hamilton: with w^2 = -det A,
// exp(A) = cosh(w) 1l + sinh(w)/w A.  The ratio sinh(w)/w is evaluated by
// series for small |w| to avoid cancellation.
Matrix2C expm_tracefree(const Matrix2C& A);

// sin(w)/w with a series fallback near w = 0 (used by the closed-form
// monodromies; sinc is even so the branch of w never matters).
cplx sinc_c(cplx w);

}  // namespace sgspec
