#pragma once

#include <functional>
#include <random>
#include <vector>

#include "types.hpp"

namespace sgspec {

// Taylor coefficients a_0..a_{n_coeffs-1} of f around center, from the
// trapezoid rule on a circle: a_l = r^{-l} (1/m) sum_t f(center + r e^{i th_t})
// e^{-i l th_t}.  Spectrally accurate for f holomorphic on a neighbourhood of
// the closed disk; m_points should be at least 2*n_coeffs.
std::vector<cplx> cauchy_taylor(const std::function<cplx(cplx)>& f, cplx center,
                                double radius, int n_coeffs, int m_points);

// Winding number of the closed loop f_0, ..., f_{m-1} (closure f_m = f_0
// implied) around 0, from summed phase increments.  Throws NumericalError if
// some |f_t| falls under 1e-13 of the largest sample ("zero on contour") or a
// single increment exceeds 2.9 rad (sampling too coarse for a reliable count).
int winding_number(const std::vector<cplx>& f_samples);

struct LinFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct LinFitC {
  cplx slope{0.0}, intercept{0.0};
  double resid_max = 0.0;  // max |y_t - fit(x_t)|
};
LinFitC linear_fit_c(const std::vector<double>& x, const std::vector<cplx>& y);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Uniform double in [0, 1) from the top 53 bits of the generator output;
// bit-identical across platforms.
double uniform01(std::mt19937_64& rng);

}  // namespace sgspec
