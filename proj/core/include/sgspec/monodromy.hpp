#pragma once

#include <array>
#include <functional>
#include <vector>

#include "potential.hpp"
#include "types.hpp"

namespace sgspec {

struct FrameSample {
  double x = 0.0;
  Matrix2C F = Matrix2C::identity();
};

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  long max_steps = 2000000;
};

// dx-part of the connection at (x, lambda):
//   (1/4) [[ i u_y,               -e^{u/2} - lambda^{-1} e^{-u/2} ],
//          [ e^{u/2} + lambda e^{-u/2},                    -i u_y ]].
Matrix2C alpha_x(const PeriodicPotential& p, double x, cplx lambda);

// Integrates F' = alpha_x F, F(0) = 1l, with cached trigonometric data for
// e^{u/2}, e^{-u/2}, u_y.  Immutable after construction; safe to share across
// worker threads.
class MonodromyEvaluator {
 public:
  explicit MonodromyEvaluator(const PeriodicPotential& p, OdeOptions opt = {});

  // Frame at x = 1 (the monodromy).
  Matrix2C operator()(cplx lambda) const;

  // Frames at sorted sample points in [0, 1].
  std::vector<FrameSample> frames(cplx lambda,
                                  const std::vector<double>& x_samples) const;

  // Elementwise monodromies, order-preserving, fanned out across workers.
  std::vector<Matrix2C> batch(const std::vector<cplx>& lambdas,
                              int threads = 0) const;

 private:
  struct PackedModes {
    int Jt = 0;
    // per mode j (index j+Jt): coefficients of e^{u/2}, e^{-u/2}, u_y
    std::vector<std::array<cplx, 3>> c;
  };
  PackedModes modes_;
  OdeOptions opt_;

  void rhs_coeffs(double x, cplx& ep, cplx& em, cplx& uy) const;
  Matrix2C integrate(cplx lambda, double x0, double x1, Matrix2C F) const;

  friend Matrix2C alpha_cached_probe(const MonodromyEvaluator&, double, cplx);
};

using MonodromyFn = std::function<Matrix2C(cplx)>;

Matrix2C monodromy(const PeriodicPotential& p, cplx lambda, OdeOptions opt = {});
std::vector<FrameSample> extended_frame(const PeriodicPotential& p, cplx lambda,
                                        const std::vector<double>& x_samples,
                                        OdeOptions opt = {});
std::vector<Matrix2C> monodromy_batch(const PeriodicPotential& p,
                                      const std::vector<cplx>& lambdas,
                                      OdeOptions opt = {}, int threads = 0);

// ── vacuum closed forms ──
// zeta = (lambda^{1/2} + lambda^{-1/2})/4 (principal branch; every exported
// vacuum quantity below is even in lambda^{1/2} and thus branch-independent).
cplx zeta(cplx lambda);
// M_0 = [[cos zeta, -lambda^{-1/2} sin zeta], [lambda^{1/2} sin zeta, cos zeta]].
Matrix2C vacuum_monodromy(cplx lambda);
// Delta_0 = 2 cos zeta.
cplx delta0(cplx lambda);
// Vacuum double points: zeros of sin zeta.  For k > 0,
// lambda_{k,0} = 8 pi^2 k^2 + 4 pi k sqrt(4 pi^2 k^2 - 1) - 1; lambda_{0,0} = -1;
// lambda_{-k,0} = 1/lambda_{k,0} (exact; evaluated as the reciprocal to avoid
// cancellation).
double lambda_k0(int k);
// mu_{k,0} = (-1)^k.
int mu_k0(int k);
// Derivative of zeta: (1 - 1/lambda) / (8 lambda^{1/2}).
cplx zeta_prime(cplx lambda);
// Divided difference (zeta(a) - zeta(b)) / (a - b) in cancellation-free form:
// (1 - (ab)^{-1/2}) / (4 (a^{1/2} + b^{1/2})).
cplx zeta_dd(cplx a, cplx b);

// Calibrated noise level of an integrated monodromy entry at the default
// tolerances (rtol 1e-11), measured against the closed forms at the vacuum
// double points: 4e-11 * max(1, omega/pi) * max(1, |entry|), where
// omega = (|lambda|^{1/2} + |lambda|^{-1/2})/4 is the local phase rate.
// Downstream measurement floors (branch-pair resolution, decay fits) share
// this one law.
double entry_noise(cplx lambda, double entry_magnitude);

}  // namespace sgspec
