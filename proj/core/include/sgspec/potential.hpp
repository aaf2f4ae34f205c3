#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "types.hpp"

namespace sgspec {

// Band-limited periodic Cauchy data (u, u_y) on [0,1]: trigonometric
// polynomials u(x) = sum_{|j|<=J} cu_j e^{2 pi i j x} and likewise u_y.
// Periodicity u(0) = u(1) is automatic; the grid size N >= 4J+4 leaves an
// anti-aliasing margin for pointwise sinh evaluation.
struct PeriodicPotential {
  int J = 0;
  int N = 8;
  std::vector<cplx> cu;   // u modes -J..J at index j+J
  std::vector<cplx> cuy;  // u_y modes -J..J at index j+J

  cplx u_mode(int j) const {
    return (j < -J || j > J) ? cplx(0.0) : cu[static_cast<size_t>(j + J)];
  }
  cplx uy_mode(int j) const {
    return (j < -J || j > J) ? cplx(0.0) : cuy[static_cast<size_t>(j + J)];
  }
};

// A tangent direction (delta u, delta u_y); same shape as the base data.
using PotentialVariation = PeriodicPotential;

struct PotentialValue {
  cplx u, ux, uy;
};

PeriodicPotential vacuum();

// Builds data from sparse mode maps; J is the largest index present.
PeriodicPotential make_potential(const std::map<int, cplx>& coeff_u,
                                 const std::map<int, cplx>& coeff_uy);

// Deterministic pseudo-random data: |mode j| <= amplitude * e^{-decay_rate |j|}.
// real_valued pins c_{-j} = conj(c_j) so u and u_y are real on [0,1].
PeriodicPotential random_potential(std::uint64_t seed, int J, double amplitude,
                                   double decay_rate, bool real_valued = true);

PotentialValue evaluate(const PeriodicPotential& p, double x);

// tau = e^{-u(0)/2} with u(0) from the coefficient sum.
cplx tau_of(const PeriodicPotential& p);

// Mode j picks up the phase e^{2 pi i j x0}.
PeriodicPotential translate_x(const PeriodicPotential& p, double x0);

// Exploratory y-extension of analytic-class data via the pseudo-spectral
// second-order (velocity Verlet) discretization of u_yy = -u_xx - sinh(u),
// keeping modes |j| <= filter_cutoff.  The y-Cauchy problem is elliptic and
// ill-posed; use small |y_target| only.  Blow-up of any retained coefficient
// beyond blowup_bound raises NumericalError.
PeriodicPotential evolve_y(const PeriodicPotential& p, double y_target,
                           int n_steps, int filter_cutoff,
                           double blowup_bound = 1e6);

// W^{1,2} x L^2 pairing by Parseval:
//   <p, q> = sum_j (1 + (2 pi j)^2) pu_j conj(qu_j) + sum_j puy_j conj(quy_j).
cplx pot_inner(const PeriodicPotential& p, const PeriodicPotential& q);
double pot_norm(const PeriodicPotential& p);

// p + s * v with zero-padding to the larger band limit.
PeriodicPotential add_scaled(const PeriodicPotential& p, double s,
                             const PotentialVariation& v);

}  // namespace sgspec
