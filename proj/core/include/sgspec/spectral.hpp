#pragma once

#include <functional>
#include <vector>

#include "sgspec/monodromy.hpp"
#include "sgspec/potential.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// ── divisor and branch-point data ──

struct DivisorEntry {
  int k = 0;       // annulus index
  cplx lambda;     // zero of the lower-left monodromy entry
  cplx mu;         // upper-left entry at lambda
  int mult = 1;
};

// Truncated indexed divisor: one entry per k in [-K, K]; entries for |k| > K
// are by convention the vacuum pair (lambda_k0(k), mu_k0(k)).
struct SpectralDivisor {
  int K = 0;
  std::vector<DivisorEntry> entries;  // sorted by k
  const DivisorEntry& at(int k) const;
  DivisorEntry& at(int k);
};

SpectralDivisor vacuum_divisor(int K);

struct BranchPair {
  int k = 0;
  cplx kappa1, kappa2;  // zeros of Delta^2 - 4 in annulus k
  bool is_double = false;
  double floor = 0.0;   // local measurement floor for |kappa1 - kappa2|
  cplx midpoint() const { return 0.5 * (kappa1 + kappa2); }
};

struct BranchPointSet {
  int K = 0;
  std::vector<BranchPair> pairs;  // sorted by k
  const BranchPair& at(int k) const;
  BranchPair& at(int k);
};

struct CurvePoint {
  cplx lambda;
  cplx mu;
};

// ── annuli and zero counting ──

// k > 0 iff (k-1/2)pi <= |zeta| <= (k+1/2)pi and |lambda| > 1; k < 0 the
// mirror statement with |lambda| < 1; k = 0 iff |zeta| <= pi/2.  Boundary
// ties resolve toward smaller |k|.
int annulus_index(cplx lambda);

// closed contour: t in [0,1] -> point, with contour(0) = contour(1)
using ContourFn = std::function<cplx(double)>;

// Level curve |zeta| = c (requires c > 1/2 for a closed loop), either the
// component outside the unit circle or its reciprocal inside.
ContourFn level_curve(double c, bool outer);

// Winding number of f along the contour, validated by doubling the sample
// count until two consecutive counts agree.
int count_zeros(const std::function<cplx(cplx)>& f, const ContourFn& contour,
                int min_samples = 64, int threads = 0);

// Zero counts of f in the annuli S_k, |k| <= K, sharing level-curve windings
// between adjacent annuli.  Result indexed by k + K.
std::vector<int> annulus_zero_counts(const std::function<cplx(cplx)>& f, int K,
                                     int min_samples = 0, int threads = 0);

// ── extraction ──

struct DivisorOptions {
  double newton_tol = 1e-12;  // |dlambda| <= tol * (1 + |lambda|)
  int newton_max = 40;
  bool verify_counts = false;  // argument-principle count per annulus
  int count_samples = 0;       // 0 -> max(64, 16|k|)
  int threads = 0;
};

// Warm-start state: divisor entries together with slope estimates of the
// lower-left monodromy entry, reusable across nearby potentials.
struct SeededEntry {
  int k = 0;
  cplx lambda, mu;
  cplx dc;  // d/dlambda of the lower-left entry near lambda
};
struct SeededDivisorState {
  int K = 0;
  std::vector<SeededEntry> entries;
};

SpectralDivisor find_divisor(const MonodromyEvaluator& M, int K,
                             DivisorOptions opt = {},
                             SeededDivisorState* state_out = nullptr);
SpectralDivisor find_divisor(const PeriodicPotential& p, int K,
                             DivisorOptions opt = {});

// Re-extracts the divisor for a nearby potential, updating state in place.
SpectralDivisor find_divisor_seeded(const MonodromyEvaluator& M,
                                    SeededDivisorState& state,
                                    double tol = 1e-12);

BranchPointSet find_branch_points(const MonodromyEvaluator& M, int K,
                                  DivisorOptions opt = {});
BranchPointSet find_branch_points(const PeriodicPotential& p, int K,
                                  DivisorOptions opt = {});

// ── involution and divisor classification ──

CurvePoint sigma_involution(const CurvePoint& point);  // (lambda, 1/mu)

bool is_tame(const SpectralDivisor& D, double sep_tol = 1e-9);
bool is_nonspecial(const SpectralDivisor& D, double sep_tol = 1e-9,
                   double mu_tol = 1e-8);

// Windowed min-cost matching upper bound of the divisor metric, weights
// k^{-1} (k>0), |k|^3 (k<0), 1 (k=0) on lambda deviations; symmetrized.
double divisor_distance(const SpectralDivisor& D1, const SpectralDivisor& D2,
                        int window = 2);

// ── symplectic forms ──

// Omega(v1, v2) = int_0^1 (du1 * duy2 - du2 * duy1) dx, bilinear.
cplx symplectic_omega(const PeriodicPotential& p, const PotentialVariation& v1,
                      const PotentialVariation& v2);

struct DivisorVariation {
  int K = 0;
  std::vector<cplx> dlambda, dmu;  // indexed k = -K..K
};

// Omega~ = (i/2) sum_k (dl1_k/l_k * dm2_k/m_k - dl2_k/l_k * dm1_k/m_k).
cplx symplectic_omega_tilde(const SpectralDivisor& D,
                            const DivisorVariation& dD1,
                            const DivisorVariation& dD2);

struct SymplecticReport {
  cplx omega, omega_tilde;
  double rel_err = 0.0;
  int K = 0;
  double h = 0.0;
};

// Central differences of the divisor along v1, v2 with one Richardson step.
SymplecticReport symplectic_identity_check(const PeriodicPotential& p,
                                           const PotentialVariation& v1,
                                           const PotentialVariation& v2,
                                           double h, int K = 24,
                                           DivisorOptions opt = {});

}  // namespace sgspec
