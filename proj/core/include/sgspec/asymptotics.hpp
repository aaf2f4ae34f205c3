#pragma once

#include <functional>
#include <vector>

#include "sgspec/potential.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// ── weighted sequence norms ──

// Sequence indexed k = k_min, k_min+1, ...
struct IndexedSeq {
  int k_min = 0;
  std::vector<cplx> values;
};

// (sum_{k<0} |k^m a_k|^2 + |a_0|^2 + sum_{k>0} |k^n a_k|^2)^{1/2}
double l2nm_norm(const IndexedSeq& seq, int n, int m);

// ── bounding sequences ──

// a_k >= |f(lambda)| e^{-s |Im zeta(lambda)|} over the samples of S_k.
struct BoundingSequence {
  double s = 0.0;
  int K = 0;
  std::vector<double> a;  // indexed k = -K..K
  int samples_per_annulus = 0;
  // refinement report: max over k of the relative growth of a_k when the
  // angular density is doubled (a sup estimate from finite samples is a lower
  // bound; this measures how far from converged it is)
  double refine_drift = 0.0;
  double at(int k) const { return a[static_cast<size_t>(k + K)]; }
};

// Samples three level curves per annulus (boundaries and midline; for S_0 the
// two half-pi curves and the unit circle) at samples_per_annulus angles each.
BoundingSequence bounding_sequence(const std::function<cplx(cplx)>& f, double s,
                                   int K, int samples_per_annulus = 24,
                                   int threads = 0);

// ── monodromy asymptotics report ──

struct ThmMReport {
  int K = 0;
  cplx tau;
  // entry deviations vs the vacuum: a - a0 and d - d0 everywhere;
  // b - tau^{-1} b0 / c - tau c0 on the k > 0 end, b - tau b0 / c - tau^{-1} c0
  // on the k < 0 end, with the split weights of the membership spaces
  BoundingSequence seq_a, seq_b, seq_c, seq_d;
  double norm_a = 0, norm_b = 0, norm_c = 0, norm_d = 0;
};

ThmMReport thm_M_report(const PeriodicPotential& p, int K,
                        int samples_per_annulus = 24, int threads = 0);

// Weighted norms from a sampled report truncated to a smaller radius.
ThmMReport truncate_report(const ThmMReport& r, int K);

// ── spectral-data asymptotics report ──

struct ThmSpectralReport {
  int K = 0;
  double norm_lambda = 0;  // l2_{-1,3} of lambda_k - lambda_{k,0}
  double norm_mu = 0;      // l2_{0,0} of mu_k - mu_{k,0}
  double norm_kappa = 0;   // l2_{-1,3} of kappa_{k,nu} - lambda_{k,0}
  std::vector<double> dev_lambda, dev_mu, dev_kappa;  // indexed k = -K..K
};

ThmSpectralReport thm_spectral_report(const SpectralDivisor& D,
                                      const BranchPointSet& B);

// ── exponential-decay fits ──

struct DecayFit {
  double rate = 0;   // decay exponent per unit |n|
  double logC = 0;   // fitted intercept
  double r2 = 0;
  int n_used = 0;
  bool floor_limited = false;  // fewer than 3 points above the noise floor
};

struct ExpDecayReport {
  DecayFit gap_pos, gap_neg;    // |kappa_{n,1} - kappa_{n,2}|
  DecayFit dist_pos, dist_neg;  // |lambda_n - kappa_{n,*}|
  DecayFit mu_pos, mu_neg;      // |mu_n - (-1)^n|
  double y0_hint = 0;
  // rate / (2 pi y0) for gap and dist, rate / (pi y0) for mu, when hinted
  double gap_ratio = 0, dist_ratio = 0, mu_ratio = 0;
};

ExpDecayReport exp_decay_report(const SpectralDivisor& D,
                                const BranchPointSet& B, double y0_hint = 0.0,
                                int n_min = 4, int n_max = 0);

}  // namespace sgspec
