#pragma once

#include <vector>

#include "sgspec/reconstruct.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// ── interpolated trace ──

struct DeltaNode {
  cplx lambda;
  cplx value;
};

// Delta(lambda) = Delta0(lambda) + sum_k (v_k - Delta0(lambda_k)) L_k(lambda)
// with cardinal functions L_k built from the telescoped node product.
class InterpolatedDelta {
 public:
  // nodes indexed k = -K..K in order
  explicit InterpolatedDelta(std::vector<DeltaNode> nodes);

  cplx operator()(cplx lambda) const;
  int K() const { return K_; }
  cplx node(int k) const { return nodes_[static_cast<size_t>(k + K_)].lambda; }
  cplx value(int k) const { return nodes_[static_cast<size_t>(k + K_)].value; }

 private:
  int K_;
  std::vector<DeltaNode> nodes_;
  NodeProduct prod_;
  std::vector<cplx> weight_;  // (v_k - Delta0(lambda_k)) / c'(lambda_k)
};

InterpolatedDelta interp_delta(const std::vector<DeltaNode>& nodes);

// ── critical points ──

struct CriticalSet {
  int K = 0;
  std::vector<cplx> eta;  // zeros of Delta' near the vacuum nodes, k = -K..K
  bool has_eta_star = false;
  cplx eta_star;  // the extra zero of Delta' in S_0, near lambda = 1
  const cplx& at(int k) const { return eta[static_cast<size_t>(k + K)]; }
};

CriticalSet critical_points(const InterpolatedDelta& delta, int K,
                            bool locate_eta_star = true, int threads = 0);

// ── fixed-point iteration ──

// Tail perturbation z_k of the double-point values, indexed N < |k| <= K.
struct TailPerturbation {
  int N = 0, K = 0;
  std::vector<cplx> z;  // positive block k = N+1..K, then negative k = -(N+1)..-K
  cplx& at(int k);
  const cplx& at(int k) const;
  static TailPerturbation zeros(int N, int K);
};

struct PhiStepResult {
  TailPerturbation z_new;
  double defect = 0;  // max_k |Delta(eta_k) - 2(-1)^k| over the tail range
  CriticalSet crit;
};

// One iteration: interpolate Delta through (lambda_k, mu_k + 1/mu_k) for
// |k| <= N and (lambda_k, 2(-1)^k + z_k) for N < |k| <= K, then correct z by
// the double-point defect at the critical points.
PhiStepResult phi_step(const SpectralDivisor& D, int N,
                       const TailPerturbation& z, int threads = 0);

struct FiniteTypeResult {
  SpectralDivisor Dstar;
  int iterations = 0;
  bool converged = false;
  double defect = 0;
  double contraction = 0;  // geometric-mean defect ratio of the last steps
  double distance = 0;     // divisor_distance(D, Dstar)
  std::vector<double> defect_history;
};

FiniteTypeResult finite_type_project(const SpectralDivisor& D, int N,
                                     double tol = 1e-10, int max_iter = 30,
                                     int threads = 0);

}  // namespace sgspec
