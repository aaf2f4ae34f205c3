#pragma once

#include <functional>
#include <vector>

#include "sgspec/potential.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// ── stable node products ──

// Evaluator for f(lambda) = tau_factor * c0(lambda) * prod_{|k|<=K}
// (lambda - lambda_k)/(lambda - lambda_{k,0}), with c0 = sqrt(lambda) sin zeta.
// The removable singularities at the vacuum nodes are handled by pairing the
// nearest vacuum factor with sin zeta; zeros sit exactly at the lambda_k.
class NodeProduct {
 public:
  NodeProduct(std::vector<cplx> lambdas, int K, cplx tau_factor);

  cplx operator()(cplx lambda) const;
  // d/dlambda at node k, via the product with the k-th linear factor removed
  cplx deriv_at_node(int k) const;
  // f(lambda) / (lambda - lambda_k), stable at lambda = lambda_k
  cplx over_node_factor(cplx lambda, int k) const;
  // bare product prod (lambda - lambda_k)/(lambda - lambda_{k,0})
  cplx ratio_product(cplx lambda) const;

  int K() const { return K_; }
  cplx node(int k) const { return lam_[static_cast<size_t>(k + K_)]; }
  cplx tau_factor() const { return tau_; }
  double node_scale(int k) const;  // distance to nearest other node

 private:
  int K_;
  cplx tau_;
  std::vector<cplx> lam_;     // divisor nodes, k = -K..K
  std::vector<cplx> deriv_;   // cached derivative at each node
};

// ── reconstructed monodromy ──

// Monodromy rebuilt from a truncated divisor.  c is the telescoped node
// product; a and d interpolate the deviation from the vacuum over the nodes
// of c, a = cos zeta + sum_{|k|<=K} (mu_k - cos zeta(lambda_k)) l_k with
// cardinal functions l_k = c/(c'(lambda_k)(lambda - lambda_k)), and d the
// same with mu_k^{-1}.  Because cos zeta(lambda_{j,0}) = (-1)^j exactly, the
// deviation vanishes at every node beyond K and the finite sum carries no
// truncation error: a(lambda_k) = mu_k holds to rounding.  b = (ad - 1)/c,
// with the removable singularities at the nodes crossed by mean-value
// circles.  All evaluators are pure and reentrant.
class ReconstructedMonodromy {
 public:
  // Requires a tame divisor: simple pairwise distinct nodes, mu_k != 0.
  // Multiple nodes are rejected (InputError); see hermite_block.
  explicit ReconstructedMonodromy(const SpectralDivisor& D);

  cplx tau() const { return tau_; }
  bool tau_branch_ambiguous() const { return tau_ambiguous_; }

  cplx c(cplx lambda) const;
  cplx a(cplx lambda) const;
  cplx d(cplx lambda) const;
  cplx b(cplx lambda) const;
  cplx delta(cplx lambda) const;  // a + d
  Matrix2C monodromy(cplx lambda) const;

  const SpectralDivisor& divisor() const { return D_; }
  int K() const { return D_.K; }

 private:
  int nearest_node(cplx lambda) const;
  cplx interp_sum(cplx lambda, bool invert_mu) const;

  SpectralDivisor D_;
  cplx tau_;
  bool tau_ambiguous_ = false;
  NodeProduct cfun_;
  std::vector<cplx> mu_, mu_inv_;   // node values, k = -K..K
  std::vector<cplx> a0node_;        // cos zeta at the nodes
  std::vector<cplx> cderiv_;        // c'(lambda_k)
};

// ── single-shot interfaces ──

cplx tau_from_divisor(const SpectralDivisor& D);
cplx c_from_divisor(const SpectralDivisor& D, cplx lambda);
cplx a_from_divisor(const SpectralDivisor& D, cplx lambda);
cplx d_from_divisor(const SpectralDivisor& D, cplx lambda);
cplx b_from_divisor(const SpectralDivisor& D, cplx lambda);

// ── multiple nodes ──

// Coefficients t_1..t_d of the block A(lambda) = sum_j t_j c(lambda)/
// (lambda - lambda_k)^j matching curve_mu to order d at the node; curve_mu
// must be holomorphic on the derivative circle with curve_mu(lambda_k) = mu_k.
std::vector<cplx> hermite_block(const SpectralDivisor& D, int k,
                                const std::function<cplx(cplx)>& curve_mu);

// ── round trip ──

struct RoundtripReport {
  int K = 0;
  double max_rel_a = 0, max_rel_b = 0, max_rel_c = 0, max_rel_d = 0;
  double max_rel = 0;        // worst of the four
  double tau_err = 0;        // |tau - e^{-u(0)/2}|
  double trace_err = 0;      // max rel deviation of (a+d) vs the direct trace
  cplx tau;
};

RoundtripReport roundtrip_report(const PeriodicPotential& p, int K,
                                 const std::vector<cplx>& test_grid,
                                 DivisorOptions opt = {});

}  // namespace sgspec
