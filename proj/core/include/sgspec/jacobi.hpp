#pragma once

#include <vector>

#include "sgspec/potential.hpp"
#include "sgspec/spectral.hpp"
#include "sgspec/types.hpp"

namespace sgspec {

// ── finite-genus curve model ──

struct GapSpec {
  int n = 0;        // annulus index of the open gap
  cplx e1, e2;      // branch-point pair, Re(e1) <= Re(e2)
  cplx m() const { return 0.5 * (e1 + e2); }
  cplx d() const { return 0.5 * (e2 - e1); }
};

// y^2 = lambda * prod_j (lambda - e_j), cut along each gap segment and along
// the negative real axis for the (0, infinity) pair; base sheet fixed by
// y(lambda_ref) > 0 right of all gaps.
class FiniteGenusCurve {
 public:
  FiniteGenusCurve(std::vector<GapSpec> gaps, double lambda_ref);

  int genus() const { return static_cast<int>(gaps_.size()); }
  const GapSpec& gap(int j) const { return gaps_[static_cast<size_t>(j)]; }
  double lambda_ref() const { return lambda_ref_; }
  double sign() const { return s_glob_; }

  cplx y(cplx lambda) const;          // base-sheet value
  cplx gap_root(cplx lambda, int j) const;  // the factor cut along gap j
  // product of sqrt(lambda) and all gap factors except j
  cplx rest(cplx lambda, int j) const;

 private:
  std::vector<GapSpec> gaps_;
  double lambda_ref_;
  double s_glob_ = 1.0;
};

// Builds the model from extracted branch pairs; gaps must be open (pair
// separation above the double-point floor) and must not meet the negative
// real axis or the origin.
FiniteGenusCurve make_curve(const BranchPointSet& B,
                            const std::vector<int>& open_gap_indices);

// ── cycles, periods, dual forms ──

struct IntersectionCertificate {
  std::vector<std::vector<int>> AA, AB, BB;
  bool canonical = false;  // AB == identity, AA == BB == 0
};

IntersectionCertificate cycle_certificate(const FiniteGenusCurve& c);

// A-periods of the candidate forms lambda^i dlambda / y; [k][i]
std::vector<std::vector<cplx>> a_periods(const FiniteGenusCurve& c,
                                         int nodes = 64);

struct JacobiBasis {
  int genus = 0;
  // omega_n = sum_i coeff[n][i] lambda^i dlambda / y, int_{A_k} omega_n = d_kn
  std::vector<std::vector<cplx>> coeff;
  std::vector<std::vector<cplx>> a_matrix;  // raw candidate A-periods
  std::vector<std::vector<cplx>> b_matrix;  // b_matrix[n][j] = int_{B_j} omega_n
  double cond = 0;  // condition estimate of the A-period system
};

JacobiBasis dual_forms(const FiniteGenusCurve& c, int nodes = 64);

// ── lattice and Abel map ──

struct LatticeCert {
  bool ok = false;
  double resid = 0;
  std::vector<int> a_coeff, b_coeff;
};

// Searches v ~ a + B b over integer b in [-range, range]^g.
LatticeCert lattice_reduce(const JacobiBasis& basis, const std::vector<cplx>& v,
                           double tol = 1e-6, int range = 3);

// Abel sum from the origin divisor's gap entries to D's, along straight
// segments in the gap angle coordinates; entries are matched to sheets by
// ratio continuity against the origin entries.
std::vector<cplx> abel_map(const FiniteGenusCurve& c, const JacobiBasis& basis,
                           const SpectralDivisor& D,
                           const SpectralDivisor& D_origin);

// Abel increment of carrying gap j's entry once around its gap (full angle
// winding); equals the j-th A-period vector, used as a lattice oracle.
std::vector<cplx> abel_gap_loop(const FiniteGenusCurve& c,
                                const JacobiBasis& basis, int j,
                                cplx lambda_start);

// ── translation-flow checks ──

struct FlowFit {
  int n = 0;          // gap annulus index
  cplx slope;
  double resid = 0;   // max fit residual relative to the coordinate range
  double range = 0;
};

struct FlowReport {
  int genus = 0;
  std::vector<int> gap_indices;
  std::vector<double> t_samples;
  std::vector<std::vector<cplx>> phi;  // [sample][gap], unreduced lift
  std::vector<FlowFit> fits;
  bool lattice_checked = false;
  LatticeCert lattice;  // for the x-flow: phi(1) - phi(0) in the lattice
  double basis_cond = 0;
};

struct FlowOptions {
  int K = 16;
  double y_max = 0.05;
  int quad_nodes = 24;    // Gauss-Legendre nodes per tracked increment
  int period_nodes = 128;
  DivisorOptions divisor;
  int threads = 0;
};

// Tracks the divisor of translate_x(p, t) over x_samples equispaced t in
// [0, 1] and fits phi_n(t) per open gap; checks phi(1) - phi(0) against the
// period lattice.
FlowReport flow_x_check(const PeriodicPotential& p, int N_gaps, int x_samples,
                        int K, FlowOptions opt = {});

// Same pipeline along evolve_y heights in [0, y_max]; no lattice test.
FlowReport flow_y_check(const PeriodicPotential& p, int N_gaps, int y_samples,
                        int K, FlowOptions opt = {});

}  // namespace sgspec
