#include "sgspec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgspec/monodromy.hpp"

namespace sgspec {

namespace {

// c0(lambda)/(lambda - lambda_{m,0}) with the sin zeta zero at the vacuum
// node divided out:  sqrt(lambda) (-1)^m sinc(zeta - |m|pi) zeta_dd(lambda,
// lambda_{m,0}).  Exact identity for every lambda, cancellation-free near
// the node because zeta_dd carries the divided difference.
cplx paired_vacuum_factor(cplx lambda, int m) {
  cplx sa = std::sqrt(lambda);
  cplx w = 0.25 * (sa + 1.0 / sa) - std::abs(m) * pi;
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sa * sign * sinc_c(w) * zeta_dd(lambda, cplx(lambda_k0(m)));
}

int clamp_annulus(cplx lambda, int K) {
  return std::clamp(annulus_index(lambda), -K, K);
}

}  // namespace

// ── stable node products ──

NodeProduct::NodeProduct(std::vector<cplx> lambdas, int K, cplx tau_factor)
    : K_(K), tau_(tau_factor), lam_(std::move(lambdas)) {
  if (K_ < 0 || lam_.size() != static_cast<size_t>(2 * K_ + 1))
    throw InputError("NodeProduct: need 2K+1 nodes, k = -K..K");
  deriv_.resize(lam_.size());
  for (int k = -K_; k <= K_; ++k) {
    cplx lk = node(k);
    cplx v = tau_ * paired_vacuum_factor(lk, k);
    for (int j = -K_; j <= K_; ++j) {
      if (j == k) continue;
      v *= (lk - node(j)) / (lk - lambda_k0(j));
    }
    deriv_[static_cast<size_t>(k + K_)] = v;
  }
}

cplx NodeProduct::operator()(cplx lambda) const {
  int m = clamp_annulus(lambda, K_);
  cplx v = tau_ * paired_vacuum_factor(lambda, m) * (lambda - node(m));
  for (int j = -K_; j <= K_; ++j) {
    if (j == m) continue;
    v *= (lambda - node(j)) / (lambda - lambda_k0(j));
  }
  return v;
}

cplx NodeProduct::deriv_at_node(int k) const {
  return deriv_[static_cast<size_t>(k + K_)];
}

cplx NodeProduct::over_node_factor(cplx lambda, int k) const {
  cplx v = tau_ * paired_vacuum_factor(lambda, k);
  for (int j = -K_; j <= K_; ++j) {
    if (j == k) continue;
    v *= (lambda - node(j)) / (lambda - lambda_k0(j));
  }
  return v;
}

cplx NodeProduct::ratio_product(cplx lambda) const {
  cplx v = 1.0;
  for (int j = -K_; j <= K_; ++j)
    v *= (lambda - node(j)) / (lambda - lambda_k0(j));
  return v;
}

double NodeProduct::node_scale(int k) const {
  double s = std::numeric_limits<double>::infinity();
  for (int j = -K_; j <= K_; ++j) {
    if (j == k) continue;
    s = std::min(s, std::abs(node(k) - node(j)));
  }
  return s;
}

// ── reconstructed monodromy ──

namespace {

std::vector<cplx> node_values(const SpectralDivisor& D) {
  if (D.K < 0 || D.entries.size() != static_cast<size_t>(2 * D.K + 1))
    throw InputError("divisor must hold 2K+1 entries, k = -K..K");
  std::vector<cplx> lam(D.entries.size());
  for (int k = -D.K; k <= D.K; ++k) {
    const DivisorEntry& e = D.at(k);
    if (e.mult != 1)
      throw InputError(
          "multiplicity is encoded by repeated enumeration slots");
    if (!(std::abs(e.mu) > 0.0))
      throw InputError("divisor mu values must be nonzero");
    lam[static_cast<size_t>(k + D.K)] = e.lambda;
  }
  return lam;
}

std::vector<cplx> checked_nodes(const SpectralDivisor& D) {
  std::vector<cplx> lam = node_values(D);
  for (size_t i = 0; i < lam.size(); ++i)
    for (size_t j = i + 1; j < lam.size(); ++j)
      if (std::abs(lam[i] - lam[j]) <=
          1e-10 * (1.0 + std::max(std::abs(lam[i]), std::abs(lam[j]))))
        throw InputError(
            "coincident divisor nodes; expand with hermite_block");
  return lam;
}

// sqrt(prod lambda_{k,0}/lambda_k) with the branch carried by continuity
// along the straight homotopy from the vacuum nodes.  `clean` reports that
// every step kept the two square roots well separated and no node path
// crossed zero.
cplx tau_walk(const std::vector<cplx>& lam, int K, int steps, bool& clean);

// refinement loop: double the step count until the branch walk is clean
cplx divisor_tau(const std::vector<cplx>& lam, int K, bool& ambiguous) {
  bool clean = false;
  cplx tau = 1.0;
  for (int steps = 8; steps <= 256 && !clean; steps *= 2)
    tau = tau_walk(lam, K, steps, clean);
  ambiguous = !clean;
  return tau;
}

cplx tau_walk(const std::vector<cplx>& lam, int K, int steps, bool& clean) {
  clean = true;
  cplx w = 1.0;
  for (int s = 1; s <= steps; ++s) {
    double t = static_cast<double>(s) / steps;
    cplx P = 1.0;
    for (int k = -K; k <= K; ++k) {
      cplx l0 = lambda_k0(k);
      cplx lt = (1.0 - t) * l0 + t * lam[static_cast<size_t>(k + K)];
      double guard = 1e-12 * (1.0 + std::abs(l0));
      if (std::abs(lt) < guard) {
        clean = false;
        lt = guard;
      }
      P *= l0 / lt;
    }
    cplx r = std::sqrt(P);
    double dp = std::abs(w - r), dm = std::abs(w + r);
    if (std::min(dp, dm) > 0.8 * std::max(dp, dm)) clean = false;
    w = (dp <= dm) ? r : -r;
  }
  return w;
}

}  // namespace

ReconstructedMonodromy::ReconstructedMonodromy(const SpectralDivisor& D)
    : D_(D), cfun_(checked_nodes(D), D.K, cplx(1.0)) {
  const int K = D_.K;
  std::vector<cplx> lam(static_cast<size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) lam[static_cast<size_t>(k + K)] = cfun_.node(k);

  tau_ = divisor_tau(lam, K, tau_ambiguous_);
  cfun_ = NodeProduct(lam, K, tau_);
  mu_.resize(lam.size());
  mu_inv_.resize(lam.size());
  a0node_.resize(lam.size());
  cderiv_.resize(lam.size());
  for (int k = -K; k <= K; ++k) {
    size_t i = static_cast<size_t>(k + K);
    mu_[i] = D_.at(k).mu;
    mu_inv_[i] = 1.0 / mu_[i];
    a0node_[i] = std::cos(zeta(lam[i]));
    cderiv_[i] = cfun_.deriv_at_node(k);
  }
}

cplx ReconstructedMonodromy::c(cplx lambda) const { return cfun_(lambda); }

int ReconstructedMonodromy::nearest_node(cplx lambda) const {
  // annulus index is only a seed: a strongly shifted node can sit close to
  // its annulus boundary, so compare against both neighbours
  int m = clamp_annulus(lambda, D_.K);
  int best = m;
  double dist = std::abs(lambda - cfun_.node(m));
  for (int j : {m - 1, m + 1}) {
    if (j < -D_.K || j > D_.K) continue;
    double dj = std::abs(lambda - cfun_.node(j));
    if (dj < dist) {
      dist = dj;
      best = j;
    }
  }
  return best;
}

cplx ReconstructedMonodromy::interp_sum(cplx lambda, bool invert_mu) const {
  const int K = D_.K;
  const std::vector<cplx>& v = invert_mu ? mu_inv_ : mu_;
  int m = nearest_node(lambda);
  bool local =
      std::abs(lambda - cfun_.node(m)) < 0.25 * cfun_.node_scale(m);
  cplx cl = cfun_(lambda);
  cplx s = 0.0;
  for (int k = -K; k <= K; ++k) {
    size_t i = static_cast<size_t>(k + K);
    cplx w = (v[i] - a0node_[i]) / cderiv_[i];
    if (local && k == m)
      s += w * cfun_.over_node_factor(lambda, m);
    else
      s += w * cl / (lambda - cfun_.node(k));
  }
  return s;
}

cplx ReconstructedMonodromy::a(cplx lambda) const {
  return std::cos(zeta(lambda)) + interp_sum(lambda, false);
}

cplx ReconstructedMonodromy::d(cplx lambda) const {
  return std::cos(zeta(lambda)) + interp_sum(lambda, true);
}

cplx ReconstructedMonodromy::delta(cplx lambda) const {
  return a(lambda) + d(lambda);
}

cplx ReconstructedMonodromy::b(cplx lambda) const {
  const int K = D_.K;
  int idx = annulus_index(lambda);
  cplx center;
  double scale;
  if (std::abs(idx) <= K) {
    int m = nearest_node(lambda);
    center = cfun_.node(m);
    scale = cfun_.node_scale(m);
  } else {
    // beyond the band the zeros of c sit at the vacuum double points
    center = lambda_k0(idx);
    scale = std::min(std::abs(lambda_k0(idx) - lambda_k0(idx - 1)),
                     std::abs(lambda_k0(idx + 1) - lambda_k0(idx)));
  }
  // the quotient only degrades once lambda - center is small enough that
  // rounding in ad - 1 competes with its linear vanishing; the safe distance
  // scales with the node itself
  double r = 0.25 * scale;
  double threshold = std::min(1e-7 * std::abs(center), 0.5 * r);
  if (std::abs(lambda - center) > threshold)
    return (a(lambda) * d(lambda) - 1.0) / cfun_(lambda);

  // mean value over a circle clearing the removable singularity; ad - 1
  // vanishes at the enclosed zero of c because interpolation is exact
  const int n = 16;
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * pi * i / n;
    cplx z = lambda + r * cplx(std::cos(th), std::sin(th));
    s += (a(z) * d(z) - 1.0) / cfun_(z);
  }
  return s / static_cast<double>(n);
}

Matrix2C ReconstructedMonodromy::monodromy(cplx lambda) const {
  return {a(lambda), b(lambda), c(lambda), d(lambda)};
}

// ── single-shot interfaces ──

// tau and c are plain functions of the node multiset, so these two accept
// repeated nodes as well
cplx tau_from_divisor(const SpectralDivisor& D) {
  std::vector<cplx> lam = node_values(D);
  bool ambiguous = false;
  return divisor_tau(lam, D.K, ambiguous);
}
cplx c_from_divisor(const SpectralDivisor& D, cplx lambda) {
  std::vector<cplx> lam = node_values(D);
  bool ambiguous = false;
  cplx tau = divisor_tau(lam, D.K, ambiguous);
  return NodeProduct(lam, D.K, tau)(lambda);
}
cplx a_from_divisor(const SpectralDivisor& D, cplx lambda) {
  return ReconstructedMonodromy(D).a(lambda);
}
cplx d_from_divisor(const SpectralDivisor& D, cplx lambda) {
  return ReconstructedMonodromy(D).d(lambda);
}
cplx b_from_divisor(const SpectralDivisor& D, cplx lambda) {
  return ReconstructedMonodromy(D).b(lambda);
}

// ── multiple nodes ──

std::vector<cplx> hermite_block(const SpectralDivisor& D, int k,
                                const std::function<cplx(cplx)>& curve_mu) {
  std::vector<cplx> lam = node_values(D);
  if (k < -D.K || k > D.K) throw InputError("node index out of range");
  cplx lk = D.at(k).lambda;
  double ctol = 1e-10 * (1.0 + std::abs(lk));

  // block order = number of slots sharing this node value
  int d = 0;
  double clearance = std::numeric_limits<double>::infinity();
  for (int j = -D.K; j <= D.K; ++j) {
    double dist = std::abs(D.at(j).lambda - lk);
    if (dist <= ctol)
      ++d;
    else
      clearance = std::min(clearance, dist);
  }
  if (!std::isfinite(clearance))
    clearance = 0.5 * std::abs(lambda_k0(k + 1) - lambda_k0(k));

  bool ambiguous = false;
  cplx tau = divisor_tau(lam, D.K, ambiguous);
  NodeProduct cfun(lam, D.K, tau);

  // Taylor coefficients of c and curve_mu at the node, by trapezoid on a
  // circle of a quarter of the clearance to the nearest distinct node
  double r = 0.25 * clearance;
  const int n = 64;
  std::vector<cplx> cs(static_cast<size_t>(n)), ms(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * pi * i / n;
    cplx z = lk + r * cplx(std::cos(th), std::sin(th));
    cs[static_cast<size_t>(i)] = cfun(z);
    ms[static_cast<size_t>(i)] = curve_mu(z);
  }
  auto coeff = [&](const std::vector<cplx>& f, int m) {
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * pi * i / n;
      s += f[static_cast<size_t>(i)] * std::polar(1.0, -m * th);
    }
    return s / (static_cast<double>(n) * std::pow(r, m));
  };

  std::vector<cplx> cc(static_cast<size_t>(2 * d));  // c_m, m = 0..2d-1
  for (int m = 0; m < 2 * d; ++m) cc[static_cast<size_t>(m)] = coeff(cs, m);
  std::vector<cplx> mm(static_cast<size_t>(d));  // mu^{(l)}/l!, l = 0..d-1
  for (int l = 0; l < d; ++l) mm[static_cast<size_t>(l)] = coeff(ms, l);

  // conditioning of the triangular system is set by the leading Taylor
  // coefficient relative to the size of c on the circle
  double cmax = 0.0;
  for (const cplx& v : cs) cmax = std::max(cmax, std::abs(v));
  cplx cd = cc[static_cast<size_t>(d)];
  double cond = std::abs(cd) * std::pow(r, d) / std::max(cmax, 1e-300);
  if (cond < 1e-10)
    throw NumericalError(
        "hermite_block: ill-conditioned node (branch-point collision?); "
        "leading-coefficient ratio " +
        std::to_string(cond));

  // row l of sum_j c_{l+j} t_j = mm_l is triangular in t_d, t_{d-1}, ...
  std::vector<cplx> t(static_cast<size_t>(d));
  for (int l = 0; l < d; ++l) {
    cplx rhs = mm[static_cast<size_t>(l)];
    for (int j = d - l + 1; j <= d; ++j)
      rhs -= cc[static_cast<size_t>(l + j)] * t[static_cast<size_t>(j - 1)];
    t[static_cast<size_t>(d - l - 1)] = rhs / cd;
  }
  return t;
}

// ── round trip ──

RoundtripReport roundtrip_report(const PeriodicPotential& p, int K,
                                 const std::vector<cplx>& test_grid,
                                 DivisorOptions opt) {
  MonodromyEvaluator eval(p);
  SpectralDivisor D = find_divisor(eval, K, opt);
  ReconstructedMonodromy R(D);

  RoundtripReport rep;
  rep.K = K;
  rep.tau = R.tau();
  rep.tau_err = std::abs(R.tau() - tau_of(p));

  auto rel = [](cplx got, cplx want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
  };
  for (cplx l : test_grid) {
    Matrix2C md = eval(l);
    Matrix2C mr = R.monodromy(l);
    rep.max_rel_a = std::max(rep.max_rel_a, rel(mr.a, md.a));
    rep.max_rel_b = std::max(rep.max_rel_b, rel(mr.b, md.b));
    rep.max_rel_c = std::max(rep.max_rel_c, rel(mr.c, md.c));
    rep.max_rel_d = std::max(rep.max_rel_d, rel(mr.d, md.d));
    rep.trace_err = std::max(rep.trace_err, rel(mr.trace(), md.trace()));
  }
  rep.max_rel = std::max({rep.max_rel_a, rep.max_rel_b, rep.max_rel_c,
                          rep.max_rel_d});
  return rep;
}

}  // namespace sgspec
