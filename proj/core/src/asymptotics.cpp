#include "sgspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "sgspec/numerics.hpp"
#include "sgspec/parallel.hpp"

namespace sgspec {

// ── weighted sequence norms ──

namespace {

// |k^n| for k > 0, |k^m| for k < 0, 1 at k = 0
double knm_weight(int k, int n, int m) {
  if (k == 0) return 1.0;
  return std::pow(static_cast<double>(std::abs(k)), k > 0 ? n : m);
}

IndexedSeq real_seq(int k_min, const std::vector<double>& v) {
  IndexedSeq s;
  s.k_min = k_min;
  s.values.assign(v.begin(), v.end());
  return s;
}

}  // namespace

double l2nm_norm(const IndexedSeq& seq, int n, int m) {
  double acc = 0.0;
  for (size_t i = 0; i < seq.values.size(); ++i) {
    int k = seq.k_min + static_cast<int>(i);
    acc += std::norm(knm_weight(k, n, m) * seq.values[i]);
  }
  return std::sqrt(acc);
}

// ── annulus sampling ──

namespace {

// The three sampled level curves of S_k: both boundary components and the
// midline (for S_0 the two |zeta| = pi/2 components and the unit circle,
// which carries |zeta| <= 1/2).
std::vector<ContourFn> annulus_curves(int k) {
  if (k == 0) {
    ContourFn unit = [](double t) {
      double phi = 2.0 * pi * t;
      return cplx(std::cos(phi), std::sin(phi));
    };
    return {level_curve(0.5 * pi, true), level_curve(0.5 * pi, false), unit};
  }
  int a = std::abs(k);
  bool outer = k > 0;
  return {level_curve((a - 0.5) * pi, outer), level_curve(a * pi, outer),
          level_curve((a + 0.5) * pi, outer)};
}

// 2N angles per curve; the even-index subgrid is exactly the N-angle grid,
// so one sweep yields both the requested density and its refinement.
std::vector<cplx> annulus_samples2(int k, int N) {
  std::vector<cplx> out;
  auto curves = annulus_curves(k);
  out.reserve(curves.size() * 2 * static_cast<size_t>(N));
  for (const ContourFn& curve : curves)
    for (int j = 0; j < 2 * N; ++j) out.push_back(curve(j / (2.0 * N)));
  return out;
}

// |f| e^{-s |Im zeta|}; zeta is defined up to sign, |Im zeta| is not affected
double decayed_mod(cplx f, cplx lam, double s) {
  return std::abs(f) * std::exp(-s * std::abs(std::imag(zeta(lam))));
}

void check_sampling(int K, int samples_per_annulus, const char* what) {
  if (K < 0) throw InputError(std::string(what) + ": K >= 0 required");
  if (samples_per_annulus < 1)
    throw InputError(std::string(what) + ": samples_per_annulus >= 1 required");
}

}  // namespace

BoundingSequence bounding_sequence(const std::function<cplx(cplx)>& f, double s,
                                   int K, int samples_per_annulus,
                                   int threads) {
  check_sampling(K, samples_per_annulus, "bounding_sequence");
  if (!(s >= 0.0)) throw InputError("bounding_sequence: s >= 0 required");
  BoundingSequence B;
  B.s = s;
  B.K = K;
  B.samples_per_annulus = samples_per_annulus;
  B.a.assign(static_cast<size_t>(2 * K + 1), 0.0);
  std::vector<double> fine(static_cast<size_t>(2 * K + 1), 0.0);
  parallel_for(
      2 * K + 1,
      [&](int i) {
        auto samples = annulus_samples2(i - K, samples_per_annulus);
        double coarse = 0.0, full = 0.0;
        for (size_t j = 0; j < samples.size(); ++j) {
          double v = decayed_mod(f(samples[j]), samples[j], s);
          full = std::max(full, v);
          if (j % 2 == 0) coarse = std::max(coarse, v);
        }
        B.a[static_cast<size_t>(i)] = coarse;
        fine[static_cast<size_t>(i)] = full;
      },
      threads);
  for (size_t i = 0; i < B.a.size(); ++i)
    if (fine[i] > 0.0)
      B.refine_drift = std::max(B.refine_drift, (fine[i] - B.a[i]) / fine[i]);
  return B;
}

// ── monodromy asymptotics report ──

namespace {

void report_norms(ThmMReport& r) {
  auto seq = [](const BoundingSequence& B) { return real_seq(-B.K, B.a); };
  r.norm_a = l2nm_norm(seq(r.seq_a), 0, 0);
  r.norm_b = l2nm_norm(seq(r.seq_b), 1, -1);
  r.norm_c = l2nm_norm(seq(r.seq_c), -1, 1);
  r.norm_d = l2nm_norm(seq(r.seq_d), 0, 0);
}

}  // namespace

ThmMReport thm_M_report(const PeriodicPotential& p, int K,
                        int samples_per_annulus, int threads) {
  check_sampling(K, samples_per_annulus, "thm_M_report");
  MonodromyEvaluator M(p);
  ThmMReport r;
  r.K = K;
  r.tau = tau_of(p);
  // one flattened batch serves all four entry comparisons
  std::vector<cplx> lams;
  std::vector<size_t> off(static_cast<size_t>(2 * K + 2), 0);
  for (int k = -K; k <= K; ++k) {
    auto s = annulus_samples2(k, samples_per_annulus);
    off[static_cast<size_t>(k + K + 1)] =
        off[static_cast<size_t>(k + K)] + s.size();
    lams.insert(lams.end(), s.begin(), s.end());
  }
  std::vector<Matrix2C> mats = M.batch(lams, threads);
  for (BoundingSequence* B : {&r.seq_a, &r.seq_b, &r.seq_c, &r.seq_d}) {
    B->s = 1.0;
    B->K = K;
    B->samples_per_annulus = samples_per_annulus;
    B->a.assign(static_cast<size_t>(2 * K + 1), 0.0);
  }
  for (int k = -K; k <= K; ++k) {
    double c4[4] = {0, 0, 0, 0}, f4[4] = {0, 0, 0, 0};
    for (size_t j = off[static_cast<size_t>(k + K)];
         j < off[static_cast<size_t>(k + K + 1)]; ++j) {
      cplx lam = lams[j];
      Matrix2C M0 = vacuum_monodromy(lam);
      double w = std::exp(-std::abs(std::imag(zeta(lam))));
      // b carries tau^{-1} toward infinity and tau toward zero; c mirrors
      // the powers.  At k = 0 both memberships bound the annulus, so take
      // the larger deviation.
      double vb_inf = std::abs(mats[j].b - M0.b / r.tau) * w;
      double vb_0 = std::abs(mats[j].b - M0.b * r.tau) * w;
      double vc_inf = std::abs(mats[j].c - M0.c * r.tau) * w;
      double vc_0 = std::abs(mats[j].c - M0.c / r.tau) * w;
      double v[4] = {std::abs(mats[j].a - M0.a) * w,
                     k > 0   ? vb_inf
                     : k < 0 ? vb_0
                             : std::max(vb_inf, vb_0),
                     k > 0   ? vc_inf
                     : k < 0 ? vc_0
                             : std::max(vc_inf, vc_0),
                     std::abs(mats[j].d - M0.d) * w};
      bool on_coarse = ((j - off[static_cast<size_t>(k + K)]) % 2 == 0);
      for (int t = 0; t < 4; ++t) {
        f4[t] = std::max(f4[t], v[t]);
        if (on_coarse) c4[t] = std::max(c4[t], v[t]);
      }
    }
    BoundingSequence* seqs[4] = {&r.seq_a, &r.seq_b, &r.seq_c, &r.seq_d};
    for (int t = 0; t < 4; ++t) {
      seqs[t]->a[static_cast<size_t>(k + K)] = c4[t];
      if (f4[t] > 0.0)
        seqs[t]->refine_drift =
            std::max(seqs[t]->refine_drift, (f4[t] - c4[t]) / f4[t]);
    }
  }
  report_norms(r);
  return r;
}

ThmMReport truncate_report(const ThmMReport& r, int K) {
  if (K < 0 || K > r.K)
    throw InputError("truncate_report: K must lie in [0, r.K]");
  ThmMReport t;
  t.K = K;
  t.tau = r.tau;
  auto cut = [&](const BoundingSequence& src) {
    BoundingSequence B;
    B.s = src.s;
    B.K = K;
    B.samples_per_annulus = src.samples_per_annulus;
    B.refine_drift = src.refine_drift;
    B.a.assign(src.a.begin() + (src.K - K), src.a.begin() + (src.K + K + 1));
    return B;
  };
  t.seq_a = cut(r.seq_a);
  t.seq_b = cut(r.seq_b);
  t.seq_c = cut(r.seq_c);
  t.seq_d = cut(r.seq_d);
  report_norms(t);
  return t;
}

// ── spectral-data asymptotics report ──

ThmSpectralReport thm_spectral_report(const SpectralDivisor& D,
                                      const BranchPointSet& B) {
  if (D.K != B.K)
    throw InputError(
        "thm_spectral_report: divisor and branch sets are truncated at "
        "different radii");
  ThmSpectralReport r;
  r.K = D.K;
  size_t n = static_cast<size_t>(2 * D.K + 1);
  r.dev_lambda.resize(n);
  r.dev_mu.resize(n);
  r.dev_kappa.resize(n);
  for (int k = -D.K; k <= D.K; ++k) {
    const DivisorEntry& e = D.at(k);
    const BranchPair& pr = B.at(k);
    size_t i = static_cast<size_t>(k + D.K);
    double l0 = lambda_k0(k);
    r.dev_lambda[i] = std::abs(e.lambda - l0);
    r.dev_mu[i] = std::abs(e.mu - static_cast<double>(mu_k0(k)));
    // both enumerations kappa_{k,1}, kappa_{k,2} must lie in the weighted
    // space; one conservative sequence is their pointwise max
    r.dev_kappa[i] =
        std::max(std::abs(pr.kappa1 - l0), std::abs(pr.kappa2 - l0));
  }
  r.norm_lambda = l2nm_norm(real_seq(-D.K, r.dev_lambda), -1, 3);
  r.norm_mu = l2nm_norm(real_seq(-D.K, r.dev_mu), 0, 0);
  r.norm_kappa = l2nm_norm(real_seq(-D.K, r.dev_kappa), -1, 3);
  return r;
}

// ── exponential-decay fits ──

namespace {

struct FitPoints {
  std::vector<double> x, y;
};

// log-linear decay fit: log q = logC - rate |n|; fewer than three points
// above the measurement floor means the decay is below what the integrator
// can resolve, reported as floor-limited rather than fitted.
DecayFit fit_decay(const FitPoints& d) {
  DecayFit f;
  f.n_used = static_cast<int>(d.x.size());
  if (f.n_used < 3) {
    f.floor_limited = true;
    return f;
  }
  LinFit lf = linear_fit(d.x, d.y);
  f.rate = -lf.slope;
  f.logC = lf.intercept;
  f.r2 = lf.r2;
  return f;
}

}  // namespace

ExpDecayReport exp_decay_report(const SpectralDivisor& D,
                                const BranchPointSet& B, double y0_hint,
                                int n_min, int n_max) {
  int K = std::min(D.K, B.K);
  if (n_max == 0) n_max = K;
  if (n_min < 1) throw InputError("exp_decay_report: n_min >= 1 required");
  if (n_max > K)
    throw InputError("exp_decay_report: n_max exceeds the data radius");
  if (n_min > n_max) throw InputError("exp_decay_report: empty fit window");
  ExpDecayReport r;
  r.y0_hint = y0_hint;
  for (int side = 0; side < 2; ++side) {
    FitPoints gap, dist, mu;
    for (int n = n_min; n <= n_max; ++n) {
      int k = side == 0 ? n : -n;
      const BranchPair& pr = B.at(k);
      const DivisorEntry& e = D.at(k);
      double g = std::abs(pr.kappa1 - pr.kappa2);
      if (!pr.is_double && g > pr.floor) {
        gap.x.push_back(n);
        gap.y.push_back(std::log(g));
      }
      // the pair midpoint locates the extremum of Delta^2 - 4, accurate to a
      // quarter of the pair-resolution floor; the divisor point adds its
      // Newton tolerance
      double ds = std::abs(e.lambda - pr.midpoint());
      double ds_floor = 0.25 * pr.floor + 1e-11 * (1.0 + std::abs(e.lambda));
      if (ds > ds_floor) {
        dist.x.push_back(n);
        dist.y.push_back(std::log(ds));
      }
      double m = std::abs(e.mu - static_cast<double>(mu_k0(k)));
      if (m > entry_noise(e.lambda, std::abs(e.mu))) {
        mu.x.push_back(n);
        mu.y.push_back(std::log(m));
      }
    }
    (side == 0 ? r.gap_pos : r.gap_neg) = fit_decay(gap);
    (side == 0 ? r.dist_pos : r.dist_neg) = fit_decay(dist);
    (side == 0 ? r.mu_pos : r.mu_neg) = fit_decay(mu);
  }
  if (y0_hint > 0.0) {
    auto rate = [](const DecayFit& pos, const DecayFit& neg) {
      if (!pos.floor_limited) return pos.rate;
      if (!neg.floor_limited) return neg.rate;
      return 0.0;
    };
    r.gap_ratio = rate(r.gap_pos, r.gap_neg) / (2.0 * pi * y0_hint);
    r.dist_ratio = rate(r.dist_pos, r.dist_neg) / (2.0 * pi * y0_hint);
    r.mu_ratio = rate(r.mu_pos, r.mu_neg) / (pi * y0_hint);
  }
  return r;
}

}  // namespace sgspec
