#include "sgspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "sgspec/numerics.hpp"
#include "sgspec/parallel.hpp"

namespace sgspec {

// ── indexed containers ──

namespace {

template <typename Vec>
auto& indexed_at(Vec& v, int K, int k, const char* what) {
  if (k < -K || k > K) {
    std::ostringstream os;
    os << what << ": index " << k << " outside [-" << K << ", " << K << "]";
    throw InputError(os.str());
  }
  auto& e = v[static_cast<size_t>(k + K)];
  if (e.k != k) throw InputError(std::string(what) + ": entries not in index order");
  return e;
}

}  // namespace

const DivisorEntry& SpectralDivisor::at(int k) const {
  return indexed_at(entries, K, k, "SpectralDivisor::at");
}
DivisorEntry& SpectralDivisor::at(int k) {
  return indexed_at(entries, K, k, "SpectralDivisor::at");
}
const BranchPair& BranchPointSet::at(int k) const {
  return indexed_at(pairs, K, k, "BranchPointSet::at");
}
BranchPair& BranchPointSet::at(int k) {
  return indexed_at(pairs, K, k, "BranchPointSet::at");
}

SpectralDivisor vacuum_divisor(int K) {
  if (K < 0) throw InputError("vacuum_divisor: K >= 0 required");
  SpectralDivisor D;
  D.K = K;
  D.entries.reserve(static_cast<size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k)
    D.entries.push_back({k, lambda_k0(k), static_cast<double>(mu_k0(k)), 1});
  return D;
}

// ── annuli ──

int annulus_index(cplx lambda) {
  if (lambda == cplx(0.0)) throw InputError("annulus_index: lambda = 0");
  double az = std::abs(zeta(lambda));
  // ties at |zeta| = (k+1/2) pi resolve toward the smaller |k|
  int kmag = static_cast<int>(std::ceil(az / pi - 0.5));
  if (kmag <= 0) return 0;
  return std::abs(lambda) > 1.0 ? kmag : -kmag;
}

ContourFn level_curve(double c, bool outer) {
  if (!(c > 0.5))
    throw InputError("level_curve: |zeta| = c is a closed loop only for c > 1/2");
  return [c, outer](double t) -> cplx {
    double phi = 2.0 * pi * t;
    // |zeta|^2 = (x + 1/x + 2 cos phi)/16 on lambda = x e^{i phi}
    double s = 16.0 * c * c - 2.0 * std::cos(phi);
    double root = std::sqrt(std::max(0.0, s * s - 4.0));
    double x = outer ? 0.5 * (s + root) : 2.0 / (s + root);
    return x * cplx(std::cos(phi), std::sin(phi));
  };
}

int count_zeros(const std::function<cplx(cplx)>& f, const ContourFn& contour,
                int min_samples, int threads) {
  int m = std::max(16, min_samples);
  std::vector<cplx> vals(static_cast<size_t>(m));
  parallel_for(
      m,
      [&](int i) {
        vals[static_cast<size_t>(i)] = f(contour(static_cast<double>(i) / m));
      },
      threads);
  std::optional<int> prev;
  const int m_cap = 1 << 22;
  while (true) {
    std::optional<int> w;
    try {
      w = winding_number(vals);
    } catch (const NumericalError&) {
      // too coarse or grazing a zero; refining decides which
    }
    if (w && prev && *w == *prev) return *w;
    prev = w;
    if (2 * m > m_cap)
      throw NumericalError(
          "count_zeros: winding did not stabilize under sample doubling "
          "(zero on or near the contour?)");
    // double the sampling, reusing every value already computed
    std::vector<cplx> next(static_cast<size_t>(2 * m));
    for (int i = 0; i < m; ++i) next[static_cast<size_t>(2 * i)] = vals[static_cast<size_t>(i)];
    parallel_for(
        m,
        [&](int i) {
          next[static_cast<size_t>(2 * i + 1)] =
              f(contour((2.0 * i + 1.0) / (2.0 * m)));
        },
        threads);
    vals = std::move(next);
    m *= 2;
  }
}

std::vector<int> annulus_zero_counts(const std::function<cplx(cplx)>& f, int K,
                                     int min_samples, int threads) {
  if (K < 0) throw InputError("annulus_zero_counts: K >= 0 required");
  // windings on the level curves |zeta| = (j+1/2) pi, shared between the
  // adjacent annuli; both families encircle the origin, so the essential
  // singularities at 0 and infinity drop out of every difference below
  std::vector<int> w_out(static_cast<size_t>(K + 1)), w_in(static_cast<size_t>(K + 1));
  for (int j = 0; j <= K; ++j) {
    double c = (j + 0.5) * pi;
    int m = std::max({64, 16 * (j + 1), min_samples});
    w_out[static_cast<size_t>(j)] = count_zeros(f, level_curve(c, true), m, threads);
    w_in[static_cast<size_t>(j)] = count_zeros(f, level_curve(c, false), m, threads);
  }
  std::vector<int> out(static_cast<size_t>(2 * K + 1));
  out[static_cast<size_t>(K)] = w_out[0] - w_in[0];
  for (int k = 1; k <= K; ++k) {
    out[static_cast<size_t>(K + k)] =
        w_out[static_cast<size_t>(k)] - w_out[static_cast<size_t>(k - 1)];
    out[static_cast<size_t>(K - k)] =
        w_in[static_cast<size_t>(k - 1)] - w_in[static_cast<size_t>(k)];
  }
  return out;
}

// ── Newton machinery ──

namespace {

// 0.2 x distance to the nearest neighboring vacuum double point: small enough
// that the local Taylor data stays clean, large enough to cover the
// perturbations of interest
double seed_radius(int k) {
  double lk = lambda_k0(k);
  double below = std::abs(lk - lambda_k0(k - 1));
  double above = std::abs(lambda_k0(k + 1) - lk);
  return 0.2 * std::min(below, above);
}

struct NodeSolve {
  cplx lambda, mu, dc;
};

[[noreturn]] void newton_fail(const char* what, int k) {
  std::ostringstream os;
  os << what << ": Newton did not converge in annulus S_" << k;
  throw NumericalError(os.str());
}

// Newton for the zero of the lower-left entry near lambda_{k,0}.  The slope
// comes from an 8-point Cauchy circle and is reused while the iterate stays
// within half the circle radius of its center.
NodeSolve solve_node(const MonodromyEvaluator& M, int k, cplx seed,
                     double radius, const DivisorOptions& opt) {
  auto cfun = [&](cplx lam) { return M(lam).c; };
  cplx center = seed;
  auto circle = cauchy_taylor(cfun, center, radius, 2, 8);
  cplx slope = circle[1];
  if (!(std::abs(slope) > 0.0)) newton_fail("find_divisor", k);
  cplx lam = seed;
  for (int it = 0; it < opt.newton_max; ++it) {
    if (std::abs(lam - center) > 0.5 * radius) {
      center = lam;
      circle = cauchy_taylor(cfun, center, radius, 2, 8);
      slope = circle[1];
      if (!(std::abs(slope) > 0.0)) newton_fail("find_divisor", k);
    }
    Matrix2C Mv = M(lam);
    cplx step = -Mv.c / slope;
    lam += step;
    if (std::abs(step) <= opt.newton_tol * (1.0 + std::abs(lam))) {
      Matrix2C Mf = M(lam);
      return NodeSolve{lam, Mf.a, slope};
    }
  }
  newton_fail("find_divisor", k);
}

// Count-bisection fallback: narrow the zero of f to a thin radial sub-annulus
// of S_k, seed Newton from the minimum-modulus sample on its midline.
cplx bisection_seed(const std::function<cplx(cplx)>& f, int k,
                    const DivisorOptions& opt) {
  int m = opt.count_samples > 0 ? opt.count_samples
                                : std::max(64, 16 * std::abs(k));
  auto argmin_on = [&](const ContourFn& curve, int samples) {
    cplx best = curve(0.0);
    double bv = std::abs(f(best));
    for (int i = 1; i < samples; ++i) {
      cplx lam = curve(static_cast<double>(i) / samples);
      double v = std::abs(f(lam));
      if (v < bv) {
        bv = v;
        best = lam;
      }
    }
    return best;
  };
  if (k == 0) {
    // S_0 has no interior family of closed |zeta| level curves reaching
    // |zeta| < 1/2; scan circles |lambda| = r instead
    cplx best;
    double bv = -1.0;
    for (double r : {0.3, 0.5, 0.8, 1.0, 1.25, 2.0, 3.3}) {
      for (int i = 0; i < 128; ++i) {
        double phi = 2.0 * pi * i / 128;
        cplx lam = r * cplx(std::cos(phi), std::sin(phi));
        if (annulus_index(lam) != 0) continue;
        double v = std::abs(f(lam));
        if (bv < 0.0 || v < bv) {
          bv = v;
          best = lam;
        }
      }
    }
    return best;
  }
  bool outer = k > 0;
  double lo = (std::abs(k) - 0.5) * pi, hi = (std::abs(k) + 0.5) * pi;
  int w_lo = count_zeros(f, level_curve(lo, outer), m, opt.threads);
  for (int round = 0; round < 5; ++round) {
    double mid = 0.5 * (lo + hi);
    int w_mid = count_zeros(f, level_curve(mid, outer), m, opt.threads);
    int inside_lower = outer ? w_mid - w_lo : w_lo - w_mid;
    if (inside_lower >= 1) {
      hi = mid;
    } else {
      lo = mid;
      w_lo = w_mid;
    }
  }
  return argmin_on(level_curve(0.5 * (lo + hi), outer), 4 * m);
}

}  // namespace

SpectralDivisor find_divisor(const MonodromyEvaluator& M, int K,
                             DivisorOptions opt, SeededDivisorState* state_out) {
  if (K < 0) throw InputError("find_divisor: K >= 0 required");
  SpectralDivisor D;
  D.K = K;
  D.entries.assign(static_cast<size_t>(2 * K + 1), DivisorEntry{});
  std::vector<NodeSolve> solves(static_cast<size_t>(2 * K + 1));
  auto cfun = [&](cplx lam) { return M(lam).c; };
  parallel_for(
      2 * K + 1,
      [&](int idx) {
        int k = idx - K;
        double r = seed_radius(k);
        NodeSolve s;
        try {
          s = solve_node(M, k, lambda_k0(k), r, opt);
          if (annulus_index(s.lambda) != k)
            newton_fail("find_divisor", k);  // escaped: recover by bisection
        } catch (const NumericalError&) {
          cplx seed = bisection_seed(cfun, k, opt);
          s = solve_node(M, k, seed, 0.05 * r, opt);
          if (annulus_index(s.lambda) != k) newton_fail("find_divisor", k);
        }
        solves[static_cast<size_t>(idx)] = s;
        D.entries[static_cast<size_t>(idx)] = DivisorEntry{k, s.lambda, s.mu, 1};
      },
      opt.threads);
  if (opt.verify_counts) {
    auto counts = annulus_zero_counts(cfun, K, opt.count_samples, opt.threads);
    for (int k = -K; k <= K; ++k) {
      if (counts[static_cast<size_t>(k + K)] != 1) {
        std::ostringstream os;
        os << "find_divisor: annulus S_" << k << " contains "
           << counts[static_cast<size_t>(k + K)]
           << " zeros of the lower-left entry (expected 1)";
        throw NumericalError(os.str());
      }
    }
  }
  if (state_out) {
    state_out->K = K;
    state_out->entries.assign(static_cast<size_t>(2 * K + 1), SeededEntry{});
    for (int idx = 0; idx <= 2 * K; ++idx) {
      const NodeSolve& s = solves[static_cast<size_t>(idx)];
      state_out->entries[static_cast<size_t>(idx)] =
          SeededEntry{idx - K, s.lambda, s.mu, s.dc};
    }
  }
  return D;
}

SpectralDivisor find_divisor(const PeriodicPotential& p, int K,
                             DivisorOptions opt) {
  MonodromyEvaluator M(p);
  return find_divisor(M, K, opt);
}

SpectralDivisor find_divisor_seeded(const MonodromyEvaluator& M,
                                    SeededDivisorState& state, double tol) {
  SpectralDivisor D;
  D.K = state.K;
  D.entries.assign(state.entries.size(), DivisorEntry{});
  parallel_for(
      static_cast<int>(state.entries.size()),
      [&](int idx) {
        SeededEntry& e = state.entries[static_cast<size_t>(idx)];
        cplx lam = e.lambda, dc = e.dc;
        cplx prev_lam = lam, prev_f = 0.0;
        bool have_prev = false;
        Matrix2C Mv;
        for (int it = 0; it < 12; ++it) {
          Mv = M(lam);
          cplx f = Mv.c;
          if (have_prev && std::abs(lam - prev_lam) >
                               1e-3 * tol * (1.0 + std::abs(lam))) {
            cplx sec = (f - prev_f) / (lam - prev_lam);
            if (std::abs(sec) > 0.1 * std::abs(dc)) dc = sec;
          }
          prev_lam = lam;
          prev_f = f;
          have_prev = true;
          cplx step = -f / dc;
          lam += step;
          if (std::abs(step) <= tol * (1.0 + std::abs(lam))) {
            if (annulus_index(lam) != e.k)
              throw NumericalError(
                  "find_divisor_seeded: tracked zero jumped to annulus " +
                  std::to_string(annulus_index(lam)) + " from " +
                  std::to_string(e.k));
            Mv = M(lam);
            e.lambda = lam;
            e.mu = Mv.a;
            e.dc = dc;
            D.entries[static_cast<size_t>(idx)] =
                DivisorEntry{e.k, lam, Mv.a, 1};
            return;
          }
        }
        newton_fail("find_divisor_seeded", e.k);
      });
  return D;
}

// ── branch points ──

namespace {

BranchPair solve_branch_pair(const MonodromyEvaluator& M, int k,
                             const DivisorOptions& opt) {
  auto dfun = [&](cplx lam) { return M(lam).trace(); };
  const cplx center = lambda_k0(k);
  const double r = seed_radius(k);
  const double target = 2.0 * mu_k0(k);
  // local quartic model of Delta from one 16-point circle
  auto cf = cauchy_taylor(dfun, center, r, 5, 16);
  auto dp = [&](cplx d) {  // Delta'
    return cf[1] + d * (2.0 * cf[2] + d * (3.0 * cf[3] + d * 4.0 * cf[4]));
  };
  auto dpp = [&](cplx d) {  // Delta''
    return 2.0 * cf[2] + d * (6.0 * cf[3] + d * 12.0 * cf[4]);
  };
  // zero of Delta' inside the circle (the gap midpoint marker eta)
  cplx d = 0.0;
  for (int it = 0; it < 60; ++it) {
    cplx den = dpp(d);
    if (!(std::abs(den) > 0.0)) break;
    cplx step = -dp(d) / den;
    d += step;
    if (std::abs(step) <= 1e-14 * r) break;
  }
  if (std::abs(d) > 0.9 * r) newton_fail("find_branch_points", k);
  cplx eta = center + d;
  cplx delta_eta = dfun(eta);  // one direct evaluation for accuracy
  cplx curv = dpp(d);
  if (!(std::abs(curv) > 0.0)) newton_fail("find_branch_points", k);
  // Delta(lambda) ~ Delta(eta) + curv/2 (lambda-eta)^2 = target
  cplx split = std::sqrt(2.0 * (target - delta_eta) / curv);
  // measurement floor: where |Delta - target| reaches the integrator noise,
  // which grows linearly with the phase rate (vacuum-calibrated at rtol 1e-11)
  double eps_delta = entry_noise(eta, std::abs(delta_eta));
  double floor = 4.0 * std::sqrt(2.0 * eps_delta / std::abs(curv));
  double double_tol = 1e-9 * (1.0 + std::abs(center));
  cplx k1 = eta + split, k2 = eta - split;
  if (2.0 * std::abs(split) < std::max(floor, double_tol)) {
    // below the noise floor the pair is a double point; eta is its best locator
    BranchPair out{k, eta, eta, true, floor};
    return out;
  }
  // Maehly-deflated polish of each zero of Delta - target with direct
  // evaluations, derivative from the local model
  for (int it = 0; it < 8; ++it) {
    double moved = 0.0;
    for (cplx* kp : {&k1, &k2}) {
      cplx other = (kp == &k1) ? k2 : k1;
      cplx f = dfun(*kp) - target;
      cplx den = dp(*kp - center) - f / (*kp - other);
      if (!(std::abs(den) > 0.0)) continue;
      cplx step = -f / den;
      *kp += step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved <= 1e-12 * (1.0 + std::abs(center))) break;
  }
  bool dbl = std::abs(k1 - k2) < double_tol;
  if (dbl) {
    cplx mid = 0.5 * (k1 + k2);
    k1 = k2 = mid;
  } else if (k2.real() < k1.real() ||
             (k2.real() == k1.real() && k2.imag() < k1.imag())) {
    std::swap(k1, k2);  // deterministic ordering
  }
  return BranchPair{k, k1, k2, dbl, floor};
}

}  // namespace

BranchPointSet find_branch_points(const MonodromyEvaluator& M, int K,
                                  DivisorOptions opt) {
  if (K < 0) throw InputError("find_branch_points: K >= 0 required");
  BranchPointSet B;
  B.K = K;
  B.pairs.assign(static_cast<size_t>(2 * K + 1), BranchPair{});
  parallel_for(
      2 * K + 1,
      [&](int idx) {
        B.pairs[static_cast<size_t>(idx)] = solve_branch_pair(M, idx - K, opt);
      },
      opt.threads);
  if (opt.verify_counts) {
    auto f = [&](cplx lam) {
      cplx t = M(lam).trace();
      return t * t - 4.0;
    };
    auto counts = annulus_zero_counts(f, K, opt.count_samples, opt.threads);
    for (int k = -K; k <= K; ++k) {
      if (counts[static_cast<size_t>(k + K)] != 2) {
        std::ostringstream os;
        os << "find_branch_points: annulus S_" << k << " contains "
           << counts[static_cast<size_t>(k + K)]
           << " zeros of Delta^2 - 4 (expected 2)";
        throw NumericalError(os.str());
      }
    }
  }
  return B;
}

BranchPointSet find_branch_points(const PeriodicPotential& p, int K,
                                  DivisorOptions opt) {
  MonodromyEvaluator M(p);
  return find_branch_points(M, K, opt);
}

// ── involution and classification ──

CurvePoint sigma_involution(const CurvePoint& point) {
  if (point.mu == cplx(0.0)) throw InputError("sigma_involution: mu = 0");
  return CurvePoint{point.lambda, 1.0 / point.mu};
}

namespace {

bool lambda_close(const DivisorEntry& a, const DivisorEntry& b, double sep_tol) {
  double scale = std::max({1.0, std::abs(a.lambda), std::abs(b.lambda)});
  return std::abs(a.lambda - b.lambda) <= sep_tol * scale;
}

}  // namespace

bool is_tame(const SpectralDivisor& D, double sep_tol) {
  for (size_t i = 0; i < D.entries.size(); ++i)
    for (size_t j = i + 1; j < D.entries.size(); ++j)
      if (lambda_close(D.entries[i], D.entries[j], sep_tol)) return false;
  return true;
}

bool is_nonspecial(const SpectralDivisor& D, double sep_tol, double mu_tol) {
  for (size_t i = 0; i < D.entries.size(); ++i)
    for (size_t j = i + 1; j < D.entries.size(); ++j) {
      if (!lambda_close(D.entries[i], D.entries[j], sep_tol)) continue;
      double mscale = std::max(
          {1.0, std::abs(D.entries[i].mu), std::abs(D.entries[j].mu)});
      if (std::abs(D.entries[i].mu - D.entries[j].mu) > mu_tol * mscale)
        return false;
    }
  return true;
}

// ── Div metric upper bound ──

namespace {

double slot_weight(int k) {
  if (k > 0) return 1.0 / static_cast<double>(k);
  if (k < 0) {
    double a = static_cast<double>(-k);
    return a * a * a;
  }
  return 1.0;
}

void slot_values(const SpectralDivisor& D, int k, cplx& lam, cplx& mu) {
  if (std::abs(k) <= D.K) {
    const DivisorEntry& e = D.at(k);
    lam = e.lambda;
    mu = e.mu;
  } else {
    lam = lambda_k0(k);
    mu = static_cast<double>(mu_k0(k));
  }
}

// min-cost assignment restricted to |target - source| <= w, by a sliding
// bitmask DP over the 2w+1 reachable targets
double banded_assignment(const std::function<double(int, int)>& cost, int lo,
                         int hi, int w) {
  const int n = hi - lo + 1;
  const int width = 2 * w + 1;
  const int nstates = 1 << width;
  const double inf = 1e300;
  // bit r of the mask: target slot (t - w + r) already used, t = current source
  std::vector<double> cur(static_cast<size_t>(nstates), inf), nxt;
  cur[0] = 0.0;
  for (int t = 0; t < n; ++t) {
    nxt.assign(static_cast<size_t>(nstates), inf);
    for (int mask = 0; mask < nstates; ++mask) {
      double base = cur[static_cast<size_t>(mask)];
      if (base >= inf) continue;
      for (int o = -w; o <= w; ++o) {
        int j = t + o;
        if (j < 0 || j >= n) continue;
        int bit = 1 << (o + w);
        if (mask & bit) continue;
        int used = mask | bit;
        // advance the window: a leaving target (t - w), when it exists, must
        // have been used, since no later source can reach it
        if (t - w >= 0 && !(used & 1)) continue;
        int shifted = used >> 1;
        double c = base + cost(lo + t, lo + j);
        if (c < nxt[static_cast<size_t>(shifted)])
          nxt[static_cast<size_t>(shifted)] = c;
      }
    }
    cur.swap(nxt);
  }
  // after the final shift, bit r refers to target (n - w + r); every real
  // target in that window must have been used
  double best = inf;
  for (int mask = 0; mask < nstates; ++mask) {
    bool complete = true;
    for (int r = 0; r < width; ++r) {
      int target = n - w + r;
      if (target >= 0 && target < n && !(mask & (1 << r))) complete = false;
    }
    if (complete) best = std::min(best, cur[static_cast<size_t>(mask)]);
  }
  if (best >= inf) throw NumericalError("divisor_distance: no feasible matching");
  return best;
}

double directed_cost(const SpectralDivisor& A, const SpectralDivisor& B, int L,
                     int w) {
  auto cost = [&](int i, int j) {
    cplx la, ma, lb, mb;
    slot_values(A, i, la, ma);
    slot_values(B, j, lb, mb);
    double v = slot_weight(i);
    return v * v * std::norm(la - lb) + std::norm(ma - mb);
  };
  return banded_assignment(cost, -L, L, w);
}

}  // namespace

double divisor_distance(const SpectralDivisor& D1, const SpectralDivisor& D2,
                        int window) {
  if (window < 0 || window > 6)
    throw InputError("divisor_distance: window in [0, 6] required");
  int L = std::max(D1.K, D2.K) + window;
  double c12 = directed_cost(D1, D2, L, window);
  double c21 = directed_cost(D2, D1, L, window);
  return std::sqrt(std::min(c12, c21));
}

// ── symplectic forms ──

cplx symplectic_omega(const PeriodicPotential&, const PotentialVariation& v1,
                      const PotentialVariation& v2) {
  // int_0^1 (du1 duy2 - du2 duy1) dx = sum_j (du1_j duy2_{-j} - du2_j duy1_{-j});
  // bilinear (no conjugation), so the pairing couples modes j and -j
  int J = std::max(v1.J, v2.J);
  cplx acc = 0.0;
  for (int j = -J; j <= J; ++j)
    acc += v1.u_mode(j) * v2.uy_mode(-j) - v2.u_mode(j) * v1.uy_mode(-j);
  return acc;
}

cplx symplectic_omega_tilde(const SpectralDivisor& D, const DivisorVariation& dD1,
                            const DivisorVariation& dD2) {
  if (dD1.K != D.K || dD2.K != D.K)
    throw InputError("symplectic_omega_tilde: variation K mismatch");
  cplx acc = 0.0;
  for (int k = -D.K; k <= D.K; ++k) {
    const DivisorEntry& e = D.at(k);
    size_t i = static_cast<size_t>(k + D.K);
    cplx l1 = dD1.dlambda[i] / e.lambda, m1 = dD1.dmu[i] / e.mu;
    cplx l2 = dD2.dlambda[i] / e.lambda, m2 = dD2.dmu[i] / e.mu;
    acc += l1 * m2 - l2 * m1;
  }
  // Normalized so that the transform pulls the data-space form back exactly:
  // at the vacuum the linearization gives, per annulus pair +-k with
  // lam = lambda_{k,0} and modes p_{+-k}, q_{+-k} of (du, duy),
  //   dlam_{+-k}/lam = (p_k + p_{-k})/2 -+ sqrt(lam) (q_k - q_{-k})/(lam - 1),
  //   dmu_{+-k}/mu   = i (q_k + q_{-k})/8 -+ i (lam - 1)(p_k - p_{-k})/(16 sqrt(lam)),
  // whence (i/2) sum_k (dlam/lam dmu~/mu - dlam~/lam dmu/mu) = -Omega/8: the
  // cross pairings cancel between the annuli +k and -k and the rest telescopes
  // to the mode sum of Omega. The factor -8 makes omega == omega_tilde the
  // exact statement of the correspondence (verified to hold with the same
  // constant at strongly perturbed base points as well).
  return -8.0 * cplx(0.0, 0.5) * acc;
}

namespace {

DivisorVariation central_difference(const PeriodicPotential& p,
                                    const PotentialVariation& v, double h,
                                    const SeededDivisorState& base) {
  // one Richardson step: (4 D_{h/2} - D_h) / 3 kills the h^2 term
  std::array<SpectralDivisor, 4> Ds;
  std::array<double, 4> steps{h, -h, 0.5 * h, -0.5 * h};
  for (int i = 0; i < 4; ++i) {
    SeededDivisorState st = base;
    MonodromyEvaluator M(add_scaled(p, steps[static_cast<size_t>(i)], v));
    Ds[static_cast<size_t>(i)] = find_divisor_seeded(M, st);
  }
  int K = base.K;
  DivisorVariation out;
  out.K = K;
  out.dlambda.assign(static_cast<size_t>(2 * K + 1), 0.0);
  out.dmu.assign(static_cast<size_t>(2 * K + 1), 0.0);
  for (size_t i = 0; i < out.dlambda.size(); ++i) {
    cplx dl_h = (Ds[0].entries[i].lambda - Ds[1].entries[i].lambda) / (2.0 * h);
    cplx dl_h2 = (Ds[2].entries[i].lambda - Ds[3].entries[i].lambda) / h;
    cplx dm_h = (Ds[0].entries[i].mu - Ds[1].entries[i].mu) / (2.0 * h);
    cplx dm_h2 = (Ds[2].entries[i].mu - Ds[3].entries[i].mu) / h;
    out.dlambda[i] = (4.0 * dl_h2 - dl_h) / 3.0;
    out.dmu[i] = (4.0 * dm_h2 - dm_h) / 3.0;
  }
  return out;
}

}  // namespace

SymplecticReport symplectic_identity_check(const PeriodicPotential& p,
                                           const PotentialVariation& v1,
                                           const PotentialVariation& v2,
                                           double h, int K, DivisorOptions opt) {
  if (!(h > 0.0)) throw InputError("symplectic_identity_check: h > 0 required");
  MonodromyEvaluator M(p);
  SeededDivisorState state;
  SpectralDivisor D = find_divisor(M, K, opt, &state);
  DivisorVariation dD1 = central_difference(p, v1, h, state);
  DivisorVariation dD2 = central_difference(p, v2, h, state);
  SymplecticReport rep;
  rep.K = K;
  rep.h = h;
  rep.omega = symplectic_omega(p, v1, v2);
  rep.omega_tilde = symplectic_omega_tilde(D, dD1, dD2);
  double scale = std::max(std::abs(rep.omega), std::abs(rep.omega_tilde));
  rep.rel_err = scale > 0.0 ? std::abs(rep.omega - rep.omega_tilde) / scale : 0.0;
  return rep;
}

}  // namespace sgspec
