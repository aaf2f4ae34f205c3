#include "sgspec/potential.hpp"

#include <algorithm>
#include <cmath>

#include "sgspec/numerics.hpp"

namespace sgspec {

static int grid_for(int J) { return std::max(8, 4 * J + 4); }

static void check_finite(const PeriodicPotential& p) {
  for (const cplx& c : p.cu)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InputError("potential: non-finite u coefficient");
  for (const cplx& c : p.cuy)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InputError("potential: non-finite u_y coefficient");
}

PeriodicPotential vacuum() {
  PeriodicPotential p;
  p.J = 0;
  p.N = grid_for(0);
  p.cu.assign(1, 0.0);
  p.cuy.assign(1, 0.0);
  return p;
}

PeriodicPotential make_potential(const std::map<int, cplx>& coeff_u,
                                 const std::map<int, cplx>& coeff_uy) {
  int J = 0;
  for (const auto& [j, c] : coeff_u) J = std::max(J, std::abs(j));
  for (const auto& [j, c] : coeff_uy) J = std::max(J, std::abs(j));
  PeriodicPotential p;
  p.J = J;
  p.N = grid_for(J);
  p.cu.assign(2 * J + 1, 0.0);
  p.cuy.assign(2 * J + 1, 0.0);
  for (const auto& [j, c] : coeff_u) p.cu[static_cast<size_t>(j + J)] = c;
  for (const auto& [j, c] : coeff_uy) p.cuy[static_cast<size_t>(j + J)] = c;
  check_finite(p);
  return p;
}

PeriodicPotential random_potential(std::uint64_t seed, int J, double amplitude,
                                   double decay_rate, bool real_valued) {
  if (J < 0) throw InputError("random_potential: J < 0");
  if (!(decay_rate > 0.0)) throw InputError("random_potential: decay_rate <= 0");
  std::mt19937_64 rng(seed);
  PeriodicPotential p;
  p.J = J;
  p.N = grid_for(J);
  p.cu.assign(2 * J + 1, 0.0);
  p.cuy.assign(2 * J + 1, 0.0);
  auto draw = [&](std::vector<cplx>& c) {
    c[static_cast<size_t>(J)] = amplitude * (2.0 * uniform01(rng) - 1.0);
    for (int j = 1; j <= J; ++j) {
      double cap = amplitude * std::exp(-decay_rate * j);
      double mag = cap * uniform01(rng);
      double ph = 2.0 * pi * uniform01(rng);
      cplx v = mag * cplx(std::cos(ph), std::sin(ph));
      c[static_cast<size_t>(J + j)] = v;
      if (real_valued) {
        c[static_cast<size_t>(J - j)] = std::conj(v);
      } else {
        double mag2 = cap * uniform01(rng);
        double ph2 = 2.0 * pi * uniform01(rng);
        c[static_cast<size_t>(J - j)] = mag2 * cplx(std::cos(ph2), std::sin(ph2));
      }
    }
  };
  draw(p.cu);
  draw(p.cuy);
  return p;
}

PotentialValue evaluate(const PeriodicPotential& p, double x) {
  PotentialValue v{0.0, 0.0, 0.0};
  for (int j = -p.J; j <= p.J; ++j) {
    double th = 2.0 * pi * j * x;
    cplx e(std::cos(th), std::sin(th));
    cplx cu = p.cu[static_cast<size_t>(j + p.J)];
    v.u += cu * e;
    v.ux += cplx(0.0, 2.0 * pi * j) * cu * e;
    v.uy += p.cuy[static_cast<size_t>(j + p.J)] * e;
  }
  return v;
}

cplx tau_of(const PeriodicPotential& p) {
  cplx u0 = 0.0;
  for (const cplx& c : p.cu) u0 += c;
  return std::exp(-u0 / 2.0);
}

PeriodicPotential translate_x(const PeriodicPotential& p, double x0) {
  PeriodicPotential q = p;
  for (int j = -p.J; j <= p.J; ++j) {
    double th = 2.0 * pi * j * x0;
    cplx e(std::cos(th), std::sin(th));
    q.cu[static_cast<size_t>(j + p.J)] *= e;
    q.cuy[static_cast<size_t>(j + p.J)] *= e;
  }
  return q;
}

cplx pot_inner(const PeriodicPotential& p, const PeriodicPotential& q) {
  int J = std::max(p.J, q.J);
  cplx acc = 0.0;
  for (int j = -J; j <= J; ++j) {
    double w = 1.0 + (2.0 * pi * j) * (2.0 * pi * j);
    acc += w * p.u_mode(j) * std::conj(q.u_mode(j));
    acc += p.uy_mode(j) * std::conj(q.uy_mode(j));
  }
  return acc;
}

double pot_norm(const PeriodicPotential& p) {
  return std::sqrt(std::abs(pot_inner(p, p)));
}

PeriodicPotential add_scaled(const PeriodicPotential& p, double s,
                             const PotentialVariation& v) {
  int J = std::max(p.J, v.J);
  PeriodicPotential out;
  out.J = J;
  out.N = grid_for(J);
  out.cu.assign(2 * J + 1, 0.0);
  out.cuy.assign(2 * J + 1, 0.0);
  for (int j = -J; j <= J; ++j) {
    out.cu[static_cast<size_t>(j + J)] = p.u_mode(j) + s * v.u_mode(j);
    out.cuy[static_cast<size_t>(j + J)] = p.uy_mode(j) + s * v.uy_mode(j);
  }
  return out;
}

// ── y-extension ──

namespace {

// Acceleration a_j = (2 pi j)^2 U_j - F[sinh u]_j on a grid of size M,
// evaluated alias-free for the retained band (M >= 4 Jw + 4).
struct YEvolver {
  int Jw, M;
  std::vector<cplx> grid, acc;

  explicit YEvolver(int Jw_) : Jw(Jw_), M(std::max(16, 4 * Jw_ + 4)) {
    grid.resize(static_cast<size_t>(M));
    acc.resize(static_cast<size_t>(2 * Jw + 1));
  }

  void accel(const std::vector<cplx>& U, std::vector<cplx>& A) {
    for (int n = 0; n < M; ++n) {
      cplx s = 0.0;
      for (int j = -Jw; j <= Jw; ++j) {
        double th = 2.0 * pi * j * n / static_cast<double>(M);
        s += U[static_cast<size_t>(j + Jw)] * cplx(std::cos(th), std::sin(th));
      }
      grid[static_cast<size_t>(n)] = std::sinh(s);
    }
    for (int j = -Jw; j <= Jw; ++j) {
      cplx s = 0.0;
      for (int n = 0; n < M; ++n) {
        double th = -2.0 * pi * j * n / static_cast<double>(M);
        s += grid[static_cast<size_t>(n)] * cplx(std::cos(th), std::sin(th));
      }
      double w = 2.0 * pi * j;
      A[static_cast<size_t>(j + Jw)] =
          w * w * U[static_cast<size_t>(j + Jw)] - s / static_cast<double>(M);
    }
  }
};

}  // namespace

PeriodicPotential evolve_y(const PeriodicPotential& p, double y_target,
                           int n_steps, int filter_cutoff, double blowup_bound) {
  if (n_steps < 1) throw InputError("evolve_y: n_steps >= 1 required");
  int Jw = filter_cutoff >= 1 ? filter_cutoff : p.J;
  PeriodicPotential out;
  out.J = Jw;
  out.N = grid_for(Jw);
  out.cu.assign(2 * Jw + 1, 0.0);
  out.cuy.assign(2 * Jw + 1, 0.0);
  std::vector<cplx> U(2 * Jw + 1, 0.0), V(2 * Jw + 1, 0.0);
  for (int j = -std::min(Jw, p.J); j <= std::min(Jw, p.J); ++j) {
    U[static_cast<size_t>(j + Jw)] = p.u_mode(j);
    V[static_cast<size_t>(j + Jw)] = p.uy_mode(j);
  }
  if (y_target == 0.0) {
    out.cu = U;
    out.cuy = V;
    return out;
  }
  const double h = y_target / n_steps;
  YEvolver ev(Jw);
  std::vector<cplx> A0(U.size()), A1(U.size());
  ev.accel(U, A0);
  for (int step = 0; step < n_steps; ++step) {
    for (size_t i = 0; i < U.size(); ++i) U[i] += h * V[i] + 0.5 * h * h * A0[i];
    ev.accel(U, A1);
    for (size_t i = 0; i < V.size(); ++i) V[i] += 0.5 * h * (A0[i] + A1[i]);
    std::swap(A0, A1);
    for (size_t i = 0; i < U.size(); ++i)
      if (std::abs(U[i]) > blowup_bound || std::abs(V[i]) > blowup_bound)
        throw NumericalError("evolve_y: coefficient blow-up (ill-posed regime)");
  }
  out.cu = U;
  out.cuy = V;
  return out;
}

}  // namespace sgspec
