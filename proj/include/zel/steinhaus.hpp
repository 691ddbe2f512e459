#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "zel/dirichlet.hpp"
#include "zel/ladders.hpp"
#include "zel/numeric.hpp"
#include "zel/parallel.hpp"
#include "zel/primes.hpp"
#include "zel/rng.hpp"

namespace zel {

// Steinhaus random multiplicative function: f(p) independent uniform on the
// unit circle, extended by f(n) = prod f(p)^a over n = prod p^a.  Angles are
// a pure function of (master_seed, p), so draws are reproducible under any
// parallel schedule, and multiplicativity is exact in angle arithmetic.
struct SteinhausSampler {
  std::uint64_t master_seed = 0;

  double angle_at_prime(u64 p) const { return rng::angle(master_seed, p); }

  cd f_prime(u64 p) const {
    double a = angle_at_prime(p);
    return {std::cos(a), std::sin(a)};
  }

  // f(n) for general n; factors n by trial division over the table.
  cd f_at(u64 n, const PrimeTable& table) const {
    if (n < 1) throw param_error("f_at: n must be >= 1");
    double total = 0.0;
    u64 r = n;
    for (std::size_t i = 0; i < table.primes.size() && r > 1; ++i) {
      u64 p = table.primes[i];
      if (p > r / p) break;
      int a = 0;
      while (r % p == 0) {
        ++a;
        r /= p;
      }
      if (a > 0) total += a * angle_at_prime(p);
    }
    if (r > 1) total += angle_at_prime(r);  // leftover prime factor
    total = std::fmod(total, kTwoPi);
    return {std::cos(total), std::sin(total)};
  }
};

// Random Euler product F(1/2 + ih) = prod_{p <= P} (1 - f(p) p^{-1/2-ih})^{-1}.
inline cd F_product(const SteinhausSampler& sampler, double h, double P,
                    const PrimeTable& table) {
  if ((double)table.limit < P) throw param_error("F_product: table too small");
  KahanComplex lg;
  std::size_t np = table.upper_index(P);
  for (std::size_t i = 0; i < np; ++i) {
    double a = sampler.angle_at_prime(table.primes[i]);
    double ph = a - h * (double)table.logp[i];
    double amp = 1.0 / std::sqrt((double)table.primes[i]);
    cd z = amp * cd{std::cos(ph), std::sin(ph)};
    lg.add(-std::log(cd{1.0, 0.0} - z));
  }
  return std::exp(lg.value());
}

// log I_{l,rand}(h) over the scale-l primes.
inline cd euler_partial_rand(const SteinhausSampler& sampler, int l, double h,
                             double P, const PrimeTable& table) {
  PrimeRange r = scale_range(l, P, table);
  KahanComplex acc;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    double a = sampler.angle_at_prime(table.primes[i]);
    double ph = a - h * (double)table.logp[i];
    double amp = 1.0 / std::sqrt((double)table.primes[i]);
    cd z = amp * cd{std::cos(ph), std::sin(ph)};
    acc.add(-std::log(cd{1.0, 0.0} - z));
  }
  return acc.value();
}

template <typename HFun>
EulerLadder build_euler_ladder_rand(const SteinhausSampler& sampler, double P,
                                    int B, HFun&& h_of_scale,
                                    const PrimeTable& table) {
  int top = ladder_top_scale(P, B);
  if (top < 0)
    throw param_error("build_euler_ladder_rand: empty ladder (loglog P < B + 2)");
  EulerLadder lad;
  lad.P = P;
  lad.B = B;
  for (int l = 0; l <= top; ++l) {
    double h = h_of_scale(l);
    lad.hpoints.push_back(h);
    lad.logI.push_back(euler_partial_rand(sampler, l, h, P, table));
  }
  return lad;
}

// Trapezoid integral of |F(1/2+ih)|^{2 beta} over |h| <= 1/2.  |F|^2 varies
// on the correlation scale 1/log P; grid_density points per correlation
// length (default 16) keeps the grid spectrally safe.
inline double rand_partition_integral(const SteinhausSampler& sampler, double P,
                                      double beta, const PrimeTable& table,
                                      double grid_density = 16.0) {
  if (grid_density < 4.0)
    throw param_error("rand_partition_integral: grid_density must be >= 4");
  if (beta == 0.0) return 1.0;
  int npts = (int)std::ceil(grid_density * std::log(P));
  if (npts < 2) npts = 2;
  auto f = [&](double h) {
    cd F = F_product(sampler, h, P, table);
    return std::pow(std::norm(F), beta);
  };
  return trapezoid(f, -0.5, 0.5, npts + 1);
}

struct MomentEstimate {
  double q = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;
};

// Moments of moments: E (int |F|^2 dh)^q over independent samplers, one row
// per q.  The same per-trial integrals feed every q.
inline std::vector<MomentEstimate> moments_of_moments_mc(
    double P, const std::vector<double>& q_grid, int trials, std::uint64_t seed,
    const PrimeTable& table, double grid_density = 16.0) {
  if (trials < 100) throw param_error("moments_of_moments_mc: trials >= 100");
  std::vector<double> integrals((std::size_t)trials);
  parallel::for_each_index((std::size_t)trials, [&](std::size_t i) {
    SteinhausSampler s{rng::derive(seed, i)};
    integrals[i] = rand_partition_integral(s, P, 1.0, table, grid_density);
  });
  std::vector<MomentEstimate> out;
  for (double q : q_grid) {
    MomentEstimate m;
    m.q = q;
    if (q == 0.0) {
      m.estimate = 1.0;
      m.std_err = 0.0;
    } else {
      std::vector<double> powered((std::size_t)trials);
      for (std::size_t i = 0; i < powered.size(); ++i)
        powered[i] = std::pow(integrals[i], q);
      auto ms = mean_stderr(powered);
      m.estimate = ms.mean;
      m.std_err = ms.std_err;
    }
    out.push_back(m);
  }
  return out;
}

struct FailureRate {
  double rate = 0.0;
  double std_err = 0.0;
  double rate_all_grid = 0.0;
  double std_err_all_grid = 0.0;
  long failures = 0;
  long failures_all_grid = 0;
};

// Frequency with which the randomised barrier event fails, at the single
// point h = 0 and in the all-grid variant (every lattice point at every
// scale).  Mode thm1 runs the g(j)-schedule event on |partial products|,
// mode thm2 the threshold event on the complex log sums.  `extra` follows
// the schedule (0 = bare thresholds; the moment-machinery events use 19/3).
inline FailureRate barrier_failure_rate(double P, double U, LadderMode mode,
                                        int trials, std::uint64_t seed,
                                        const PrimeTable& table,
                                        const BarrierSchedule& sched_in,
                                        std::size_t grid_budget = 1'000'000) {
  if (trials < 1000) throw param_error("barrier_failure_rate: trials >= 1000");
  BarrierSchedule sched = sched_in;
  sched.P = P;
  sched.U = U;
  sched.mode = mode;
  int top = ladder_top_scale(P, sched.B);
  if (top < 0) throw param_error("barrier_failure_rate: empty ladder");

  // Enumerate the lattice points per scale once.
  std::vector<std::vector<double>> grid((std::size_t)top + 1);
  for (int j = 0; j <= top; ++j) {
    double D = grid_density(j, P, mode);
    long long n_lo = (long long)std::floor(-0.5 * D + 1e-9);
    long long n_hi = (long long)std::floor(0.5 * D + 1e-9);
    if ((std::size_t)(n_hi - n_lo + 1) > grid_budget)
      throw resource_error("barrier_failure_rate: grid over budget");
    for (long long n = n_lo; n <= n_hi; ++n)
      grid[(std::size_t)j].push_back((double)n / D);
  }

  std::vector<char> fail_h0((std::size_t)trials, 0);
  std::vector<char> fail_grid((std::size_t)trials, 0);
  parallel::for_each_index((std::size_t)trials, [&](std::size_t i) {
    SteinhausSampler s{rng::derive(seed, i)};
    // h = 0 sits on every lattice, so all ladder points are 0.
    EulerLadder lad =
        build_euler_ladder_rand(s, P, sched.B, [](int) { return 0.0; }, table);
    EventReport rep = event_G_at_h(lad, sched, mode);
    fail_h0[i] = rep.holds ? 0 : 1;
    // All-grid variant: check every scale-j lattice point, suffix points
    // derived by the rounding recursion.
    bool ok = true;
    std::map<std::pair<int, long long>, cd> cache;
    auto logI = [&](int l, double h) {
      long long key = (long long)std::llround(h * 1e12);
      auto it = cache.find({l, key});
      if (it != cache.end()) return it->second;
      cd v = euler_partial_rand(s, l, h, P, table);
      cache.insert({{l, key}, v});
      return v;
    };
    for (int j = 0; j <= top && ok; ++j) {
      for (double hj : grid[(std::size_t)j]) {
        KahanComplex acc;
        double hl = hj;
        for (int l = j; l <= top; ++l) {
          if (l > j) hl = snap_down(hl, grid_density(l, P, mode));
          acc.add(logI(l, hl));
        }
        double size = mode == LadderMode::thm1 ? std::abs(acc.value().real())
                                               : std::abs(acc.value());
        if (size > sched.threshold(j)) {
          ok = false;
          break;
        }
      }
    }
    fail_grid[i] = ok ? 0 : 1;
  });

  FailureRate out;
  for (int i = 0; i < trials; ++i) {
    out.failures += fail_h0[(std::size_t)i];
    out.failures_all_grid += fail_grid[(std::size_t)i];
  }
  double n = (double)trials;
  out.rate = out.failures / n;
  out.rate_all_grid = out.failures_all_grid / n;
  out.std_err = std::sqrt(out.rate * (1.0 - out.rate) / n);
  out.std_err_all_grid =
      std::sqrt(out.rate_all_grid * (1.0 - out.rate_all_grid) / n);
  return out;
}

struct RestrictedMeanReport {
  double estimate = 0.0;
  double std_err = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double indicator_rate = 0.0;
};

// Monte Carlo mean of
//   1_{G'(h)} |sum_smooth f(m) m^{-1/2-ih}|^2 |sum_rough f(n) n^{-1/2-ih}|^2
// against log T (min{1,(lllP+U)/sqrt(llP)} min{1,(lllP+U+log V)/sqrt(llP)}^2
//              + e^{-eps log T / log P}),
// where G'(h) is the two-sided ladder event with thresholds
// loglog P - j + 3 logloglog P + U + 19/3 plus the j = 0 lower bound
// prod |I_l| >= log P / (V B0 e^{19/3}).
inline RestrictedMeanReport restricted_mean_mc(
    double P, double T, double eps, double U, double V, double h, int trials,
    std::uint64_t seed, const PrimeTable& table, int B = 0, double B0 = 8.0,
    double cube_slack = 8.0 / 3.0) {
  if (V < std::exp(-U) * (1.0 - 1e-12))
    throw param_error("restricted_mean_mc: need V >= e^{-U}");
  if (trials < 100) throw param_error("restricted_mean_mc: trials >= 100");
  int top = ladder_top_scale(P, B);
  if (top < 0) throw param_error("restricted_mean_mc: empty ladder");

  HPoints hp = build_hpoints(h, P, T, LadderMode::thm2);
  DirichletPoly smooth = smooth_poly(T, eps, P, table);
  DirichletPoly rough = rough_poly(T, eps, P, table);

  // Factorisations of the supports, done once.
  auto factorize = [&](const std::vector<u64>& ns) {
    std::vector<std::vector<std::pair<u64, int>>> f(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      u64 r = ns[i];
      for (std::size_t k = 0; k < table.primes.size() && r > 1; ++k) {
        u64 p = table.primes[k];
        if (p > r / p) break;
        int a = 0;
        while (r % p == 0) {
          ++a;
          r /= p;
        }
        if (a > 0) f[i].push_back({p, a});
      }
      if (r > 1) f[i].push_back({r, 1});
    }
    return f;
  };
  auto fs = factorize(smooth.n);
  auto fr = factorize(rough.n);

  double llP = std::log(std::log(P));
  double lllP = std::log(llP);
  double extra = 11.0 / 3.0 + cube_slack;  // the 19/3 of the moment machinery
  double lower_bound_log =
      std::log(std::log(P) / (V * B0)) - extra;  // log of log P/(V B0 e^{19/3})

  BarrierSchedule sched;
  sched.P = P;
  sched.B = B;
  sched.U = U;
  sched.mode = LadderMode::thm2;
  sched.extra = extra;

  std::vector<double> vals((std::size_t)trials);
  std::vector<char> ind((std::size_t)trials, 0);
  parallel::for_each_index((std::size_t)trials, [&](std::size_t i) {
    SteinhausSampler s{rng::derive(seed, i)};
    EulerLadder lad = build_euler_ladder_rand(
        s, P, B, [&](int l) { return hp.at(l); }, table);
    // Two-sided part on |partial products| (real part of the log suffix).
    bool ok = true;
    KahanComplex tail;
    std::vector<cd> suffix((std::size_t)lad.top_scale() + 1);
    for (int l = lad.top_scale(); l >= 0; --l) {
      tail.add(lad.logI[(std::size_t)l]);
      suffix[(std::size_t)l] = tail.value();
    }
    for (int j = 0; j <= lad.top_scale() && ok; ++j)
      if (std::abs(suffix[(std::size_t)j].real()) > sched.threshold(j)) ok = false;
    // Lower bound at j = 0.
    if (ok && suffix[0].real() < lower_bound_log) ok = false;
    ind[i] = ok ? 1 : 0;
    if (!ok) {
      vals[i] = 0.0;
      return;
    }
    auto poly_value = [&](const DirichletPoly& poly,
                          const std::vector<std::vector<std::pair<u64, int>>>& fac) {
      KahanComplex acc;
      for (std::size_t k = 0; k < poly.n.size(); ++k) {
        double ang = 0.0;
        for (auto [p, a] : fac[k]) ang += a * s.angle_at_prime(p);
        ang -= h * (double)std::log((double)poly.n[k]);
        double amp = 1.0 / std::sqrt((double)poly.n[k]);
        acc.add(amp * cd{std::cos(ang), std::sin(ang)});
      }
      return acc.value();
    };
    double sm = std::norm(poly_value(smooth, fs));
    double rg = std::norm(poly_value(rough, fr));
    vals[i] = sm * rg;
  });

  RestrictedMeanReport rep;
  auto ms = mean_stderr(vals);
  rep.estimate = ms.mean;
  rep.std_err = ms.std_err;
  long cnt = 0;
  for (char c : ind) cnt += c;
  rep.indicator_rate = (double)cnt / (double)trials;
  double logT = std::log(T);
  double m1 = std::min(1.0, (lllP + U) / std::sqrt(llP));
  double m2 = std::min(1.0, (lllP + U + std::log(V)) / std::sqrt(llP));
  rep.bound = logT * (m1 * m2 * m2 + std::exp(-eps * logT / std::log(P)));
  rep.ratio = rep.bound > 0.0 ? rep.estimate / rep.bound : 0.0;
  return rep;
}

}  // namespace zel
