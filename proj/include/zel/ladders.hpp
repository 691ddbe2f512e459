#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "zel/dirichlet.hpp"
#include "zel/numeric.hpp"
#include "zel/primes.hpp"

namespace zel {

enum class LadderMode { thm1, thm2 };

// Grid density D_j at scale j: h(j) lives on the lattice (1/D_j) * Z.
//   thm1: D_j = ((log P)/e^j) * log((log P)/e^j)
//   thm2: D_j = ((log P)/e^j) * (loglog P)^3
inline double grid_density(int j, double P, LadderMode mode) {
  double logP = std::log(P);
  double scale = logP * std::exp(-(double)j);
  if (mode == LadderMode::thm1) {
    if (scale <= 1.0)
      throw param_error("grid_density: (log P)/e^j must exceed 1 in thm1 mode");
    return scale * std::log(scale);
  }
  double llP = std::log(std::log(P));
  return scale * llP * llP * llP;
}

// Round u down to the scale-j lattice.  The tiny nudge keeps values that are
// already lattice points from dropping a step through rounding.
inline double snap_down(double u, double density) {
  return std::floor(u * density + 1e-9) / density;
}

// Nested approximating points h(-1) = h >= h(0) >= h(1) >= ... , each h(j)
// the largest lattice point at scale j not exceeding h(j-1).  In thm2 mode
// hstar is additionally the nearest point of the form n/log T to h.
struct HPoints {
  double h = 0.0;
  LadderMode mode = LadderMode::thm1;
  std::vector<double> points;  // index j = 0 .. floor(loglog P) - 1
  double hstar = 0.0;          // only meaningful in thm2 mode

  double at(int l) const {
    if (l < 0) return h;
    return points.at((std::size_t)l);
  }
};

inline HPoints build_hpoints(double h, double P, double T, LadderMode mode) {
  if (std::abs(h) > 0.5) throw param_error("build_hpoints: |h| must be <= 1/2");
  if (P < 2.0 || std::log(std::log(P)) < 2.0)
    throw param_error("build_hpoints: need loglog P >= B + 2");
  HPoints hp;
  hp.h = h;
  hp.mode = mode;
  int jmax = (int)std::floor(std::log(std::log(P))) - 1;
  double prev = h;
  for (int j = 0; j <= jmax; ++j) {
    double v = snap_down(prev, grid_density(j, P, mode));
    hp.points.push_back(v);
    prev = v;
  }
  if (mode == LadderMode::thm2) {
    if (T < 3.0) throw param_error("build_hpoints: T too small for hstar grid");
    double logT = std::log(T);
    hp.hstar = std::round(h * logT) / logT;
  }
  return hp;
}

// Barrier schedule.  The threshold on |sum_{l >= j} log I_l| at scale j is
//   thm1:  loglog P - j + g(j),   g(j) = C min{sqrt(loglog P), 1/(1-q)}
//                                        + 2 logloglog-type term (see below)
//   thm2:  loglog P - j + 3 logloglog P + U
// plus an optional additive widening `extra` (0 for the events on actual
// Euler products; the random-model events of the moment machinery use 19/3,
// of which 8/3 accounts for the dropped prime-cube tail and is exposed as a
// knob).
struct BarrierSchedule {
  double C = 1.0;
  int B = 0;
  double q = 1.0;  // in [2/3, 1]
  double U = 0.0;
  double P = 0.0;
  LadderMode mode = LadderMode::thm1;
  double extra = 0.0;

  double g(int j) const {
    double llP = std::log(std::log(P));
    double cap = q >= 1.0 ? std::numeric_limits<double>::infinity()
                          : 1.0 / (1.0 - q);
    double scale = std::log(P) * std::exp(-(double)j);
    return C * std::min(std::sqrt(llP), cap) + 2.0 * std::log(std::log(scale));
  }

  double threshold(int j) const {
    double llP = std::log(std::log(P));
    if (mode == LadderMode::thm1) return llP - (double)j + g(j) + extra;
    return llP - (double)j + 3.0 * std::log(llP) + U + extra;
  }
};

struct EventReport {
  bool holds = true;
  int worst_j = -1;
  double margin = std::numeric_limits<double>::infinity();
  double worst_h = 0.0;  // grid witness (all-h variant)
};

// Barrier event for one ladder.  thm1 constrains |Re sum_{l>=j} log I_l|
// (i.e. the modulus of the partial product, two-sidedly); thm2 constrains
// the modulus of the complex log sum itself.
inline EventReport event_G_at_h(const EulerLadder& ladder,
                                const BarrierSchedule& sched, LadderMode mode) {
  EventReport rep;
  int top = ladder.top_scale();
  KahanComplex tail;
  std::vector<cd> suffix((std::size_t)top + 1);
  for (int l = top; l >= 0; --l) {
    tail.add(ladder.logI[(std::size_t)l]);
    suffix[(std::size_t)l] = tail.value();
  }
  for (int j = 0; j <= top; ++j) {
    double size = mode == LadderMode::thm1 ? std::abs(suffix[(std::size_t)j].real())
                                           : std::abs(suffix[(std::size_t)j]);
    double margin = sched.threshold(j) - size;
    if (margin < rep.margin) {
      rep.margin = margin;
      rep.worst_j = j;
    }
  }
  rep.holds = rep.margin >= 0.0;
  return rep;
}

// Shared cache of log I_l values keyed by (l, lattice index), so that the
// all-h sweep does not recompute prime sums for grid points that repeat.
class LadderCache {
 public:
  LadderCache(double t, double P, const PrimeTable& table)
      : t_(t), P_(P), table_(&table) {}

  cd logI(int l, double h) {
    long long key = (long long)std::llround(h * 1e12);
    auto it = cache_.find({l, key});
    if (it != cache_.end()) return it->second;
    cd v = euler_partial(l, t_, h, P_, *table_);
    cache_.insert({{l, key}, v});
    return v;
  }

 private:
  double t_;
  double P_;
  const PrimeTable* table_;
  std::map<std::pair<int, long long>, cd> cache_;
};

// Event over all |h| <= 1/2.  The event depends on h only through the grid
// point h(j) at each scale (h(j) pins down h(l) for every l >= j), so it is
// enough to enumerate the finitely many lattice values per scale.
inline EventReport event_G_all_h(double t, double P,
                                 const BarrierSchedule& sched, LadderMode mode,
                                 const PrimeTable& table,
                                 std::size_t grid_budget = 2'000'000) {
  int top = ladder_top_scale(P, sched.B);
  if (top < 0) throw param_error("event_G_all_h: empty ladder");
  LadderCache cache(t, P, table);
  EventReport rep;
  for (int j = 0; j <= top; ++j) {
    double D = grid_density(j, P, mode);
    long long n_lo = (long long)std::floor(-0.5 * D + 1e-9);
    long long n_hi = (long long)std::floor(0.5 * D + 1e-9);
    if ((std::size_t)(n_hi - n_lo + 1) > grid_budget)
      throw resource_error("event_G_all_h: grid enumeration over budget");
    for (long long n = n_lo; n <= n_hi; ++n) {
      double hj = (double)n / D;
      // Suffix sum with h(l) derived from h(j) by the rounding recursion.
      KahanComplex acc;
      double hl = hj;
      for (int l = j; l <= top; ++l) {
        if (l > j) hl = snap_down(hl, grid_density(l, P, mode));
        acc.add(cache.logI(l, hl));
      }
      double size = mode == LadderMode::thm1 ? std::abs(acc.value().real())
                                             : std::abs(acc.value());
      double margin = sched.threshold(j) - size;
      if (margin < rep.margin) {
        rep.margin = margin;
        rep.worst_j = j;
        rep.worst_h = hj;
      }
    }
  }
  rep.holds = rep.margin >= 0.0;
  return rep;
}

}  // namespace zel
