#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "zel/numeric.hpp"
#include "zel/primes.hpp"

namespace zel {

// Dirichlet polynomial sum a_n n^{-(sigma+it)} on an explicit support.
// Convention used throughout: the 1/2-line weight n^{-1/2} is stored in the
// coefficient, so evaluation on the critical line uses sigma = 0 and the
// l2 norm of the coefficients is directly the mean-square of the polynomial.
struct DirichletPoly {
  std::vector<u64> n;
  std::vector<cd> a;
  u64 max_n = 0;
  double l2sq = 0.0;  // sum |a_n|^2, cached at build time

  void finalize() {
    if (n.size() != a.size()) throw param_error("DirichletPoly: size mismatch");
    for (std::size_t i = 1; i < n.size(); ++i)
      if (n[i] <= n[i - 1])
        throw param_error("DirichletPoly: support must be strictly increasing");
    max_n = n.empty() ? 0 : n.back();
    KahanSum<double> s;
    for (const cd& c : a) s.add(std::norm(c));
    l2sq = s.value();
  }
};

inline cd eval_poly(const DirichletPoly& poly, double sigma, double t) {
  KahanComplex acc;
  for (std::size_t i = 0; i < poly.n.size(); ++i) {
    long double ln = std::logl((long double)poly.n[i]);
    double amp = sigma == 0.0 ? 1.0 : std::exp(-sigma * (double)ln);
    acc.add(poly.a[i] * amp * unit_nit(t, ln));
  }
  return acc.value();
}

// Variant with the 80-bit logs precomputed once (hot loops evaluate the same
// polynomial at thousands of t).
struct PolyEvaluator {
  std::vector<long double> logn;
  std::vector<double> amp;  // |a| already folded with n^{-sigma}
  std::vector<double> arg;  // phase of a

  PolyEvaluator(const DirichletPoly& poly, double sigma) {
    logn.reserve(poly.n.size());
    amp.reserve(poly.n.size());
    arg.reserve(poly.n.size());
    for (std::size_t i = 0; i < poly.n.size(); ++i) {
      long double ln = std::logl((long double)poly.n[i]);
      logn.push_back(ln);
      amp.push_back(std::abs(poly.a[i]) *
                    (sigma == 0.0 ? 1.0 : std::exp(-sigma * (double)ln)));
      arg.push_back(std::arg(poly.a[i]));
    }
  }

  cd operator()(double t) const {
    KahanComplex acc;
    for (std::size_t i = 0; i < logn.size(); ++i) {
      double ph = arg[i] - phase_mod_2pi(t, logn[i]);
      acc.add(amp[i] * cd{std::cos(ph), std::sin(ph)});
    }
    return acc.value();
  }
};

// sum over the P-smooth m <= T^eps of m^{-1/2} m^{-it}.
inline DirichletPoly smooth_poly(double T, double eps, double P,
                                 const PrimeTable& table,
                                 std::size_t budget = 4'000'000) {
  double cutoff = std::exp(eps * std::log(T));
  DirichletPoly poly;
  poly.n = enumerate_smooth(cutoff, P, table, budget);
  poly.a.reserve(poly.n.size());
  for (u64 m : poly.n) poly.a.push_back(cd{1.0 / std::sqrt((double)m), 0.0});
  poly.finalize();
  return poly;
}

// sum over the P-rough n <= T^{1/2 - 2 eps} of n^{-1/2} n^{-it}.
inline DirichletPoly rough_poly(double T, double eps, double P,
                                const PrimeTable& table,
                                std::size_t budget = 50'000'000) {
  double cutoff = std::exp((0.5 - 2.0 * eps) * std::log(T));
  DirichletPoly poly;
  poly.n = enumerate_rough(cutoff, P, table, budget);
  poly.a.reserve(poly.n.size());
  for (u64 n : poly.n) poly.a.push_back(cd{1.0 / std::sqrt((double)n), 0.0});
  poly.finalize();
  return poly;
}

// Multiscale decomposition: scale l covers the primes P^{e^{-(l+1)}} < p <=
// P^{e^{-l}}.  top_scale is the largest l kept, floor(loglog P) - B - 1.
inline int ladder_top_scale(double P, int B) {
  if (P < 2.0) throw param_error("ladder_top_scale: P must be >= 2");
  return (int)std::floor(std::log(std::log(P))) - B - 1;
}

struct PrimeRange {
  std::size_t begin;  // indices into table.primes
  std::size_t end;
};

inline PrimeRange scale_range(int l, double P, const PrimeTable& table) {
  if (l < 0) throw param_error("scale_range: l must be >= 0");
  if ((double)table.limit < P) throw param_error("scale_range: table too small");
  double logP = std::log(P);
  double hi = std::exp(std::exp(-(double)l) * logP);
  double lo = std::exp(std::exp(-(double)(l + 1)) * logP);
  return {table.upper_index(lo), table.upper_index(hi)};
}

// log I_{l,t}(h) = -sum over the scale-l primes of Log(1 - p^{-(1/2+it+ih)}),
// principal branch per factor.  |p^{-1/2}| < 1 keeps every factor inside the
// branch cut, so exp of the result reproduces the direct product.
inline cd euler_partial(int l, double t, double h, double P,
                        const PrimeTable& table) {
  PrimeRange r = scale_range(l, P, table);
  KahanComplex acc;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    long double lp = table.logp[i];
    double amp = 1.0 / std::sqrt((double)table.primes[i]);
    cd z = amp * unit_nit(t + h, lp);
    acc.add(-std::log(cd{1.0, 0.0} - z));
  }
  return acc.value();
}

// Values/log-values of the partial products I_l across scales, for one t,
// with a per-scale shift point h(l).
struct EulerLadder {
  double P = 0.0;
  int B = 0;
  std::vector<cd> logI;           // index l = 0 .. top_scale
  std::vector<double> hpoints;    // the h(l) each scale was evaluated at

  int top_scale() const { return (int)logI.size() - 1; }

  // sum_{l >= j} log I_l
  cd suffix(int j) const {
    KahanComplex acc;
    for (std::size_t l = (std::size_t)j; l < logI.size(); ++l) acc.add(logI[l]);
    return acc.value();
  }
};

template <typename HFun>
EulerLadder build_euler_ladder(double t, double P, int B, HFun&& h_of_scale,
                               const PrimeTable& table) {
  int top = ladder_top_scale(P, B);
  if (top < 0)
    throw param_error("build_euler_ladder: empty ladder (loglog P < B + 2)");
  EulerLadder lad;
  lad.P = P;
  lad.B = B;
  for (int l = 0; l <= top; ++l) {
    double h = h_of_scale(l);
    lad.hpoints.push_back(h);
    lad.logI.push_back(euler_partial(l, t, h, P, table));
  }
  return lad;
}

// Truncated exponential proxy for the smooth polynomial:
//   sum_{k=0}^{K} (1/k!) * z^k,
//   z = sum_{p^j <= P} (1/j) p^{-j(1/2 + i t + i h(l(p)))},
// where each prime contributes at the ladder point of its own scale.
template <typename HFun>
cd truncated_exp_proxy(double t, double P, int K, HFun&& h_of_scale,
                       const PrimeTable& table) {
  if (K < 1) throw param_error("truncated_exp_proxy: K must be >= 1");
  if ((double)table.limit < P)
    throw param_error("truncated_exp_proxy: table too small");
  KahanComplex inner;
  std::size_t np = table.upper_index(P);
  for (std::size_t i = 0; i < np; ++i) {
    u64 p = table.primes[i];
    int l = scale_index(p, P);
    double h = h_of_scale(l);
    long double lp = table.logp[i];
    double amp = 1.0;
    double pow_p = 1.0;
    for (int j = 1; pow_p * (double)p <= P; ++j) {
      pow_p *= (double)p;
      amp *= 1.0 / std::sqrt((double)p);
      inner.add((amp / j) * unit_nit(t + h, (long double)j * lp));
    }
  }
  cd z = inner.value();
  cd term{1.0, 0.0};
  cd sum = term;
  for (int k = 1; k <= K; ++k) {
    term *= z / (double)k;
    sum += term;
  }
  return sum;
}

}  // namespace zel
