#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "zel/numeric.hpp"

namespace zel {

using u64 = std::uint64_t;

// Immutable table of primes <= limit with cached natural logs.  Safe to
// share across threads once built.
struct PrimeTable {
  u64 limit = 0;
  std::vector<u64> primes;
  std::vector<double> logp;

  // Index of the first prime > x (so [begin, idx) are the primes <= x).
  std::size_t upper_index(double x) const {
    if (x < 2.0) return 0;
    u64 xi = (u64)std::floor(x);
    return (std::size_t)(std::upper_bound(primes.begin(), primes.end(), xi) -
                         primes.begin());
  }
};

// Segmented Eratosthenes.  Segments keep the working set cache-sized, which
// matters once limit reaches ~1e8.
inline PrimeTable sieve(u64 limit) {
  if (limit < 2 || limit > (1ULL << 40))
    throw param_error("sieve: limit must be in [2, 2^40]");

  PrimeTable t;
  t.limit = limit;

  u64 root = (u64)std::sqrt((double)limit);
  while ((root + 1) * (root + 1) <= limit) ++root;
  while (root * root > limit) --root;

  // Base primes up to sqrt(limit) by a plain sieve.
  std::vector<bool> base(root + 1, true);
  for (u64 i = 2; i * i <= root; ++i)
    if (base[i])
      for (u64 j = i * i; j <= root; j += i) base[j] = false;
  std::vector<u64> base_primes;
  for (u64 i = 2; i <= root; ++i)
    if (base[i]) base_primes.push_back(i);

  const u64 seg_size = 1u << 20;
  std::vector<char> seg(seg_size);
  for (u64 lo = 2; lo <= limit; lo += seg_size) {
    u64 hi = std::min(limit, lo + seg_size - 1);
    std::fill(seg.begin(), seg.begin() + (hi - lo + 1), 1);
    for (u64 p : base_primes) {
      if (p * p > hi) break;
      u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (u64 j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (u64 n = lo; n <= hi; ++n)
      if (seg[n - lo]) t.primes.push_back(n);
  }

  t.logp.reserve(t.primes.size());
  for (u64 p : t.primes) t.logp.push_back(std::log((double)p));
  return t;
}

// Unique factorisation n = m * r with every prime factor of m <= P and every
// prime factor of r > P.  Only needs trial division by the table primes <= P;
// whatever is left over is automatically P-rough.
inline std::pair<u64, u64> smooth_rough_split(u64 n, double P,
                                              const PrimeTable& table) {
  if (n < 1) throw param_error("smooth_rough_split: n must be >= 1");
  if (P < 2.0) throw param_error("smooth_rough_split: P must be >= 2");
  // Trial division only needs the primes <= min(P, sqrt(n)): once p^2 > r,
  // any remaining r > 1 is itself prime.
  if ((double)table.limit < std::min(P, std::sqrt((double)n)))
    throw param_error("smooth_rough_split: prime table too small");
  u64 m = 1;
  u64 r = n;
  std::size_t np = table.upper_index(P);
  for (std::size_t i = 0; i < np && r > 1; ++i) {
    u64 p = table.primes[i];
    if (p > r / p) {
      // Remaining r is 1 or prime; fold it into m if it is <= P.
      if (r > 1 && (double)r <= P) {
        m *= r;
        r = 1;
      }
      break;
    }
    while (r % p == 0) {
      m *= p;
      r /= p;
    }
  }
  if (r > 1 && (double)r <= P) {
    // r is a prime <= P that survived the loop bound.
    m *= r;
    r = 1;
  }
  return {m, r};
}

// Sum_{p <= P} 1/p over the sieved primes.
inline double mertens_sum(double P, const PrimeTable& table) {
  if ((double)table.limit < P) throw param_error("mertens_sum: table.limit < P");
  KahanSum<double> s;
  std::size_t np = table.upper_index(P);
  for (std::size_t i = 0; i < np; ++i) s.add(1.0 / (double)table.primes[i]);
  return s.value();
}

// Scale index l = l(p): the unique l >= 0 with P^{e^{-(l+1)}} < p <= P^{e^{-l}}.
// Computed from logs, then the bracketing inequalities are re-checked with a
// small guard band so that boundary primes land on the correct side.
inline int scale_index(u64 p, double P) {
  if (p < 2) throw param_error("scale_index: p must be >= 2");
  if ((double)p > P) throw param_error("scale_index: p must be <= P");
  long double lnP = std::logl((long double)P);
  long double lnp = std::logl((long double)p);
  long double w = std::logl(lnP / lnp);
  int l = (int)std::floor((double)w);
  if (l < 0) l = 0;
  const long double guard = 1e-15L;
  // Want: e^{-(l+1)} lnP < lnp <= e^{-l} lnP.
  while (lnp > std::expl((long double)(-l)) * lnP * (1.0L + guard) && l > 0) --l;
  while (lnp <= std::expl((long double)(-(l + 1))) * lnP * (1.0L + guard)) ++l;
  return l;
}

// Ascending list of the P-smooth integers in [1, x], generated by a DFS over
// prime-power products (smooth sets are sparse for small P, so filtering the
// whole interval would be wasteful).
inline std::vector<u64> enumerate_smooth(double x, double P,
                                         const PrimeTable& table,
                                         std::size_t budget = 4'000'000) {
  if (x < 1.0) throw param_error("enumerate_smooth: x must be >= 1");
  if (P < 2.0) throw param_error("enumerate_smooth: P must be >= 2");
  if ((double)table.limit < P)
    throw param_error("enumerate_smooth: prime table too small");
  u64 xi = (u64)std::floor(x);
  std::size_t np = table.upper_index(P);

  std::vector<u64> out;
  out.push_back(1);
  // Iterative DFS: extend by primes with index >= the last used one.
  struct Node {
    u64 value;
    std::size_t next_prime;
  };
  std::vector<Node> stack;
  stack.push_back({1, 0});
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    for (std::size_t i = nd.next_prime; i < np; ++i) {
      u64 p = table.primes[i];
      if (p > xi / nd.value) break;
      u64 v = nd.value * p;
      out.push_back(v);
      if (out.size() > budget)
        throw resource_error(
            "enumerate_smooth: more than " + std::to_string(budget) +
            " smooth numbers <= " + std::to_string(xi));
      stack.push_back({v, i});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// P-rough integers in [1, y] (all prime factors > P), by striking multiples
// of the primes <= P from a flag array.
inline std::vector<u64> enumerate_rough(double y, double P,
                                        const PrimeTable& table,
                                        std::size_t budget = 50'000'000) {
  if (y < 1.0) throw param_error("enumerate_rough: y must be >= 1");
  u64 yi = (u64)std::floor(y);
  if (yi > budget)
    throw resource_error("enumerate_rough: interval [1, " + std::to_string(yi) +
                         "] exceeds enumeration budget");
  if ((double)table.limit < std::min(P, (double)yi))
    throw param_error("enumerate_rough: prime table too small");
  std::vector<char> rough(yi + 1, 1);
  std::size_t np = table.upper_index(P);
  for (std::size_t i = 0; i < np; ++i) {
    u64 p = table.primes[i];
    if (p > yi) break;
    for (u64 j = p; j <= yi; j += p) rough[j] = 0;
  }
  std::vector<u64> out;
  out.push_back(1);
  for (u64 n = 2; n <= yi; ++n)
    if (rough[n]) out.push_back(n);
  return out;
}

}  // namespace zel
