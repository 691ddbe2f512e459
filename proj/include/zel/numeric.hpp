#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace zel {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

using cd = std::complex<double>;

// Error taxonomy used across the library.  The CLI maps param_error and
// resource/numeric errors to exit code 2 ("couldn't run"), as opposed to
// exit code 1 ("ran, checks failed").
struct param_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Compensated (Kahan) accumulator.  Oscillatory sums here can run to 10^6+
// terms at ~1e-16 per-term rounding, so plain accumulation is not enough.
template <typename T>
class KahanSum {
 public:
  void add(T x) {
    T y = x - comp_;
    T t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T comp_{};
};

class KahanComplex {
 public:
  void add(cd z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cd value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum<double> re_;
  KahanSum<double> im_;
};

// Phase t*log(n) reduced mod 2*pi in 80-bit arithmetic.  At t ~ 1e6 the
// product is ~1e7, so double-only reduction would already lose ~1e-9 rad;
// the extended mantissa keeps the error below ~1e-13 rad for t <= 1e12.
inline double phase_mod_2pi(double t, long double log_n) {
  long double p = std::fmodl((long double)t * log_n, kTwoPiL);
  return (double)p;
}

// e^{-i * t * log n}, the unimodular part of n^{-it}.
inline cd unit_nit(double t, long double log_n) {
  double ph = phase_mod_2pi(t, log_n);
  return {std::cos(ph), -std::sin(ph)};
}

// Uniform trapezoid rule over [a, b] with n >= 2 nodes.
template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
  if (n < 2) throw param_error("trapezoid: need at least 2 nodes");
  double h = (b - a) / (n - 1);
  KahanSum<double> acc;
  acc.add(0.5 * f(a));
  for (int i = 1; i + 1 < n; ++i) acc.add(f(a + i * h));
  acc.add(0.5 * f(b));
  return acc.value() * h;
}

// Gauss-Legendre 8-point nodes/weights on [-1, 1].
struct GL8 {
  static constexpr double x[8] = {
      -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
      0.7966664774136267,  0.9602898564975362};
  static constexpr double w[8] = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
};

// Composite 8-point Gauss-Legendre over [a,b] split into `panels` panels.
template <typename F>
double gauss_panels(F&& f, double a, double b, int panels) {
  if (panels < 1) throw param_error("gauss_panels: need at least 1 panel");
  double w = (b - a) / panels;
  KahanSum<double> acc;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * w;
    double mid = lo + 0.5 * w;
    for (int k = 0; k < 8; ++k) acc.add(GL8::w[k] * f(mid + 0.5 * w * GL8::x[k]));
  }
  return acc.value() * 0.5 * w;
}

struct MeanStdErr {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
};

inline MeanStdErr mean_stderr(const std::vector<double>& xs) {
  MeanStdErr r;
  r.n = xs.size();
  if (xs.empty()) return r;
  KahanSum<double> s;
  for (double x : xs) s.add(x);
  r.mean = s.value() / (double)xs.size();
  if (xs.size() < 2) return r;
  KahanSum<double> v;
  for (double x : xs) v.add((x - r.mean) * (x - r.mean));
  double var = v.value() / (double)(xs.size() - 1);
  r.std_err = std::sqrt(var / (double)xs.size());
  return r;
}

// Golden-section maximisation of f on [lo, hi] down to interval width tol.
// Returns (argmax, value).  Also folds in the endpoint evaluations so the
// result never falls below max(f(lo), f(hi)).
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double best_x = f1 > f2 ? x1 : x2;
  double best_f = std::max(f1, f2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
    if (f1 > best_f) best_f = f1, best_x = x1;
    if (f2 > best_f) best_f = f2, best_x = x2;
  }
  double fl = f(lo), fh = f(hi);
  if (fl > best_f) best_f = fl, best_x = lo;
  if (fh > best_f) best_f = fh, best_x = hi;
  return {best_x, best_f};
}

}  // namespace zel
