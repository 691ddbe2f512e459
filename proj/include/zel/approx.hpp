#pragma once

#include <cmath>
#include <vector>

#include "zel/numeric.hpp"

namespace zel {

// Smooth approximants to interval indicators:
//
//   beurling_b:  Selberg's majorant b of 1_{|x| <= 1/2} with Fourier
//                transform supported on [-1/delta, 1/delta], built from the
//                Beurling function
//                B(x) = (sin pi x / pi)^2 (sum_{n>=0} (x-n)^{-2}
//                                          - sum_{n>=1} (x+n)^{-2} + 2/x).
//                Then  b(x) >= 1_{|x| <= 1/2}  and  int b = 1 + delta.
//
//   gamma_fn:    the window convolution
//                gamma(x) = int_{|u| <= R + 1/2} b(x - u) du,
//                which is >= 1 on |x| <= R, <= delta for |x| > R + 1, takes
//                values in [0, 1 + delta], and has
//                |gamma^{(l)}(x)| <= (2R+1)(1+delta)/(pi(l+1)) (2pi/delta)^{l+1}.
//
// Writing (sin pi x / pi)^2 (x-n)^{-2} = K(x-n) with K the Fejer kernel
// sinc^2 removes every singularity, and the series tails are trigamma
// values, so B is evaluated to ~1e-13 with no truncation parameter.

namespace detail {

// (sin(pi u) / (pi u))^2, stable through u = 0.
inline double fejer(double u) {
  double v = kPi * u;
  if (std::abs(v) < 1e-4) {
    double v2 = v * v;
    double s = 1.0 - v2 / 6.0 + v2 * v2 / 120.0;
    return s * s;
  }
  double s = std::sin(v) / v;
  return s * s;
}

// Trigamma psi'(z) for z > 0: recurrence into the asymptotic range, then the
// Bernoulli series through z^{-9} (absolute error < 1e-12 for z >= 10).
inline double trigamma(double z) {
  if (z <= 0.0) throw param_error("trigamma: need z > 0");
  double acc = 0.0;
  while (z < 10.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  double iz = 1.0 / z;
  double iz2 = iz * iz;
  double s = iz + 0.5 * iz2 +
             iz * iz2 * (1.0 / 6.0 +
                         iz2 * (-1.0 / 30.0 + iz2 * (1.0 / 42.0 - iz2 / 30.0)));
  return acc + s;
}

// Beurling's majorant of sgn(x).
inline double beurling_B(double x) {
  // Peel explicit Fejer terms around x, leave trigamma tails.
  double sin_factor = fejer(x) * x * x * kPi * kPi;  // sin^2(pi x)
  double result = 2.0 * x * fejer(x);
  int n0 = (int)std::floor(x) + 3;  // peel n = 0 .. n0-1 on the minus side
  if (n0 < 3) n0 = 3;
  for (int n = 0; n < n0; ++n) result += fejer(x - (double)n);
  result += sin_factor / (kPi * kPi) * trigamma((double)n0 - x);
  const int m0 = 3;  // peel n = 1 .. m0 on the plus side
  for (int n = 1; n <= m0; ++n) result -= fejer(x + (double)n);
  result -= sin_factor / (kPi * kPi) * trigamma((double)m0 + 1.0 + x);
  return result;
}

}  // namespace detail

// Selberg majorant of 1_{|x| <= 1/2} at bandwidth 1/delta.
inline double beurling_b(double x, double delta) {
  if (delta <= 0.0 || delta > 1.0)
    throw param_error("beurling_b: delta must be in (0, 1]");
  double scale = 1.0 / delta;
  return 0.5 * (detail::beurling_B(scale * (x + 0.5)) +
                detail::beurling_B(scale * (0.5 - x)));
}

struct GammaApprox {
  double R = 0.0;
  double delta = 0.1;
  int panels_per_delta = 4;  // convolution quadrature: GL8 panels of width delta/4

  void validate() const {
    if (R < 0.0) throw param_error("GammaApprox: R must be >= 0");
    if (delta <= 0.0 || delta > 1.0)
      throw param_error("GammaApprox: delta must be in (0, 1]");
    if (panels_per_delta < 1) throw param_error("GammaApprox: panel spec");
  }
};

inline double gamma_fn(const GammaApprox& ga, double x) {
  ga.validate();
  double w = ga.R + 0.5;
  int panels = (int)std::ceil(2.0 * w / (ga.delta / ga.panels_per_delta));
  if (panels < 1) panels = 1;
  double v = gauss_panels([&](double u) { return beurling_b(u, ga.delta); },
                          x - w, x + w, panels);
  if (!std::isfinite(v)) throw numeric_error("gamma_fn: quadrature failed");
  return v;
}

struct DerivativeReport {
  int l = 0;
  double max_fd_derivative = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline double gamma_derivative_bound(double R, double delta, int l) {
  return (2.0 * R + 1.0) * (1.0 + delta) / (kPi * (l + 1)) *
         std::pow(kTwoPi / delta, l + 1);
}

// Central finite differences of gamma of order l on the given grid, checked
// against the closed-form derivative bound.
inline DerivativeReport gamma_derivative_check(const GammaApprox& ga, int l,
                                               const std::vector<double>& grid,
                                               double step = 0.0) {
  ga.validate();
  if (l < 1 || l > 4)
    throw param_error("gamma_derivative_check: l must be in [1, 4]");
  double h = step > 0.0 ? step : ga.delta / 16.0;
  if (h < ga.delta / 1000.0 || h > ga.delta / 2.0)
    throw param_error(
        "gamma_derivative_check: step must be in [delta/1000, delta/2]");
  auto g = [&](double x) { return gamma_fn(ga, x); };
  DerivativeReport rep;
  rep.l = l;
  rep.bound = gamma_derivative_bound(ga.R, ga.delta, l);
  for (double x : grid) {
    double d = 0.0;
    switch (l) {
      case 1:
        d = (g(x + h) - g(x - h)) / (2.0 * h);
        break;
      case 2:
        d = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
        break;
      case 3:
        d = (g(x + 2 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2 * h)) /
            (2.0 * h * h * h);
        break;
      case 4:
        d = (g(x + 2 * h) - 4.0 * g(x + h) + 6.0 * g(x) - 4.0 * g(x - h) +
             g(x - 2 * h)) /
            (h * h * h * h);
        break;
    }
    rep.max_fd_derivative = std::max(rep.max_fd_derivative, std::abs(d));
  }
  rep.pass = rep.max_fd_derivative <= rep.bound;
  return rep;
}

}  // namespace zel
