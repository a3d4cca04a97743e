#pragma once

// Test-only reference implementations, independent of the library code paths
// they check: brute-force grid maximizers and high-precision erf/erfc.

#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

// Maclaurin series in long double; accurate to ~1e-16 for |x| <= 3.
inline long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs((double)add) < 1e-22 * std::fabs((double)sum)) break;
  }
  return sum * 2.0L / std::sqrt(3.14159265358979323846264338327950L);
}

// Continued fraction (modified Lentz) for erfc, accurate for x >= 2.
inline long double erfc_cf(long double x) {
  const long double tiny = 1e-30L;
  long double f = tiny, c = tiny, d = 0.0L;
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  for (int k = 0; k < 400; ++k) {
    long double a = k == 0 ? 1.0L : k / 2.0L;
    long double b = k % 2 == 0 ? x : x; // all partial denominators are x
    if (k == 0) {
      d = b;
      c = b + a / c;
      if (d == 0) d = tiny;
      d = 1.0L / d;
      f = d;
      continue;
    }
    d = b + a * d;
    if (d == 0) d = tiny;
    c = b + a / c;
    if (c == 0) c = tiny;
    d = 1.0L / d;
    long double delta = c * d;
    f *= delta;
    if (std::fabs((double)(delta - 1.0L)) < 1e-20) break;
  }
  return std::exp(-x * x) / std::sqrt(3.14159265358979323846264338327950L) * f;
}

inline long double erf_reference(long double x) {
  long double ax = x < 0 ? -x : x;
  long double v = ax <= 3.0L ? erf_series(ax) : 1.0L - erfc_cf(ax);
  return x < 0 ? -v : v;
}

inline long double erfc_reference(long double x) {
  if (x < -2.0L) return 2.0L - erfc_cf(-x);
  if (x <= 2.0L) return 1.0L - erf_reference(x);
  return erfc_cf(x);
}

// 1-d grid argmax over [lo, hi] with the given step.
inline double grid_argmax(const std::function<double(double)>& f, double lo,
                          double hi, double step) {
  double best_x = lo, best_f = f(lo);
  for (double x = lo + step; x <= hi + 0.5 * step; x += step) {
    double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

// Coarse 1-d grid then two local refinements down to fine_step.
inline double grid_argmax_refined(const std::function<double(double)>& f,
                                  double lo, double hi, double coarse,
                                  double fine_step) {
  double x = grid_argmax(f, lo, hi, coarse);
  double step = coarse;
  while (step > fine_step) {
    double next = std::max(step / 40.0, fine_step);
    x = grid_argmax(f, x - step, x + step, next);
    step = next;
  }
  return x;
}

// 2-d grid argmax; returns (h, sigma).
inline std::pair<double, double> grid_argmax_2d(
    const std::function<double(double, double)>& f, double lo, double hi,
    double step) {
  double best_h = lo, best_s = lo, best_f = f(lo, lo);
  for (double h = lo; h <= hi + 0.5 * step; h += step)
    for (double s = lo; s <= hi + 0.5 * step; s += step) {
      double v = f(h, s);
      if (v > best_f) {
        best_f = v;
        best_h = h;
        best_s = s;
      }
    }
  return {best_h, best_s};
}

inline std::pair<double, double> grid_argmax_2d_refined(
    const std::function<double(double, double)>& f, double lo, double hi,
    double coarse, double fine_step) {
  auto [h, s] = grid_argmax_2d(f, lo, hi, coarse);
  // Alternating 1-d sweeps with re-centering: a coarse 2-d argmax can sit
  // several cells away along a narrow ridge, so each scale walks the axes
  // until the point stops moving before the step shrinks.
  double step = coarse;
  while (true) {
    for (int round = 0; round < 40; ++round) {
      double h_new = grid_argmax([&](double x) { return f(x, s); },
                                 h - 6.0 * step, h + 6.0 * step, step);
      double s_new = grid_argmax([&](double x) { return f(h_new, x); },
                                 s - 6.0 * step, s + 6.0 * step, step);
      bool moved = std::fabs(h_new - h) > 0.5 * step ||
                   std::fabs(s_new - s) > 0.5 * step;
      h = h_new;
      s = s_new;
      if (!moved) break;
    }
    if (step <= fine_step) break;
    step = std::max(step / 10.0, fine_step);
  }
  return {h, s};
}

} // namespace oracle
