#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace gcnse::special {

// Error function and complement, computed by the Cody rational minimax
// approximations (three regimes). Self-contained so results do not depend on
// the platform libm; max abs error is well below 1e-14 on [-6, 6] and erfc
// keeps full relative precision out to its underflow near x = 26.5.
double erf(double x);
double erfc(double x);

// atanh(erf(x)) without catastrophic cancellation near |erf| = 1:
// 0.5 * log((2 - erfc(x)) / erfc(x)) for x >= 0, odd in x.
double atanh_erf(double x);

inline double normal_pdf(double x, double mean, double var);
inline double normal_cdf(double x); // standard normal

// Gauss-Hermite rule for E_{W ~ N(0,1)}[f(W)]: sum_i weight[i] * f(node[i]).
// Nodes/weights come from the Golub-Welsch eigen decomposition of the Jacobi
// matrix and already absorb the 1/sqrt(pi) normalization and sqrt(2) scaling.
struct GaussHermite {
  explicit GaussHermite(int n);
  double expect(const std::function<double(double)>& f) const;
  std::vector<double> nodes;   // arguments of f
  std::vector<double> weights; // sum to 1
};

// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Throws ErrorCode::Numerical if
// the tolerance cannot be certified within the evaluation budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol = 1e-10,
                 int max_intervals = 4000);

} // namespace gcnse::special

namespace gcnse::special {

inline double normal_pdf(double x, double mean, double var) {
  const double inv_sqrt_2pi = 0.39894228040143267793994605993438;
  double z = x - mean;
  return inv_sqrt_2pi / std::sqrt(var) * std::exp(-0.5 * z * z / var);
}

inline double normal_cdf(double x) {
  return 0.5 * erfc(-x * 0.70710678118654752440084436210485);
}

} // namespace gcnse::special
