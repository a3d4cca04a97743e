#include "gcnse/special.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "gcnse/error.hpp"

namespace gcnse::special {

namespace {

// Cody's minimax coefficients (rational Chebyshev approximation of erf/erfc).
constexpr double kErfA[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                             3.77485237685302021e02, 3.20937758913846947e03,
                             1.85777706184603153e-1};
constexpr double kErfB[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                             1.28261652607737228e03, 2.84423683343917062e03};
constexpr double kErfcC[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                              6.61191906371416295e01, 2.98635138197400131e02,
                              8.81952221241769090e02, 1.71204761263407058e03,
                              2.05107837782607147e03, 1.23033935479799725e03,
                              2.15311535474403846e-8};
constexpr double kErfcD[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                              5.37181101862009858e02, 1.62138957456669019e03,
                              3.29079923573345963e03, 4.36261909014324716e03,
                              3.43936767414372164e03, 1.23033935480374942e03};
constexpr double kErfcP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                              1.25781726111229246e-1, 1.60837851487422766e-2,
                              6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kErfcQ[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                              5.27905102951428412e-1, 6.05183413124413191e-2,
                              2.33520497626869185e-3};
constexpr double kInvSqrtPi = 5.6418958354775628695e-1;
constexpr double kErfcUnderflow = 26.543;

// exp(-x*x) split into an exact part and a small correction so the squaring
// does not lose low bits at large x.
double exp_neg_sq(double x) {
  double xi = std::floor(x * 16.0) / 16.0;
  double del = (x - xi) * (x + xi);
  return std::exp(-xi * xi) * std::exp(-del);
}

// erfc(x) for x > 0.46875.
double erfc_positive(double x) {
  if (x <= 4.0) {
    double num = kErfcC[8] * x;
    double den = x;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfcC[i]) * x;
      den = (den + kErfcD[i]) * x;
    }
    return exp_neg_sq(x) * (num + kErfcC[7]) / (den + kErfcD[7]);
  }
  if (x >= kErfcUnderflow) return 0.0;
  double inv_sq = 1.0 / (x * x);
  double num = kErfcP[5] * inv_sq;
  double den = inv_sq;
  for (int i = 0; i < 4; ++i) {
    num = (num + kErfcP[i]) * inv_sq;
    den = (den + kErfcQ[i]) * inv_sq;
  }
  double tail = inv_sq * (num + kErfcP[4]) / (den + kErfcQ[4]);
  return exp_neg_sq(x) * (kInvSqrtPi - tail) / x;
}

} // namespace

double erf(double x) {
  double ax = std::fabs(x);
  if (ax <= 0.46875) {
    double sq = ax > 1e-300 ? x * x : 0.0;
    double num = kErfA[4] * sq;
    double den = sq;
    for (int i = 0; i < 3; ++i) {
      num = (num + kErfA[i]) * sq;
      den = (den + kErfB[i]) * sq;
    }
    return x * (num + kErfA[3]) / (den + kErfB[3]);
  }
  double result = 1.0 - erfc_positive(ax);
  return x < 0.0 ? -result : result;
}

double erfc(double x) {
  if (x < -0.46875) return 2.0 - erfc_positive(-x);
  if (x <= 0.46875) return 1.0 - erf(x);
  return erfc_positive(x);
}

double atanh_erf(double x) {
  if (x == 0.0) return 0.0;
  double ax = std::fabs(x);
  double complement = erfc(ax); // in (0, 1]
  if (complement <= 0.0)
    fail(ErrorCode::Numerical, "atanh_erf: erfc underflow at |x| = " +
                                   std::to_string(ax));
  double value = 0.5 * std::log((2.0 - complement) / complement);
  return x < 0.0 ? -value : value;
}

GaussHermite::GaussHermite(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "GaussHermite: n must be >= 1");
  // Jacobi matrix of the (physicists') Hermite recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double beta = std::sqrt(0.5 * k);
    jacobi(k - 1, k) = beta;
    jacobi(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(n);
  weights.resize(n);
  const double sqrt2 = 1.41421356237309504880168872420970;
  for (int i = 0; i < n; ++i) {
    nodes[i] = sqrt2 * es.eigenvalues()(i); // argument for a N(0,1) average
    double v0 = es.eigenvectors()(0, i);
    weights[i] = v0 * v0; // first-component weights sum to 1
  }
}

double GaussHermite::expect(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
  return acc;
}

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK abscissae/weights).
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  double half = 0.5 * (b - a);
  double center = 0.5 * (a + b);
  double fc = f(center);
  double gauss = fc * kGaussW[3];
  double kron = fc * kKronrodW[7];
  for (int j = 0; j < 7; ++j) {
    double dx = half * kKronrodX[j];
    double fsum = f(center - dx) + f(center + dx);
    kron += fsum * kKronrodW[j];
    if (j % 2 == 1) gauss += fsum * kGaussW[j / 2];
  }
  return {kron * half, std::fabs(kron - gauss) * std::fabs(half)};
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, int max_intervals) {
  if (a == b) return 0.0;
  struct Interval {
    double a, b, integral, error;
  };
  PanelResult whole = gk15(f, a, b);
  std::vector<Interval> heap{{a, b, whole.integral, whole.error}};
  double total = whole.integral;
  double total_err = whole.error;
  int panels = 1;
  while (total_err > abs_tol && total_err > rel_tol * std::fabs(total)) {
    if (panels >= max_intervals)
      fail(ErrorCode::Numerical,
           "integrate: tolerance not reached after " +
               std::to_string(panels) + " panels (err=" +
               std::to_string(total_err) + ")");
    // split the interval with the largest error estimate
    std::size_t worst = 0;
    for (std::size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;
    Interval iv = heap[worst];
    double mid = 0.5 * (iv.a + iv.b);
    PanelResult left = gk15(f, iv.a, mid);
    PanelResult right = gk15(f, mid, iv.b);
    total += left.integral + right.integral - iv.integral;
    total_err += left.error + right.error - iv.error;
    heap[worst] = {iv.a, mid, left.integral, left.error};
    heap.push_back({mid, iv.b, right.integral, right.error});
    ++panels;
  }
  return total;
}

} // namespace gcnse::special
