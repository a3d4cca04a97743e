#include "gcnse/closed_form.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "gcnse/error.hpp"
#include "gcnse/special.hpp"

namespace gcnse {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950;

double effective_mu(const DataParams& dp) {
  return dp.model == Model::Csbm ? dp.mu : 2.0 * dp.alpha / kPi;
}

// Golden-section maximization on a bracket known to contain a single peak.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
  const double inv_phi = 0.61803398874989484820458683436564;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Coarse scan for a unimodal interior peak; returns the refinement bracket or
// fails if more than one strict local maximum shows up.
bool scan_bracket(const std::function<double(double)>& f, double lo, double hi,
                  int n, double* bracket_lo, double* bracket_hi) {
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    fs[i] = f(xs[i]);
  }
  double scale = 0.0;
  for (double v : fs) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-13 * std::max(scale, 1.0);
  int peaks = 0, best = 0;
  for (int i = 1; i + 1 < n; ++i) {
    if (fs[i] > fs[i - 1] + tol && fs[i] > fs[i + 1] + tol) ++peaks;
    if (fs[i] > fs[best]) best = i;
  }
  if (fs[n - 1] > fs[best]) best = n - 1;
  if (peaks > 1) return false;
  *bracket_lo = xs[std::max(0, best - 1)];
  *bracket_hi = xs[std::min(n - 1, best + 1)];
  return true;
}

} // namespace

LargeRStats large_r_stats(const DataParams& dp, const GcnParams& gp) {
  dp.validate(true);
  gp.validate();
  const double a = dp.alpha, l = dp.lambda, c = gp.c, rho = dp.rho, r = gp.r;
  const double mu = effective_mu(dp);
  const double lc = l + c;
  LargeRStats s;
  s.m_w = rho / (a * r) * std::sqrt(mu) * lc;
  s.v_w = 1.0 / (a * r);
  s.q_w = rho / (a * r * r) *
          (1.0 + c * c * (1.0 - rho) + rho * (1.0 + mu) * lc * lc);
  s.m_sigma = rho / (a * r) * (1.0 + mu) * lc;
  s.v_sigma = 1.0 / (a * r);
  if (dp.model == Model::Csbm) {
    s.q_sigma = rho / (a * a * r * r) *
                ((1.0 + a) * (1.0 + c * c * (1.0 - rho)) +
                 rho * (1.0 + mu) * (1.0 + mu + a) * lc * lc);
  } else {
    s.q_sigma = rho / (a * a * r * r) *
                ((1.0 + a) * (1.0 + c * c * (1.0 - rho)) +
                 rho * ((1.0 + mu) * (1.0 + a) + mu) * lc * lc);
  }
  s.mhat_w = rho * std::sqrt(mu) * lc;
  s.qhat_w = rho + rho * (l * rho + c) * (l * rho + c) +
             (1.0 - rho) * l * l * rho * rho;
  s.mhat_sigma = l * rho;
  s.qhat_sigma = rho;
  return s;
}

double misclass_large_r(const DataParams& dp, const GcnParams& gp) {
  const LargeRStats s = large_r_stats(dp, gp);
  const double c = gp.c;
  const double shift = dp.lambda * s.m_sigma + c * s.v_w * s.mhat_sigma;
  if (dp.model == Model::Csbm) {
    const double num = shift + c * std::sqrt(dp.mu) * s.m_w;
    const double var = s.q_sigma + c * c * s.v_w * s.v_w * s.qhat_sigma +
                       c * c * s.q_w;
    return 0.5 * special::erfc(num / std::sqrt(2.0 * var));
  }
  // GLM-SBM: half-line integral over the positive feature-field magnitude
  const double alpha = dp.alpha;
  const double var = s.q_sigma + c * c * s.v_w * s.v_w * s.qhat_sigma +
                     c * c * (s.q_w - alpha * s.m_w * s.m_w);
  if (!(var > 0.0))
    fail(ErrorCode::Numerical, "acc_large_r: non-positive effective variance");
  const double inv_std = 1.0 / std::sqrt(2.0 * var);
  const double slope = c * s.m_w * alpha;
  auto integrand = [&](double z) {
    return special::normal_pdf(z, 0.0, 1.0 / alpha) *
           special::erfc((shift + slope * z) * inv_std);
  };
  return special::integrate(integrand, 0.0, 12.0 / std::sqrt(alpha), 1e-9,
                            1e-10);
}

double acc_large_r(const DataParams& dp, const GcnParams& gp) {
  return 1.0 - misclass_large_r(dp, gp);
}

double sqrt_tau_c0(const DataParams& dp) {
  const double a = dp.alpha, l = dp.lambda, rho = dp.rho;
  const double mu = effective_mu(dp);
  double denom;
  if (dp.model == Model::Csbm) {
    denom = rho * (1.0 + a) +
            l * l * rho * rho * (1.0 + mu) * (1.0 + mu + a);
  } else {
    denom = rho * (1.0 + a) +
            l * l * rho * rho *
                ((1.0 + mu) * (1.0 + a + mu) - mu * mu);
  }
  return l * rho * (1.0 + mu) / (std::sqrt(2.0) * std::sqrt(denom));
}

double acc_large_r_c0(const DataParams& dp) {
  return 0.5 * (1.0 + special::erf(dp.lambda * sqrt_tau_c0(dp)));
}

double rate_inf(const DataParams& dp) {
  const double a = dp.alpha;
  if (dp.model == Model::Csbm)
    return (1.0 + dp.mu) / (2.0 * (1.0 + a + dp.mu));
  const double k = 1.0 + 2.0 * a / kPi;
  return k / (2.0 * (1.0 + a + (2.0 * a / kPi) / k));
}

double c_star(const DataParams& dp, CstarRegime regime) {
  dp.validate();
  if (!(dp.lambda > 0.0))
    fail(ErrorCode::InvalidArgument, "c_star needs lambda > 0");
  const double a = dp.alpha, l = dp.lambda, rho = dp.rho, mu = dp.mu;

  if (regime == CstarRegime::SmallLambda) {
    if (dp.model == Model::GlmSbm)
      fail(ErrorCode::InvalidArgument,
           "c_star: the glm-sbm small-lambda constant has no closed form; "
           "use the finite regime");
    return mu *
           ((1.0 + a) * (2.0 - rho) + rho * (1.0 + mu) * (1.0 + mu + a)) /
           (a * (1.0 + mu) * (2.0 + rho * mu)) / l;
  }

  if (regime == CstarRegime::LargeLambda) {
    if (dp.model == Model::Csbm) return (1.0 + mu + a) / (a * l);
    // glm-sbm: minimize the large-snr misclassification prefactor over
    // c_tilde = lambda c. This is the lambda -> infinity limit of the
    // half-line accuracy integral,
    //   log prefactor = -2 b tau + 2 a^2 tau^2 + log erfc(sqrt(2) a tau),
    // which the finite-lambda maximizer converges to.
    const double k = 1.0 + 2.0 * a / kPi;
    const double tau = rate_inf(dp);
    const double denom2 = (1.0 + a) * k + 2.0 * a / kPi;
    auto log_objective = [&](double ct) {
      const double av = std::sqrt(a) * ct * std::sqrt(2.0 * a / kPi) / k;
      const double bv =
          ct / k - 0.5 * (a * ct * ct + (1.0 + a) / rho) / denom2;
      return -2.0 * bv * tau + 2.0 * av * av * tau * tau +
             std::log(special::erfc(std::sqrt(2.0) * av * tau));
    };
    auto negated = [&](double ct) { return -log_objective(ct); };
    double blo, bhi;
    if (!scan_bracket(negated, 0.0, 50.0, 128, &blo, &bhi))
      fail(ErrorCode::Numerical, "c_star: glm-sbm large-lambda objective is "
                                 "not unimodal on [0, 50]");
    return golden_max(negated, blo, bhi, 1e-8) / l;
  }

  // Finite: maximize the large-r accuracy over c. Maximizing -misclass is the
  // same argmax but stays resolvable where the accuracy saturates to 1.
  auto score = [&](double c) {
    GcnParams gp{Loss::Quadratic, 1.0, c};
    return -misclass_large_r(dp, gp);
  };
  // past lambda ~ 45 even the misclassification underflows; the asymptotic
  // minimizer is the right answer there anyway
  if (misclass_large_r(dp, GcnParams{Loss::Quadratic, 1.0, 0.0}) <= 0.0)
    return c_star(dp, CstarRegime::LargeLambda);
  double lo = 0.0, hi = 10.0 / l;
  double blo, bhi;
  if (!scan_bracket(score, lo, hi, 64, &blo, &bhi)) {
    hi = 20.0 / l;
    if (!scan_bracket(score, lo, hi, 128, &blo, &bhi))
      fail(ErrorCode::Numerical,
           "c_star: accuracy is not unimodal in c on [0, 20/lambda]");
  }
  return golden_max(score, blo, bhi, 1e-8);
}

} // namespace gcnse
