#include "gcnse/bayes_optimal.hpp"

#include <cfloat>
#include <cmath>

#include "gcnse/special.hpp"

namespace gcnse {

namespace {

constexpr int kHermiteNodes1d = 128; // scalar expectations
constexpr int kHermiteNodes2d = 96;  // per axis of the tensor rule

const special::GaussHermite& hermite_1d() {
  static const special::GaussHermite gh(kHermiteNodes1d);
  return gh;
}
const special::GaussHermite& hermite_2d() {
  static const special::GaussHermite gh(kHermiteNodes2d);
  return gh;
}

// Clip for erf arguments ahead of atanh(erf(.)): beyond |x| = 6 the node is
// effectively perfectly classified.
double clip6(double x) { return x > 6.0 ? 6.0 : (x < -6.0 ? -6.0 : x); }

} // namespace

BoStateCsbm bo_solve_csbm(const DataParams& dp, const SolveConfig& cfg) {
  dp.validate();
  const double delta_i = 2.0 * dp.lambda * dp.lambda;
  const double mu_over_alpha = dp.mu / dp.alpha;
  const auto& gh = hermite_1d();

  BoStateCsbm s;
  s.m_y = dp.rho;
  s.m_u = 0.0;
  s.m = mu_over_alpha * s.m_u + delta_i * s.m_y;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double m_new = mu_over_alpha * s.m_u + delta_i * s.m_y;
    const double root_m = std::sqrt(std::max(m_new, 0.0));
    const double m_y_new =
        dp.rho + (1.0 - dp.rho) * gh.expect([&](double w) {
          return std::tanh(m_new + root_m * w);
        });
    const double m_u_new = dp.mu * m_y_new / (1.0 + dp.mu * m_y_new);
    const double res =
        std::max({std::fabs(m_new - s.m), std::fabs(m_y_new - s.m_y),
                  std::fabs(m_u_new - s.m_u)});
    s.m = m_new;
    s.m_y = m_y_new;
    s.m_u = m_u_new;
    s.iterations = it;
    if (res <= cfg.tol) {
      s.converged = true;
      break;
    }
  }
  return s;
}

double bo_acc_csbm(const BoStateCsbm& s) {
  if (s.m < 0.0) fail(ErrorCode::InvalidArgument, "bo_acc_csbm: m must be >= 0");
  return 0.5 * (1.0 + special::erf(std::sqrt(0.5 * s.m)));
}

double bo_misclass_csbm(const BoStateCsbm& s) {
  if (s.m < 0.0) fail(ErrorCode::InvalidArgument, "bo_acc_csbm: m must be >= 0");
  return 0.5 * special::erfc(std::sqrt(0.5 * s.m));
}

namespace {

// Accumulates E_{xi,eta}[Z_out f_out^2] and E_{xi,eta}[Z_out f_y^2] at
// B = sqrt(delta m_y) xi, A = delta m_y, omega = sqrt(m_u) eta,
// V = rho_u - m_u. The exponential tilt of Z_out is absorbed exactly:
//   Z_out(B, A, .) dPhi(xi) = (1+e)/2 dPhi(xi - sqrt A) + (1-e)/2 dPhi(xi + sqrt A),
// e = erf(omega / sqrt(2V)), so only the bounded factors
//   f_out = 2 N(omega|0,V) t / (1 + t e),  f_y = (t + e)/(1 + t e),
// t = tanh(B), are ever put under the quadrature.
struct UnsupervisedMoments {
  double zf_out_sq = 0.0;
  double zf_y_sq = 0.0;
};

UnsupervisedMoments unsupervised_moments(double delta_m, double m_u,
                                         double rho_u) {
  const auto& gh = hermite_2d();
  const double v = rho_u - m_u;
  const double sqrt_delta_m = std::sqrt(delta_m);
  const double sqrt_m_u = std::sqrt(std::max(m_u, 0.0));
  const double inv_sqrt_2v = 1.0 / std::sqrt(2.0 * v);

  UnsupervisedMoments acc;
  for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
    const double eta = gh.nodes[j];
    const double omega = sqrt_m_u * eta;
    const double erf_x = special::erf(omega * inv_sqrt_2v);
    const double pdf = special::normal_pdf(omega, 0.0, v);
    const double w_plus = 0.5 * (1.0 + erf_x);
    const double w_minus = 0.5 * (1.0 - erf_x);

    double row_f_out = 0.0, row_f_y = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      for (double branch : {1.0, -1.0}) {
        const double b = sqrt_delta_m * gh.nodes[i] + branch * delta_m;
        const double t_b = std::tanh(b);
        const double denom = 1.0 + t_b * erf_x;
        // 0/0 only when both factors saturate; the branch weight is then
        // negligible, and the clamped limit keeps everything bounded
        double f_y = denom > 0.0 ? (t_b + erf_x) / denom : erf_x;
        f_y = std::min(1.0, std::max(-1.0, f_y));
        const double f_out = denom > 0.0 ? 2.0 * pdf * t_b / denom : 0.0;
        const double w_branch = branch > 0.0 ? w_plus : w_minus;
        row_f_out += gh.weights[i] * w_branch * f_out * f_out;
        row_f_y += gh.weights[i] * w_branch * f_y * f_y;
      }
    }
    acc.zf_out_sq += gh.weights[j] * row_f_out;
    acc.zf_y_sq += gh.weights[j] * row_f_y;
  }
  return acc;
}

// E_eta[Z_sup f_sup^2] with Z_sup = (1 + erf(omega/sqrt(2V)))/2 and
// f_sup = N(omega|0,V)/Z_sup.
double supervised_moment(double m_u, double rho_u) {
  const auto& gh = hermite_1d();
  const double v = rho_u - m_u;
  const double sqrt_m_u = std::sqrt(std::max(m_u, 0.0));
  const double inv_sqrt_2v = 1.0 / std::sqrt(2.0 * v);
  return gh.expect([&](double eta) {
    const double omega = sqrt_m_u * eta;
    const double z_sup = 0.5 * special::erfc(-omega * inv_sqrt_2v);
    const double pdf = special::normal_pdf(omega, 0.0, v);
    if (z_sup < DBL_MIN || pdf == 0.0) return 0.0;
    return pdf * pdf / z_sup;
  });
}

} // namespace

BoStateGlmsbm bo_solve_glmsbm(const DataParams& dp, const SolveConfig& cfg) {
  dp.validate();
  BoStateGlmsbm s;
  s.rho_u = 1.0 / dp.alpha;
  s.delta_i = 2.0 * dp.lambda * dp.lambda;
  s.m_y = dp.rho;
  s.m_u = 0.0;
  s.mhat_u = 0.0;
  const double m_u_cap = s.rho_u * (1.0 - 1e-12); // keep V = rho_u - m_u > 0

  // plain iteration is enough in most of the phase diagram; damping kicks in
  // only if the residual starts growing (steep m_u map at large snr)
  double damping = cfg.damping;
  double prev_res = -1.0;
  int growing = 0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double delta_m = s.delta_i * s.m_y;
    const auto uns = unsupervised_moments(delta_m, s.m_u, s.rho_u);
    double mhat_new = dp.rho * supervised_moment(s.m_u, s.rho_u) +
                      (1.0 - dp.rho) * uns.zf_out_sq;
    double m_y_new = dp.rho + (1.0 - dp.rho) * uns.zf_y_sq;
    double m_u_new = s.rho_u * mhat_new / (1.0 + mhat_new);
    if (m_u_new > m_u_cap) m_u_new = m_u_cap;
    if (damping > 0.0) {
      mhat_new = (1.0 - damping) * mhat_new + damping * s.mhat_u;
      m_y_new = (1.0 - damping) * m_y_new + damping * s.m_y;
      m_u_new = (1.0 - damping) * m_u_new + damping * s.m_u;
    }
    const double res =
        std::max({std::fabs(mhat_new - s.mhat_u), std::fabs(m_y_new - s.m_y),
                  std::fabs(m_u_new - s.m_u)});
    s.mhat_u = mhat_new;
    s.m_y = m_y_new;
    s.m_u = m_u_new;
    s.iterations = it;
    if (res <= cfg.tol) {
      s.converged = true;
      break;
    }
    if (prev_res >= 0.0 && res > prev_res) {
      if (++growing >= 2 && damping < 0.9) {
        damping = damping == 0.0 ? 0.5 : std::min(0.9, damping + 0.2);
        growing = 0;
      }
    } else {
      growing = 0;
    }
    prev_res = res;
  }
  return s;
}

double bo_misclass_glmsbm(const BoStateGlmsbm& s) {
  if (!(s.m_u >= 0.0 && s.m_u <= s.rho_u))
    fail(ErrorCode::InvalidArgument,
         "bo_acc_glmsbm: m_u must lie in [0, rho_u]");
  const double v = s.rho_u - s.m_u;
  if (v <= 1e-15 * s.rho_u) return 0.0; // perfect u-recovery branch
  const double delta_m = s.delta_i * s.m_y;
  const double sqrt_m_u = std::sqrt(s.m_u);
  const double inv_sqrt_2v = 1.0 / std::sqrt(2.0 * v);

  // Misclassification as a positive integrand over eta > 0:
  //   (1+a)/2 erfc(D+t) + (1-a)/2 erfc(D-t),
  // a = erf(A), t = atanh(a)/sqrt(2 delta_m), D = sqrt(delta_m/2),
  // A = sqrt(m_u) eta / sqrt(2(rho_u-m_u)). No cancellation at any snr.
  auto integrand = [&](double eta) {
    const double a_arg = clip6(sqrt_m_u * eta * inv_sqrt_2v);
    const double a = special::erf(a_arg);
    const double one_minus_a = special::erfc(a_arg);
    const double phi = special::normal_pdf(eta, 0.0, 1.0);
    if (delta_m < 1e-300) return phi * one_minus_a; // graph carries nothing
    const double d = std::sqrt(0.5 * delta_m);
    const double t = special::atanh_erf(a_arg) / std::sqrt(2.0 * delta_m);
    return phi * 0.5 *
           ((1.0 + a) * special::erfc(d + t) +
            one_minus_a * special::erfc(d - t));
  };
  return special::integrate(integrand, 0.0, 12.0, 1e-9, 1e-9);
}

double bo_acc_glmsbm(const BoStateGlmsbm& s) {
  return 1.0 - bo_misclass_glmsbm(s);
}

double bo_accuracy(const DataParams& dp, const SolveConfig& cfg) {
  if (dp.model == Model::Csbm) return bo_acc_csbm(bo_solve_csbm(dp, cfg));
  return bo_acc_glmsbm(bo_solve_glmsbm(dp, cfg));
}

} // namespace gcnse
