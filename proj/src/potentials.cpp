#include "gcnse/potentials.hpp"

#include <cmath>
#include <cstdio>

#include "gcnse/error.hpp"

namespace gcnse {

double prox_logistic(double y, double mean, double var) {
  // phi(h) = -log(1+exp(-y h)) - (h-mean)^2/(2 var); strictly concave.
  // Newton from h = mean, step halving whenever |phi'| fails to decrease.
  double h = mean;
  double grad = y * (-loss_d1(Loss::Logistic, y * h)) - (h - mean) / var;
  for (int iter = 0; iter < 50; ++iter) {
    double curv = loss_d2(Loss::Logistic, y * h) + 1.0 / var;
    double step = grad / curv;
    double h_new = h + step;
    double grad_new =
        y * (-loss_d1(Loss::Logistic, y * h_new)) - (h_new - mean) / var;
    int halvings = 0;
    while (std::fabs(grad_new) > std::fabs(grad) && halvings < 60) {
      step *= 0.5;
      h_new = h + step;
      grad_new =
          y * (-loss_d1(Loss::Logistic, y * h_new)) - (h_new - mean) / var;
      ++halvings;
    }
    h = h_new;
    grad = grad_new;
    if (std::fabs(step) <= 1e-12) return h;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "prox_logistic: no convergence in 50 Newton steps "
                "(y=%g mean=%g var=%g grad=%g)",
                y, mean, var, grad);
  fail(ErrorCode::Numerical, msg);
}

double prox_loss(Loss loss, double y, double mean, double var, int t_bar) {
  if (!(var > 0.0)) fail(ErrorCode::InvalidArgument, "prox_loss: var must be > 0");
  return prox_loss_inline(loss, y, mean, var, t_bar);
}

double argmax_w(double r, double vhat_w, double field) {
  double curvature = r + vhat_w;
  if (!(curvature > 0.0))
    fail(ErrorCode::DegeneratePotential,
         "argmax_w: non-positive curvature r + vhat_w = " +
             std::to_string(curvature));
  return field / curvature;
}

OutKernel OutKernel::make(const OrderParams& theta, double c, double lambda,
                          double mu) {
  if (!(theta.v_w > 0.0) || !(theta.v_sigma > 0.0))
    fail(ErrorCode::DegeneratePotential,
         "out-channel potential needs v_w > 0 and v_sigma > 0");
  if (theta.q_w < 0.0 || theta.q_sigma < 0.0 || theta.qhat_sigma < 0.0)
    fail(ErrorCode::DegeneratePotential,
         "out-channel potential needs nonnegative q_w, q_sigma, qhat_sigma");
  OutKernel k;
  k.c = c;
  k.inv_v_w = 1.0 / theta.v_w;
  k.inv_v_sigma = 1.0 / theta.v_sigma;
  k.s_curv = theta.vhat_sigma + k.inv_v_w;
  k.d_curv = k.s_curv + c * c * k.inv_v_sigma;
  if (!(k.s_curv > 0.0) || !(k.d_curv > 0.0))
    fail(ErrorCode::DegeneratePotential,
         "out-channel potential is not concave (sigma curvature "
         "vhat_sigma + 1/v_w = " + std::to_string(k.s_curv) + ")");
  k.v_eff = theta.v_sigma * k.d_curv / k.s_curv;
  k.sqrt_qhat_sigma = std::sqrt(theta.qhat_sigma);
  k.sqrt_q_sigma = std::sqrt(theta.q_sigma);
  k.sqrt_q_w = std::sqrt(theta.q_w);
  k.mhat_sigma = theta.mhat_sigma;
  k.lambda_m_sigma = lambda * theta.m_sigma;
  k.sqrt_mu_m_w = std::sqrt(mu) * theta.m_w;
  return k;
}

std::pair<double, double> argmax_out(const OutChannelInput& in, Loss loss) {
  OutKernel kernel = OutKernel::make(in.theta, in.c, in.lambda, in.mu);
  auto m = kernel.solve(loss, in.y, in.xi, in.zeta, in.chi);
  if (in.t_bar == 0) return {m.h_test, m.sigma_test};
  return {m.h_train, m.sigma_train};
}

double psi_out_value(const OutChannelInput& in, Loss loss, double h,
                     double sigma) {
  const OrderParams& t = in.theta;
  const double field = std::sqrt(t.qhat_sigma) * in.xi + in.y * t.mhat_sigma;
  const double h_mean = in.c * sigma + in.lambda * in.y * t.m_sigma +
                        std::sqrt(t.q_sigma) * in.zeta;
  const double s_mean =
      std::sqrt(in.mu) * in.y * t.m_w + std::sqrt(t.q_w) * in.chi;
  const double log_2pi = 1.83787706640934548356065947281123;
  double value = -0.5 * t.vhat_sigma * sigma * sigma + field * sigma;
  if (in.t_bar != 0) value -= loss_eval(loss, in.y * h);
  value += -0.5 * (h - h_mean) * (h - h_mean) / t.v_sigma -
           0.5 * (std::log(t.v_sigma) + log_2pi);
  value += -0.5 * (sigma - s_mean) * (sigma - s_mean) / t.v_w -
           0.5 * (std::log(t.v_w) + log_2pi);
  return value;
}

} // namespace gcnse
