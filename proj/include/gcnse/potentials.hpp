#pragma once

#include <cmath>
#include <utility>

#include "gcnse/losses.hpp"
#include "gcnse/types.hpp"

namespace gcnse {

// argmax_h [ -t_bar * l(y h) - (h - mean)^2 / (2 var) ].
// Closed form for the quadratic and hinge losses, safeguarded Newton for the
// logistic loss. t_bar = 0 drops the loss term entirely.
double prox_loss(Loss loss, double y, double mean, double var, int t_bar);

// Logistic branch of prox_loss (out of line; the others inline below).
double prox_logistic(double y, double mean, double var);

namespace detail {

inline double prox_quadratic(double y, double mean, double var) {
  return (mean + y * var) / (1.0 + var);
}

inline double prox_hinge(double y, double mean, double var) {
  double margin = y * mean;
  if (margin >= 1.0) return mean;            // loss inactive
  if (margin <= 1.0 - var) return mean + y * var; // full slope
  return y;                                  // pinned at the kink
}

} // namespace detail

inline double prox_loss_inline(Loss loss, double y, double mean, double var,
                               int t_bar) {
  if (t_bar == 0) return mean;
  switch (loss) {
    case Loss::Quadratic: return detail::prox_quadratic(y, mean, var);
    case Loss::Hinge: return detail::prox_hinge(y, mean, var);
    default: return prox_logistic(y, mean, var);
  }
}

// Maximizer of the weight potential -r w^2/2 - vhat_w w^2/2 + field w with
// field = varsigma sqrt(qhat_w) + u mhat_w. Throws on non-positive curvature.
double argmax_w(double r, double vhat_w, double field);

inline double psi_w_value(double r, double vhat_w, double field, double w) {
  return -0.5 * (r + vhat_w) * w * w + field * w;
}

// Inputs of the output-channel potential for one sample. theta carries the
// current summary statistics; t_bar = 1 marks a revealed (train) node.
struct OutChannelInput {
  double y = 1.0;
  double xi = 0.0, zeta = 0.0, chi = 0.0;
  OrderParams theta;
  double c = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  int t_bar = 1;
};

// Per-iteration constants of the joint (h, sigma) maximization. sigma enters
// the potential quadratically, so for fixed h the optimum is linear in h;
// eliminating sigma leaves a 1-d problem of prox_loss form with effective
// mean omega and variance v_eff. Both branches (t_bar = 1 and 0) come out of
// one solve: the t_bar = 0 maximizer is just (omega, sigma0).
struct OutKernel {
  double c = 0.0;
  double inv_v_w = 0.0, inv_v_sigma = 0.0;
  double s_curv = 0.0; // vhat_sigma + 1/v_w: sigma curvature after h elimination
  double d_curv = 0.0; // s_curv + c^2/v_sigma: sigma curvature at fixed h
  double v_eff = 0.0;
  double sqrt_qhat_sigma = 0.0, sqrt_q_sigma = 0.0, sqrt_q_w = 0.0;
  double mhat_sigma = 0.0, lambda_m_sigma = 0.0, sqrt_mu_m_w = 0.0;

  static OutKernel make(const OrderParams& theta, double c, double lambda,
                        double mu);

  struct Maximizers {
    double h_train, sigma_train; // t_bar = 1
    double h_test, sigma_test;   // t_bar = 0
  };

  Maximizers solve(Loss loss, double y, double xi, double zeta,
                   double chi) const {
    const double field = sqrt_qhat_sigma * xi + y * mhat_sigma;
    const double a = lambda_m_sigma * y + sqrt_q_sigma * zeta;
    const double b = sqrt_mu_m_w * y + sqrt_q_w * chi;
    const double g0 = field + b * inv_v_w;
    const double sigma0 = g0 / s_curv;
    const double omega = c * sigma0 + a;
    const double h1 = prox_loss_inline(loss, y, omega, v_eff, 1);
    const double sigma1 = (g0 + c * (h1 - a) * inv_v_sigma) / d_curv;
    return {h1, sigma1, omega, sigma0};
  }
};

// Joint maximizer of the output potential (spec-facing wrapper over the
// kernel). Returns (h*, sigma*).
std::pair<double, double> argmax_out(const OutChannelInput& in, Loss loss);

// The potential itself, for oracles and derivative checks.
double psi_out_value(const OutChannelInput& in, Loss loss, double h,
                     double sigma);

} // namespace gcnse
