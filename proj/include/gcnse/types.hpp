#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gcnse/error.hpp"

namespace gcnse {

enum class Model { Csbm, GlmSbm };
enum class Loss { Quadratic, Logistic, Hinge };

inline const char* to_string(Model m) {
  return m == Model::Csbm ? "csbm" : "glm-sbm";
}
inline const char* to_string(Loss l) {
  switch (l) {
    case Loss::Quadratic: return "quadratic";
    case Loss::Logistic: return "logistic";
    default: return "hinge";
  }
}

// sign(0) = +1 everywhere (labels, accuracy checks).
inline double sign_pm(double x) { return x >= 0.0 ? 1.0 : -1.0; }

// Generative-model knobs. alpha = N/M is the node/feature-dimension ratio,
// lambda the graph snr, mu the feature snr (CSBM only), rho the train
// fraction, d the average degree (finite-N simulator only).
struct DataParams {
  Model model = Model::Csbm;
  double alpha = 1.0;
  double lambda = 1.0;
  double mu = 0.0;
  double rho = 0.1;
  double rho_test = -1.0; // <0 means "complement of the train set"
  double d = 30.0;

  double test_fraction() const {
    return rho_test < 0.0 ? 1.0 - rho : rho_test;
  }
  double feature_snr() const {
    return model == Model::GlmSbm ? 0.0 : mu;
  }

  // Validates the user-facing invariants. The solver itself tolerates
  // lambda < 0 (heterophilic graphs); the CLI rejects it.
  void validate(bool allow_negative_lambda = false) const {
    if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "alpha must be > 0");
    if (!allow_negative_lambda && lambda < 0.0)
      fail(ErrorCode::InvalidArgument, "lambda must be >= 0");
    if (mu < 0.0) fail(ErrorCode::InvalidArgument, "mu must be >= 0");
    if (!(rho > 0.0 && rho <= 1.0))
      fail(ErrorCode::InvalidArgument, "rho must be in (0, 1]");
    double rt = test_fraction();
    if (rt < 0.0 || rho + rt > 1.0 + 1e-12)
      fail(ErrorCode::InvalidArgument, "rho + rho_test must be <= 1");
    if (!(d > 0.0)) fail(ErrorCode::InvalidArgument, "d must be > 0");
  }
};

// Learner knobs: loss, l2 regularization strength r > 0, self-loop strength c.
struct GcnParams {
  Loss loss = Loss::Quadratic;
  double r = 1.0;
  double c = 0.0;

  void validate() const {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "r must be > 0");
  }
};

// The twelve summary statistics: the Theta block (m, Q, V for the weight and
// the projected-feature channels) and its conjugate hat block.
struct OrderParams {
  double m_w = 0.0, m_sigma = 0.0;
  double q_w = 0.0, q_sigma = 0.0;
  double v_w = 1.0, v_sigma = 1.0;
  double mhat_w = 0.0, mhat_sigma = 0.0;
  double qhat_w = 0.0, qhat_sigma = 0.0;
  double vhat_w = 0.0, vhat_sigma = 0.0;

  std::array<double, 12> as_array() const {
    return {m_w, m_sigma, q_w, q_sigma, v_w, v_sigma,
            mhat_w, mhat_sigma, qhat_w, qhat_sigma, vhat_w, vhat_sigma};
  }
  static OrderParams from_array(const std::array<double, 12>& a) {
    OrderParams t;
    t.m_w = a[0]; t.m_sigma = a[1]; t.q_w = a[2]; t.q_sigma = a[3];
    t.v_w = a[4]; t.v_sigma = a[5]; t.mhat_w = a[6]; t.mhat_sigma = a[7];
    t.qhat_w = a[8]; t.qhat_sigma = a[9]; t.vhat_w = a[10]; t.vhat_sigma = a[11];
    return t;
  }

  // Sup-norm distance over the non-hat block only; at a fixed point the hat
  // block is a function of the Theta block.
  double theta_distance(const OrderParams& o) const {
    double d = 0.0;
    auto upd = [&d](double a, double b) {
      double v = a > b ? a - b : b - a;
      if (v > d) d = v;
    };
    upd(m_w, o.m_w); upd(m_sigma, o.m_sigma);
    upd(q_w, o.q_w); upd(q_sigma, o.q_sigma);
    upd(v_w, o.v_w); upd(v_sigma, o.v_sigma);
    return d;
  }
};

// Average losses and accuracies on the train and test channels.
struct Metrics {
  double e_train = 0.0;
  double e_test = 0.0;
  double acc_train = 0.0;
  double acc_test = 0.0;
};

} // namespace gcnse
