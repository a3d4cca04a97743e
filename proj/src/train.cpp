#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gcnse/losses.hpp"
#include "gcnse/simulator.hpp"

namespace gcnse {

namespace {

constexpr double kHingeSmoothWidth = 1e-4;
constexpr double kKinkBand = 1e-9;

// Rows of (1/n) Q(Atilde) X restricted to a mask.
Eigen::MatrixXd filter_rows(const Dataset& ds, SimWorkspace& ws, double c,
                            const std::vector<std::int32_t>& mask) {
  const Eigen::MatrixXd& p = ws.get(ds);
  const double cs = c / std::sqrt(static_cast<double>(ds.n));
  Eigen::MatrixXd b(mask.size(), ds.m_dim);
  for (std::size_t k = 0; k < mask.size(); ++k)
    b.row(k) = p.row(mask[k]) + cs * ds.features.row(mask[k]);
  return b;
}

Eigen::VectorXd masked_labels(const Dataset& ds,
                              const std::vector<std::int32_t>& mask) {
  Eigen::VectorXd y(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) y(k) = ds.labels(mask[k]);
  return y;
}

// Smoothed hinge: corner of width `delta` at margin 1 (quadratic patch).
double hinge_smooth_eval(double x, double delta) {
  const double z = 1.0 - x;
  if (z <= 0.0) return 0.0;
  if (z < delta) return 0.5 * z * z / delta;
  return z - 0.5 * delta;
}
double hinge_smooth_d1(double x, double delta) {
  const double z = 1.0 - x;
  if (z <= 0.0) return 0.0;
  if (z < delta) return -z / delta;
  return -1.0;
}

struct SmoothObjective {
  const Eigen::MatrixXd& b;
  const Eigen::VectorXd& y;
  Loss loss;
  double r;
  double scale; // 1 / |train|
  bool smoothed_hinge = false;

  double value(const Eigen::VectorXd& w) const {
    Eigen::VectorXd h = b * w;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      const double margin = y(i) * h(i);
      acc += smoothed_hinge ? hinge_smooth_eval(margin, kHingeSmoothWidth)
                            : loss_eval(loss, margin);
    }
    return scale * (acc + 0.5 * r * w.squaredNorm());
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& w) const {
    Eigen::VectorXd h = b * w;
    Eigen::VectorXd slopes(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      const double margin = y(i) * h(i);
      const double d = smoothed_hinge ? hinge_smooth_d1(margin, kHingeSmoothWidth)
                                      : loss_d1(loss, margin);
      slopes(i) = d * y(i);
    }
    return scale * (b.transpose() * slopes + r * w);
  }
};

// FISTA with backtracking and gradient restarts, run to a sup-norm gradient
// target.
Eigen::VectorXd fista(const SmoothObjective& obj, Eigen::VectorXd w,
                      double grad_tol, long max_steps, double* last_grad_norm) {
  Eigen::VectorXd w_prev = w;
  Eigen::VectorXd look = w;
  double momentum = 1.0;
  double lip = obj.scale * (obj.r + 1.0);
  double grad_norm = obj.gradient(w).lpNorm<Eigen::Infinity>();
  for (long step = 0; step < max_steps; ++step) {
    if (grad_norm <= grad_tol) {
      if (last_grad_norm) *last_grad_norm = grad_norm;
      return w;
    }
    const Eigen::VectorXd g = obj.gradient(look);
    const double f_look = obj.value(look);
    Eigen::VectorXd w_new;
    for (;;) {
      w_new = look - g / lip;
      const Eigen::VectorXd dw = w_new - look;
      const double upper = f_look + g.dot(dw) + 0.5 * lip * dw.squaredNorm();
      if (obj.value(w_new) <= upper + 1e-18 * std::fabs(upper)) break;
      lip *= 2.0;
    }
    const double momentum_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    Eigen::VectorXd look_new =
        w_new + ((momentum - 1.0) / momentum_new) * (w_new - w);
    // gradient-based restart keeps the strongly convex case linear
    if (g.dot(w_new - w) > 0.0) {
      look_new = w_new;
      momentum = 1.0;
    } else {
      momentum = momentum_new;
    }
    w_prev = w;
    w = w_new;
    look = look_new;
    lip *= 0.97;
    grad_norm = obj.gradient(w).lpNorm<Eigen::Infinity>();
  }
  if (last_grad_norm) *last_grad_norm = grad_norm;
  char msg[128];
  std::snprintf(msg, sizeof msg,
                "train_gcn: step budget exhausted, |grad|_inf = %.3e",
                grad_norm);
  fail(ErrorCode::Unconverged, msg);
}

// Exact hinge solution by dual coordinate descent on
//   max_{0 <= a <= 1} sum a_i - (1/2r) || sum a_i y_i b_i ||^2,
// with w = (1/r) sum a_i y_i b_i. At the exit every strictly violated margin
// has a_i pinned to its bound, so a = beta is a valid subgradient choice and
// the reconstructed w is exactly stationary.
Eigen::VectorXd hinge_dual_polish(const Eigen::MatrixXd& b,
                                  const Eigen::VectorXd& y, double r,
                                  const Eigen::VectorXd& w_start,
                                  long max_sweeps) {
  const Eigen::Index n = b.rows();
  Eigen::VectorXd row_sq(n);
  for (Eigen::Index i = 0; i < n; ++i) row_sq(i) = b.row(i).squaredNorm();

  // warm start from the smoothed solution's margins
  Eigen::VectorXd alpha(n);
  Eigen::VectorXd h = b * w_start;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double margin = y(i) * h(i);
    if (margin <= 1.0 - kHingeSmoothWidth) alpha(i) = 1.0;
    else if (margin >= 1.0) alpha(i) = 0.0;
    else alpha(i) = (1.0 - margin) / kHingeSmoothWidth;
  }
  Eigen::VectorXd w = b.transpose() * (alpha.cwiseProduct(y)) / r;

  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_sq(i) < 1e-300) continue;
      const double margin = y(i) * b.row(i).dot(w);
      double a_new = alpha(i) + r * (1.0 - margin) / row_sq(i);
      a_new = std::min(1.0, std::max(0.0, a_new));
      const double delta = a_new - alpha(i);
      if (delta != 0.0) {
        w += (delta * y(i) / r) * b.row(i).transpose();
        alpha(i) = a_new;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    if (max_delta <= 1e-13) {
      // rebuild w exactly from alpha, then check complementarity
      w = b.transpose() * (alpha.cwiseProduct(y)) / r;
      h = b * w;
      double viol = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double margin = y(i) * h(i);
        if (margin < 1.0 - kKinkBand) viol = std::max(viol, 1.0 - alpha(i));
        else if (margin > 1.0 + kKinkBand) viol = std::max(viol, alpha(i));
      }
      if (viol <= 1e-12) return w;
    }
  }
  fail(ErrorCode::Unconverged,
       "train_gcn: hinge dual coordinate descent did not reach "
       "complementarity");
}

} // namespace

Eigen::VectorXd train_gcn(const Dataset& ds, const GcnParams& gp,
                          const TrainConfig& tc, SimWorkspace& ws) {
  gp.validate();
  tc.validate();
  if (ds.train_mask.empty())
    fail(ErrorCode::InvalidArgument, "train_gcn: empty train mask");

  const Eigen::MatrixXd b = filter_rows(ds, ws, gp.c, ds.train_mask);
  const Eigen::VectorXd y = masked_labels(ds, ds.train_mask);
  const double scale = 1.0 / static_cast<double>(ds.train_mask.size());

  if (tc.step_rule == TrainConfig::StepRule::ExactRidge) {
    if (gp.loss != Loss::Quadratic)
      fail(ErrorCode::InvalidArgument,
           "ExactRidge applies to the quadratic loss only");
    Eigen::MatrixXd gram = b.transpose() * b;
    gram.diagonal().array() += gp.r;
    const Eigen::VectorXd rhs = b.transpose() * y;
    Eigen::LLT<Eigen::MatrixXd> chol(gram);
    if (chol.info() != Eigen::Success)
      fail(ErrorCode::Numerical, "ExactRidge: factorization failed");
    Eigen::VectorXd w = chol.solve(rhs);
    w += chol.solve(rhs - gram * w); // one refinement pass
    return w;
  }

  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(ds.m_dim);
  if (gp.loss == Loss::Hinge) {
    SmoothObjective smooth{b, y, gp.loss, gp.r, scale, true};
    double dummy;
    Eigen::VectorXd w_smooth =
        fista(smooth, w0, std::max(tc.grad_tol, 1e-8), tc.max_steps, &dummy);
    const long sweeps = std::max<long>(200, tc.max_steps / std::max<Eigen::Index>(1, b.rows()));
    return hinge_dual_polish(b, y, gp.r, w_smooth, sweeps);
  }
  SmoothObjective obj{b, y, gp.loss, gp.r, scale, false};
  double last = 0.0;
  return fista(obj, w0, tc.grad_tol, tc.max_steps, &last);
}

Eigen::VectorXd train_gcn(const Dataset& ds, const GcnParams& gp,
                          const TrainConfig& tc) {
  SimWorkspace ws;
  return train_gcn(ds, gp, tc, ws);
}

double erm_subgradient_norm(const Dataset& ds, const Eigen::VectorXd& w,
                            const GcnParams& gp, double kink_band,
                            SimWorkspace& ws) {
  const Eigen::MatrixXd b = filter_rows(ds, ws, gp.c, ds.train_mask);
  const Eigen::VectorXd y = masked_labels(ds, ds.train_mask);
  const double scale = 1.0 / static_cast<double>(ds.train_mask.size());
  const Eigen::VectorXd h = b * w;

  if (gp.loss != Loss::Hinge) {
    Eigen::VectorXd slopes(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i)
      slopes(i) = loss_d1(gp.loss, y(i) * h(i)) * y(i);
    return (scale * (b.transpose() * slopes + gp.r * w))
        .lpNorm<Eigen::Infinity>();
  }

  // fixed part: slope -1 on strictly active margins, 0 on inactive ones
  Eigen::VectorXd g0 = gp.r * w;
  std::vector<Eigen::Index> kinks;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double margin = y(i) * h(i);
    if (margin < 1.0 - kink_band) g0 -= y(i) * b.row(i).transpose();
    else if (margin <= 1.0 + kink_band) kinks.push_back(i);
  }
  g0 *= scale;
  if (kinks.empty()) return g0.lpNorm<Eigen::Infinity>();

  // choose the free subgradient coefficients on the kinks to minimize the
  // norm: a small box-constrained least squares solved by projected gradient
  Eigen::MatrixXd v(ds.m_dim, kinks.size());
  for (std::size_t k = 0; k < kinks.size(); ++k)
    v.col(k) = scale * y(kinks[k]) * b.row(kinks[k]).transpose();
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(kinks.size(), 0.5);
  const double lip = std::max(1e-300, (v.transpose() * v).norm());
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd residual = g0 - v * beta;
    Eigen::VectorXd step = v.transpose() * residual / lip;
    Eigen::VectorXd beta_new =
        (beta + step).cwiseMax(0.0).cwiseMin(1.0);
    if ((beta_new - beta).lpNorm<Eigen::Infinity>() < 1e-15) {
      beta = beta_new;
      break;
    }
    beta = beta_new;
  }
  return (g0 - v * beta).lpNorm<Eigen::Infinity>();
}

double erm_subgradient_norm(const Dataset& ds, const Eigen::VectorXd& w,
                            const GcnParams& gp, double kink_band) {
  SimWorkspace ws;
  return erm_subgradient_norm(ds, w, gp, kink_band, ws);
}

} // namespace gcnse
