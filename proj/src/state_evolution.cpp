#include "gcnse/state_evolution.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "gcnse/losses.hpp"
#include "gcnse/rng.hpp"
#include "gcnse/special.hpp"

namespace gcnse {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr double kQhatFloor = 1e-14;

// Deterministic blocked reduction. Partial sums are accumulated sequentially
// inside fixed-size blocks and merged in block order, so the total is bitwise
// identical for any worker count.
template <std::size_t NS, class PerSample>
std::array<double, NS> blocked_reduce(std::size_t count, int workers,
                                      PerSample&& per_sample) {
  const std::size_t n_blocks = (count + kBlock - 1) / kBlock;
  std::vector<std::array<double, NS>> partials(n_blocks);
  auto run_block = [&](std::size_t b) {
    std::array<double, NS>& acc = partials[b];
    acc.fill(0.0);
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t k = b * kBlock; k < end; ++k) per_sample(k, acc);
  };
  if (workers <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    const int n_threads = std::min<std::size_t>(workers, n_blocks);
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (std::size_t b = t; b < n_blocks; b += n_threads) run_block(b);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::array<double, NS> total;
  total.fill(0.0);
  for (std::size_t b = 0; b < n_blocks; ++b)
    for (std::size_t i = 0; i < NS; ++i) total[i] += partials[b][i];
  return total;
}

double floored_sqrt_qhat(double qhat, bool* flag) {
  if (qhat < kQhatFloor) {
    if (flag) *flag = true;
    qhat = kQhatFloor;
  }
  return std::sqrt(qhat);
}

void check_finite(double value, const char* equation) {
  if (!std::isfinite(value))
    fail(ErrorCode::SingularIteration,
         std::string("non-finite update in the ") + equation + " equation");
}

struct WChannel {
  double inv_curv;     // 1 / (r + vhat_w)
  double sqrt_qhat_w;  // unfloored: enters the field, not a division
  double mhat_w;
};

// Sums shared by both models. Index map:
// 0 m_sigma | 1 q_sigma | 2 v_sigma | 3 mhat_w | 4 qhat_w | 5 vhat_w
// 6 mhat_sigma | 7 qhat_sigma | 8 vhat_sigma | 9 u w* | 10 w*^2 | 11 vs w*
constexpr std::size_t kNumSums = 12;

OrderParams assemble(const OrderParams& theta, const DataParams& dp,
                     const std::array<double, kNumSums>& sums,
                     std::size_t count, double mhat_w_prefactor,
                     bool* qhat_floored) {
  const double inv_n = 1.0 / static_cast<double>(count);
  const double alpha = dp.alpha;
  OrderParams next;

  const double sqrt_qhat_w = floored_sqrt_qhat(theta.qhat_w, qhat_floored);
  const double sqrt_qhat_sigma =
      floored_sqrt_qhat(theta.qhat_sigma, qhat_floored);

  next.m_w = sums[9] * inv_n / alpha;
  next.q_w = sums[10] * inv_n / alpha;
  next.v_w = sums[11] * inv_n / (alpha * sqrt_qhat_w);
  next.m_sigma = sums[0] * inv_n;
  next.q_sigma = sums[1] * inv_n;
  next.v_sigma = sums[2] * inv_n / sqrt_qhat_sigma;

  next.mhat_w = mhat_w_prefactor / theta.v_w * sums[3] * inv_n;
  next.qhat_w = sums[4] * inv_n / (theta.v_w * theta.v_w);
  next.vhat_w =
      (1.0 - sums[5] * inv_n / std::sqrt(theta.q_w)) / theta.v_w;
  next.mhat_sigma = dp.lambda / theta.v_sigma * sums[6] * inv_n;
  next.qhat_sigma = sums[7] * inv_n / (theta.v_sigma * theta.v_sigma);
  next.vhat_sigma =
      (1.0 - sums[8] * inv_n / std::sqrt(theta.q_sigma)) / theta.v_sigma;

  check_finite(next.m_w, "m_w");
  check_finite(next.q_w, "q_w");
  check_finite(next.v_w, "v_w");
  check_finite(next.m_sigma, "m_sigma");
  check_finite(next.q_sigma, "q_sigma");
  check_finite(next.v_sigma, "v_sigma");
  check_finite(next.mhat_w, "mhat_w");
  check_finite(next.qhat_w, "qhat_w");
  check_finite(next.vhat_w, "vhat_w");
  check_finite(next.mhat_sigma, "mhat_sigma");
  check_finite(next.qhat_sigma, "qhat_sigma");
  check_finite(next.vhat_sigma, "vhat_sigma");
  return next;
}

} // namespace

double glmsbm_label_prob(double m_w, double q_w, double alpha, double chi) {
  const double gap = q_w / alpha - m_w * m_w;
  if (!(gap > 0.0))
    fail(ErrorCode::DegenerateOverlap,
         "glm-sbm label law needs q_w/alpha > m_w^2 (eta_w < 1); eta_w = " +
             std::to_string(alpha * m_w * m_w / q_w));
  return 0.5 * (1.0 + special::erf(m_w * chi / std::sqrt(2.0 * gap)));
}

OrderParams iterate_csbm(const OrderParams& theta, const McSampleSet& mc,
                         const DataParams& dp, const GcnParams& gp,
                         int workers, bool* qhat_floored) {
  const OutKernel kernel =
      OutKernel::make(theta, gp.c, dp.lambda, dp.feature_snr());
  const double curvature = gp.r + theta.vhat_w;
  if (!(curvature > 0.0))
    fail(ErrorCode::DegeneratePotential,
         "weight potential has non-positive curvature r + vhat_w");
  const WChannel w{1.0 / curvature, std::sqrt(theta.qhat_w), theta.mhat_w};

  const double rho = dp.rho;
  const double one_m_rho = 1.0 - rho;
  const double sqrt_mu_m_w = kernel.sqrt_mu_m_w;
  const double sqrt_q_w = kernel.sqrt_q_w;
  const double sqrt_q_sigma = kernel.sqrt_q_sigma;
  const double lambda_m_sigma = kernel.lambda_m_sigma;
  const Loss loss = gp.loss;

  auto sums = blocked_reduce<kNumSums>(
      mc.count(), workers,
      [&](std::size_t k, std::array<double, kNumSums>& acc) {
        const double y = mc.rademacher(k);
        const double xi = mc.xi[k], zeta = mc.zeta[k], chi = mc.chi[k];
        const auto m = kernel.solve(loss, y, xi, zeta, chi);

        const double p_sigma = rho * m.sigma_train + one_m_rho * m.sigma_test;
        acc[0] += y * p_sigma;
        acc[1] += rho * m.sigma_train * m.sigma_train +
                  one_m_rho * m.sigma_test * m.sigma_test;
        acc[2] += xi * p_sigma;

        const double t1 = m.sigma_train - sqrt_mu_m_w * y;
        const double t0 = m.sigma_test - sqrt_mu_m_w * y;
        acc[3] += y * (rho * t1 + one_m_rho * t0);
        const double tc = sqrt_q_w * chi;
        acc[4] += rho * (t1 - tc) * (t1 - tc) +
                  one_m_rho * (t0 - tc) * (t0 - tc);
        acc[5] += chi * p_sigma;

        const double r1 =
            m.h_train - gp.c * m.sigma_train - lambda_m_sigma * y;
        const double r0 = m.h_test - gp.c * m.sigma_test - lambda_m_sigma * y;
        acc[6] += y * (rho * r1 + one_m_rho * r0);
        const double rz = sqrt_q_sigma * zeta;
        acc[7] += rho * (r1 - rz) * (r1 - rz) +
                  one_m_rho * (r0 - rz) * (r0 - rz);
        acc[8] += zeta * (rho * (m.h_train - gp.c * m.sigma_train) +
                          one_m_rho * (m.h_test - gp.c * m.sigma_test));

        // weight channel, (u, varsigma) := (chi, xi)
        const double w_star = (xi * w.sqrt_qhat_w + chi * w.mhat_w) * w.inv_curv;
        acc[9] += chi * w_star;
        acc[10] += w_star * w_star;
        acc[11] += xi * w_star;
      });

  return assemble(theta, dp, sums, mc.count(), std::sqrt(dp.mu), qhat_floored);
}

OrderParams iterate_glmsbm(const OrderParams& theta, const McSampleSet& mc,
                           const DataParams& dp, const GcnParams& gp,
                           int workers, bool* qhat_floored) {
  const OutKernel kernel = OutKernel::make(theta, gp.c, dp.lambda, 0.0);
  const double curvature = gp.r + theta.vhat_w;
  if (!(curvature > 0.0))
    fail(ErrorCode::DegeneratePotential,
         "weight potential has non-positive curvature r + vhat_w");
  const WChannel w{1.0 / curvature, std::sqrt(theta.qhat_w), theta.mhat_w};

  const double alpha = dp.alpha;
  const double gap = theta.q_w / alpha - theta.m_w * theta.m_w;
  if (!(gap > 0.0))
    fail(ErrorCode::DegenerateOverlap,
         "glm-sbm update needs q_w/alpha > m_w^2; eta_w = " +
             std::to_string(alpha * theta.m_w * theta.m_w / theta.q_w));
  const double eta_w = alpha * theta.m_w * theta.m_w / theta.q_w;
  const double label_scale = theta.m_w / std::sqrt(2.0 * gap);
  // g(chi) = exp(-eta chi^2 / (2(1-eta))) / sqrt(2 pi (1-eta)/alpha)
  const double g_expo = eta_w / (2.0 * (1.0 - eta_w));
  const double g_norm =
      1.0 / std::sqrt(2.0 * M_PI * (1.0 - eta_w) / alpha);
  const double m_over_sqrt_q = theta.m_w / std::sqrt(theta.q_w);

  const double rho = dp.rho;
  const double one_m_rho = 1.0 - rho;
  const double sqrt_q_w = kernel.sqrt_q_w;
  const double sqrt_q_sigma = kernel.sqrt_q_sigma;
  const double lambda_m_sigma = kernel.lambda_m_sigma;
  const Loss loss = gp.loss;

  auto sums = blocked_reduce<kNumSums>(
      mc.count(), workers,
      [&](std::size_t k, std::array<double, kNumSums>& acc) {
        const double xi = mc.xi[k], zeta = mc.zeta[k], chi = mc.chi[k];
        const double p_plus = 0.5 * (1.0 + special::erf(label_scale * chi));
        const double g_chi = g_norm * std::exp(-g_expo * chi * chi);

        const auto mp = kernel.solve(loss, 1.0, xi, zeta, chi);
        const auto mm = kernel.solve(loss, -1.0, xi, zeta, chi);

        const double p_sig_p = rho * mp.sigma_train + one_m_rho * mp.sigma_test;
        const double p_sig_m = rho * mm.sigma_train + one_m_rho * mm.sigma_test;
        const double p_minus = 1.0 - p_plus;
        const double ey_p_sigma = p_plus * p_sig_p + p_minus * p_sig_m;

        acc[0] += p_plus * p_sig_p - p_minus * p_sig_m;
        acc[1] += p_plus * (rho * mp.sigma_train * mp.sigma_train +
                            one_m_rho * mp.sigma_test * mp.sigma_test) +
                  p_minus * (rho * mm.sigma_train * mm.sigma_train +
                             one_m_rho * mm.sigma_test * mm.sigma_test);
        acc[2] += xi * ey_p_sigma;

        // feature channel at mu = 0: residual sigma - sqrt(q_w) chi, plus the
        // g(chi)-weighted plain sum over the two labels
        acc[3] += g_chi * (p_sig_p - p_sig_m);
        const double tc = sqrt_q_w * chi;
        auto sq = [](double v) { return v * v; };
        acc[4] += p_plus * (rho * sq(mp.sigma_train - tc) +
                            one_m_rho * sq(mp.sigma_test - tc)) +
                  p_minus * (rho * sq(mm.sigma_train - tc) +
                             one_m_rho * sq(mm.sigma_test - tc));
        acc[5] += chi * ey_p_sigma - m_over_sqrt_q * g_chi * (p_sig_p - p_sig_m);

        const double r1p = mp.h_train - gp.c * mp.sigma_train - lambda_m_sigma;
        const double r0p = mp.h_test - gp.c * mp.sigma_test - lambda_m_sigma;
        const double r1m = mm.h_train - gp.c * mm.sigma_train + lambda_m_sigma;
        const double r0m = mm.h_test - gp.c * mm.sigma_test + lambda_m_sigma;
        acc[6] += p_plus * (rho * r1p + one_m_rho * r0p) -
                  p_minus * (rho * r1m + one_m_rho * r0m);
        const double rz = sqrt_q_sigma * zeta;
        acc[7] += p_plus * (rho * sq(r1p - rz) + one_m_rho * sq(r0p - rz)) +
                  p_minus * (rho * sq(r1m - rz) + one_m_rho * sq(r0m - rz));
        acc[8] +=
            zeta *
            (p_plus * (rho * (mp.h_train - gp.c * mp.sigma_train) +
                       one_m_rho * (mp.h_test - gp.c * mp.sigma_test)) +
             p_minus * (rho * (mm.h_train - gp.c * mm.sigma_train) +
                        one_m_rho * (mm.h_test - gp.c * mm.sigma_test)));

        const double w_star = (xi * w.sqrt_qhat_w + chi * w.mhat_w) * w.inv_curv;
        acc[9] += chi * w_star;
        acc[10] += w_star * w_star;
        acc[11] += xi * w_star;
      });

  return assemble(theta, dp, sums, mc.count(), 1.0, qhat_floored);
}

namespace {

OrderParams one_update(const OrderParams& theta, const McSampleSet& mc,
                       const DataParams& dp, const GcnParams& gp, int workers,
                       bool* qhat_floored) {
  return dp.model == Model::Csbm
             ? iterate_csbm(theta, mc, dp, gp, workers, qhat_floored)
             : iterate_glmsbm(theta, mc, dp, gp, workers, qhat_floored);
}

OrderParams initial_theta(const DataParams& dp, const GcnParams& gp,
                          const SolveConfig& cfg, const McSampleSet& mc) {
  OrderParams theta;
  switch (cfg.init) {
    case SeInit::Custom:
      return cfg.init_custom;
    case SeInit::RandomPositive: {
      Xoshiro256pp rng(cfg.init_seed);
      auto in_range = [&rng](double lo, double hi) {
        return lo + (hi - lo) * rng.next_unit();
      };
      theta.m_w = in_range(0.05, 0.3);
      theta.m_sigma = in_range(0.05, 0.3);
      theta.q_w = in_range(0.5, 2.0);
      theta.q_sigma = in_range(0.5, 2.0);
      theta.v_w = in_range(0.5, 2.0);
      theta.v_sigma = in_range(0.5, 2.0);
      break;
    }
    case SeInit::Preset:
      theta.m_w = 0.1;
      theta.m_sigma = 0.1;
      theta.q_w = 1.0;
      theta.q_sigma = 1.0;
      theta.v_w = 1.0;
      theta.v_sigma = 1.0;
      break;
  }
  // the glm-sbm label law needs eta_w = alpha m_w^2 / q_w < 1
  if (dp.model == Model::GlmSbm) {
    double eta = dp.alpha * theta.m_w * theta.m_w / theta.q_w;
    if (eta >= 0.5) theta.m_w = std::sqrt(0.25 * theta.q_w / dp.alpha);
  }
  theta.mhat_w = theta.mhat_sigma = 0.0;
  theta.vhat_w = theta.vhat_sigma = 0.0;
  // Unit qhat fields keep the seeding maximizers off their channel means
  // (with an all-zero hat block and c = 0 they coincide exactly, which would
  // make the produced qhat_w degenerate). The hat block then comes from one
  // update of the equations at the preset Theta.
  theta.qhat_w = theta.qhat_sigma = 1.0;
  OrderParams seeded = one_update(theta, mc, dp, gp, cfg.workers, nullptr);
  theta.mhat_w = seeded.mhat_w;
  theta.mhat_sigma = seeded.mhat_sigma;
  theta.qhat_w = seeded.qhat_w;
  theta.qhat_sigma = seeded.qhat_sigma;
  theta.vhat_w = seeded.vhat_w;
  theta.vhat_sigma = seeded.vhat_sigma;
  return theta;
}

} // namespace

FixedPoint solve(const DataParams& dp, const GcnParams& gp,
                 const SolveConfig& cfg, const McSampleSet& mc) {
  dp.validate(/*allow_negative_lambda=*/true);
  gp.validate();
  cfg.validate();

  FixedPoint fp;
  OrderParams theta = initial_theta(dp, gp, cfg, mc);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    OrderParams next = one_update(theta, mc, dp, gp, cfg.workers,
                                  &fp.qhat_floored);
    if (cfg.damping > 0.0) {
      auto blend = next.as_array();
      auto prev = theta.as_array();
      for (std::size_t i = 0; i < blend.size(); ++i)
        blend[i] = (1.0 - cfg.damping) * blend[i] + cfg.damping * prev[i];
      next = OrderParams::from_array(blend);
    }
    fp.residual = next.theta_distance(theta);
    fp.iterations = it;
    theta = next;
    if (fp.residual <= cfg.tol) {
      fp.converged = true;
      break;
    }
  }
  fp.theta = theta;
  return fp;
}

FixedPoint solve(const DataParams& dp, const GcnParams& gp,
                 const SolveConfig& cfg) {
  cfg.validate();
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  return solve(dp, gp, cfg, mc);
}

Metrics observables(const FixedPoint& fp, const McSampleSet& mc,
                    const DataParams& dp, const GcnParams& gp, int workers) {
  const OrderParams& theta = fp.theta;
  const OutKernel kernel =
      OutKernel::make(theta, gp.c, dp.lambda, dp.feature_snr());
  const Loss loss = gp.loss;

  std::array<double, 4> sums{};
  if (dp.model == Model::Csbm) {
    sums = blocked_reduce<4>(
        mc.count(), workers, [&](std::size_t k, std::array<double, 4>& acc) {
          const double y = mc.rademacher(k);
          const auto m = kernel.solve(loss, y, mc.xi[k], mc.zeta[k], mc.chi[k]);
          acc[0] += loss_eval(loss, y * m.h_train);
          acc[1] += loss_eval(loss, y * m.h_test);
          acc[2] += y == sign_pm(m.h_train) ? 1.0 : 0.0;
          acc[3] += y == sign_pm(m.h_test) ? 1.0 : 0.0;
        });
  } else {
    const double gap = theta.q_w / dp.alpha - theta.m_w * theta.m_w;
    if (!(gap > 0.0))
      fail(ErrorCode::DegenerateOverlap,
           "glm-sbm observables need q_w/alpha > m_w^2");
    const double label_scale = theta.m_w / std::sqrt(2.0 * gap);
    sums = blocked_reduce<4>(
        mc.count(), workers, [&](std::size_t k, std::array<double, 4>& acc) {
          const double p_plus =
              0.5 * (1.0 + special::erf(label_scale * mc.chi[k]));
          const auto mp =
              kernel.solve(loss, 1.0, mc.xi[k], mc.zeta[k], mc.chi[k]);
          const auto mm =
              kernel.solve(loss, -1.0, mc.xi[k], mc.zeta[k], mc.chi[k]);
          const double p_minus = 1.0 - p_plus;
          acc[0] += p_plus * loss_eval(loss, mp.h_train) +
                    p_minus * loss_eval(loss, -mm.h_train);
          acc[1] += p_plus * loss_eval(loss, mp.h_test) +
                    p_minus * loss_eval(loss, -mm.h_test);
          acc[2] += p_plus * (sign_pm(mp.h_train) > 0.0 ? 1.0 : 0.0) +
                    p_minus * (sign_pm(mm.h_train) < 0.0 ? 1.0 : 0.0);
          acc[3] += p_plus * (sign_pm(mp.h_test) > 0.0 ? 1.0 : 0.0) +
                    p_minus * (sign_pm(mm.h_test) < 0.0 ? 1.0 : 0.0);
        });
  }
  const double inv_n = 1.0 / static_cast<double>(mc.count());
  Metrics metrics;
  metrics.e_train = sums[0] * inv_n;
  metrics.e_test = sums[1] * inv_n;
  metrics.acc_train = sums[2] * inv_n;
  metrics.acc_test = sums[3] * inv_n;
  return metrics;
}

} // namespace gcnse
