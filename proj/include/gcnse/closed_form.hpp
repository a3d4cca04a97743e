#pragma once

#include "gcnse/types.hpp"

namespace gcnse {

// Summary statistics in the large-regularization limit, to leading order in
// 1/r. The two V-hat entries have no closed form at this order and are not
// part of the set.
struct LargeRStats {
  double m_w = 0, v_w = 0, q_w = 0;
  double m_sigma = 0, v_sigma = 0, q_sigma = 0;
  double mhat_w = 0, qhat_w = 0;
  double mhat_sigma = 0, qhat_sigma = 0;
};

// Closed-form statistics at large r. The GLM-SBM block is the CSBM block with
// the effective feature snr 2 alpha / pi, except for the q_sigma combination
// which follows its own formula.
LargeRStats large_r_stats(const DataParams& dp, const GcnParams& gp);

// Large-r test accuracy. CSBM: a single erf evaluation. GLM-SBM: adaptive
// quadrature of a half-line Gaussian integral to abs tolerance 1e-9 (the
// truncation tail beyond 12 standard deviations is below 1e-30).
double acc_large_r(const DataParams& dp, const GcnParams& gp);

// 1 - acc_large_r evaluated through erfc, so deep tails keep full relative
// precision (acc itself saturates to 1.0 in doubles once the erf argument
// passes ~6).
double misclass_large_r(const DataParams& dp, const GcnParams& gp);

// sqrt(tau(lambda)) of the c = 0 accuracy Acc = (1 + erf(lambda sqrt(tau)))/2.
double sqrt_tau_c0(const DataParams& dp);
double acc_large_r_c0(const DataParams& dp);

// Asymptotic learning rate: log(1 - Acc_test) ~ -lambda^2 * tau_inf at large
// graph snr. The Bayes-optimal rate is 1 for both models.
double rate_inf(const DataParams& dp);
inline double rate_inf_bo() { return 1.0; }

enum class CstarRegime { SmallLambda, LargeLambda, Finite };

// Optimal self-loop strength. SmallLambda/LargeLambda: closed forms (CSBM);
// the GLM-SBM LargeLambda constant comes from a 1-d minimization solved by
// golden section to 1e-8; its SmallLambda constant has no closed form and is
// only reachable through Finite. Finite: argmax of acc_large_r over
// c in [0, 10/lambda], widened once if the bracket is not unimodal.
double c_star(const DataParams& dp, CstarRegime regime);

} // namespace gcnse
