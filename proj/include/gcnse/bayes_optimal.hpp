#pragma once

#include "gcnse/state_evolution.hpp"
#include "gcnse/types.hpp"

namespace gcnse {

// Bayes-optimal baselines: scalar fixed-point systems in the overlap with the
// labels (m_y), with the hidden vector (m_u), and their conjugates, plus the
// resulting optimal test accuracies. The graph enters through the snr of the
// equivalent symmetric low-rank problem, delta_i = 2 lambda^2 (the directed
// noise maps onto a symmetric one at snr scaled by sqrt 2). All expectations
// are deterministic Gauss-Hermite quadratures; the accuracy tails are
// evaluated through erfc so the large-snr misclassification stays accurate to
// full relative precision.

struct BoStateCsbm {
  double m = 0.0;
  double m_y = 0.0;
  double m_u = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct BoStateGlmsbm {
  double mhat_u = 0.0;
  double m_y = 0.0;
  double m_u = 0.0;
  double rho_u = 0.0;   // 1 / alpha
  double delta_i = 0.0; // 2 lambda^2
  int iterations = 0;
  bool converged = false;
};

// cfg contributes tol and max_iter; the Monte-Carlo fields are unused here.
BoStateCsbm bo_solve_csbm(const DataParams& dp, const SolveConfig& cfg);
BoStateGlmsbm bo_solve_glmsbm(const DataParams& dp, const SolveConfig& cfg);

double bo_acc_csbm(const BoStateCsbm& s);
double bo_acc_glmsbm(const BoStateGlmsbm& s);

// 1 - accuracy without cancellation (needed for the large-lambda rates).
double bo_misclass_csbm(const BoStateCsbm& s);
double bo_misclass_glmsbm(const BoStateGlmsbm& s);

// Convenience: solve + accuracy for either model.
double bo_accuracy(const DataParams& dp, const SolveConfig& cfg);

} // namespace gcnse
