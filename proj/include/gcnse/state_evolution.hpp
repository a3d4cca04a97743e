#pragma once

#include <cstdint>
#include <optional>

#include "gcnse/mc.hpp"
#include "gcnse/potentials.hpp"
#include "gcnse/types.hpp"

namespace gcnse {

// How the solver seeds the order parameters. The preset starts the overlaps
// strictly positive so an informative fixed point is reachable whenever the
// signal supports one; the hat block is then filled by one update.
enum class SeInit { Preset, RandomPositive, Custom };

struct SolveConfig {
  std::size_t mc_count = 1000000;
  std::uint64_t seed = 1;
  double tol = 1e-8; // sup-norm change of the Theta block
  int max_iter = 200;
  double damping = 0.0;
  int workers = 1;
  SeInit init = SeInit::Preset;
  OrderParams init_custom{};
  std::uint64_t init_seed = 7;

  void validate() const {
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");
    if (mc_count < 1000)
      fail(ErrorCode::InvalidArgument, "mc_count must be >= 1000");
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    if (!(damping >= 0.0 && damping < 1.0))
      fail(ErrorCode::InvalidArgument, "damping must be in [0, 1)");
    if (workers < 1) fail(ErrorCode::InvalidArgument, "workers must be >= 1");
  }
};

struct FixedPoint {
  OrderParams theta;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  // The 1/sqrt(qhat) guard floored a vanishing qhat during some iteration.
  // Surfaced rather than hidden: a flagged fixed point is degenerate in the
  // corresponding V equation.
  bool qhat_floored = false;
};

// One parallel update of the twelve equations. Every expectation is the
// Monte-Carlo average over the given sample set; the train/test operator is
// evaluated from the two maximizer branches of the output potential. The
// weight-channel pair (u, varsigma) reuses (chi, xi); the two channels never
// meet inside a single expectation, so each average stays unbiased.
OrderParams iterate_csbm(const OrderParams& theta, const McSampleSet& mc,
                         const DataParams& dp, const GcnParams& gp,
                         int workers = 1, bool* qhat_floored = nullptr);

// Same with the output potential at mu = 0, the label summed exactly against
// its chi-conditional two-point law, and the g(chi)-weighted feature-channel
// corrections.
OrderParams iterate_glmsbm(const OrderParams& theta, const McSampleSet& mc,
                           const DataParams& dp, const GcnParams& gp,
                           int workers = 1, bool* qhat_floored = nullptr);

// Iterates the model-appropriate update from the configured initialization
// until the Theta block moves less than tol in sup norm, reusing one sample
// set throughout. max_iter exhaustion returns converged = false.
FixedPoint solve(const DataParams& dp, const GcnParams& gp,
                 const SolveConfig& cfg);
FixedPoint solve(const DataParams& dp, const GcnParams& gp,
                 const SolveConfig& cfg, const McSampleSet& mc);

// Train metrics from the revealed branch, test metrics from the unrevealed
// one, averaged over the same sample set.
Metrics observables(const FixedPoint& fp, const McSampleSet& mc,
                    const DataParams& dp, const GcnParams& gp,
                    int workers = 1);

// P(y = +1 | chi) of the GLM-SBM label law at overlaps (m_w, q_w).
double glmsbm_label_prob(double m_w, double q_w, double alpha, double chi);

} // namespace gcnse
