#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gcnse/types.hpp"

namespace gcnse {

enum class AdjacencyMode { Bernoulli, GaussianEquivalent };

// One finite-size instance. Bernoulli adjacency is stored either as sorted
// column indices per row (sparse regime) or as a dense byte matrix; the
// Gaussian-equivalent mode stores the already-rescaled real matrix
// lambda/sqrt(n) y y^T + Xi directly. The train/test masks are prefix slices
// of one stored node permutation, so masks at different train fractions of
// the same seed are nested.
struct Dataset {
  int n = 0;
  int m_dim = 0;
  AdjacencyMode adjacency_mode = AdjacencyMode::Bernoulli;
  bool sparse = false;
  std::vector<std::vector<std::int32_t>> adj_rows; // sparse Bernoulli
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> adj_dense;
  Eigen::MatrixXd adj_gaussian;
  Eigen::MatrixXd features;  // n x m_dim
  Eigen::VectorXd labels;    // entries +-1
  Eigen::VectorXd hidden_u;  // m_dim (empty for ingested features)
  std::vector<std::int32_t> train_mask; // sorted
  std::vector<std::int32_t> test_mask;  // sorted, disjoint from train
  std::vector<std::int32_t> node_order; // permutation behind the masks
  std::uint64_t seed = 0;
  DataParams params;

  // (1/n) Atilde X (or (1/n) A^g X): the graph part of the filter output for
  // every node. Computed blockwise; never materializes Q(Atilde) X.
  Eigen::MatrixXd graph_filter_product() const;
  // Same applied to a single vector t: (1/n)-unscaled Atilde t.
  Eigen::VectorXd rescaled_times(const Eigen::VectorXd& t) const;
  // Row i of (1/n) Atilde X + (c/sqrt n) X.
  Eigen::VectorXd filter_row(int i, double c) const;
};

struct TrainConfig {
  double grad_tol = 1e-10;
  long max_steps = 200000;
  enum class StepRule { ExactRidge, FirstOrder };
  StepRule step_rule = StepRule::ExactRidge;

  void validate() const {
    if (!(grad_tol > 0.0))
      fail(ErrorCode::InvalidArgument, "grad_tol must be > 0");
    if (max_steps < 1)
      fail(ErrorCode::InvalidArgument, "max_steps must be >= 1");
  }
};

// Caches the n x m graph filter product across train/evaluate calls on one
// dataset (it depends on neither c nor r).
struct SimWorkspace {
  Eigen::MatrixXd filter; // (1/n) Atilde X
  bool ready = false;
  const Eigen::MatrixXd& get(const Dataset& ds) {
    if (!ready) {
      filter = ds.graph_filter_product();
      ready = true;
    }
    return filter;
  }
};

Dataset gen_dataset(const DataParams& dp, int n, AdjacencyMode mode,
                    std::uint64_t seed);

// Re-slices the train/test masks of an existing dataset at a new train
// fraction from the stored node permutation (masks are nested across rho).
void reslice_masks(Dataset& ds, double rho, double rho_test);

// Dense CSV, one node per row, comma (or whitespace) separated, header line
// optional. Adds N(0, epsilon^2) noise entrywise, then centers each column
// and scales it to squared norm n.
Eigen::MatrixXd ingest_features(const std::string& path, double epsilon,
                                std::uint64_t seed);
Eigen::MatrixXd normalize_features(Eigen::MatrixXd raw, double epsilon,
                                   std::uint64_t seed);

// Builds an SBM graph on user labels and attaches externally supplied
// (already ingested) features.
Dataset dataset_from_features(const Eigen::MatrixXd& features,
                              const std::vector<double>& labels,
                              const DataParams& dp, AdjacencyMode mode,
                              std::uint64_t seed);

// h(w) = (1/n) (Atilde + c sqrt(n) I) X w, computed as two matrix-vector
// products.
Eigen::VectorXd gcn_forward(const Dataset& ds, const Eigen::VectorXd& w,
                            double c);

// Minimizes (1/(rho n)) [ sum_train l(y_i h_i(w)) + r ||w||^2 / 2 ].
// ExactRidge solves the quadratic-loss normal equations (with one step of
// iterative refinement); FirstOrder runs FISTA with backtracking on the
// smooth losses and a smoothed-then-exactly-polished scheme for the hinge.
Eigen::VectorXd train_gcn(const Dataset& ds, const GcnParams& gp,
                          const TrainConfig& tc);
Eigen::VectorXd train_gcn(const Dataset& ds, const GcnParams& gp,
                          const TrainConfig& tc, SimWorkspace& ws);

Metrics evaluate(const Dataset& ds, const Eigen::VectorXd& w,
                 const GcnParams& gp);

// Sup norm of the objective (sub)gradient at w. For the hinge, margins within
// `kink_band` of 1 get a free subgradient coefficient in [0,1], chosen to
// minimize the norm; this is the stationarity certificate.
double erm_subgradient_norm(const Dataset& ds, const Eigen::VectorXd& w,
                            const GcnParams& gp, double kink_band = 1e-9);
double erm_subgradient_norm(const Dataset& ds, const Eigen::VectorXd& w,
                            const GcnParams& gp, double kink_band,
                            SimWorkspace& ws);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

} // namespace gcnse
