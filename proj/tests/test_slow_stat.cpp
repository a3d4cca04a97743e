// Statistical agreement tests that need minutes rather than seconds: the
// Gaussian-equivalence of the rescaled Bernoulli adjacency and the
// directed-to-undirected snr mapping.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "gcnse/simulator.hpp"
#include "gcnse/state_evolution.hpp"

using namespace gcnse;

namespace {

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

MeanSe summarize(const std::vector<double>& v) {
  MeanSe out;
  for (double x : v) out.mean += x;
  out.mean /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(var / (v.size() - 1) / v.size());
  return out;
}

} // namespace

TEST_CASE("gaussian equivalence of the rescaled dense Bernoulli adjacency") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.mu = 1.0;
  dp.rho = 0.1;
  const int n = 4000;
  dp.d = n / 2.0;
  GcnParams gp{Loss::Quadratic, 10.0, 1.0};
  TrainConfig tc;
  std::vector<double> bern, gauss;
  for (int seed = 0; seed < 10; ++seed) {
    for (auto mode :
         {AdjacencyMode::Bernoulli, AdjacencyMode::GaussianEquivalent}) {
      Dataset ds = gen_dataset(dp, n, mode, 500 + seed);
      SimWorkspace ws;
      Eigen::VectorXd w = train_gcn(ds, gp, tc, ws);
      double acc = evaluate(ds, w, gp).acc_test;
      (mode == AdjacencyMode::Bernoulli ? bern : gauss).push_back(acc);
    }
  }
  MeanSe b = summarize(bern), g = summarize(gauss);
  double combined = std::sqrt(b.se * b.se + g.se * g.se);
  INFO("bernoulli ", b.mean, " +- ", b.se, " gaussian ", g.mean, " +- ", g.se);
  CHECK(std::fabs(b.mean - g.mean) <= 3.0 * combined);
}

TEST_CASE("training on the symmetrized graph matches snr sqrt(2) lambda") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 0.9;
  dp.mu = 1.0;
  dp.rho = 0.15;
  dp.d = 30.0;
  const int n = 3000;
  GcnParams gp{Loss::Quadratic, 10.0, 1.0};
  TrainConfig tc;

  std::vector<double> accs;
  for (int seed = 0; seed < 10; ++seed) {
    Dataset ds = gen_dataset(dp, n, AdjacencyMode::Bernoulli, 900 + seed);
    // symmetrize the rescaled matrix: (Atilde + Atilde^T)/sqrt(2)
    const double base = dp.d / n;
    const double scale = std::sqrt(base * (1.0 - base));
    Eigen::MatrixXd sym = Eigen::MatrixXd::Constant(n, n, -base / scale);
    for (int i = 0; i < n; ++i)
      for (std::int32_t j : ds.adj_rows[i]) sym(i, j) += 1.0 / scale;
    Eigen::MatrixXd symmetrized =
        (sym + sym.transpose()) / std::sqrt(2.0);
    Dataset mirror = ds;
    mirror.adjacency_mode = AdjacencyMode::GaussianEquivalent;
    mirror.adj_rows.clear();
    mirror.sparse = false;
    mirror.adj_gaussian = std::move(symmetrized);
    SimWorkspace ws;
    Eigen::VectorXd w = train_gcn(mirror, gp, tc, ws);
    accs.push_back(evaluate(mirror, w, gp).acc_test);
  }
  MeanSe sim = summarize(accs);

  DataParams mapped = dp;
  mapped.lambda = std::sqrt(2.0) * dp.lambda;
  SolveConfig cfg;
  cfg.mc_count = 400000;
  cfg.seed = 3;
  cfg.tol = 1e-10;
  cfg.workers = 2;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  FixedPoint fp = solve(mapped, gp, cfg, mc);
  double theory = observables(fp, mc, mapped, gp, 2).acc_test;
  INFO("sim ", sim.mean, " +- ", sim.se, " theory ", theory);
  CHECK(std::fabs(sim.mean - theory) <=
        3.0 * std::sqrt(sim.se * sim.se + 1e-3 * 1e-3));
}
