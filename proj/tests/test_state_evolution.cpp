#include <doctest.h>

#include <cmath>

#include "gcnse/closed_form.hpp"
#include "gcnse/state_evolution.hpp"

using namespace gcnse;

namespace {

OrderParams symmetric_theta() {
  OrderParams t;
  t.m_w = t.m_sigma = t.mhat_w = t.mhat_sigma = 0.0;
  t.q_w = t.q_sigma = 1.0;
  t.v_w = t.v_sigma = 1.0;
  t.qhat_w = t.qhat_sigma = 0.5;
  t.vhat_w = t.vhat_sigma = 0.2;
  return t;
}

bool theta_equal(const OrderParams& a, const OrderParams& b) {
  return a.as_array() == b.as_array();
}

} // namespace

TEST_CASE("csbm update keeps the symmetric point (no signal)") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 2.0;
  dp.lambda = 0.0;
  dp.mu = 0.0;
  dp.rho = 0.3;
  // at c = 0 the sigma maximizer is label-free and all four overlaps stay
  // at zero (up to the O(1/sqrt K) sample residue)
  GcnParams gp{Loss::Quadratic, 2.0, 0.0};
  McSampleSet mc = sample_mc(100000, 3);
  OrderParams next = iterate_csbm(symmetric_theta(), mc, dp, gp);
  const double tol = 0.02;
  CHECK(std::fabs(next.m_w) <= tol);
  CHECK(std::fabs(next.m_sigma) <= tol);
  CHECK(std::fabs(next.mhat_w) <= tol);
  CHECK(std::fabs(next.mhat_sigma) <= tol);
  // with a self-loop the hat overlaps still vanish exactly (their prefactors
  // are sqrt(mu) and lambda); m_sigma picks up the genuine train-fit overlap
  GcnParams loop{Loss::Quadratic, 2.0, 0.8};
  OrderParams with_c = iterate_csbm(symmetric_theta(), mc, dp, loop);
  CHECK(with_c.mhat_w == 0.0);
  CHECK(with_c.mhat_sigma == 0.0);
  CHECK(std::fabs(with_c.m_w) <= tol);
}

TEST_CASE("glm-sbm update keeps m_sigma and mhat_sigma at zero when lambda=0") {
  DataParams dp;
  dp.model = Model::GlmSbm;
  dp.alpha = 2.0;
  dp.lambda = 0.0;
  dp.rho = 0.3;
  GcnParams gp{Loss::Logistic, 2.0, 0.0};
  McSampleSet mc = sample_mc(100000, 3);
  OrderParams next = iterate_glmsbm(symmetric_theta(), mc, dp, gp);
  CHECK(std::fabs(next.m_sigma) <= 0.02);
  CHECK(next.mhat_sigma == 0.0); // lambda prefactor
}

TEST_CASE("m_w = 0 makes the glm-sbm label law uninformative") {
  for (double chi : {-3.0, -0.5, 0.0, 1.0, 7.0})
    CHECK(glmsbm_label_prob(0.0, 1.3, 4.0, chi) == 0.5);
  CHECK_THROWS_AS(glmsbm_label_prob(1.0, 1.0, 4.0, 0.0), Error); // eta_w >= 1
}

TEST_CASE("updates are deterministic and worker-count invariant (bitwise)") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.mu = 1.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Logistic, 5.0, 1.0};
  McSampleSet mc = sample_mc(200000, 9);
  OrderParams t = symmetric_theta();
  t.m_w = t.m_sigma = 0.1;
  t.mhat_w = t.mhat_sigma = 0.05;
  OrderParams once = iterate_csbm(t, mc, dp, gp, 1);
  CHECK(theta_equal(once, iterate_csbm(t, mc, dp, gp, 1)));
  CHECK(theta_equal(once, iterate_csbm(t, mc, dp, gp, 2)));
  CHECK(theta_equal(once, iterate_csbm(t, mc, dp, gp, 5)));
  dp.model = Model::GlmSbm;
  OrderParams g1 = iterate_glmsbm(t, mc, dp, gp, 1);
  CHECK(theta_equal(g1, iterate_glmsbm(t, mc, dp, gp, 3)));
}

TEST_CASE("solve: determinism, convergence flag, residual contract") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.mu = 1.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 10.0, 1.0};
  SolveConfig cfg;
  cfg.mc_count = 100000;
  cfg.seed = 4;
  cfg.tol = 1e-9;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  FixedPoint a = solve(dp, gp, cfg, mc);
  FixedPoint b = solve(dp, gp, cfg, mc);
  CHECK(a.converged);
  CHECK(a.residual <= cfg.tol);
  CHECK(theta_equal(a.theta, b.theta));
  CHECK(a.iterations == b.iterations);

  // one extra parallel update moves the Theta block by at most tol-level
  OrderParams extra = iterate_csbm(a.theta, mc, dp, gp);
  CHECK(extra.theta_distance(a.theta) <= 10.0 * cfg.tol);

  // positivity at the fixed point
  CHECK(a.theta.v_w > 0.0);
  CHECK(a.theta.v_sigma > 0.0);
  CHECK(a.theta.q_w >= 0.0);
  CHECK(a.theta.q_sigma >= 0.0);
  CHECK(a.theta.qhat_w >= 0.0);
  CHECK(a.theta.qhat_sigma >= 0.0);

  // iteration budget exhaustion is a flag, not an error
  SolveConfig tight = cfg;
  tight.max_iter = 2;
  FixedPoint c = solve(dp, gp, tight, mc);
  CHECK_FALSE(c.converged);
}

TEST_CASE("zero signal gives accuracy one half") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 2.0;
  dp.lambda = 0.0;
  dp.mu = 0.0;
  dp.rho = 0.2;
  GcnParams gp{Loss::Hinge, 3.0, 0.5};
  SolveConfig cfg;
  cfg.mc_count = 200000;
  cfg.seed = 12;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  FixedPoint fp = solve(dp, gp, cfg, mc);
  Metrics m = observables(fp, mc, dp, gp);
  double band = 2.0 / std::sqrt(static_cast<double>(cfg.mc_count));
  CHECK(std::fabs(fp.theta.m_sigma) <= 0.02);
  CHECK(std::fabs(m.acc_test - 0.5) <= band);

  // a glm-sbm fixed point carrying no overlap: the two-point label average
  // makes the test accuracy exactly one half
  dp.model = Model::GlmSbm;
  FixedPoint flat;
  flat.converged = true;
  flat.theta = fp.theta;
  flat.theta.m_w = 0.0;
  flat.theta.m_sigma = 0.0;
  flat.theta.mhat_w = 0.0;
  flat.theta.mhat_sigma = 0.0;
  Metrics mg = observables(flat, mc, dp, gp);
  CHECK(mg.acc_test == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("large regularization matches the closed form (both models)") {
  SolveConfig cfg;
  cfg.mc_count = 1000000;
  cfg.seed = 42;
  cfg.tol = 1e-12;
  cfg.max_iter = 300;
  cfg.workers = 2;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);

  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.5;
  dp.mu = 3.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 1e3, 1.0};
  FixedPoint fp = solve(dp, gp, cfg, mc);
  REQUIRE(fp.converged);
  Metrics m = observables(fp, mc, dp, gp, 2);
  CHECK(std::fabs(m.acc_test - acc_large_r(dp, gp)) <= 0.005);

  dp.model = Model::GlmSbm;
  gp.c = 0.5;
  FixedPoint fg = solve(dp, gp, cfg, mc);
  REQUIRE(fg.converged);
  Metrics mg = observables(fg, mc, dp, gp, 2);
  CHECK(std::fabs(mg.acc_test - acc_large_r(dp, gp)) <= 0.005);

  // c = 0 closed form is the single-erf formula
  dp.model = Model::Csbm;
  gp.c = 0.0;
  FixedPoint f0 = solve(dp, gp, cfg, mc);
  Metrics m0 = observables(f0, mc, dp, gp, 2);
  CHECK(std::fabs(m0.acc_test - acc_large_r_c0(dp)) <= 0.005);
}

TEST_CASE("label symmetry: negating lambda and c mirrors the fixed point") {
  SolveConfig cfg;
  cfg.mc_count = 400000;
  cfg.seed = 21;
  cfg.tol = 1e-10;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);

  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.mu = 1.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 5.0, 0.5};
  FixedPoint a = solve(dp, gp, cfg, mc);
  Metrics ma = observables(a, mc, dp, gp);

  DataParams dp_neg = dp;
  dp_neg.lambda = -dp.lambda;
  GcnParams gp_neg = gp;
  gp_neg.c = -gp.c;
  SolveConfig cfg_neg = cfg;
  cfg_neg.init = SeInit::Custom;
  cfg_neg.init_custom = a.theta;
  cfg_neg.init_custom.m_sigma = -a.theta.m_sigma;
  cfg_neg.init_custom.mhat_sigma = -a.theta.mhat_sigma;
  FixedPoint b = solve(dp_neg, gp_neg, cfg_neg, mc);
  Metrics mb = observables(b, mc, dp_neg, gp_neg);

  auto rel = [](double x, double y) {
    return std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1e-3});
  };
  CHECK(rel(a.theta.q_w, b.theta.q_w) <= 0.03);
  CHECK(rel(a.theta.q_sigma, b.theta.q_sigma) <= 0.03);
  CHECK(rel(a.theta.v_w, b.theta.v_w) <= 0.03);
  CHECK(rel(a.theta.v_sigma, b.theta.v_sigma) <= 0.03);
  CHECK(std::fabs(ma.acc_test - mb.acc_test) <= 0.005);
  // the sigma overlaps flip sign
  CHECK(rel(a.theta.m_sigma, -b.theta.m_sigma) <= 0.03);
}

TEST_CASE("doubling the sample count moves the accuracy within MC noise") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.mu = 1.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 10.0, 1.0};
  SolveConfig cfg;
  cfg.seed = 8;
  cfg.tol = 1e-10;
  cfg.mc_count = 100000;
  FixedPoint f1 = solve(dp, gp, cfg);
  Metrics m1 = observables(f1, sample_mc(100000, 8), dp, gp);
  cfg.mc_count = 200000;
  FixedPoint f2 = solve(dp, gp, cfg);
  Metrics m2 = observables(f2, sample_mc(200000, 8), dp, gp);
  CHECK(std::fabs(m1.acc_test - m2.acc_test) <=
        3.0 / std::sqrt(100000.0));
}

TEST_CASE("pure-graph limit: csbm at mu=0 and glm-sbm at small alpha agree") {
  SolveConfig cfg;
  cfg.mc_count = 200000;
  cfg.seed = 5;
  cfg.tol = 1e-10;
  GcnParams gp{Loss::Quadratic, 10.0, 0.3};
  auto acc_at = [&](Model model, double alpha) {
    DataParams dp;
    dp.model = model;
    dp.alpha = alpha;
    dp.lambda = 1.2;
    dp.mu = 0.0;
    dp.rho = 0.2;
    McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
    FixedPoint fp = solve(dp, gp, cfg, mc);
    return observables(fp, mc, dp, gp).acc_test;
  };
  double c1 = acc_at(Model::Csbm, 0.02);
  double c2 = acc_at(Model::Csbm, 0.004);
  double g1 = acc_at(Model::GlmSbm, 0.02);
  double g2 = acc_at(Model::GlmSbm, 0.004);
  CHECK(std::fabs(c1 - c2) <= 0.01);
  CHECK(std::fabs(g1 - g2) <= 0.01);
  CHECK(std::fabs(c2 - g2) <= 0.01);
}

TEST_CASE("train accuracy dominates test accuracy at representative points") {
  SolveConfig cfg;
  cfg.mc_count = 200000;
  cfg.seed = 17;
  cfg.tol = 1e-10;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  const double band = 3.0 * 0.5 / std::sqrt(static_cast<double>(cfg.mc_count));
  for (Model model : {Model::Csbm, Model::GlmSbm}) {
    DataParams dp;
    dp.model = model;
    dp.alpha = 4.0;
    dp.lambda = 0.5;
    dp.mu = 1.0;
    dp.rho = 0.1;
    for (double c : {0.0, 1.0}) {
      for (double r : {0.1, 10.0}) {
        GcnParams gp{Loss::Logistic, r, c};
        FixedPoint fp = solve(dp, gp, cfg, mc);
        Metrics m = observables(fp, mc, dp, gp);
        CHECK(m.acc_train >= m.acc_test - band);
      }
    }
  }
}

TEST_CASE("preset and random-positive inits reach the same fixed point") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.lambda = 1.5;
  dp.mu = 3.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 10.0, 1.0};
  SolveConfig cfg;
  cfg.mc_count = 100000;
  cfg.seed = 33;
  cfg.tol = 1e-11;
  cfg.max_iter = 400;
  McSampleSet mc = sample_mc(cfg.mc_count, cfg.seed);
  FixedPoint a = solve(dp, gp, cfg, mc);
  cfg.init = SeInit::RandomPositive;
  cfg.init_seed = 1234;
  FixedPoint b = solve(dp, gp, cfg, mc);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(a.theta.theta_distance(b.theta) <= 1e-7);
}

TEST_CASE("glm-sbm ignores mu") {
  DataParams dp;
  dp.model = Model::GlmSbm;
  dp.alpha = 4.0;
  dp.lambda = 1.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 5.0, 1.0};
  McSampleSet mc = sample_mc(50000, 2);
  OrderParams t = symmetric_theta();
  t.m_w = 0.05;
  dp.mu = 0.0;
  OrderParams u0 = iterate_glmsbm(t, mc, dp, gp);
  dp.mu = 5.0;
  OrderParams u5 = iterate_glmsbm(t, mc, dp, gp);
  CHECK(theta_equal(u0, u5));
}
