#include <doctest.h>

#include <cmath>

#include "gcnse/closed_form.hpp"
#include "gcnse/special.hpp"

using namespace gcnse;

TEST_CASE("large-r summary statistics at pinned points") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.rho = 0.1;
  dp.mu = 4.0;
  dp.lambda = 1.0;
  dp.alpha = 1.0;
  GcnParams gp{Loss::Quadratic, 1.0, 1.0};
  LargeRStats s = large_r_stats(dp, gp);
  CHECK(s.m_w == doctest::Approx(0.4).epsilon(1e-14)); // (rho/ar) sqrt(mu)(l+c)
  CHECK(s.mhat_sigma == doctest::Approx(dp.lambda * dp.rho).epsilon(1e-14));
  CHECK(s.qhat_sigma == doctest::Approx(dp.rho).epsilon(1e-14));
  CHECK(s.v_w == doctest::Approx(1.0).epsilon(1e-14));

  // arbitrary parameters still satisfy mhat_sigma = lambda rho, qhat_sigma = rho
  dp.alpha = 3.3;
  dp.lambda = 0.7;
  dp.mu = 2.1;
  dp.rho = 0.25;
  gp.r = 55.0;
  gp.c = 0.4;
  s = large_r_stats(dp, gp);
  CHECK(s.mhat_sigma == doctest::Approx(dp.lambda * dp.rho).epsilon(1e-14));
  CHECK(s.qhat_sigma == doctest::Approx(dp.rho).epsilon(1e-14));

  DataParams glm;
  glm.model = Model::GlmSbm;
  glm.lambda = 0.0;
  glm.alpha = 2.0;
  glm.rho = 0.1;
  GcnParams zero{Loss::Quadratic, 10.0, 0.0};
  LargeRStats g = large_r_stats(glm, zero);
  CHECK(g.m_w == 0.0);
  CHECK(g.m_sigma == 0.0);
}

TEST_CASE("all variances positive for r > 0") {
  for (Model model : {Model::Csbm, Model::GlmSbm}) {
    DataParams dp;
    dp.model = model;
    dp.alpha = 2.5;
    dp.lambda = 1.0;
    dp.mu = 2.0;
    dp.rho = 0.3;
    for (double r : {1e-3, 1.0, 1e6}) {
      GcnParams gp{Loss::Quadratic, r, 0.7};
      LargeRStats s = large_r_stats(dp, gp);
      CHECK(s.v_w > 0.0);
      CHECK(s.v_sigma > 0.0);
      CHECK(s.q_w > 0.0);
      CHECK(s.q_sigma > 0.0);
    }
  }
}

TEST_CASE("large-r accuracy: pinned examples and a second implementer path") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.lambda = 0.0;
  dp.mu = 1.0;
  dp.alpha = 4.0;
  dp.rho = 0.1;
  GcnParams gp{Loss::Quadratic, 7.0, 0.0};
  CHECK(acc_large_r(dp, gp) == doctest::Approx(0.5).epsilon(1e-12));

  // independent recomputation of the c = 0 argument, written out from scratch
  dp.lambda = 1.5;
  dp.mu = 3.0;
  double l = dp.lambda, rho = dp.rho, mu = dp.mu, a = dp.alpha;
  double sqrt_tau =
      l * rho * (1.0 + mu) /
      (std::sqrt(2.0) *
       std::sqrt(rho * (1.0 + a) +
                 l * l * rho * rho * (1.0 + mu) * (1.0 + mu + a)));
  double by_hand = 0.5 * (1.0 + special::erf(l * sqrt_tau));
  CHECK(acc_large_r(dp, gp) == doctest::Approx(by_hand).epsilon(1e-12));
  CHECK(by_hand == doctest::Approx(0.79).epsilon(0.01));
}

TEST_CASE("glm-sbm accuracy collapses to the single-erf form at c = 0") {
  DataParams dp;
  dp.model = Model::GlmSbm;
  dp.alpha = 4.0;
  dp.rho = 0.1;
  for (double l : {0.3, 0.8, 1.5, 3.0}) {
    dp.lambda = l;
    GcnParams gp{Loss::Quadratic, 100.0, 0.0};
    CHECK(std::fabs(acc_large_r(dp, gp) - acc_large_r_c0(dp)) <= 1e-9);
  }
  // symbolic identity for the csbm as well
  dp.model = Model::Csbm;
  dp.mu = 2.0;
  for (double l : {0.3, 1.0, 2.5}) {
    dp.lambda = l;
    GcnParams gp{Loss::Quadratic, 3.0, 0.0};
    CHECK(acc_large_r(dp, gp) ==
          doctest::Approx(acc_large_r_c0(dp)).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic learning rates") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.mu = 3.0;
  CHECK(rate_inf(dp) == doctest::Approx(0.25).epsilon(1e-14));
  dp.mu = 1e9;
  CHECK(rate_inf(dp) == doctest::Approx(0.5).epsilon(1e-7));
  dp.model = Model::GlmSbm;
  dp.alpha = 1e-12;
  CHECK(rate_inf(dp) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rate_inf_bo() == 1.0);

  // increasing in mu; increasing then saturating (at 1/2) in 1/alpha
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  double prev = -1.0;
  for (double mu = 0.0; mu <= 20.0; mu += 0.5) {
    dp.mu = mu;
    double v = rate_inf(dp);
    CHECK(v > prev);
    CHECK(v <= 0.5);
    prev = v;
  }
  for (Model model : {Model::Csbm, Model::GlmSbm}) {
    DataParams q;
    q.model = model;
    q.mu = 1.0;
    prev = -1.0;
    for (double inv_alpha : {0.1, 0.3, 1.0, 3.0, 10.0, 100.0, 1000.0}) {
      q.alpha = 1.0 / inv_alpha;
      double v = rate_inf(q);
      CHECK(v > prev);
      CHECK(v <= 0.5 + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("finite-lambda rate approaches its limit at the 1/lambda^2 scale") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.mu = 3.0;
  dp.rho = 0.1;
  double tau_inf = rate_inf(dp);
  double scaled[3];
  for (int i = 0; i < 3; ++i) {
    dp.lambda = 3.0 + i;
    double st = sqrt_tau_c0(dp);
    scaled[i] = std::fabs(st * st - tau_inf) * dp.lambda * dp.lambda;
  }
  // lambda^2 |tau(lambda) - tau_inf| is bounded: the fitted constant is finite
  double lo = std::min({scaled[0], scaled[1], scaled[2]});
  double hi = std::max({scaled[0], scaled[1], scaled[2]});
  CHECK(hi / lo <= 1.3);
  CHECK(hi < 1.0);
}

TEST_CASE("optimal self-loop strength") {
  DataParams dp;
  dp.model = Model::Csbm;
  dp.alpha = 4.0;
  dp.mu = 3.0;
  dp.rho = 0.1;
  dp.lambda = 10.0;
  CHECK(c_star(dp, CstarRegime::LargeLambda) ==
        doctest::Approx(0.2).epsilon(1e-14)); // (1+mu+alpha)/(alpha lambda)

  // small-lambda closed form at vanishing train fraction
  dp.rho = 1e-9;
  dp.lambda = 0.01;
  double expected = dp.mu * (1.0 + dp.alpha) /
                    (dp.lambda * dp.alpha * (1.0 + dp.mu));
  CHECK(c_star(dp, CstarRegime::SmallLambda) ==
        doctest::Approx(expected).epsilon(1e-6));

  // finite search stays on the 1/lambda ridge
  dp.rho = 0.1;
  dp.lambda = 1.0;
  double cs = c_star(dp, CstarRegime::Finite);
  CHECK(dp.lambda * cs >= 0.5);
  CHECK(dp.lambda * cs <= 2.0);

  // finite -> large-lambda as lambda grows
  dp.lambda = 20.0;
  double fin = c_star(dp, CstarRegime::Finite);
  double lar = c_star(dp, CstarRegime::LargeLambda);
  CHECK(std::fabs(fin - lar) / lar <= 0.05);

  // glm-sbm: the large-lambda constant comes from the 1-d minimization and
  // scales exactly like 1/lambda
  DataParams glm;
  glm.model = Model::GlmSbm;
  glm.alpha = 4.0;
  glm.rho = 0.1;
  glm.lambda = 30.0;
  double c30 = c_star(glm, CstarRegime::LargeLambda);
  glm.lambda = 60.0;
  double c60 = c_star(glm, CstarRegime::LargeLambda);
  CHECK(30.0 * c30 == doctest::Approx(60.0 * c60).epsilon(1e-6));
  glm.lambda = 30.0;
  double gfin = c_star(glm, CstarRegime::Finite);
  CHECK(std::fabs(gfin - c30) / c30 <= 0.10);

  // the glm-sbm small-lambda constant is not exposed
  CHECK_THROWS_AS(c_star(glm, CstarRegime::SmallLambda), Error);
  glm.lambda = 0.0;
  CHECK_THROWS_AS(c_star(glm, CstarRegime::Finite), Error);
}
