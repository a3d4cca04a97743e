#include <doctest.h>

#include <cmath>

#include "gcnse/losses.hpp"
#include "gcnse/mc.hpp"
#include "gcnse/rng.hpp"

using namespace gcnse;

TEST_CASE("loss values at the pinned points") {
  CHECK(loss_eval(Loss::Quadratic, 1.0) == 0.0);
  CHECK(loss_eval(Loss::Logistic, 0.0) ==
        doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(loss_eval(Loss::Hinge, -1.0) == 2.0);
  // l(0) > 0 for all three
  for (Loss l : {Loss::Quadratic, Loss::Logistic, Loss::Hinge})
    CHECK(loss_eval(l, 0.0) > 0.0);
}

TEST_CASE("losses are convex along random chords") {
  Xoshiro256pp rng(314);
  for (Loss l : {Loss::Quadratic, Loss::Logistic, Loss::Hinge}) {
    for (int trial = 0; trial < 2000; ++trial) {
      double x1 = 10.0 * (rng.next_unit() - 0.5);
      double x2 = 10.0 * (rng.next_unit() - 0.5);
      double t = rng.next_unit();
      double lhs = loss_eval(l, t * x1 + (1.0 - t) * x2);
      double rhs = t * loss_eval(l, x1) + (1.0 - t) * loss_eval(l, x2);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("loss derivatives match finite differences") {
  Xoshiro256pp rng(11);
  for (Loss l : {Loss::Quadratic, Loss::Logistic}) {
    for (int trial = 0; trial < 200; ++trial) {
      double x = 8.0 * (rng.next_unit() - 0.5);
      double h = 1e-6;
      double fd = (loss_eval(l, x + h) - loss_eval(l, x - h)) / (2 * h);
      CHECK(loss_d1(l, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  CHECK(loss_d1(Loss::Hinge, 0.5) == -1.0);
  CHECK(loss_d1(Loss::Hinge, 1.5) == 0.0);
}

TEST_CASE("total snr") {
  DataParams p;
  p.model = Model::Csbm;
  p.lambda = 1.0;
  p.mu = 0.0;
  p.alpha = 4.0;
  CHECK(snr_total(p) == doctest::Approx(1.0));
  p.lambda = 0.5;
  p.mu = 1.0;
  CHECK(snr_total(p) == doctest::Approx(0.5));
  p.model = Model::GlmSbm;
  p.lambda = 1.0;
  p.alpha = 1e-12;
  CHECK(snr_total(p) == doctest::Approx(1.0).epsilon(1e-11));

  // monotone in lambda, and in mu for the CSBM
  DataParams q;
  q.model = Model::Csbm;
  q.alpha = 2.0;
  double prev = -1.0;
  for (double l = 0.0; l <= 3.0; l += 0.25) {
    q.lambda = l;
    q.mu = 1.0;
    double v = snr_total(q);
    CHECK(v >= prev);
    prev = v;
  }
  prev = -1.0;
  for (double m = 0.0; m <= 3.0; m += 0.25) {
    q.lambda = 1.0;
    q.mu = m;
    double v = snr_total(q);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("sample_mc is deterministic and distributionally sane") {
  const std::size_t count = 1000000;
  McSampleSet a = sample_mc(count, 42);
  McSampleSet b = sample_mc(count, 42);
  CHECK(a.xi == b.xi);
  CHECK(a.zeta == b.zeta);
  CHECK(a.chi == b.chi);
  CHECK(a.label_u == b.label_u);

  const double bound = 4.0 / std::sqrt(static_cast<double>(count));
  for (const auto* coord : {&a.xi, &a.zeta, &a.chi}) {
    double mean = 0.0, sq = 0.0;
    for (double v : *coord) {
      mean += v;
      sq += v * v;
    }
    mean /= count;
    sq /= count;
    CHECK(std::fabs(mean) <= bound);
    CHECK(std::fabs(sq - mean * mean - 1.0) <= 0.01);
  }
  double u_mean = 0.0;
  for (double v : a.label_u) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    u_mean += v;
  }
  CHECK(std::fabs(u_mean / count - 0.5) <= bound);

  McSampleSet c = sample_mc(count, 43);
  CHECK(c.xi != a.xi);
  CHECK_THROWS_AS(sample_mc(0, 1), Error);
}

TEST_CASE("xoshiro substreams are independent and reproducible") {
  Xoshiro256pp a(substream_seed(7, 0)), b(substream_seed(7, 1));
  Xoshiro256pp a2(substream_seed(7, 0));
  bool all_equal = true;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t va = a.next_u64();
    CHECK(va == a2.next_u64());
    if (va != b.next_u64()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}
