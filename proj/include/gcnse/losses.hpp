#pragma once

#include <cmath>

#include "gcnse/types.hpp"

namespace gcnse {

// l(x): square (1-x)^2/2, logistic log(1+e^-x), hinge max(0, 1-x).
inline double loss_eval(Loss loss, double x) {
  switch (loss) {
    case Loss::Quadratic: {
      double z = 1.0 - x;
      return 0.5 * z * z;
    }
    case Loss::Logistic:
      // log(1+e^-x) evaluated in the stable branch
      return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
    default:
      return x < 1.0 ? 1.0 - x : 0.0;
  }
}

// dl/dx where it exists (the hinge derivative away from the kink x = 1).
inline double loss_d1(Loss loss, double x) {
  switch (loss) {
    case Loss::Quadratic:
      return x - 1.0;
    case Loss::Logistic:
      // -sigmoid(-x)
      return x >= 0.0 ? -std::exp(-x) / (1.0 + std::exp(-x))
                      : -1.0 / (1.0 + std::exp(x));
    default:
      return x < 1.0 ? -1.0 : 0.0;
  }
}

inline double loss_d2(Loss loss, double x) {
  switch (loss) {
    case Loss::Quadratic:
      return 1.0;
    case Loss::Logistic: {
      double s = x >= 0.0 ? std::exp(-x) / (1.0 + std::exp(-x))
                          : 1.0 / (1.0 + std::exp(x));
      return s * (1.0 - s);
    }
    default:
      return 0.0;
  }
}

// Total snr of the data model: lambda^2 + mu^2/alpha for the CSBM,
// lambda^2 (1 + 4 alpha / pi^2) for the GLM-SBM. Detectability sits at 1.
inline double snr_total(const DataParams& p) {
  const double pi_sq = 9.86960440108935861883449099987615;
  if (p.model == Model::Csbm)
    return p.lambda * p.lambda + p.mu * p.mu / p.alpha;
  return p.lambda * p.lambda * (1.0 + 4.0 * p.alpha / pi_sq);
}

} // namespace gcnse
