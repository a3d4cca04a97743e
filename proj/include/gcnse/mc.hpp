#pragma once

#include <cstdint>
#include <vector>

#include "gcnse/error.hpp"

namespace gcnse {

// Monte-Carlo sample set for the fixed-point expectations. One sample is the
// Gaussian triple (xi, zeta, chi) of the output channel plus one uniform
// label draw. The set is generated once per solve and reused across all
// iterations so that the iteration is a deterministic map and can converge
// exactly; regeneration from the same seed is bit-identical.
//
// The uniform draw turns into the label: a Rademacher y for the CSBM, or the
// chi-conditional label when a sampled GLM-SBM label is required (the label
// law moves with the running overlaps, the uniforms do not).
struct McSampleSet {
  std::vector<double> xi;
  std::vector<double> zeta;
  std::vector<double> chi;
  std::vector<double> label_u; // uniform [0,1)
  std::uint64_t seed = 0;

  std::size_t count() const { return xi.size(); }

  double rademacher(std::size_t k) const {
    return label_u[k] < 0.5 ? 1.0 : -1.0;
  }
  // Conditional draw given P(y = +1): +1 iff the stored uniform falls below.
  double conditional_label(std::size_t k, double p_plus) const {
    return label_u[k] < p_plus ? 1.0 : -1.0;
  }
};

McSampleSet sample_mc(std::size_t count, std::uint64_t seed);

} // namespace gcnse
