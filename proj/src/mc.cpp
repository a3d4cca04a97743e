#include "gcnse/mc.hpp"

#include "gcnse/rng.hpp"

namespace gcnse {

McSampleSet sample_mc(std::size_t count, std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "sample_mc: count must be >= 1");
  McSampleSet set;
  set.seed = seed;
  set.xi.resize(count);
  set.zeta.resize(count);
  set.chi.resize(count);
  set.label_u.resize(count);
  Xoshiro256pp rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    auto [g0, g1] = rng.next_gaussian_pair();
    auto [g2, g3] = rng.next_gaussian_pair();
    (void)g3; // fixed five-uniform budget per sample keeps the layout stable
    set.xi[k] = g0;
    set.zeta[k] = g1;
    set.chi[k] = g2;
    set.label_u[k] = rng.next_unit();
  }
  return set;
}

} // namespace gcnse
