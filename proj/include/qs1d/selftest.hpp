#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "qs1d/potential.hpp"

namespace qs1d {

/// Random real profile with up to `max_segments` contiguous segments
/// starting at y = 0; values uniform in [0, value_hi_frac * e] keep both
/// channels propagating everywhere.
PotentialProfile random_profile(std::mt19937_64& rng, double e, int max_segments = 8,
                                double value_hi_frac = 0.9);

struct SelftestSuite {
  std::string name;
  int passed = 0;
  int failed = 0;
};

struct SelftestReport {
  std::vector<SelftestSuite> suites;
  bool all_passed() const;
  int total_failed() const;
};

/// Runs the randomized invariant suites (unitarity, current conservation,
/// injectivity sum rule, reciprocity, sensitivity antisymmetry, clock
/// normalization, off-diagonal sum rule, emittance zero sums) on `count`
/// generated profiles and streams one line per suite to `log`.
SelftestReport run_selftest(std::uint64_t seed, int count, std::ostream& log);

}  // namespace qs1d
