#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>

#include "minmax/distributions.hpp"
#include "minmax/moments.hpp"
#include "minmax/parallel.hpp"
#include "minmax/random.hpp"

namespace oracle {

/// One draw of word(X) by playing the tournament on fresh copies of X.
inline double tournament(const mmh::DistributionSpec& spec, const std::vector<mmh::WordStep>& steps,
                         std::size_t depth, mmh::RandomStream& rng) {
  if (depth == 0) return spec.sample(rng);
  const auto& s = steps[depth - 1];
  double v = tournament(spec, steps, depth - 1, rng);
  for (std::uint64_t k = 1; k < s.count; ++k) {
    const double w = tournament(spec, steps, depth - 1, rng);
    v = s.op == mmh::Op::MAX ? std::max(v, w) : std::min(v, w);
  }
  return v;
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo E word(X)^r over `replicates` tournaments.
inline MeanEstimate tournament_moment(const mmh::DistributionSpec& spec, const mmh::Word& word, double r,
                                      std::uint64_t replicates, std::uint64_t seed, unsigned threads = 1) {
  struct Acc {
    double s = 0.0, s2 = 0.0;
  };
  mmh::SamplePlan plan;
  plan.samples = replicates;
  plan.seed = seed;
  plan.threads = threads;
  const Acc a = mmh::run_chunks(
      plan, Acc{},
      [&](mmh::RandomStream& rng, std::uint64_t count) {
        Acc acc;
        for (std::uint64_t i = 0; i < count; ++i) {
          const double v = std::pow(tournament(spec, word.steps(), word.steps().size(), rng), r);
          acc.s += v;
          acc.s2 += v * v;
        }
        return acc;
      },
      [](Acc& x, const Acc& y) {
        x.s += y.s;
        x.s2 += y.s2;
      });
  const double n = static_cast<double>(replicates);
  const double mean = a.s / n;
  return {mean, std::sqrt(std::max(0.0, a.s2 / n - mean * mean) / n)};
}

}  // namespace oracle
