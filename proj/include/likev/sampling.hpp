#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "likev/model.hpp"

namespace likev {

/// Deterministic random stream keyed by (seed, stream id): a SplitMix64
/// sequence started at a hash of both. Distinct stream ids give independent
/// sequences, so work split across threads by stream id reproduces exactly
/// regardless of the thread count. Construction is a few multiplies.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Inverse-CDF sampler over the declared support of one parameter point.
class PointSampler {
 public:
  PointSampler(const DiscreteModel& model, const ParameterPoint& point);

  const Value& draw(RandomStream& rng) const;
  /// Index into support() of one draw.
  std::size_t draw_index(RandomStream& rng) const;

  const std::vector<Value>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probs_; }

 private:
  std::vector<Value> support_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// n i.i.d. draws from P(. | point).
Sample sample(const DiscreteModel& model, const ParameterPoint& point, std::size_t n,
              std::uint64_t seed, std::uint64_t stream_id = 0);

}  // namespace likev
