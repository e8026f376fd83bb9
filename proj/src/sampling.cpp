#include "likev/sampling.hpp"

#include <algorithm>

#include "likev/error.hpp"

namespace likev {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : state_(mix64(seed ^ mix64(stream_id + kGolden))) {}

std::uint64_t RandomStream::next() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

PointSampler::PointSampler(const DiscreteModel& model, const ParameterPoint& point)
    : support_(model.support(point)) {
  probs_.reserve(support_.size());
  cdf_.reserve(support_.size());
  double total = 0.0;
  for (const auto& x : support_) {
    probs_.push_back(model.probability(point, x));
    total += probs_.back();
    cdf_.push_back(total);
  }
  if (support_.empty() || !(total > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "no positive mass at " + model.space().format(point));
}

std::size_t PointSampler::draw_index(RandomStream& rng) const {
  const double target = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

const Value& PointSampler::draw(RandomStream& rng) const { return support_[draw_index(rng)]; }

Sample sample(const DiscreteModel& model, const ParameterPoint& point, std::size_t n,
              std::uint64_t seed, std::uint64_t stream_id) {
  PointSampler sampler(model, point);
  RandomStream rng(seed, stream_id);
  std::vector<Value> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) draws.push_back(sampler.draw(rng));
  return Sample(std::move(draws));
}

}  // namespace likev
