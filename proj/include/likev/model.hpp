#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "likev/space.hpp"
#include "likev/value.hpp"

namespace likev {

/// Tolerance on the per-point sum of a probability mass function.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Function-backed probability mass function.
///
/// `support` must list, for every parameter point, a finite set of distinct
/// outcomes outside of which `probability` is zero. `window` is only needed
/// when the parameter space is too large to enumerate: given some
/// observations it returns every point at which any of them has positive
/// probability (extra points are harmless, missing ones are not).
struct PmfEvaluator {
  std::function<double(const ParameterPoint&, const Value&)> probability;
  std::function<std::vector<Value>(const ParameterPoint&)> support;
  std::function<std::vector<ParameterPoint>(std::span<const Value>)> window;
};

/// A family of probability mass functions indexed by a parameter space.
/// Immutable after construction; cheap to copy (shared state).
class DiscreteModel {
 public:
  const std::string& name() const { return state_->name; }
  const ParameterSpace& space() const { return *state_->space; }
  const std::shared_ptr<const ParameterSpace>& shared_space() const { return state_->space; }
  const OutcomeSpace& outcomes() const { return state_->outcomes; }
  bool is_dense() const { return state_->evaluator == nullptr; }

  /// P(outcome | point). Outcomes outside the outcome space are an error;
  /// in-space outcomes outside the support have probability 0.
  double probability(const ParameterPoint& point, const Value& outcome) const;

  /// Outcomes with declared positive mass under `point`, in canonical order.
  std::vector<Value> support(const ParameterPoint& point) const;

  /// Points worth evaluating for a likelihood over `observations`: the whole
  /// space when it is enumerable, otherwise the evaluator's window.
  std::vector<ParameterPoint> candidate_points(std::span<const Value> observations) const;

 private:
  friend DiscreteModel build_model(std::string, ParameterSpace, OutcomeSpace,
                                   std::vector<double>);
  friend DiscreteModel build_model(std::string, ParameterSpace, OutcomeSpace, PmfEvaluator);

  struct State {
    std::string name;
    std::shared_ptr<const ParameterSpace> space;
    OutcomeSpace outcomes;
    std::vector<double> table;  // row-major: point index x outcome index
    std::shared_ptr<const PmfEvaluator> evaluator;
  };

  explicit DiscreteModel(std::shared_ptr<const State> s) : state_(std::move(s)) {}

  std::shared_ptr<const State> state_;
};

/// Dense-table model. `table` has one row per point (canonical order) and one
/// column per outcome. Throws NegativeProbability or RowNotNormalized.
DiscreteModel build_model(std::string name, ParameterSpace space, OutcomeSpace outcomes,
                          std::vector<double> table);

/// Function-backed model. Normalization is checked at every point of an
/// enumerable space, and at a deterministic spread of points otherwise.
DiscreteModel build_model(std::string name, ParameterSpace space, OutcomeSpace outcomes,
                          PmfEvaluator evaluator);

/// An ordered list of observed outcomes.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<Value> observations) : obs_(std::move(observations)) {}

  const std::vector<Value>& observations() const { return obs_; }
  std::size_t size() const { return obs_.size(); }
  std::size_t distinct_count() const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<Value> obs_;
};

}  // namespace likev
