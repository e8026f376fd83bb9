#include "likev/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "likev/error.hpp"

namespace likev {

namespace {

constexpr std::uint64_t kValidationSpread = 1000;

void check_entry(double p, const ParameterSpace& space, const ParameterPoint& point,
                 const Value& outcome) {
  if (std::isnan(p))
    throw Error(ErrorCode::NegativeProbability, "probability is NaN at " + space.format(point));
  if (p < 0.0)
    throw Error(ErrorCode::NegativeProbability, "negative probability " + format_double(p) +
                                                    " for outcome " + to_string(outcome) +
                                                    " at " + space.format(point));
}

void check_sum(double sum, const ParameterSpace& space, const ParameterPoint& point) {
  if (std::fabs(sum - 1.0) > kNormalizationTolerance)
    throw Error(ErrorCode::RowNotNormalized,
                "probabilities at " + space.format(point) + " sum to " + format_double(sum));
}

std::vector<std::uint64_t> validation_indices(const ParameterSpace& space) {
  const auto n = space.size();
  std::vector<std::uint64_t> out;
  if (space.enumerable()) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  for (std::uint64_t k = 0; k <= kValidationSpread; ++k)
    out.push_back(static_cast<std::uint64_t>(
        static_cast<long double>(n - 1) * k / kValidationSpread));
  return out;
}

}  // namespace

DiscreteModel build_model(std::string name, ParameterSpace space, OutcomeSpace outcomes,
                          std::vector<double> table) {
  if (!space.enumerable() || !outcomes.size() ||
      space.size() > kEnumerationLimit / outcomes.size())
    throw Error(ErrorCode::InvalidArgument, "dense table too large for model '" + name + "'");
  const auto rows = space.size();
  const auto cols = outcomes.size();
  if (table.size() != rows * cols)
    throw Error(ErrorCode::InvalidArgument,
                "table for model '" + name + "' has " + std::to_string(table.size()) +
                    " entries, expected " + std::to_string(rows * cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    auto point = space.point_at(r);
    double sum = 0.0;
    for (std::uint64_t c = 0; c < cols; ++c) {
      double p = table[r * cols + c];
      check_entry(p, space, point, outcomes.at(c));
      sum += p;
    }
    check_sum(sum, space, point);
  }
  auto state = std::make_shared<DiscreteModel::State>(DiscreteModel::State{
      std::move(name), std::make_shared<const ParameterSpace>(std::move(space)),
      std::move(outcomes), std::move(table), nullptr});
  return DiscreteModel(std::move(state));
}

DiscreteModel build_model(std::string name, ParameterSpace space, OutcomeSpace outcomes,
                          PmfEvaluator evaluator) {
  if (!evaluator.probability || !evaluator.support)
    throw Error(ErrorCode::InvalidArgument, "evaluator for '" + name + "' is incomplete");
  if (!space.enumerable() && !evaluator.window)
    throw Error(ErrorCode::InvalidArgument,
                "model '" + name + "' has a lazy space but no likelihood window");
  for (auto i : validation_indices(space)) {
    auto point = space.point_at(i);
    auto support = evaluator.support(point);
    std::set<Value> seen;
    double sum = 0.0;
    for (const auto& x : support) {
      if (!outcomes.contains(x))
        throw Error(ErrorCode::OutcomeNotInSpace, "support of " + space.format(point) +
                                                      " contains " + to_string(x));
      if (!seen.insert(x).second)
        throw Error(ErrorCode::InvalidArgument, "support of " + space.format(point) +
                                                    " repeats " + to_string(x));
      double p = evaluator.probability(point, x);
      check_entry(p, space, point, x);
      sum += p;
    }
    check_sum(sum, space, point);
  }
  auto state = std::make_shared<DiscreteModel::State>(DiscreteModel::State{
      std::move(name), std::make_shared<const ParameterSpace>(std::move(space)),
      std::move(outcomes), {}, std::make_shared<const PmfEvaluator>(std::move(evaluator))});
  return DiscreteModel(std::move(state));
}

double DiscreteModel::probability(const ParameterPoint& point, const Value& outcome) const {
  const auto& s = *state_;
  auto col = s.outcomes.index_of(outcome);
  if (!col) throw Error(ErrorCode::OutcomeNotInSpace, "'" + to_string(outcome) +
                                                          "' is not an outcome of " + s.name);
  if (s.evaluator) {
    if (!s.space->contains(point))
      throw Error(ErrorCode::PointNotInSpace, "point is not in the space of " + s.name);
    return s.evaluator->probability(point, outcome);
  }
  auto row = s.space->index_of(point);
  if (!row) throw Error(ErrorCode::PointNotInSpace, "point is not in the space of " + s.name);
  return s.table[*row * s.outcomes.size() + *col];
}

std::vector<Value> DiscreteModel::support(const ParameterPoint& point) const {
  const auto& s = *state_;
  if (s.evaluator) {
    if (!s.space->contains(point))
      throw Error(ErrorCode::PointNotInSpace, "point is not in the space of " + s.name);
    return s.evaluator->support(point);
  }
  auto row = s.space->index_of(point);
  if (!row) throw Error(ErrorCode::PointNotInSpace, "point is not in the space of " + s.name);
  std::vector<Value> out;
  const auto cols = s.outcomes.size();
  for (std::uint64_t c = 0; c < cols; ++c)
    if (s.table[*row * cols + c] > 0.0) out.push_back(s.outcomes.at(c));
  return out;
}

std::vector<ParameterPoint> DiscreteModel::candidate_points(
    std::span<const Value> observations) const {
  if (space().enumerable()) return space().points();
  return state_->evaluator->window(observations);
}

std::size_t Sample::distinct_count() const {
  std::set<Value> distinct(obs_.begin(), obs_.end());
  return distinct.size();
}

}  // namespace likev
