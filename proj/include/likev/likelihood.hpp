#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "likev/model.hpp"
#include "likev/space.hpp"

namespace likev {

/// A likelihood function over a parameter space, meaningful only up to a
/// positive constant. Values are stored for an evaluated set of points; when
/// the function is not exhaustive every other point of the space has
/// likelihood zero.
class LikelihoodFunction {
 public:
  /// Throws ImpossibleObservation if no value is positive and
  /// NegativeProbability if any is negative.
  LikelihoodFunction(std::shared_ptr<const ParameterSpace> space,
                     std::vector<ParameterPoint> points, std::vector<double> values,
                     bool exhaustive);

  const ParameterSpace& space() const { return *space_; }
  const std::shared_ptr<const ParameterSpace>& shared_space() const { return space_; }

  /// Evaluated points in canonical (sorted) order, with their values.
  const std::vector<ParameterPoint>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  bool exhaustive() const { return exhaustive_; }

  /// L(point); zero for unevaluated points of a non-exhaustive function.
  /// Throws PointNotInSpace when `point` is not in the space.
  double at(const ParameterPoint& point) const;
  double max_value() const;

  /// The same function with every value multiplied by `gamma` > 0.
  LikelihoodFunction scaled(double gamma) const;

 private:
  std::shared_ptr<const ParameterSpace> space_;
  std::vector<ParameterPoint> points_;
  std::vector<double> values_;
  bool exhaustive_;
};

enum class Support { FavorsA, FavorsB, Neutral, ConclusiveA, ConclusiveB };

std::string_view support_name(Support s);

struct EvidenceComparison {
  ParameterPoint point_a;
  ParameterPoint point_b;
  double ratio = 1.0;  // L(a)/L(b), +inf when only L(b) is zero
  Support classification = Support::Neutral;
};

/// Pure function of the ratio: >1 favors a, <1 favors b, +inf and 0 are conclusive.
Support classify(double ratio);

struct LikelihoodOptions {
  /// Points to evaluate instead of the model's default candidates. Required
  /// for lazy spaces whose model declares no window.
  std::optional<std::vector<ParameterPoint>> window;
};

/// L(theta) = P(obs | theta), the representative with c = 1.
LikelihoodFunction likelihood(const DiscreteModel& model, const Value& obs,
                              const LikelihoodOptions& options = {});

/// L(theta) = prod_i P(x_i | theta) for an i.i.d. sample, computed as
/// prod over distinct outcomes of P(x|theta)^count with 0^0 = 1.
LikelihoodFunction iid_likelihood(const DiscreteModel& model, const Sample& sample,
                                  const LikelihoodOptions& options = {});

/// Law-of-likelihood comparison of two points on one function.
/// Throws UndefinedRatio when both likelihoods are zero.
EvidenceComparison likelihood_ratio(const LikelihoodFunction& l, const ParameterPoint& a,
                                    const ParameterPoint& b);

/// Comparison of a point of `la` with a point of `lb`; refused with
/// CrossModelComparison unless the two are comparable().
EvidenceComparison likelihood_ratio(const LikelihoodFunction& la, const ParameterPoint& a,
                                    const LikelihoodFunction& lb, const ParameterPoint& b);

/// Distinct outcomes of a sample with their multiplicities, in sorted order.
using OutcomeCounts = std::vector<std::pair<Value, int>>;

OutcomeCounts count_outcomes(const Sample& sample);

/// prod over distinct outcomes of P(x | point)^count, with 0^0 = 1. This is
/// the exact arithmetic iid_likelihood uses for each point.
double joint_probability(const DiscreteModel& model, const ParameterPoint& point,
                         const OutcomeCounts& counts);

/// Every point attaining the maximum, in canonical order. No tie-breaking.
std::vector<ParameterPoint> max_likelihood_points(const LikelihoodFunction& l);

/// True when both functions live on one parameter space and l1 = c * l2 for
/// some c > 0 within eps * max(l1). c is fitted at the argmax of l1 and zeros
/// must coincide.
bool proportional_equivalent(const LikelihoodFunction& l1, const LikelihoodFunction& l2,
                             double eps = 1e-12);

/// True when points of `l1` and `l2` may be compared by a likelihood ratio:
/// the functions share a parameter space and are the same function up to scale.
bool comparable(const LikelihoodFunction& l1, const LikelihoodFunction& l2);

}  // namespace likev
