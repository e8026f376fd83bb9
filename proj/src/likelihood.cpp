#include "likev/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "likev/error.hpp"

namespace likev {

LikelihoodFunction::LikelihoodFunction(std::shared_ptr<const ParameterSpace> space,
                                       std::vector<ParameterPoint> points,
                                       std::vector<double> values, bool exhaustive)
    : space_(std::move(space)), exhaustive_(exhaustive) {
  if (points.size() != values.size())
    throw Error(ErrorCode::InvalidArgument, "likelihood points and values differ in length");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  points_.reserve(points.size());
  values_.reserve(values.size());
  bool any_positive = false;
  for (auto i : order) {
    if (!points_.empty() && points_.back() == points[i])
      throw Error(ErrorCode::InvalidArgument, "likelihood evaluated twice at " +
                                                  space_->format(points[i]));
    if (!space_->contains(points[i]))
      throw Error(ErrorCode::PointNotInSpace, "likelihood point outside its space");
    if (std::isnan(values[i]) || values[i] < 0.0)
      throw Error(ErrorCode::NegativeProbability, "likelihood value " +
                                                      format_double(values[i]) + " at " +
                                                      space_->format(points[i]));
    any_positive = any_positive || values[i] > 0.0;
    points_.push_back(std::move(points[i]));
    values_.push_back(values[i]);
  }
  if (!any_positive)
    throw Error(ErrorCode::ImpossibleObservation,
                "the observation has probability zero at every parameter point");
}

double LikelihoodFunction::at(const ParameterPoint& point) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), point);
  if (it != points_.end() && *it == point) return values_[it - points_.begin()];
  if (!space_->contains(point))
    throw Error(ErrorCode::PointNotInSpace, "point is not in the likelihood's parameter space");
  return 0.0;
}

double LikelihoodFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

LikelihoodFunction LikelihoodFunction::scaled(double gamma) const {
  if (!(gamma > 0.0) || std::isinf(gamma))
    throw Error(ErrorCode::InvalidArgument, "scale factor must be positive and finite");
  auto values = values_;
  for (auto& v : values) v *= gamma;
  return LikelihoodFunction(space_, points_, std::move(values), exhaustive_);
}

std::string_view support_name(Support s) {
  switch (s) {
    case Support::FavorsA: return "favors_a";
    case Support::FavorsB: return "favors_b";
    case Support::Neutral: return "neutral";
    case Support::ConclusiveA: return "conclusive_a";
    case Support::ConclusiveB: return "conclusive_b";
  }
  return "neutral";
}

Support classify(double ratio) {
  if (std::isinf(ratio)) return Support::ConclusiveA;
  if (ratio == 0.0) return Support::ConclusiveB;
  if (ratio > 1.0) return Support::FavorsA;
  if (ratio < 1.0) return Support::FavorsB;
  return Support::Neutral;
}

namespace {

std::vector<ParameterPoint> evaluation_points(const DiscreteModel& model,
                                              std::span<const Value> observations,
                                              const LikelihoodOptions& options) {
  if (!options.window) return model.candidate_points(observations);
  auto pts = *options.window;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const auto& p : pts)
    if (!model.space().contains(p))
      throw Error(ErrorCode::PointNotInSpace,
                  "window point " + model.space().format(p) + " is not in the model space");
  return pts;
}

bool is_exhaustive(const DiscreteModel& model, std::size_t evaluated) {
  return model.space().enumerable() && evaluated == model.space().size();
}

}  // namespace

LikelihoodFunction likelihood(const DiscreteModel& model, const Value& obs,
                              const LikelihoodOptions& options) {
  if (!model.outcomes().contains(obs))
    throw Error(ErrorCode::OutcomeNotInSpace,
                "'" + to_string(obs) + "' is not an outcome of " + model.name());
  auto points = evaluation_points(model, std::span<const Value>(&obs, 1), options);
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(model.probability(p, obs));
  bool exhaustive = is_exhaustive(model, points.size());
  return LikelihoodFunction(model.shared_space(), std::move(points), std::move(values),
                            exhaustive);
}

OutcomeCounts count_outcomes(const Sample& sample) {
  std::map<Value, int> counts;
  for (const auto& x : sample.observations()) ++counts[x];
  return OutcomeCounts(counts.begin(), counts.end());
}

double joint_probability(const DiscreteModel& model, const ParameterPoint& point,
                         const OutcomeCounts& counts) {
  double v = 1.0;
  for (const auto& [x, k] : counts) {
    const double p = model.probability(point, x);
    v *= k == 1 ? p : std::pow(p, k);
    if (v == 0.0) break;
  }
  return v;
}

LikelihoodFunction iid_likelihood(const DiscreteModel& model, const Sample& sample,
                                  const LikelihoodOptions& options) {
  if (sample.size() == 0) throw Error(ErrorCode::InvalidArgument, "sample is empty");
  for (const auto& x : sample.observations())
    if (!model.outcomes().contains(x))
      throw Error(ErrorCode::OutcomeNotInSpace,
                  "'" + to_string(x) + "' is not an outcome of " + model.name());
  const auto counts = count_outcomes(sample);
  std::vector<Value> distinct;
  for (const auto& [x, k] : counts) distinct.push_back(x);
  auto points = evaluation_points(model, distinct, options);
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(joint_probability(model, p, counts));
  bool exhaustive = is_exhaustive(model, points.size());
  return LikelihoodFunction(model.shared_space(), std::move(points), std::move(values),
                            exhaustive);
}

EvidenceComparison likelihood_ratio(const LikelihoodFunction& l, const ParameterPoint& a,
                                    const ParameterPoint& b) {
  const double la = l.at(a);
  const double lb = l.at(b);
  if (la == 0.0 && lb == 0.0)
    throw Error(ErrorCode::UndefinedRatio, "both " + l.space().format(a) + " and " +
                                               l.space().format(b) + " have likelihood zero");
  const double ratio = lb == 0.0 ? std::numeric_limits<double>::infinity() : la / lb;
  return {a, b, ratio, classify(ratio)};
}

EvidenceComparison likelihood_ratio(const LikelihoodFunction& la, const ParameterPoint& a,
                                    const LikelihoodFunction& lb, const ParameterPoint& b) {
  if (!comparable(la, lb))
    throw Error(ErrorCode::CrossModelComparison,
                "the points lie on different likelihood functions");
  if (!lb.space().contains(b))
    throw Error(ErrorCode::PointNotInSpace, "point is not in the likelihood's parameter space");
  return likelihood_ratio(la, a, b);
}

std::vector<ParameterPoint> max_likelihood_points(const LikelihoodFunction& l) {
  const double best = l.max_value();
  std::vector<ParameterPoint> out;
  for (std::size_t i = 0; i < l.values().size(); ++i)
    if (l.values()[i] == best) out.push_back(l.points()[i]);
  return out;
}

bool proportional_equivalent(const LikelihoodFunction& l1, const LikelihoodFunction& l2,
                             double eps) {
  if (!(l1.space() == l2.space())) return false;
  const auto& v1 = l1.values();
  const auto top = std::max_element(v1.begin(), v1.end()) - v1.begin();
  const double max1 = v1[top];
  const double at2 = l2.at(l1.points()[top]);
  if (at2 == 0.0) return false;
  const double c = max1 / at2;
  auto agrees = [&](double a, double b) {
    if ((a == 0.0) != (b == 0.0)) return false;
    return std::fabs(a - c * b) <= eps * max1;
  };
  for (std::size_t i = 0; i < l1.points().size(); ++i)
    if (!agrees(v1[i], l2.at(l1.points()[i]))) return false;
  for (std::size_t i = 0; i < l2.points().size(); ++i)
    if (!agrees(l1.at(l2.points()[i]), l2.values()[i])) return false;
  return true;
}

bool comparable(const LikelihoodFunction& l1, const LikelihoodFunction& l2) {
  return proportional_equivalent(l1, l2, 1e-12);
}

}  // namespace likev
