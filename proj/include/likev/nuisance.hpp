#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "likev/likelihood.hpp"
#include "likev/model.hpp"

namespace likev {

/// A function of a sample whose distribution is meant to depend only on the
/// parameters of interest.
struct DerivedStatistic {
  std::string name;
  std::function<Value(const Sample&)> map;
  /// Every value the statistic can take on a sample of size n.
  std::function<std::vector<Value>(std::size_t n)> codomain;
  /// Optional fast path for statistics that only look at which observations
  /// are equal: receives the sample as support indices.
  std::function<Value(std::span<const std::size_t>)> pattern_map;
};

/// Number of distinct values in the sample. Binned as {"1", ">1"} by
/// default; the fine-grained variant reports the exact count 1..n.
DerivedStatistic distinct_count_statistic(bool binned = true);

/// Split of a parameter space into dimensions of interest and nuisance
/// dimensions, with the weighting used when summing nuisance values out.
struct NuisanceSpec {
  std::vector<std::string> interest;
  std::vector<std::string> nuisance;
  /// Weights keyed by nuisance coordinates (in `nuisance` order). Absent
  /// means uniform unit weights.
  std::optional<std::map<std::vector<Value>, double>> weights;

  static NuisanceSpec with_nuisance(const ParameterSpace& space,
                                    std::vector<std::string> nuisance);
  static NuisanceSpec with_interest(const ParameterSpace& space,
                                    std::vector<std::string> interest);
};

struct DerivedModelOptions {
  std::size_t max_n = 4;
  /// Bound on the total number of outcome sequences enumerated.
  std::uint64_t max_sequences = 100'000'000;
  /// Nuisance coordinate tuples to check. Default: every value of listed
  /// dimensions; {lo, -1, 0, 1, hi} (clipped) of integer-range dimensions.
  std::optional<std::vector<std::vector<Value>>> nuisance_window;
  unsigned threads = 1;
};

/// Exact distribution of `stat` over samples of size n drawn at `point`,
/// indexed like `codomain`. Summation runs in a canonical order (support
/// sorted by decreasing probability) so permuted models give identical bits.
/// The result is divided by the enumerated mass.
std::vector<double> statistic_distribution(const DiscreteModel& model,
                                           const ParameterPoint& point,
                                           const DerivedStatistic& stat, std::size_t n,
                                           std::span<const Value> codomain, unsigned threads = 1);

/// Model over the interest dimensions whose outcomes are statistic values.
/// Throws NuisanceDependent when the statistic's distribution changes across
/// nuisance values, EnumerationTooLarge past the configured bounds.
DiscreteModel derived_statistic_model(const DiscreteModel& model, const DerivedStatistic& stat,
                                      std::size_t n, const NuisanceSpec& spec,
                                      const DerivedModelOptions& options = {});

struct EstimatedStatisticModel {
  DiscreteModel model;
  /// Row-major like the model table: interest point x statistic value.
  std::vector<double> standard_errors;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo counterpart of derived_statistic_model for sample sizes past
/// the enumeration bound. Nuisance values are compared within 6 standard
/// errors; the reported row is the first nuisance value's estimate.
EstimatedStatisticModel estimate_statistic_model(const DiscreteModel& model,
                                                 const DerivedStatistic& stat, std::size_t n,
                                                 const NuisanceSpec& spec, std::uint64_t trials,
                                                 std::uint64_t seed,
                                                 const DerivedModelOptions& options = {});

/// Sum over nuisance values: value(i) = sum_n L(i, n) * w(n).
LikelihoodFunction marginalize(const LikelihoodFunction& l, const NuisanceSpec& spec);

/// Maximum over nuisance values: value(i) = max_n L(i, n).
LikelihoodFunction profile(const LikelihoodFunction& l, const NuisanceSpec& spec);

}  // namespace likev
