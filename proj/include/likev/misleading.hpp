#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "likev/likelihood.hpp"
#include "likev/model.hpp"
#include "likev/models.hpp"
#include "likev/nuisance.hpp"

namespace likev {

/// How a sample's evidence is read before asking whether it misleads.
enum class ComparisonStyle {
  /// Best favoured full point against the best point sharing the true
  /// interest value (the joint-parameter reading).
  VectorArgmax,
  /// One named favoured point against the true point.
  FixedPair,
  /// Ratio on the likelihood with nuisance dimensions summed out.
  InterestMarginal,
  /// Ratio on a derived-statistic model over the interest dimensions.
  InterestDerived,
};

std::string_view style_name(ComparisonStyle style);
std::optional<ComparisonStyle> parse_style(std::string_view text);

/// Parameter points counted as "misleading" when supported: those whose
/// coordinates on `dims` match one of `values`. `dims` are the interest
/// dimensions; the rest are nuisance.
struct FavoredSet {
  std::vector<std::string> dims;
  std::vector<std::vector<Value>> values;
};

/// Every value tuple of `dims` except the one `truth` has.
FavoredSet favor_all_but_truth(const ParameterSpace& space, const ParameterPoint& truth,
                               std::vector<std::string> dims);

struct ComparisonSpec {
  ComparisonStyle style = ComparisonStyle::VectorArgmax;
  FavoredSet favored;
  double threshold = 8.0;  // k > 1
  /// Used by InterestDerived only.
  DerivedStatistic statistic = distinct_count_statistic();
  DerivedModelOptions derived_options;
};

enum class ReportMethod { Exact, MonteCarlo };

struct MisleadingReport {
  double probability = 0.0;
  ReportMethod method = ReportMethod::Exact;
  /// Sequences enumerated (exact) or trials run (Monte Carlo).
  std::uint64_t size = 0;
  std::optional<double> standard_error;
  std::optional<std::uint64_t> seed;
  /// Smallest likelihood ratio among misleading samples, when there are any.
  std::optional<double> min_misleading_ratio;
};

struct SimulationOptions {
  std::uint64_t max_sequences = 20'000'000;
  unsigned threads = 1;
};

/// Likelihood ratio favoured-vs-truth that `spec` assigns to one sample.
/// NaN when the comparison is undefined (both sides zero).
double comparison_ratio(const DiscreteModel& model, const ParameterPoint& truth,
                        const ComparisonSpec& spec, const Sample& sample);

/// Exact P(ratio >= k | truth) by enumerating every sequence of n outcomes
/// in the support of `truth`. The probability is normalised by the total
/// enumerated mass, so "all" and "none" come out as exactly 1 and 0.
MisleadingReport exact_misleading_probability(const DiscreteModel& model,
                                              const ParameterPoint& truth,
                                              const ComparisonSpec& spec, std::size_t n,
                                              const SimulationOptions& options = {});

/// Frequency of ratio >= k over `trials` seeded samples. Trial t draws from
/// stream (seed, t), so the estimate does not depend on the thread count.
MisleadingReport monte_carlo_misleading(const DiscreteModel& model, const ParameterPoint& truth,
                                        const ComparisonSpec& spec, std::size_t n,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const SimulationOptions& options = {});

/// Likelihood over (mu, sigma) after two observations from Birnbaum's model:
/// sigma = 0 is 1 only at mu = x1 = x2; sigma = h is
/// c^2 (h - |x1 - mu|)(h - |x2 - mu|) on the overlap of the two supports.
LikelihoodFunction two_observation_likelihood_profile(const BirnbaumConfig& cfg,
                                                      std::int64_t x1, std::int64_t x2);

}  // namespace likev
