#include "likev/misleading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "likev/error.hpp"
#include "likev/parallel.hpp"
#include "likev/sampling.hpp"

namespace likev {

std::string_view style_name(ComparisonStyle style) {
  switch (style) {
    case ComparisonStyle::VectorArgmax: return "vector-argmax";
    case ComparisonStyle::FixedPair: return "fixed-pair";
    case ComparisonStyle::InterestMarginal: return "interest-marginal";
    case ComparisonStyle::InterestDerived: return "interest-derived";
  }
  return "vector-argmax";
}

std::optional<ComparisonStyle> parse_style(std::string_view text) {
  for (auto s : {ComparisonStyle::VectorArgmax, ComparisonStyle::FixedPair,
                 ComparisonStyle::InterestMarginal, ComparisonStyle::InterestDerived})
    if (style_name(s) == text) return s;
  return std::nullopt;
}

FavoredSet favor_all_but_truth(const ParameterSpace& space, const ParameterPoint& truth,
                               std::vector<std::string> dims) {
  std::vector<std::size_t> idx;
  std::vector<Dimension> sub;
  for (const auto& name : dims) {
    auto k = space.dimension_index(name);
    if (!k) throw Error(ErrorCode::SpecInconsistent, "no dimension named '" + name + "'");
    idx.push_back(*k);
    sub.push_back(space.dimensions()[*k]);
  }
  ParameterSpace interest(std::move(sub));
  if (!interest.enumerable())
    throw Error(ErrorCode::SpecInconsistent, "favoured dimensions are too large to enumerate");
  const auto truth_key = project(truth, idx);
  FavoredSet out{std::move(dims), {}};
  for (auto& p : interest.points())
    if (p.coords != truth_key) out.values.push_back(std::move(p.coords));
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_of(double favored, double truth) {
  if (truth == 0.0) return favored > 0.0 ? kInf : kNaN;
  return favored / truth;
}

/// Precomputed state for evaluating one ComparisonSpec on many samples
/// drawn from `truth`. Samples are passed as sorted indices into support(),
/// which is in canonical outcome order, so products run in the same order
/// as joint_probability.
class Comparator {
 public:
  Comparator(const DiscreteModel& model, const ParameterPoint& truth, const ComparisonSpec& spec,
             std::size_t n)
      : model_(model), truth_(truth), spec_(spec) {
    const auto& space = model.space();
    if (!space.contains(truth))
      throw Error(ErrorCode::PointNotInSpace, "true point is not in the model space");
    if (!(spec.threshold > 1.0))
      throw Error(ErrorCode::SpecInconsistent, "threshold k must exceed 1");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
    if (spec.favored.dims.empty() || spec.favored.values.empty())
      throw Error(ErrorCode::SpecInconsistent, "favoured set is empty");
    std::set<std::size_t> seen;
    for (const auto& name : spec.favored.dims) {
      auto k = space.dimension_index(name);
      if (!k) throw Error(ErrorCode::SpecInconsistent, "no dimension named '" + name + "'");
      if (!seen.insert(*k).second)
        throw Error(ErrorCode::SpecInconsistent, "dimension '" + name + "' listed twice");
      fav_idx_.push_back(*k);
    }
    for (const auto& tuple : spec.favored.values) {
      if (tuple.size() != fav_idx_.size())
        throw Error(ErrorCode::SpecInconsistent, "favoured tuple has the wrong length");
      for (std::size_t i = 0; i < tuple.size(); ++i)
        if (!space.dimensions()[fav_idx_[i]].contains(tuple[i]))
          throw Error(ErrorCode::SpecInconsistent,
                      "favoured value '" + to_string(tuple[i]) + "' is not in dimension " +
                          spec.favored.dims[i]);
      favored_keys_.insert(tuple);
    }
    truth_key_ = project(truth, fav_idx_);
    if (favored_keys_.count(truth_key_))
      throw Error(ErrorCode::SpecInconsistent, "the favoured set contains the true point");

    support_ = model.support(truth);
    std::sort(support_.begin(), support_.end());
    for (std::size_t i = 0; i < support_.size(); ++i) support_index_.emplace(support_[i], i);

    switch (spec.style) {
      case ComparisonStyle::FixedPair: {
        if (fav_idx_.size() != space.rank() || favored_keys_.size() != 1)
          throw Error(ErrorCode::SpecInconsistent,
                      "fixed-pair needs exactly one fully specified favoured point");
        ParameterPoint a;
        a.coords.resize(space.rank());
        const auto& tuple = *favored_keys_.begin();
        for (std::size_t i = 0; i < fav_idx_.size(); ++i) a.coords[fav_idx_[i]] = tuple[i];
        points_ = {truth, std::move(a)};
        group_ = {0, 1};
        group_count_ = 2;
        break;
      }
      case ComparisonStyle::VectorArgmax:
      case ComparisonStyle::InterestMarginal: {
        auto candidates = model.candidate_points(support_);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::map<std::vector<Value>, int> groups;
        for (auto& p : candidates) {
          auto key = project(p, fav_idx_);
          int g = -1;
          if (key == truth_key_) {
            g = 0;
          } else if (favored_keys_.count(key)) {
            g = groups.try_emplace(key, static_cast<int>(groups.size()) + 1).first->second;
          }
          if (g < 0) continue;
          points_.push_back(std::move(p));
          group_.push_back(g);
        }
        group_count_ = static_cast<int>(groups.size()) + 1;
        break;
      }
      case ComparisonStyle::InterestDerived: {
        NuisanceSpec nspec = NuisanceSpec::with_interest(space, spec.favored.dims);
        derived_ = derived_statistic_model(model, spec.statistic, n, nspec, spec.derived_options);
        truth_derived_ = ParameterPoint{truth_key_};
        break;
      }
    }

    if (!points_.empty() && support_.size() * points_.size() <= kTableLimit) {
      table_.resize(support_.size() * points_.size());
      for (std::size_t x = 0; x < support_.size(); ++x)
        for (std::size_t i = 0; i < points_.size(); ++i)
          table_[x * points_.size() + i] = model.probability(points_[i], support_[x]);
    }
  }

  const std::vector<Value>& support() const { return support_; }

  std::optional<std::size_t> support_index(const Value& x) const {
    auto it = support_index_.find(x);
    if (it == support_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Ratio for a sample given as ascending indices into support().
  double ratio(std::span<const std::size_t> sorted) const {
    if (spec_.style == ComparisonStyle::InterestDerived) return derived_ratio(sorted);
    std::vector<std::pair<std::size_t, int>> counts;
    for (auto x : sorted) {
      if (!counts.empty() && counts.back().first == x)
        ++counts.back().second;
      else
        counts.emplace_back(x, 1);
    }
    if (table_.empty()) {
      OutcomeCounts values;
      for (const auto& [x, k] : counts) values.emplace_back(support_[x], k);
      return combine([&](std::size_t i) { return joint_probability(model_, points_[i], values); });
    }
    const std::size_t stride = points_.size();
    return combine([&](std::size_t i) {
      double v = 1.0;
      for (const auto& [x, k] : counts) {
        const double p = table_[x * stride + i];
        v *= k == 1 ? p : std::pow(p, k);
        if (v == 0.0) break;
      }
      return v;
    });
  }

  /// Ratio for an arbitrary sample, including outcomes outside the support.
  double ratio(const Sample& sample) const {
    std::vector<std::size_t> idx;
    bool inside = true;
    for (const auto& x : sample.observations()) {
      if (!model_.outcomes().contains(x))
        throw Error(ErrorCode::OutcomeNotInSpace, "'" + to_string(x) + "' is not an outcome");
      auto i = support_index(x);
      if (!i) {
        inside = false;
        break;
      }
      idx.push_back(*i);
    }
    if (spec_.style == ComparisonStyle::InterestDerived) {
      const Value s = spec_.statistic.map(sample);
      return derived_ratio_of(s);
    }
    if (inside) {
      std::sort(idx.begin(), idx.end());
      return ratio(std::span<const std::size_t>(idx));
    }
    const auto values = count_outcomes(sample);
    if (spec_.style == ComparisonStyle::FixedPair)
      return combine([&](std::size_t i) { return joint_probability(model_, points_[i], values); });
    std::vector<Value> distinct;
    for (const auto& [x, k] : values) distinct.push_back(x);
    auto candidates = model_.candidate_points(distinct);
    std::vector<double> sums(group_count_, 0.0);
    std::vector<double> best(group_count_, 0.0);
    std::map<std::vector<Value>, int> groups;
    std::sort(candidates.begin(), candidates.end());
    for (const auto& p : candidates) {
      auto key = project(p, fav_idx_);
      int g = key == truth_key_ ? 0 : -1;
      if (g < 0 && favored_keys_.count(key))
        g = groups.try_emplace(key, static_cast<int>(groups.size()) + 1).first->second;
      if (g < 0) continue;
      if (static_cast<std::size_t>(g) >= sums.size()) {
        sums.resize(g + 1, 0.0);
        best.resize(g + 1, 0.0);
      }
      const double v = joint_probability(model_, p, values);
      sums[g] += v;
      best[g] = std::max(best[g], v);
    }
    const auto& use = spec_.style == ComparisonStyle::InterestMarginal ? sums : best;
    double fav = 0.0;
    for (std::size_t g = 1; g < use.size(); ++g) fav = std::max(fav, use[g]);
    return ratio_of(fav, use[0]);
  }

  bool order_free() const { return spec_.style != ComparisonStyle::InterestDerived; }

  bool misleads(double r) const { return !std::isnan(r) && r >= spec_.threshold; }

 private:
  static constexpr std::size_t kTableLimit = 50'000'000;

  /// Folds per-point joint probabilities into favoured-vs-truth, summing in
  /// point order (marginal) or taking maxima (argmax, fixed pair).
  template <class Joint>
  double combine(Joint&& joint) const {
    std::vector<double> acc(group_count_, 0.0);
    const bool sum = spec_.style == ComparisonStyle::InterestMarginal;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double v = joint(i);
      double& slot = acc[group_[i]];
      slot = sum ? slot + v : std::max(slot, v);
    }
    double fav = 0.0;
    for (int g = 1; g < group_count_; ++g) fav = std::max(fav, acc[g]);
    return ratio_of(fav, acc[0]);
  }

  double derived_ratio(std::span<const std::size_t> sorted) const {
    if (spec_.statistic.pattern_map) return derived_ratio_of(spec_.statistic.pattern_map(sorted));
    std::vector<Value> draws;
    for (auto x : sorted) draws.push_back(support_[x]);
    return derived_ratio_of(spec_.statistic.map(Sample(std::move(draws))));
  }

  double derived_ratio_of(const Value& s) const {
    double best_fav = 0.0;
    for (const auto& key : favored_keys_)
      best_fav = std::max(best_fav, derived_->probability(ParameterPoint{key}, s));
    return ratio_of(best_fav, derived_->probability(truth_derived_, s));
  }

  const DiscreteModel& model_;
  const ParameterPoint& truth_;
  const ComparisonSpec& spec_;
  std::vector<std::size_t> fav_idx_;
  std::set<std::vector<Value>> favored_keys_;
  std::vector<Value> truth_key_;
  std::vector<Value> support_;
  std::map<Value, std::size_t> support_index_;
  std::vector<ParameterPoint> points_;
  std::vector<int> group_;  // 0: truth's interest value, >0: a favoured value
  int group_count_ = 0;
  std::vector<double> table_;  // support x points_
  std::optional<DiscreteModel> derived_;
  ParameterPoint truth_derived_;
};

/// Memoises ratios by sorted sample when the comparison ignores order.
class RatioCache {
 public:
  explicit RatioCache(const Comparator& cmp) : cmp_(cmp) {}

  double operator()(std::vector<std::size_t>& draws) {
    std::sort(draws.begin(), draws.end());
    if (!cmp_.order_free()) return cmp_.ratio(std::span<const std::size_t>(draws));
    auto it = memo_.find(draws);
    if (it != memo_.end()) return it->second;
    double r = cmp_.ratio(std::span<const std::size_t>(draws));
    memo_.emplace(draws, r);
    return r;
  }

 private:
  const Comparator& cmp_;
  std::map<std::vector<std::size_t>, double> memo_;
};

}  // namespace

double comparison_ratio(const DiscreteModel& model, const ParameterPoint& truth,
                        const ComparisonSpec& spec, const Sample& sample) {
  if (sample.size() == 0) throw Error(ErrorCode::InvalidArgument, "sample is empty");
  Comparator cmp(model, truth, spec, sample.size());
  return cmp.ratio(sample);
}

MisleadingReport exact_misleading_probability(const DiscreteModel& model,
                                              const ParameterPoint& truth,
                                              const ComparisonSpec& spec, std::size_t n,
                                              const SimulationOptions& options) {
  Comparator cmp(model, truth, spec, n);

  // Summation order: decreasing probability, ties by outcome.
  std::vector<std::size_t> order;
  std::vector<double> probs;
  {
    std::vector<std::pair<double, std::size_t>> entries;
    for (std::size_t i = 0; i < cmp.support().size(); ++i) {
      double p = model.probability(truth, cmp.support()[i]);
      if (p > 0.0) entries.emplace_back(p, i);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [p, i] : entries) {
      probs.push_back(p);
      order.push_back(i);
    }
  }
  const std::size_t m = order.size();
  const long double sequences = std::pow(static_cast<long double>(m), static_cast<long double>(n));
  if (sequences > static_cast<long double>(options.max_sequences))
    throw Error(ErrorCode::EnumerationTooLarge,
                "exact enumeration needs " + format_double(static_cast<double>(sequences)) +
                    " sequences (bound " + std::to_string(options.max_sequences) + ")");

  struct Partial {
    double misleading = 0.0;
    double total = 0.0;
    double min_ratio = kInf;
    bool any = false;
  };
  std::vector<Partial> partial(m);
  const unsigned threads = std::max(1u, options.threads);
  std::vector<RatioCache> caches;
  caches.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) caches.emplace_back(cmp);

  parallel_for(m, threads, [&](unsigned worker, std::size_t first) {
    std::vector<std::size_t> idx(n, 0);
    idx[0] = first;
    std::vector<std::size_t> draws(n);
    auto& acc = partial[first];
    while (true) {
      double p = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        p *= probs[idx[i]];
        draws[i] = order[idx[i]];
      }
      const double r = caches[worker](draws);
      acc.total += p;
      if (cmp.misleads(r)) {
        acc.misleading += p;
        acc.min_ratio = std::min(acc.min_ratio, r);
        acc.any = true;
      }
      bool done = true;
      for (std::size_t pos = n; pos-- > 1;) {
        if (++idx[pos] < m) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
      if (done) break;
    }
  });

  double misleading = 0.0, total = 0.0, min_ratio = kInf;
  bool any = false;
  for (const auto& part : partial) {
    misleading += part.misleading;
    total += part.total;
    if (part.any) {
      min_ratio = std::min(min_ratio, part.min_ratio);
      any = true;
    }
  }
  MisleadingReport report;
  report.probability = misleading / total;
  report.method = ReportMethod::Exact;
  report.size = static_cast<std::uint64_t>(sequences);
  if (any) report.min_misleading_ratio = min_ratio;
  return report;
}

MisleadingReport monte_carlo_misleading(const DiscreteModel& model, const ParameterPoint& truth,
                                        const ComparisonSpec& spec, std::size_t n,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const SimulationOptions& options) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  Comparator cmp(model, truth, spec, n);
  PointSampler sampler(model, truth);
  std::vector<std::size_t> to_cmp;
  for (const auto& x : sampler.support()) to_cmp.push_back(*cmp.support_index(x));

  std::vector<double> outcome(trials, kNaN);  // ratio of misleading trials, NaN otherwise
  const unsigned threads = std::max(1u, options.threads);
  std::vector<RatioCache> caches;
  caches.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) caches.emplace_back(cmp);

  parallel_for(trials, threads, [&](unsigned worker, std::size_t t) {
    RandomStream rng(seed, t);
    std::vector<std::size_t> draws(n);
    for (auto& d : draws) d = to_cmp[sampler.draw_index(rng)];
    const double r = caches[worker](draws);
    if (cmp.misleads(r)) outcome[t] = r;
  });

  std::uint64_t hits = 0;
  double min_ratio = kInf;
  for (double r : outcome) {
    if (std::isnan(r)) continue;
    ++hits;
    min_ratio = std::min(min_ratio, r);
  }
  MisleadingReport report;
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  report.probability = p;
  report.method = ReportMethod::MonteCarlo;
  report.size = trials;
  report.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  report.seed = seed;
  if (hits) report.min_misleading_ratio = min_ratio;
  return report;
}

LikelihoodFunction two_observation_likelihood_profile(const BirnbaumConfig& cfg,
                                                      std::int64_t x1, std::int64_t x2) {
  return iid_likelihood(birnbaum_model(cfg), Sample({Value{x1}, Value{x2}}));
}

}  // namespace likev
