#include "likev/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "likev/error.hpp"
#include "likev/parallel.hpp"
#include "likev/sampling.hpp"

namespace likev {

DerivedStatistic distinct_count_statistic(bool binned) {
  DerivedStatistic stat;
  stat.name = binned ? "distinct-count" : "distinct-count-exact";
  auto bin = [binned](std::size_t distinct) -> Value {
    if (binned) return std::string(distinct == 1 ? "1" : ">1");
    return static_cast<std::int64_t>(distinct);
  };
  stat.map = [bin](const Sample& s) { return bin(s.distinct_count()); };
  stat.pattern_map = [bin](std::span<const std::size_t> idx) {
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (std::find(idx.begin(), idx.begin() + i, idx[i]) == idx.begin() + i) ++distinct;
    return bin(distinct);
  };
  stat.codomain = [binned](std::size_t n) {
    std::vector<Value> out;
    if (binned) {
      out.emplace_back(std::string("1"));
      if (n > 1) out.emplace_back(std::string(">1"));
      return out;
    }
    for (std::size_t k = 1; k <= std::max<std::size_t>(n, 1); ++k)
      out.emplace_back(static_cast<std::int64_t>(k));
    return out;
  };
  return stat;
}

namespace {

struct SplitIndices {
  std::vector<std::size_t> interest;
  std::vector<std::size_t> nuisance;
};

SplitIndices resolve(const ParameterSpace& space, const NuisanceSpec& spec) {
  if (spec.interest.empty())
    throw Error(ErrorCode::EmptyInterest, "no dimension of interest remains");
  SplitIndices out;
  std::set<std::size_t> seen;
  auto add = [&](const std::string& name, std::vector<std::size_t>& into) {
    auto k = space.dimension_index(name);
    if (!k) throw Error(ErrorCode::InvalidArgument, "no dimension named '" + name + "'");
    if (!seen.insert(*k).second)
      throw Error(ErrorCode::InvalidArgument, "dimension '" + name + "' listed twice");
    into.push_back(*k);
  };
  for (const auto& name : spec.interest) add(name, out.interest);
  for (const auto& name : spec.nuisance) add(name, out.nuisance);
  if (seen.size() != space.rank())
    throw Error(ErrorCode::InvalidArgument,
                "interest and nuisance dimensions must cover the whole space");
  return out;
}

ParameterSpace sub_space(const ParameterSpace& space, std::span<const std::size_t> dims) {
  std::vector<Dimension> out;
  for (auto k : dims) out.push_back(space.dimensions()[k]);
  return ParameterSpace(std::move(out));
}

std::vector<std::vector<Value>> default_nuisance_window(const ParameterSpace& space,
                                                        std::span<const std::size_t> dims) {
  std::vector<std::vector<Value>> axes;
  for (auto k : dims) {
    const auto& d = space.dimensions()[k];
    std::vector<Value> axis;
    if (!d.is_range()) {
      axis = d.values();
    } else {
      const auto [lo, hi] = d.bounds();
      std::set<std::int64_t> picks{lo, hi};
      for (std::int64_t v : {std::int64_t{-1}, std::int64_t{0}, std::int64_t{1}})
        if (v >= lo && v <= hi) picks.insert(v);
      for (auto v : picks) axis.emplace_back(v);
    }
    axes.push_back(std::move(axis));
  }
  std::vector<std::vector<Value>> tuples{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<Value>> next;
    for (const auto& t : tuples)
      for (const auto& v : axis) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }
  return tuples;
}

ParameterPoint assemble(std::size_t rank, const SplitIndices& split,
                        const std::vector<Value>& interest, const std::vector<Value>& nuisance) {
  ParameterPoint p;
  p.coords.resize(rank);
  for (std::size_t i = 0; i < split.interest.size(); ++i) p.coords[split.interest[i]] = interest[i];
  for (std::size_t i = 0; i < split.nuisance.size(); ++i) p.coords[split.nuisance[i]] = nuisance[i];
  return p;
}

std::string format_tuple(const ParameterSpace& space, std::span<const std::size_t> dims,
                         const std::vector<Value>& values) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ',';
    out += space.dimensions()[dims[i]].name() + "=" + to_string(values[i]);
  }
  return out;
}

struct Plan {
  SplitIndices split;
  ParameterSpace interest_space;
  std::vector<ParameterPoint> interest_points;
  std::vector<std::vector<Value>> nuisance_tuples;
  std::vector<Value> codomain;
};

Plan make_plan(const DiscreteModel& model, const DerivedStatistic& stat, std::size_t n,
               const NuisanceSpec& spec, const DerivedModelOptions& options) {
  auto split = resolve(model.space(), spec);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  auto interest_space = sub_space(model.space(), split.interest);
  if (!interest_space.enumerable())
    throw Error(ErrorCode::EnumerationTooLarge, "interest dimensions are too large to tabulate");
  auto tuples = options.nuisance_window
                    ? *options.nuisance_window
                    : default_nuisance_window(model.space(), split.nuisance);
  if (tuples.empty()) throw Error(ErrorCode::InvalidArgument, "nuisance window is empty");
  for (const auto& t : tuples)
    if (t.size() != split.nuisance.size())
      throw Error(ErrorCode::InvalidArgument, "nuisance window tuple has the wrong length");
  auto points = interest_space.points();
  return Plan{std::move(split), std::move(interest_space), std::move(points), std::move(tuples),
              stat.codomain(n)};
}

NuisanceSpec make_spec(const ParameterSpace& space, std::vector<std::string> chosen,
                       bool chosen_is_nuisance) {
  std::set<std::string> picked(chosen.begin(), chosen.end());
  for (const auto& name : chosen)
    if (!space.dimension_index(name))
      throw Error(ErrorCode::InvalidArgument, "no dimension named '" + name + "'");
  std::vector<std::string> rest;
  for (const auto& d : space.dimensions())
    if (!picked.count(d.name())) rest.push_back(d.name());
  NuisanceSpec spec;
  if (chosen_is_nuisance) {
    spec.interest = std::move(rest);
    spec.nuisance = std::move(chosen);
  } else {
    spec.interest = std::move(chosen);
    spec.nuisance = std::move(rest);
  }
  return spec;
}

}  // namespace

NuisanceSpec NuisanceSpec::with_nuisance(const ParameterSpace& space,
                                         std::vector<std::string> nuisance) {
  return make_spec(space, std::move(nuisance), true);
}

NuisanceSpec NuisanceSpec::with_interest(const ParameterSpace& space,
                                         std::vector<std::string> interest) {
  return make_spec(space, std::move(interest), false);
}

std::vector<double> statistic_distribution(const DiscreteModel& model,
                                           const ParameterPoint& point,
                                           const DerivedStatistic& stat, std::size_t n,
                                           std::span<const Value> codomain, unsigned threads) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  std::vector<Value> support;
  std::vector<double> probs;
  {
    auto raw = model.support(point);
    std::vector<std::pair<double, Value>> entries;
    for (auto& x : raw) {
      double p = model.probability(point, x);
      if (p > 0.0) entries.emplace_back(p, std::move(x));
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (auto& [p, x] : entries) {
      probs.push_back(p);
      support.push_back(std::move(x));
    }
  }
  std::map<Value, std::size_t> slot;
  for (std::size_t k = 0; k < codomain.size(); ++k) slot.emplace(codomain[k], k);
  const std::size_t m = support.size();

  auto locate = [&](const Value& v) {
    auto it = slot.find(v);
    if (it == slot.end())
      throw Error(ErrorCode::InvalidArgument,
                  "statistic value '" + to_string(v) + "' is outside its declared codomain");
    return it->second;
  };

  // One partial distribution per leading outcome, reduced in index order so
  // the result does not depend on the thread count.
  std::vector<std::vector<double>> partial(m, std::vector<double>(codomain.size(), 0.0));
  parallel_for(m, threads, [&](unsigned, std::size_t first) {
    std::vector<std::size_t> idx(n, 0);
    idx[0] = first;
    std::vector<Value> draws(n);
    auto& acc = partial[first];
    while (true) {
      double p = 1.0;
      for (auto i : idx) p *= probs[i];
      Value s;
      if (stat.pattern_map) {
        s = stat.pattern_map(idx);
      } else {
        for (std::size_t i = 0; i < n; ++i) draws[i] = support[idx[i]];
        s = stat.map(Sample(draws));
      }
      acc[locate(s)] += p;
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
  std::vector<double> out(codomain.size(), 0.0);
  for (const auto& part : partial)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += part[k];
  // Divide by the enumerated mass so a statistic with a single value has
  // probability exactly 1 rather than 1 up to summation error.
  double total = 0.0;
  for (double v : out) total += v;
  for (auto& v : out) v /= total;
  return out;
}

DiscreteModel derived_statistic_model(const DiscreteModel& model, const DerivedStatistic& stat,
                                      std::size_t n, const NuisanceSpec& spec,
                                      const DerivedModelOptions& options) {
  auto plan = make_plan(model, stat, n, spec, options);
  if (n > options.max_n)
    throw Error(ErrorCode::EnumerationTooLarge,
                "sample size " + std::to_string(n) + " exceeds the enumeration bound " +
                    std::to_string(options.max_n));

  long double work = 0;
  for (const auto& ip : plan.interest_points)
    for (const auto& nt : plan.nuisance_tuples) {
      auto p = assemble(model.space().rank(), plan.split, ip.coords, nt);
      work += std::pow(static_cast<long double>(model.support(p).size()),
                       static_cast<long double>(n));
    }
  if (work > static_cast<long double>(options.max_sequences))
    throw Error(ErrorCode::EnumerationTooLarge,
                "exact enumeration needs " + format_double(static_cast<double>(work)) +
                    " sequences (bound " + std::to_string(options.max_sequences) + ")");

  std::vector<double> table;
  table.reserve(plan.interest_points.size() * plan.codomain.size());
  for (const auto& ip : plan.interest_points) {
    std::vector<double> reference;
    for (std::size_t t = 0; t < plan.nuisance_tuples.size(); ++t) {
      const auto& nt = plan.nuisance_tuples[t];
      auto p = assemble(model.space().rank(), plan.split, ip.coords, nt);
      auto dist = statistic_distribution(model, p, stat, n, plan.codomain, options.threads);
      if (t == 0) {
        reference = std::move(dist);
        continue;
      }
      for (std::size_t k = 0; k < dist.size(); ++k) {
        if (std::fabs(dist[k] - reference[k]) > 1e-12) {
          throw Error(ErrorCode::NuisanceDependent,
                      "distribution of " + stat.name + " at " +
                          plan.interest_space.format(ip) + " differs between " +
                          format_tuple(model.space(), plan.split.nuisance, plan.nuisance_tuples[0]) +
                          " and " + format_tuple(model.space(), plan.split.nuisance, nt) +
                          " (P(" + to_string(plan.codomain[k]) + ") = " +
                          format_double(reference[k]) + " vs " + format_double(dist[k]) + ")");
        }
      }
    }
    table.insert(table.end(), reference.begin(), reference.end());
  }
  return build_model(model.name() + "/" + stat.name + "/n=" + std::to_string(n),
                     std::move(plan.interest_space), OutcomeSpace::enumerated(plan.codomain),
                     std::move(table));
}

EstimatedStatisticModel estimate_statistic_model(const DiscreteModel& model,
                                                 const DerivedStatistic& stat, std::size_t n,
                                                 const NuisanceSpec& spec, std::uint64_t trials,
                                                 std::uint64_t seed,
                                                 const DerivedModelOptions& options) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  auto plan = make_plan(model, stat, n, spec, options);
  const auto width = plan.codomain.size();
  const auto cells = plan.interest_points.size() * plan.nuisance_tuples.size();
  std::map<Value, std::size_t> slot;
  for (std::size_t k = 0; k < width; ++k) slot.emplace(plan.codomain[k], k);

  std::vector<std::vector<std::uint64_t>> counts(cells, std::vector<std::uint64_t>(width, 0));
  parallel_for(cells, options.threads, [&](unsigned, std::size_t cell) {
    const auto& ip = plan.interest_points[cell / plan.nuisance_tuples.size()];
    const auto& nt = plan.nuisance_tuples[cell % plan.nuisance_tuples.size()];
    PointSampler sampler(model, assemble(model.space().rank(), plan.split, ip.coords, nt));
    RandomStream rng(seed, cell);
    std::vector<Value> draws(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
      for (auto& d : draws) d = sampler.draw(rng);
      auto it = slot.find(stat.map(Sample(draws)));
      if (it == slot.end())
        throw Error(ErrorCode::InvalidArgument, "statistic value outside its codomain");
      ++counts[cell][it->second];
    }
  });

  const double T = static_cast<double>(trials);
  std::vector<double> table;
  std::vector<double> errors;
  for (std::size_t i = 0; i < plan.interest_points.size(); ++i) {
    const auto base = i * plan.nuisance_tuples.size();
    for (std::size_t t = 1; t < plan.nuisance_tuples.size(); ++t) {
      for (std::size_t k = 0; k < width; ++k) {
        double a = counts[base][k] / T;
        double b = counts[base + t][k] / T;
        double se = std::sqrt((a * (1 - a) + b * (1 - b)) / T);
        if (std::fabs(a - b) > 6 * se + 1e-12)
          throw Error(ErrorCode::NuisanceDependent,
                      "estimated distribution of " + stat.name + " at " +
                          plan.interest_space.format(plan.interest_points[i]) +
                          " differs across nuisance values " +
                          format_tuple(model.space(), plan.split.nuisance, plan.nuisance_tuples[0]) +
                          " and " +
                          format_tuple(model.space(), plan.split.nuisance, plan.nuisance_tuples[t]));
      }
    }
    for (std::size_t k = 0; k < width; ++k) {
      double p = counts[base][k] / T;
      table.push_back(p);
      errors.push_back(std::sqrt(p * (1 - p) / T));
    }
  }
  auto derived = build_model(model.name() + "/" + stat.name + "/n=" + std::to_string(n) + "/mc",
                             std::move(plan.interest_space),
                             OutcomeSpace::enumerated(plan.codomain), std::move(table));
  return {std::move(derived), std::move(errors), trials, seed};
}

namespace {

template <class Combine>
LikelihoodFunction reduce_nuisance(const LikelihoodFunction& l, const NuisanceSpec& spec,
                                   Combine combine) {
  auto split = resolve(l.space(), spec);
  if (split.nuisance.empty()) return l;
  auto space = std::make_shared<const ParameterSpace>(sub_space(l.space(), split.interest));
  std::map<std::vector<Value>, double> acc;
  for (std::size_t i = 0; i < l.points().size(); ++i) {
    const auto& p = l.points()[i];
    double w = 1.0;
    if (spec.weights) {
      auto key = project(p, split.nuisance);
      auto it = spec.weights->find(key);
      if (it == spec.weights->end())
        throw Error(ErrorCode::InvalidArgument,
                    "no weight for " + format_tuple(l.space(), split.nuisance, key));
      w = it->second;
    }
    auto [slot, fresh] = acc.try_emplace(project(p, split.interest), 0.0);
    slot->second = combine(slot->second, l.values()[i], w);
  }
  std::vector<ParameterPoint> points;
  std::vector<double> values;
  const bool exhaustive = space->enumerable();
  if (exhaustive) {
    points = space->points();
    values.reserve(points.size());
    for (const auto& p : points) {
      auto it = acc.find(p.coords);
      values.push_back(it == acc.end() ? 0.0 : it->second);
    }
  } else {
    for (auto& [coords, v] : acc) {
      points.push_back({coords});
      values.push_back(v);
    }
  }
  return LikelihoodFunction(std::move(space), std::move(points), std::move(values), exhaustive);
}

}  // namespace

LikelihoodFunction marginalize(const LikelihoodFunction& l, const NuisanceSpec& spec) {
  return reduce_nuisance(l, spec, [](double acc, double v, double w) { return acc + v * w; });
}

LikelihoodFunction profile(const LikelihoodFunction& l, const NuisanceSpec& spec) {
  return reduce_nuisance(l, spec, [](double acc, double v, double) { return std::max(acc, v); });
}

}  // namespace likev
