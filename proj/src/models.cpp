#include "likev/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <boost/math/distributions/binomial.hpp>

#include "likev/error.hpp"

namespace likev {

std::int64_t UrnComposition::total() const {
  std::int64_t t = shared_count;
  for (const auto& [label, count] : other_colors) t += count;
  return t;
}

UrnComposition UrnComposition::standard() {
  UrnComposition comp;
  comp.other_colors.reserve(200);
  for (int i = 1; i <= 200; ++i) {
    char label[16];
    std::snprintf(label, sizeof label, "color%03d", i);
    comp.other_colors.emplace_back(label, i <= 100 ? 49 : 50);
  }
  return comp;
}

double birnbaum_peak_ratio(double normalizer, std::int64_t peak_halfwidth) {
  return 1.0 / (static_cast<double>(peak_halfwidth) / normalizer);
}

DiscreteModel rain_model() {
  const std::vector<std::string> days = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                         "Friday", "Saturday", "Sunday"};
  const double rain[] = {0, 0.07, 0.65, 0.2, 0.05, 0.01, 0.01};
  const double dry[] = {1, 0.93, 0.35, 0.8, 0.95, 0.99, 0.99};
  std::vector<Value> day_values(days.begin(), days.end());
  std::vector<double> table;
  for (std::size_t i = 0; i < days.size(); ++i) {
    table.push_back(rain[i]);
    table.push_back(dry[i]);
  }
  return build_model("rain", ParameterSpace({Dimension::list("day", std::move(day_values))}),
                     OutcomeSpace::enumerated({std::string("rain"), std::string("not-rain")}),
                     std::move(table));
}

DiscreteModel urn1_model() {
  return build_model(
      "urn1",
      ParameterSpace({Dimension::list("nu_c", {std::int64_t{1}, std::int64_t{201}})}),
      OutcomeSpace::enumerated({std::string("red"), std::string("non-red")}),
      {1.0, 0.0, 0.01, 0.99});
}

DiscreteModel urn2_model(const UrnComposition& comp) {
  if (comp.shared_count <= 0)
    throw Error(ErrorCode::InvalidComposition, "shared colour count must be positive");
  if (comp.other_colors.empty())
    throw Error(ErrorCode::InvalidComposition, "urn needs at least one other colour");
  if (comp.shared_label.empty())
    throw Error(ErrorCode::InvalidComposition, "shared colour label is empty");
  std::set<std::string> labels{comp.shared_label};
  for (const auto& [label, count] : comp.other_colors) {
    if (label.empty() || !labels.insert(label).second)
      throw Error(ErrorCode::InvalidComposition, "colour label '" + label + "' is repeated");
    if (count <= 0 || count >= comp.shared_count)
      throw Error(ErrorCode::InvalidComposition,
                  "colour '" + label + "' must have between 1 and " +
                      std::to_string(comp.shared_count - 1) + " balls");
  }

  const std::size_t k = comp.other_colors.size() + 1;
  std::vector<Value> palette{comp.shared_label};
  std::vector<std::int64_t> base_counts{comp.shared_count};
  for (const auto& [label, count] : comp.other_colors) {
    palette.emplace_back(label);
    base_counts.push_back(count);
  }
  const auto total = static_cast<double>(comp.total());
  const auto many = static_cast<std::int64_t>(k);

  // Rows in canonical order: mu slowest, then nu_c in {1, k}. Under mu = j the
  // shared count moves to colour j and colour j's count moves to the
  // shared label.
  std::vector<double> table;
  table.reserve(2 * k * k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) table.push_back(i == j ? 1.0 : 0.0);
    auto counts = base_counts;
    std::swap(counts[0], counts[j]);
    for (std::size_t i = 0; i < k; ++i) table.push_back(static_cast<double>(counts[i]) / total);
  }
  return build_model("urn2",
                     ParameterSpace({Dimension::list("mu", palette),
                                     Dimension::list("nu_c", {std::int64_t{1}, many})}),
                     OutcomeSpace::enumerated(palette), std::move(table));
}

namespace {

void check_birnbaum(const BirnbaumConfig& cfg) {
  if (cfg.mu_lo > cfg.mu_hi) throw Error(ErrorCode::InvalidConfig, "mu range is empty");
  if (cfg.peak_halfwidth <= 0 || cfg.peak_halfwidth > 1'000'000)
    throw Error(ErrorCode::InvalidConfig, "peak half-width must be in [1, 1e6]");
  if (cfg.normalizer <= 0) throw Error(ErrorCode::InvalidConfig, "normalizer must be positive");
  const double h = static_cast<double>(cfg.peak_halfwidth);
  // c * (h + 2 * sum_{d=1}^{h-1} (h - d)) = h^2 / normalizer must be 1.
  const double mass = h * h / static_cast<double>(cfg.normalizer);
  if (std::fabs(mass - 1.0) > kNormalizationTolerance)
    throw Error(ErrorCode::InvalidConfig,
                "normalizer " + std::to_string(cfg.normalizer) + " gives total probability " +
                    format_double(mass) + "; the triangular branch needs " +
                    std::to_string(cfg.peak_halfwidth * cfg.peak_halfwidth));
}

std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }

}  // namespace

std::vector<ParameterPoint> birnbaum_window(const BirnbaumConfig& cfg,
                                            std::span<const Value> observations) {
  const auto h = cfg.peak_halfwidth;
  std::set<std::int64_t> mus;
  for (const auto& x : observations) {
    const auto xv = as_int(x);
    const auto lo = std::max(cfg.mu_lo, xv - h);
    const auto hi = std::min(cfg.mu_hi, xv + h);
    for (auto mu = lo; mu <= hi; ++mu) mus.insert(mu);
  }
  std::vector<ParameterPoint> out;
  out.reserve(2 * mus.size());
  for (auto mu : mus) {
    out.push_back({{mu, std::int64_t{0}}});
    out.push_back({{mu, h}});
  }
  return out;
}

DiscreteModel birnbaum_model(const BirnbaumConfig& cfg) {
  check_birnbaum(cfg);
  const auto h = cfg.peak_halfwidth;
  const auto norm = static_cast<double>(cfg.normalizer);
  PmfEvaluator eval;
  eval.probability = [h, norm](const ParameterPoint& p, const Value& x) {
    const auto mu = as_int(p.coords[0]);
    const auto sigma = as_int(p.coords[1]);
    const auto d = std::abs(as_int(x) - mu);
    if (sigma == 0) return d == 0 ? 1.0 : 0.0;
    return d < h ? static_cast<double>(h - d) / norm : 0.0;
  };
  eval.support = [h](const ParameterPoint& p) {
    const auto mu = as_int(p.coords[0]);
    std::vector<Value> out;
    if (as_int(p.coords[1]) == 0) {
      out.emplace_back(mu);
      return out;
    }
    out.reserve(2 * h - 1);
    for (auto x = mu - (h - 1); x <= mu + (h - 1); ++x) out.emplace_back(x);
    return out;
  };
  eval.window = [cfg](std::span<const Value> xs) { return birnbaum_window(cfg, xs); };
  return build_model(
      "birnbaum",
      ParameterSpace({Dimension::range("mu", cfg.mu_lo, cfg.mu_hi),
                      Dimension::list("sigma", {std::int64_t{0}, h})}),
      OutcomeSpace::interval(cfg.mu_lo - (h - 1), cfg.mu_hi + (h - 1)), std::move(eval));
}

DiscreteModel birnbaum_known_mu_model(std::int64_t mu, const BirnbaumConfig& cfg) {
  check_birnbaum(cfg);
  const auto h = cfg.peak_halfwidth;
  const double peak = static_cast<double>(h) / static_cast<double>(cfg.normalizer);
  const auto label = std::to_string(mu);
  return build_model(
      "birnbaum-known-mu", ParameterSpace({Dimension::list("sigma", {std::int64_t{0}, h})}),
      OutcomeSpace::enumerated({label, "not-" + label}), {1.0, 0.0, peak, 1.0 - peak});
}

DiscreteModel binomial_model(int n, std::vector<double> p_grid) {
  if (n < 1) throw Error(ErrorCode::InvalidGrid, "binomial trial count must be at least 1");
  if (p_grid.empty()) throw Error(ErrorCode::InvalidGrid, "probability grid is empty");
  std::set<double> seen;
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::InvalidGrid, "grid value " + format_double(p) + " outside [0,1]");
    if (!seen.insert(p).second)
      throw Error(ErrorCode::InvalidGrid, "grid value " + format_double(p) + " repeated");
  }
  std::vector<double> table;
  table.reserve(p_grid.size() * (n + 1));
  for (double p : p_grid) {
    boost::math::binomial_distribution<double> dist(n, p);
    for (int h = 0; h <= n; ++h) table.push_back(boost::math::pdf(dist, h));
  }
  std::vector<Value> values(p_grid.begin(), p_grid.end());
  return build_model("binomial", ParameterSpace({Dimension::list("p", std::move(values))}),
                     OutcomeSpace::interval(0, n), std::move(table));
}

DiscreteModel surething_model(const Sample& observed) {
  const auto n = observed.size();
  if (n < 1 || n > kMaxSureThingLength)
    throw Error(ErrorCode::InvalidArgument,
                "sure-thing sequences must have 1 to " + std::to_string(kMaxSureThingLength) +
                    " tosses");
  std::string sequence;
  for (const auto& x : observed.observations()) {
    auto s = to_string(x);
    if (s != "H" && s != "T")
      throw Error(ErrorCode::OutcomeNotInSpace, "coin outcomes must be H or T, got " + s);
    sequence += s;
  }
  std::vector<Value> all;
  all.reserve(std::size_t{1} << n);
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    std::string s(n, 'H');
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (std::size_t{1} << (n - 1 - i))) s[i] = 'T';
    all.emplace_back(std::move(s));
  }
  PmfEvaluator eval;
  eval.probability = [sequence](const ParameterPoint&, const Value& x) {
    return std::get<std::string>(x) == sequence ? 1.0 : 0.0;
  };
  eval.support = [sequence](const ParameterPoint&) { return std::vector<Value>{sequence}; };
  return build_model("sure-thing",
                     ParameterSpace({Dimension::list("sequence", {Value{sequence}})}),
                     OutcomeSpace::enumerated(std::move(all)), std::move(eval));
}

}  // namespace likev
