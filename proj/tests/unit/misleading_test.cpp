#include <doctest.h>

#include <cmath>

#include "likev/error.hpp"
#include "likev/misleading.hpp"
#include "likev/models.hpp"

using namespace likev;

namespace {

Value s(const char* text) { return std::string(text); }
Value i64(std::int64_t v) { return v; }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

ComparisonSpec birnbaum_spec(ComparisonStyle style, double k) {
  ComparisonSpec spec;
  spec.style = style;
  spec.threshold = k;
  spec.favored = {{"sigma"}, {{i64(0)}}};
  return spec;
}

ComparisonSpec fixed_pair(const std::string& dim, Value favored, double k) {
  ComparisonSpec spec;
  spec.style = ComparisonStyle::FixedPair;
  spec.threshold = k;
  spec.favored = {{dim}, {{std::move(favored)}}};
  return spec;
}

double birnbaum_repeat_oracle() {
  std::int64_t acc = 0;
  for (std::int64_t d = -99; d <= 99; ++d) acc += (100 - std::abs(d)) * (100 - std::abs(d));
  return static_cast<double>(acc) / 1e8;
}

}  // namespace

TEST_CASE("style names") {
  for (auto style : {ComparisonStyle::VectorArgmax, ComparisonStyle::FixedPair,
                     ComparisonStyle::InterestMarginal, ComparisonStyle::InterestDerived})
    CHECK(parse_style(style_name(style)) == style);
  CHECK_FALSE(parse_style("joint").has_value());
}

TEST_CASE("single birnbaum observation always misleads the vector reading") {
  BirnbaumConfig cfg;
  cfg.mu_lo = -1000;
  cfg.mu_hi = 1000;
  auto m = birnbaum_model(cfg);
  for (std::int64_t mu : {-901, -1, 0, 17, 901}) {
    ParameterPoint truth{{i64(mu), i64(100)}};
    auto spec = birnbaum_spec(ComparisonStyle::VectorArgmax, 100.0);
    auto report = exact_misleading_probability(m, truth, spec, 1);
    CHECK(report.probability == 1.0);
    CHECK(report.size == 199);
    REQUIRE(report.min_misleading_ratio.has_value());
    CHECK(*report.min_misleading_ratio == 100.0);
    spec.threshold = 100.0000001;
    CHECK(exact_misleading_probability(m, truth, spec, 1).probability == 0.0);
  }
}

TEST_CASE("interest readings never mislead on one birnbaum observation") {
  auto m = birnbaum_model();
  ParameterPoint truth{{i64(0), i64(100)}};
  for (auto style : {ComparisonStyle::InterestDerived, ComparisonStyle::InterestMarginal}) {
    for (double k : {1.0000001, 1.5, 2.0, 8.0, 100.0, 1e6}) {
      auto report = exact_misleading_probability(m, truth, birnbaum_spec(style, k), 1);
      CHECK(report.probability == 0.0);
      CHECK_FALSE(report.min_misleading_ratio.has_value());
    }
  }
}

TEST_CASE("two birnbaum observations") {
  auto m = birnbaum_model();
  ParameterPoint truth{{i64(0), i64(100)}};
  auto report =
      exact_misleading_probability(m, truth, birnbaum_spec(ComparisonStyle::VectorArgmax, 1e4), 2);
  CHECK(report.size == 199 * 199);
  CHECK(report.probability == doctest::Approx(birnbaum_repeat_oracle()).epsilon(1e-12));
  CHECK(*report.min_misleading_ratio == 1e4);

  double previous = 1.0;
  for (double k : {1.5, 10.0, 100.0, 1e3, 1e4, 1e5}) {
    auto r = exact_misleading_probability(m, truth, birnbaum_spec(ComparisonStyle::VectorArgmax, k), 2);
    CHECK(r.probability <= previous);
    previous = r.probability;
  }
  CHECK(previous == 0.0);
}

TEST_CASE("two-observation likelihood") {
  BirnbaumConfig cfg;
  auto same = two_observation_likelihood_profile(cfg, 17, 17);
  CHECK(same.at({{i64(17), i64(0)}}) == 1.0);
  CHECK(same.at({{i64(16), i64(0)}}) == 0.0);
  CHECK(same.at({{i64(17), i64(100)}}) == 1e-4);
  CHECK(likelihood_ratio(same, {{i64(17), i64(0)}}, {{i64(17), i64(100)}}).ratio == 1e4);

  auto apart = two_observation_likelihood_profile(cfg, 17, 132);
  std::vector<ParameterPoint> positive;
  for (std::size_t i = 0; i < apart.points().size(); ++i) {
    const auto& p = apart.points()[i];
    const auto mu = std::get<std::int64_t>(p.coords[0]);
    const auto sigma = std::get<std::int64_t>(p.coords[1]);
    if (sigma == 0) CHECK(apart.values()[i] == 0.0);
    const std::int64_t a = 100 - std::abs(17 - mu), b = 100 - std::abs(132 - mu);
    const double want = sigma == 0 || a <= 0 || b <= 0 ? 0.0 : (a / 1e4) * (b / 1e4);
    CHECK(apart.values()[i] == doctest::Approx(want).epsilon(1e-14));
    if (apart.values()[i] > 0) positive.push_back(p);
  }
  REQUIRE(!positive.empty());
  CHECK(positive.front() == ParameterPoint{{i64(33), i64(100)}});
  CHECK(positive.back() == ParameterPoint{{i64(116), i64(100)}});
  CHECK(max_likelihood_points(apart) ==
        std::vector<ParameterPoint>{{{i64(74), i64(100)}}, {{i64(75), i64(100)}}});
}

TEST_CASE("small models, exact values") {
  auto urn = urn1_model();
  auto urn_spec = fixed_pair("nu_c", i64(1), 100.0);
  CHECK(exact_misleading_probability(urn, {{i64(201)}}, urn_spec, 1).probability ==
        doctest::Approx(0.01).epsilon(1e-14));
  CHECK(exact_misleading_probability(urn, {{i64(201)}}, urn_spec, 2).probability ==
        doctest::Approx(1e-4).epsilon(1e-14));

  auto known = birnbaum_known_mu_model(17);
  CHECK(exact_misleading_probability(known, {{i64(100)}}, fixed_pair("sigma", i64(0), 100.0), 1)
            .probability == doctest::Approx(0.01).epsilon(1e-14));

  auto rain = rain_model();
  CHECK(exact_misleading_probability(rain, {{s("Saturday")}}, fixed_pair("day", s("Wednesday"), 2.0), 1)
            .probability == doctest::Approx(0.01).epsilon(1e-14));

  auto coin = binomial_model(5, {0.5, 0.9});
  CHECK(exact_misleading_probability(coin, {{0.5}}, fixed_pair("p", 0.9, 2.0), 1).probability ==
        doctest::Approx(6.0 / 32.0).epsilon(1e-14));

  auto urn2 = urn2_model();
  ComparisonSpec derived;
  derived.style = ComparisonStyle::InterestDerived;
  derived.threshold = 2.0;
  derived.favored = {{"nu_c"}, {{i64(1)}}};
  CHECK(exact_misleading_probability(urn2, {{s("color001"), i64(201)}}, derived, 2).probability ==
        doctest::Approx(0.005001).epsilon(1e-12));
}

TEST_CASE("comparison ratio of single samples") {
  auto m = birnbaum_model();
  ParameterPoint truth{{i64(0), i64(100)}};
  CHECK(comparison_ratio(m, truth, birnbaum_spec(ComparisonStyle::VectorArgmax, 8), Sample({i64(17)})) == 100.0);
  CHECK(comparison_ratio(m, truth, birnbaum_spec(ComparisonStyle::InterestDerived, 8), Sample({i64(17)})) == 1.0);
  const double marginal =
      comparison_ratio(m, truth, birnbaum_spec(ComparisonStyle::InterestMarginal, 8), Sample({i64(17)}));
  CHECK(std::fabs(marginal - 1.0) <= 1e-12);
  // Outside the true support: sigma = 0 at mu = 500 still explains the data.
  CHECK(comparison_ratio(m, truth, birnbaum_spec(ComparisonStyle::VectorArgmax, 8), Sample({i64(500)})) == 100.0);
  auto urn = urn1_model();
  auto r = comparison_ratio(urn, {{i64(201)}}, fixed_pair("nu_c", i64(1), 8), Sample({s("non-red")}));
  CHECK(r == 0.0);
}

TEST_CASE("monte carlo agrees with enumeration") {
  auto m = birnbaum_model();
  ParameterPoint truth{{i64(0), i64(100)}};
  auto spec = birnbaum_spec(ComparisonStyle::VectorArgmax, 1e4);
  auto exact = exact_misleading_probability(m, truth, spec, 2);
  auto mc = monte_carlo_misleading(m, truth, spec, 2, 40'000, 77);
  CHECK(mc.method == ReportMethod::MonteCarlo);
  CHECK(mc.size == 40'000);
  REQUIRE(mc.standard_error.has_value());
  const double se = std::sqrt(exact.probability * (1 - exact.probability) / 40'000);
  CHECK(std::fabs(mc.probability - exact.probability) <= 5 * se);
  CHECK(*mc.standard_error ==
        doctest::Approx(std::sqrt(mc.probability * (1 - mc.probability) / 40'000)));
  CHECK(mc.seed == 77u);

  auto all = monte_carlo_misleading(m, truth, birnbaum_spec(ComparisonStyle::VectorArgmax, 100), 1, 5'000, 1);
  CHECK(all.probability == 1.0);
  CHECK(*all.standard_error == 0.0);
}

TEST_CASE("results do not depend on the thread count") {
  auto m = urn2_model();
  ParameterPoint truth{{s("color120"), i64(201)}};
  ComparisonSpec spec;
  spec.style = ComparisonStyle::VectorArgmax;
  spec.threshold = 2.0;
  spec.favored = {{"nu_c"}, {{i64(1)}}};
  SimulationOptions one, four;
  four.threads = 4;
  auto e1 = exact_misleading_probability(m, truth, spec, 2, one);
  auto e4 = exact_misleading_probability(m, truth, spec, 2, four);
  CHECK(e1.probability == e4.probability);
  CHECK(e1.min_misleading_ratio == e4.min_misleading_ratio);
  auto m1 = monte_carlo_misleading(m, truth, spec, 3, 20'000, 5, one);
  auto m4 = monte_carlo_misleading(m, truth, spec, 3, 20'000, 5, four);
  CHECK(m1.probability == m4.probability);
  CHECK(m1.standard_error == m4.standard_error);
  CHECK(m1.min_misleading_ratio == m4.min_misleading_ratio);
  auto other_seed = monte_carlo_misleading(m, truth, spec, 3, 20'000, 6, one);
  CHECK(other_seed.probability != m1.probability);
}

TEST_CASE("specification errors") {
  auto m = birnbaum_model();
  ParameterPoint truth{{i64(0), i64(100)}};
  auto spec = birnbaum_spec(ComparisonStyle::VectorArgmax, 1.0);
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec.threshold = 8;
  spec.favored = {{"sigma"}, {{i64(100)}}};
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec.favored = {{"sigma"}, {}};
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec.favored = {{"tau"}, {{i64(0)}}};
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec.favored = {{"sigma"}, {{i64(5)}}};
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec = birnbaum_spec(ComparisonStyle::FixedPair, 8);
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 1); }) ==
        ErrorCode::SpecInconsistent);
  spec = birnbaum_spec(ComparisonStyle::VectorArgmax, 8);
  CHECK(code_of([&] { exact_misleading_probability(m, truth, spec, 4); }) ==
        ErrorCode::EnumerationTooLarge);
  CHECK(code_of([&] { exact_misleading_probability(m, {{i64(0), i64(7)}}, spec, 1); }) ==
        ErrorCode::PointNotInSpace);
  CHECK(code_of([&] { monte_carlo_misleading(m, truth, spec, 1, 0, 1); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("favor everything but the truth") {
  auto m = rain_model();
  auto set = favor_all_but_truth(m.space(), {{s("Friday")}}, {"day"});
  CHECK(set.dims == std::vector<std::string>{"day"});
  CHECK(set.values.size() == 6);
  for (const auto& v : set.values) CHECK(v.front() != s("Friday"));
}
