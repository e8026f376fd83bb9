#include <doctest.h>

#include <cmath>

#include "likev/error.hpp"
#include "likev/likelihood.hpp"
#include "likev/models.hpp"
#include "likev/nuisance.hpp"

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

/// P(two draws agree) for the standard urn with nu_c = 201, from ball counts.
double urn_repeat_oracle() {
  double num = 100.0 * 100.0 + 100.0 * 49.0 * 49.0 + 100.0 * 50.0 * 50.0;
  return num / (10000.0 * 10000.0);
}

/// Sum over the triangular pmf of P(x)^2, in integers.
double birnbaum_repeat_oracle() {
  std::int64_t acc = 0;
  for (std::int64_t d = -99; d <= 99; ++d) acc += (100 - std::abs(d)) * (100 - std::abs(d));
  return static_cast<double>(acc) / 1e8;
}

DiscreteModel mixed_model() {
  // Under nu = 1 the spread of the pmf depends on mu.
  return build_model(
      "mixed",
      ParameterSpace({Dimension::list("mu", {s("a"), s("b")}),
                      Dimension::list("nu", {i64(1), i64(2)})}),
      OutcomeSpace::enumerated({s("x"), s("y")}), {1.0, 0.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
}

}  // namespace

TEST_CASE("distinct count statistic") {
  auto stat = distinct_count_statistic();
  CHECK(stat.map(Sample({s("a"), s("a")})) == s("1"));
  CHECK(stat.map(Sample({s("a"), s("b"), s("a")})) == s(">1"));
  CHECK(stat.codomain(1) == std::vector<Value>{s("1")});
  CHECK(stat.codomain(3) == std::vector<Value>{s("1"), s(">1")});
  std::vector<std::size_t> idx = {4, 2, 4};
  CHECK(stat.pattern_map(idx) == s(">1"));
  auto exact = distinct_count_statistic(false);
  CHECK(exact.map(Sample({s("a"), s("b"), s("a")})) == i64(2));
  CHECK(exact.codomain(3).size() == 3);
}

TEST_CASE("urn two, one draw: the derived statistic carries no evidence") {
  auto m = urn2_model();
  auto spec = NuisanceSpec::with_nuisance(m.space(), {"mu"});
  CHECK(spec.interest == std::vector<std::string>{"nu_c"});
  auto derived = derived_statistic_model(m, distinct_count_statistic(), 1, spec);
  CHECK(derived.space().size() == 2);
  for (const auto& x : derived.outcomes().labels()) {
    auto l = likelihood(derived, x);
    CHECK(likelihood_ratio(l, {{i64(1)}}, {{i64(201)}}).ratio == 1.0);
  }
}

TEST_CASE("urn two, two draws") {
  auto m = urn2_model();
  auto spec = NuisanceSpec::with_interest(m.space(), {"nu_c"});
  auto derived = derived_statistic_model(m, distinct_count_statistic(), 2, spec);
  CHECK(derived.probability({{i64(1)}}, s("1")) == 1.0);
  CHECK(derived.probability({{i64(201)}}, s("1")) ==
        doctest::Approx(urn_repeat_oracle()).epsilon(1e-12));
  CHECK(derived.probability({{i64(201)}}, s(">1")) ==
        doctest::Approx(1.0 - urn_repeat_oracle()).epsilon(1e-12));
  CHECK(urn_repeat_oracle() == doctest::Approx(0.005001).epsilon(1e-15));
}

TEST_CASE("birnbaum derived statistic") {
  auto m = birnbaum_model();
  auto spec = NuisanceSpec::with_nuisance(m.space(), {"mu"});
  auto one = derived_statistic_model(m, distinct_count_statistic(), 1, spec);
  auto l = likelihood(one, s("1"));
  CHECK(likelihood_ratio(l, {{i64(0)}}, {{i64(100)}}).ratio == 1.0);

  auto two = derived_statistic_model(m, distinct_count_statistic(), 2, spec);
  CHECK(two.probability({{i64(0)}}, s("1")) == 1.0);
  CHECK(two.probability({{i64(100)}}, s("1")) ==
        doctest::Approx(birnbaum_repeat_oracle()).epsilon(1e-12));
  CHECK(birnbaum_repeat_oracle() == doctest::Approx(0.006667).epsilon(1e-15));
}

TEST_CASE("nuisance dependence is detected") {
  auto m = mixed_model();
  auto spec = NuisanceSpec::with_nuisance(m.space(), {"mu"});
  // n = 1 cannot tell the points apart; n = 2 can.
  CHECK_NOTHROW(derived_statistic_model(m, distinct_count_statistic(), 1, spec));
  CHECK(code_of([&] { derived_statistic_model(m, distinct_count_statistic(), 2, spec); }) ==
        ErrorCode::NuisanceDependent);
  try {
    derived_statistic_model(m, distinct_count_statistic(), 2, spec);
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("mu=a") != std::string::npos);
    CHECK(what.find("mu=b") != std::string::npos);
  }
}

TEST_CASE("enumeration bounds") {
  auto m = urn2_model();
  auto spec = NuisanceSpec::with_interest(m.space(), {"nu_c"});
  DerivedModelOptions opt;
  CHECK(code_of([&] { derived_statistic_model(m, distinct_count_statistic(), 5, spec, opt); }) ==
        ErrorCode::EnumerationTooLarge);
  opt.max_sequences = 1000;
  CHECK(code_of([&] { derived_statistic_model(m, distinct_count_statistic(), 2, spec, opt); }) ==
        ErrorCode::EnumerationTooLarge);
}

TEST_CASE("statistic distribution is identical across thread counts") {
  auto m = urn2_model();
  auto stat = distinct_count_statistic(false);
  auto codomain = stat.codomain(3);
  ParameterPoint p{{s("color042"), i64(201)}};
  auto one = statistic_distribution(m, p, stat, 3, codomain, 1);
  auto three = statistic_distribution(m, p, stat, 3, codomain, 3);
  CHECK(one == three);
  double total = 0.0;
  for (double v : one) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal and profile likelihood for one birnbaum observation") {
  auto m = birnbaum_model();
  auto l = likelihood(m, i64(17));
  auto spec = NuisanceSpec::with_nuisance(m.space(), {"mu"});
  auto marginal = marginalize(l, spec);
  CHECK(marginal.exhaustive());
  CHECK(marginal.at({{i64(0)}}) == 1.0);
  CHECK(std::fabs(marginal.at({{i64(100)}}) - 1.0) <= 1e-12);
  CHECK(std::fabs(likelihood_ratio(marginal, {{i64(0)}}, {{i64(100)}}).ratio - 1.0) <= 1e-12);

  auto prof = profile(l, spec);
  CHECK(prof.at({{i64(0)}}) == 1.0);
  CHECK(prof.at({{i64(100)}}) == 0.01);
  CHECK(likelihood_ratio(prof, {{i64(0)}}, {{i64(100)}}).ratio == 100.0);
}

TEST_CASE("weighted marginal") {
  auto m = mixed_model();
  auto l = likelihood(m, s("x"));
  NuisanceSpec spec = NuisanceSpec::with_nuisance(m.space(), {"mu"});
  spec.weights = std::map<std::vector<Value>, double>{{{s("a")}, 0.25}, {{s("b")}, 0.75}};
  auto marginal = marginalize(l, spec);
  CHECK(marginal.at({{i64(1)}}) == 0.25 * 1.0 + 0.75 * 0.5);
  CHECK(marginal.at({{i64(2)}}) == 0.5);
  spec.weights = std::map<std::vector<Value>, double>{{{s("a")}, 1.0}};
  CHECK(code_of([&] { marginalize(l, spec); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("degenerate splits") {
  auto m = mixed_model();
  auto l = likelihood(m, s("x"));
  auto none = NuisanceSpec::with_interest(m.space(), {"mu", "nu"});
  auto same = marginalize(l, none);
  CHECK(same.points() == l.points());
  CHECK(same.values() == l.values());
  CHECK(code_of([&] { marginalize(l, NuisanceSpec::with_nuisance(m.space(), {"mu", "nu"})); }) ==
        ErrorCode::EmptyInterest);
  CHECK(code_of([&] { NuisanceSpec::with_nuisance(m.space(), {"zeta"}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("estimated statistic model agrees with enumeration") {
  auto m = urn2_model();
  auto spec = NuisanceSpec::with_interest(m.space(), {"nu_c"});
  DerivedModelOptions opt;
  opt.nuisance_window = std::vector<std::vector<Value>>{{s("blue")}, {s("color010")}, {s("color190")}};
  auto est = estimate_statistic_model(m, distinct_count_statistic(), 2, spec, 50'000, 11, opt);
  const double p = est.model.probability({{i64(201)}}, s("1"));
  const double se = std::sqrt(urn_repeat_oracle() * (1 - urn_repeat_oracle()) / 50'000);
  CHECK(std::fabs(p - urn_repeat_oracle()) <= 5 * se);
  CHECK(est.model.probability({{i64(1)}}, s("1")) == 1.0);

  opt.threads = 3;
  auto again = estimate_statistic_model(m, distinct_count_statistic(), 2, spec, 50'000, 11, opt);
  CHECK(again.model.probability({{i64(201)}}, s("1")) == p);
  CHECK(again.standard_errors == est.standard_errors);

  auto mixed = mixed_model();
  CHECK(code_of([&] {
          estimate_statistic_model(mixed, distinct_count_statistic(), 2,
                                   NuisanceSpec::with_nuisance(mixed.space(), {"mu"}), 20'000, 3);
        }) == ErrorCode::NuisanceDependent);
}
