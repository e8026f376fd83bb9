#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "likev/error.hpp"
#include "likev/likelihood.hpp"
#include "likev/models.hpp"
#include "likev/sampling.hpp"

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

/// Sum of P(x|point) over the declared support, and over every outcome when
/// the outcome space is a finite label list.
void check_point_normalized(const DiscreteModel& m, const ParameterPoint& p) {
  double support_sum = 0.0;
  for (const auto& x : m.support(p)) {
    const double v = m.probability(p, x);
    CHECK(v >= 0.0);
    support_sum += v;
  }
  CHECK(std::fabs(support_sum - 1.0) <= 1e-9);
  if (!m.outcomes().is_interval()) {
    double all = 0.0;
    for (const auto& x : m.outcomes().labels()) all += m.probability(p, x);
    CHECK(all == support_sum);
  }
}

void check_normalized(const DiscreteModel& m) {
  INFO(m.name());
  if (m.space().enumerable()) {
    for (const auto& p : m.space().points()) check_point_normalized(m, p);
    return;
  }
  const auto size = m.space().size();
  for (std::uint64_t k = 0; k < 64; ++k) check_point_normalized(m, m.space().point_at(k * (size / 64)));
  check_point_normalized(m, m.space().point_at(size - 1));
}

double binomial_oracle(int n, int k, double p) {
  // Product form of C(n,k) to keep every factor below 2^53.
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace

TEST_CASE("every builtin is normalized") {
  check_normalized(rain_model());
  check_normalized(urn1_model());
  check_normalized(urn2_model());
  UrnComposition small;
  small.shared_label = "b";
  small.shared_count = 5;
  small.other_colors = {{"r", 4}, {"g", 1}, {"y", 3}};
  check_normalized(urn2_model(small));
  check_normalized(birnbaum_model());
  BirnbaumConfig narrow;
  narrow.mu_lo = -300;
  narrow.mu_hi = 300;
  check_normalized(birnbaum_model(narrow));
  BirnbaumConfig wide;
  wide.peak_halfwidth = 7;
  wide.normalizer = 49;
  wide.mu_lo = -20;
  wide.mu_hi = 20;
  check_normalized(birnbaum_model(wide));
  check_normalized(birnbaum_known_mu_model(17));
  for (int n : {1, 2, 5, 10, 40})
    check_normalized(binomial_model(n, {0.0, 0.1, 0.5, 0.9, 1.0}));
  check_normalized(surething_model(Sample({s("H"), s("T"), s("H")})));
}

TEST_CASE("rain table") {
  auto m = rain_model();
  const char* days[] = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};
  const double rain[] = {0, 0.07, 0.65, 0.2, 0.05, 0.01, 0.01};
  for (int i = 0; i < 7; ++i) {
    ParameterPoint p{{s(days[i])}};
    CHECK(m.probability(p, s("rain")) == rain[i]);
    CHECK(m.probability(p, s("rain")) + m.probability(p, s("not-rain")) == doctest::Approx(1.0));
  }
}

TEST_CASE("urn one") {
  auto m = urn1_model();
  CHECK(m.probability({{i64(1)}}, s("red")) == 1.0);
  CHECK(m.probability({{i64(201)}}, s("red")) == 0.01);
  CHECK(m.probability({{i64(201)}}, s("non-red")) == 0.99);
}

TEST_CASE("urn two") {
  auto comp = UrnComposition::standard();
  CHECK(comp.total() == 10000);
  CHECK(comp.other_colors.size() == 200);
  auto m = urn2_model();
  CHECK(m.space().size() == 402);
  // nu_c = 1: the urn holds only colour mu.
  CHECK(m.probability({{s("color007"), i64(1)}}, s("color007")) == 1.0);
  CHECK(m.probability({{s("color007"), i64(1)}}, s("blue")) == 0.0);
  // mu names the colour with 100 balls.
  CHECK(m.probability({{s("color007"), i64(201)}}, s("color007")) == 0.01);
  CHECK(m.probability({{s("color007"), i64(201)}}, s("blue")) == 0.0049);
  CHECK(m.probability({{s("color150"), i64(201)}}, s("blue")) == 0.005);
  CHECK(m.probability({{s("blue"), i64(201)}}, s("blue")) == 0.01);
  CHECK(m.probability({{s("blue"), i64(201)}}, s("color150")) == 0.005);

  UrnComposition bad;
  bad.other_colors = {{"red", 100}};
  CHECK(code_of([&] { urn2_model(bad); }) == ErrorCode::InvalidComposition);
  bad.other_colors = {{"blue", 3}};
  CHECK(code_of([&] { urn2_model(bad); }) == ErrorCode::InvalidComposition);
  bad.other_colors = {};
  CHECK(code_of([&] { urn2_model(bad); }) == ErrorCode::InvalidComposition);
  bad.other_colors = {{"red", 0}};
  CHECK(code_of([&] { urn2_model(bad); }) == ErrorCode::InvalidComposition);
}

TEST_CASE("birnbaum pmf") {
  auto m = birnbaum_model();
  CHECK_FALSE(m.space().enumerable());
  ParameterPoint wide{{i64(0), i64(100)}};
  ParameterPoint point{{i64(0), i64(0)}};
  for (std::int64_t x : {-99, -50, -1, 0, 1, 42, 99}) {
    CHECK(m.probability(wide, i64(x)) == static_cast<double>(100 - std::abs(x)) / 10000.0);
  }
  CHECK(m.probability(wide, i64(100)) == 0.0);
  CHECK(m.probability(wide, i64(-100)) == 0.0);
  CHECK(m.probability(wide, i64(0)) == 0.01);
  CHECK(m.probability(point, i64(0)) == 1.0);
  CHECK(m.probability(point, i64(1)) == 0.0);
  CHECK(m.support(wide).size() == 199);
  CHECK(m.support(point).size() == 1);
  CHECK(m.probability({{i64(9'999'999'999), i64(100)}}, i64(10'000'000'098)) == 0.0001);

  auto window = m.candidate_points(std::vector<Value>{i64(17)});
  CHECK(window.size() == 2 * 201);
  CHECK(window.front() == ParameterPoint{{i64(-83), i64(0)}});
  CHECK(window.back() == ParameterPoint{{i64(117), i64(100)}});
}

TEST_CASE("birnbaum normalizer") {
  BirnbaumConfig printed;
  printed.normalizer = 10040;
  CHECK(code_of([&] { birnbaum_model(printed); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { birnbaum_known_mu_model(0, printed); }) == ErrorCode::InvalidConfig);
  BirnbaumConfig empty;
  empty.mu_lo = 5;
  empty.mu_hi = 4;
  CHECK(code_of([&] { birnbaum_model(empty); }) == ErrorCode::InvalidConfig);
  CHECK(birnbaum_peak_ratio(10000) == 100.0);
  CHECK(birnbaum_peak_ratio(kBirnbaumPrintedNormalizer) == doctest::Approx(100.4).epsilon(1e-12));
}

TEST_CASE("birnbaum with mu known") {
  auto m = birnbaum_known_mu_model(17);
  CHECK(m.outcomes().labels() == std::vector<Value>{s("17"), s("not-17")});
  CHECK(m.probability({{i64(0)}}, s("17")) == 1.0);
  CHECK(m.probability({{i64(100)}}, s("17")) == 0.01);
  auto l = likelihood(m, s("17"));
  CHECK(likelihood_ratio(l, {{i64(0)}}, {{i64(100)}}).ratio == 100.0);
}

TEST_CASE("binomial matches the closed form") {
  for (int n : {1, 3, 10, 25}) {
    std::vector<double> grid = {0.05, 0.3, 0.5, 0.77};
    auto m = binomial_model(n, grid);
    for (double p : grid)
      for (int k = 0; k <= n; ++k) {
        const double want = binomial_oracle(n, k, p);
        CHECK(m.probability({{p}}, i64(k)) == doctest::Approx(want).epsilon(1e-13));
      }
  }
  auto edge = binomial_model(4, {0.0, 1.0});
  CHECK(edge.probability({{0.0}}, i64(0)) == 1.0);
  CHECK(edge.probability({{1.0}}, i64(4)) == 1.0);
  CHECK(edge.support({{1.0}}) == std::vector<Value>{i64(4)});
  CHECK(code_of([] { binomial_model(0, {0.5}); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { binomial_model(3, {}); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { binomial_model(3, {0.5, 0.5}); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { binomial_model(3, {1.5}); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { binomial_model(3, {std::nan("")}); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("sure-thing model") {
  auto m = surething_model(Sample({s("H"), s("T"), s("H")}));
  CHECK(m.space().size() == 1);
  CHECK(m.outcomes().size() == 8);
  ParameterPoint only{{s("HTH")}};
  CHECK(m.probability(only, s("HTH")) == 1.0);
  CHECK(m.probability(only, s("HHH")) == 0.0);
  CHECK(m.support(only) == std::vector<Value>{s("HTH")});
  CHECK(code_of([] { surething_model(Sample({s("H"), s("X")})); }) ==
        ErrorCode::OutcomeNotInSpace);
  CHECK(code_of([] { surething_model(Sample{}); }) == ErrorCode::InvalidArgument);
  std::vector<Value> long_run(17, s("H"));
  CHECK(code_of([&] { surething_model(Sample(long_run)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sampling is reproducible") {
  auto m = urn2_model();
  ParameterPoint p{{s("color003"), i64(201)}};
  auto a = sample(m, p, 500, 42);
  auto b = sample(m, p, 500, 42);
  CHECK(a == b);
  CHECK_FALSE(a == sample(m, p, 500, 43));
  CHECK_FALSE(a == sample(m, p, 500, 42, 1));

  RandomStream r1(9, 3), r2(9, 3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r1.uniform();
    CHECK(u == r2.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("urn one red fraction") {
  constexpr int n = 100'000;
  auto draws = sample(urn1_model(), {{i64(201)}}, n, 2024);
  const auto red = std::count(draws.observations().begin(), draws.observations().end(), s("red"));
  const double se = std::sqrt(0.01 * 0.99 / n);
  CHECK(std::fabs(static_cast<double>(red) / n - 0.01) <= 5 * se);
}

TEST_CASE("sampled frequencies follow the pmf") {
  constexpr int n = 200'000;
  auto m = rain_model();
  ParameterPoint p{{s("Wednesday")}};
  auto draws = sample(m, p, n, 5);
  std::map<Value, int> counts;
  for (const auto& x : draws.observations()) ++counts[x];
  for (const auto& x : m.outcomes().labels()) {
    const double q = m.probability(p, x);
    const double se = std::sqrt(q * (1 - q) / n);
    CHECK(std::fabs(counts[x] / static_cast<double>(n) - q) <= 5 * se);
  }
  // Outcomes outside the support are never drawn.
  auto monday = sample(m, {{s("Monday")}}, 1000, 5);
  for (const auto& x : monday.observations()) CHECK(x == s("not-rain"));
}
