#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "likev/model.hpp"

namespace likev {

/// Contents of the multi-colour urn: `shared_count` balls of the colour
/// common to both urns plus the listed other colours, each strictly less
/// numerous than the shared colour.
struct UrnComposition {
  std::string shared_label = "blue";
  std::int64_t shared_count = 100;
  std::vector<std::pair<std::string, std::int64_t>> other_colors;

  std::int64_t total() const;

  /// 100 shared balls, 100 colours of 49 balls and 100 colours of 50 balls.
  static UrnComposition standard();
};

/// Birnbaum's measurement model. sigma takes the values {0, peak_halfwidth};
/// the triangular branch is P(x) = (h - |x - mu|) / normalizer for |x - mu| < h.
struct BirnbaumConfig {
  std::int64_t mu_lo = -9'999'999'999;
  std::int64_t mu_hi = 9'999'999'999;
  std::int64_t peak_halfwidth = 100;
  /// c = 1 / normalizer. Only h^2 normalizes the triangular branch.
  std::int64_t normalizer = 10'000;
};

/// The commonly quoted constant c = 1/10040. It does not
/// normalize the triangular branch and is kept only for reporting.
inline constexpr double kBirnbaumPrintedNormalizer = 10'040.0;

/// Ratio L(mu=x, sigma=0) / L(mu=x, sigma=h) for one observation under c = 1/normalizer.
double birnbaum_peak_ratio(double normalizer, std::int64_t peak_halfwidth = 100);

DiscreteModel rain_model();
DiscreteModel urn1_model();
DiscreteModel urn2_model(const UrnComposition& comp = UrnComposition::standard());
DiscreteModel birnbaum_model(const BirnbaumConfig& cfg = {});
/// Birnbaum's model with mu known: sigma in {0, h}, outcomes {"<mu>", "not-<mu>"}.
DiscreteModel birnbaum_known_mu_model(std::int64_t mu, const BirnbaumConfig& cfg = {});
DiscreteModel binomial_model(int n, std::vector<double> p_grid);
/// A single-point model putting probability one on `observed`, a sequence of
/// "H"/"T" coin outcomes (at most kMaxSureThingLength of them).
DiscreteModel surething_model(const Sample& observed);

inline constexpr int kMaxSureThingLength = 16;

/// Points of Birnbaum's model with mu within h of some observation.
std::vector<ParameterPoint> birnbaum_window(const BirnbaumConfig& cfg,
                                            std::span<const Value> observations);

}  // namespace likev
