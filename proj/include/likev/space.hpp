#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "likev/value.hpp"

namespace likev {

/// Spaces with more points than this are treated as lazy: operations that
/// need to visit every point require an explicit window instead.
inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

struct IntegerRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  friend bool operator==(const IntegerRange&, const IntegerRange&) = default;
};

/// One named axis of a parameter space: either an explicit list of distinct
/// values or a closed integer range that is never materialized.
class Dimension {
 public:
  static Dimension list(std::string name, std::vector<Value> values);
  static Dimension range(std::string name, std::int64_t lo, std::int64_t hi);

  const std::string& name() const { return name_; }
  bool is_range() const { return is_range_; }
  std::uint64_t size() const;

  Value at(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const Value& v) const;
  bool contains(const Value& v) const { return index_of(v).has_value(); }

  /// Matches `text` against the textual form of the declared values.
  /// Throws PointNotInSpace when nothing matches.
  Value parse(std::string_view text) const;

  const std::vector<Value>& values() const { return values_; }
  IntegerRange bounds() const { return bounds_; }

  friend bool operator==(const Dimension& a, const Dimension& b) {
    return a.name_ == b.name_ && a.is_range_ == b.is_range_ &&
           a.values_ == b.values_ && a.bounds_ == b.bounds_;
  }

 private:
  Dimension() = default;

  std::string name_;
  bool is_range_ = false;
  std::vector<Value> values_;
  std::map<Value, std::uint64_t> index_;
  IntegerRange bounds_;
};

struct ParameterPoint {
  std::vector<Value> coords;

  friend auto operator<=>(const ParameterPoint&, const ParameterPoint&) = default;
  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

/// A (dimension index, value) constraint list, e.g. parsed from "sigma=0".
using Assignment = std::vector<std::pair<std::size_t, Value>>;

/// Cartesian product of named dimensions, first dimension varying slowest.
class ParameterSpace {
 public:
  explicit ParameterSpace(std::vector<Dimension> dims);

  const std::vector<Dimension>& dimensions() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::optional<std::size_t> dimension_index(std::string_view name) const;

  /// Number of points, saturating at UINT64_MAX.
  std::uint64_t size() const;
  bool enumerable(std::uint64_t limit = kEnumerationLimit) const {
    return size() <= limit;
  }

  /// All points in canonical order. Throws EnumerationTooLarge for lazy spaces.
  std::vector<ParameterPoint> points() const;
  ParameterPoint point_at(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const ParameterPoint& p) const;
  bool contains(const ParameterPoint& p) const;

  const Value& value_of(const ParameterPoint& p, std::string_view dim) const;

  /// Parses "dim=value[,dim=value...]" naming every dimension exactly once.
  ParameterPoint parse_point(std::string_view text) const;
  /// Like parse_point but any subset of dimensions may be named.
  Assignment parse_assignment(std::string_view text) const;

  std::string format(const ParameterPoint& p) const;

  friend bool operator==(const ParameterSpace& a, const ParameterSpace& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<Dimension> dims_;
};

/// Projects a point onto the given dimension indices, in the given order.
std::vector<Value> project(const ParameterPoint& p, std::span<const std::size_t> dims);

/// The observable values: an enumerated list or a closed integer interval.
class OutcomeSpace {
 public:
  static OutcomeSpace enumerated(std::vector<Value> labels);
  static OutcomeSpace interval(std::int64_t lo, std::int64_t hi);

  bool is_interval() const { return is_interval_; }
  std::uint64_t size() const;
  Value at(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const Value& v) const;
  bool contains(const Value& v) const { return index_of(v).has_value(); }
  /// Throws OutcomeNotInSpace when `text` names no outcome.
  Value parse(std::string_view text) const;

  const std::vector<Value>& labels() const { return labels_; }
  IntegerRange bounds() const { return bounds_; }

  friend bool operator==(const OutcomeSpace& a, const OutcomeSpace& b) {
    return a.is_interval_ == b.is_interval_ && a.labels_ == b.labels_ &&
           a.bounds_ == b.bounds_;
  }

 private:
  OutcomeSpace() = default;

  bool is_interval_ = false;
  std::vector<Value> labels_;
  std::map<Value, std::uint64_t> index_;
  IntegerRange bounds_;
};

std::optional<std::int64_t> parse_int64(std::string_view text);

}  // namespace likev
