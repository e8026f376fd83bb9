#include "likev/space.hpp"

#include <charconv>
#include <limits>
#include <set>

#include "likev/error.hpp"

namespace likev {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::optional<std::int64_t> parse_int64(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Dimension

Dimension Dimension::list(std::string name, std::vector<Value> values) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "dimension name is empty");
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "dimension '" + name + "' has no values");
  Dimension d;
  d.name_ = std::move(name);
  for (std::uint64_t i = 0; i < values.size(); ++i) {
    if (!d.index_.emplace(values[i], i).second)
      throw Error(ErrorCode::InvalidArgument, "dimension '" + d.name_ +
                                                  "' repeats value '" + to_string(values[i]) + "'");
  }
  d.values_ = std::move(values);
  return d;
}

Dimension Dimension::range(std::string name, std::int64_t lo, std::int64_t hi) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "dimension name is empty");
  if (lo > hi) throw Error(ErrorCode::InvalidArgument, "dimension '" + name + "' has lo > hi");
  Dimension d;
  d.name_ = std::move(name);
  d.is_range_ = true;
  d.bounds_ = {lo, hi};
  return d;
}

std::uint64_t Dimension::size() const {
  if (!is_range_) return values_.size();
  return static_cast<std::uint64_t>(bounds_.hi) - static_cast<std::uint64_t>(bounds_.lo) + 1;
}

Value Dimension::at(std::uint64_t index) const {
  if (index >= size()) throw Error(ErrorCode::PointNotInSpace, "index outside dimension " + name_);
  if (!is_range_) return values_[index];
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(bounds_.lo) + index);
}

std::optional<std::uint64_t> Dimension::index_of(const Value& v) const {
  if (is_range_) {
    const auto* i = std::get_if<std::int64_t>(&v);
    if (i == nullptr || *i < bounds_.lo || *i > bounds_.hi) return std::nullopt;
    return static_cast<std::uint64_t>(*i) - static_cast<std::uint64_t>(bounds_.lo);
  }
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Value Dimension::parse(std::string_view text) const {
  text = trim(text);
  if (is_range_) {
    auto i = parse_int64(text);
    if (i && *i >= bounds_.lo && *i <= bounds_.hi) return *i;
  } else {
    for (const auto& v : values_)
      if (to_string(v) == text) return v;
  }
  throw Error(ErrorCode::PointNotInSpace,
              "'" + std::string(text) + "' is not a value of dimension '" + name_ + "'");
}

// ---------------------------------------------------------------------------
// ParameterSpace

ParameterSpace::ParameterSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(ErrorCode::InvalidArgument, "parameter space has no dimensions");
  std::set<std::string> names;
  for (const auto& d : dims_)
    if (!names.insert(d.name()).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate dimension name '" + d.name() + "'");
}

std::optional<std::size_t> ParameterSpace::dimension_index(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].name() == name) return i;
  return std::nullopt;
}

std::uint64_t ParameterSpace::size() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n = 1;
  for (const auto& d : dims_) {
    auto s = d.size();
    if (s != 0 && n > kMax / s) return kMax;
    n *= s;
  }
  return n;
}

std::vector<ParameterPoint> ParameterSpace::points() const {
  if (!enumerable())
    throw Error(ErrorCode::EnumerationTooLarge,
                "parameter space is too large to enumerate; supply a window");
  std::vector<ParameterPoint> out;
  const auto n = size();
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(point_at(i));
  return out;
}

ParameterPoint ParameterSpace::point_at(std::uint64_t index) const {
  ParameterPoint p;
  p.coords.resize(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    auto s = dims_[k].size();
    p.coords[k] = dims_[k].at(index % s);
    index /= s;
  }
  return p;
}

std::optional<std::uint64_t> ParameterSpace::index_of(const ParameterPoint& p) const {
  if (p.coords.size() != dims_.size()) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    auto i = dims_[k].index_of(p.coords[k]);
    if (!i) return std::nullopt;
    index = index * dims_[k].size() + *i;
  }
  return index;
}

bool ParameterSpace::contains(const ParameterPoint& p) const {
  if (p.coords.size() != dims_.size()) return false;
  for (std::size_t k = 0; k < dims_.size(); ++k)
    if (!dims_[k].contains(p.coords[k])) return false;
  return true;
}

const Value& ParameterSpace::value_of(const ParameterPoint& p, std::string_view dim) const {
  auto k = dimension_index(dim);
  if (!k || *k >= p.coords.size())
    throw Error(ErrorCode::PointNotInSpace, "no dimension named '" + std::string(dim) + "'");
  return p.coords[*k];
}

Assignment ParameterSpace::parse_assignment(std::string_view text) const {
  Assignment out;
  for (auto part : split(text, ',')) {
    part = trim(part);
    auto eq = part.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::PointNotInSpace,
                  "expected dim=value, got '" + std::string(part) + "'");
    auto name = trim(part.substr(0, eq));
    auto k = dimension_index(name);
    if (!k)
      throw Error(ErrorCode::PointNotInSpace, "no dimension named '" + std::string(name) + "'");
    for (const auto& [seen, v] : out)
      if (seen == *k)
        throw Error(ErrorCode::PointNotInSpace,
                    "dimension '" + std::string(name) + "' assigned twice");
    out.emplace_back(*k, dims_[*k].parse(part.substr(eq + 1)));
  }
  return out;
}

ParameterPoint ParameterSpace::parse_point(std::string_view text) const {
  auto assignment = parse_assignment(text);
  if (assignment.size() != dims_.size())
    throw Error(ErrorCode::PointNotInSpace,
                "point '" + std::string(text) + "' does not name every dimension");
  ParameterPoint p;
  p.coords.resize(dims_.size());
  for (auto& [k, v] : assignment) p.coords[k] = std::move(v);
  return p;
}

std::string ParameterSpace::format(const ParameterPoint& p) const {
  std::string out;
  for (std::size_t k = 0; k < p.coords.size() && k < dims_.size(); ++k) {
    if (k) out += ',';
    out += dims_[k].name() + "=" + to_string(p.coords[k]);
  }
  return out;
}

std::vector<Value> project(const ParameterPoint& p, std::span<const std::size_t> dims) {
  std::vector<Value> out;
  out.reserve(dims.size());
  for (auto k : dims) out.push_back(p.coords.at(k));
  return out;
}

// ---------------------------------------------------------------------------
// OutcomeSpace

OutcomeSpace OutcomeSpace::enumerated(std::vector<Value> labels) {
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "outcome space is empty");
  OutcomeSpace o;
  for (std::uint64_t i = 0; i < labels.size(); ++i)
    if (!o.index_.emplace(labels[i], i).second)
      throw Error(ErrorCode::InvalidArgument,
                  "outcome label '" + to_string(labels[i]) + "' repeated");
  o.labels_ = std::move(labels);
  return o;
}

OutcomeSpace OutcomeSpace::interval(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error(ErrorCode::InvalidArgument, "outcome interval has lo > hi");
  OutcomeSpace o;
  o.is_interval_ = true;
  o.bounds_ = {lo, hi};
  return o;
}

std::uint64_t OutcomeSpace::size() const {
  if (!is_interval_) return labels_.size();
  return static_cast<std::uint64_t>(bounds_.hi) - static_cast<std::uint64_t>(bounds_.lo) + 1;
}

Value OutcomeSpace::at(std::uint64_t index) const {
  if (index >= size()) throw Error(ErrorCode::OutcomeNotInSpace, "outcome index out of range");
  if (!is_interval_) return labels_[index];
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(bounds_.lo) + index);
}

std::optional<std::uint64_t> OutcomeSpace::index_of(const Value& v) const {
  if (is_interval_) {
    const auto* i = std::get_if<std::int64_t>(&v);
    if (i == nullptr || *i < bounds_.lo || *i > bounds_.hi) return std::nullopt;
    return static_cast<std::uint64_t>(*i) - static_cast<std::uint64_t>(bounds_.lo);
  }
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Value OutcomeSpace::parse(std::string_view text) const {
  text = trim(text);
  if (is_interval_) {
    auto i = parse_int64(text);
    if (i && *i >= bounds_.lo && *i <= bounds_.hi) return *i;
  } else {
    for (const auto& v : labels_)
      if (to_string(v) == text) return v;
  }
  throw Error(ErrorCode::OutcomeNotInSpace, "'" + std::string(text) + "' is not a possible outcome");
}

}  // namespace likev
