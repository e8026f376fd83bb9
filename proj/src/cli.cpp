#include "likev/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "likev/error.hpp"
#include "likev/likelihood.hpp"
#include "likev/misleading.hpp"
#include "likev/model.hpp"
#include "likev/models.hpp"
#include "likev/modelspec.hpp"
#include "likev/nuisance.hpp"
#include "likev/parallel.hpp"

namespace likev::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kBuiltins = {"rain",     "urn1",     "urn2",     "birnbaum",
                                            "birnbaum-known-mu",    "binomial", "sure-thing"};

const std::map<std::string, std::vector<std::string>> kDefaultInterest = {
    {"rain", {"day"}},         {"urn1", {"nu_c"}},     {"urn2", {"nu_c"}},
    {"birnbaum", {"sigma"}},   {"birnbaum-known-mu", {"sigma"}},
    {"binomial", {"p"}},       {"sure-thing", {"sequence"}}};

struct Options {
  // model source
  std::string file;
  std::string builtin;
  std::int64_t mu = 0;
  std::string mu_range;
  int coin_n = 10;
  std::string p_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string sequence = "HTH";
  std::string urn;
  // second model for cross-model ratios
  std::string b_file;
  std::string b_builtin;
  std::string b_obs;
  std::string b_sample;
  // data and points
  std::string obs;
  std::string sample;
  std::string a;
  std::string b;
  // nuisance handling
  std::string nuisance;
  std::string interest;
  std::string weights = "uniform";
  std::string stat = "distinct-count";
  std::size_t n = 1;
  // misleading evidence
  std::string method;
  std::string truth;
  std::string style = "vector-argmax";
  double k = 8.0;
  std::vector<std::string> favored;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t max_sequences = 20'000'000;
  // validate
  std::string validate_file;
  std::string format = "text";
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  for (auto& s : split(text, ','))
    if (!s.empty()) out.push_back(s);
  return out;
}

std::int64_t parse_int_arg(const std::string& text, const std::string& what) {
  auto v = parse_int64(text);
  if (!v) throw UsageError(what + ": '" + text + "' is not an integer");
  return *v;
}

// ---------------------------------------------------------------------------
// Models

struct LoadedModel {
  DiscreteModel model;
  std::optional<ModelDocument> document;
  std::string builtin;
};

BirnbaumConfig birnbaum_config(const Options& o) {
  BirnbaumConfig cfg;
  if (!o.mu_range.empty()) {
    auto colon = o.mu_range.find(':', 1);
    if (colon == std::string::npos) throw UsageError("--mu-range expects LO:HI");
    cfg.mu_lo = parse_int_arg(o.mu_range.substr(0, colon), "--mu-range");
    cfg.mu_hi = parse_int_arg(o.mu_range.substr(colon + 1), "--mu-range");
  }
  return cfg;
}

UrnComposition urn_composition(const Options& o) {
  if (o.urn.empty()) return UrnComposition::standard();
  UrnComposition comp;
  comp.other_colors.clear();
  bool first = true;
  for (const auto& entry : split(o.urn, ',')) {
    auto colon = entry.rfind(':');
    if (colon == std::string::npos) throw UsageError("--urn expects COLOR:COUNT,...");
    std::string label = entry.substr(0, colon);
    std::int64_t count = parse_int_arg(entry.substr(colon + 1), "--urn");
    if (first) {
      comp.shared_label = label;
      comp.shared_count = count;
      first = false;
    } else {
      comp.other_colors.emplace_back(label, count);
    }
  }
  return comp;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& s : split(text, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw UsageError("--p-grid: '" + s + "' is not a number");
    grid.push_back(v);
  }
  return grid;
}

DiscreteModel builtin_model(const std::string& name, const Options& o) {
  if (name == "rain") return rain_model();
  if (name == "urn1") return urn1_model();
  if (name == "urn2") return urn2_model(urn_composition(o));
  if (name == "birnbaum") return birnbaum_model(birnbaum_config(o));
  if (name == "birnbaum-known-mu") return birnbaum_known_mu_model(o.mu, birnbaum_config(o));
  if (name == "binomial") return binomial_model(o.coin_n, parse_grid(o.p_grid));
  if (name == "sure-thing") {
    std::vector<Value> tosses;
    for (char c : o.sequence) tosses.emplace_back(std::string(1, c));
    return surething_model(Sample(std::move(tosses)));
  }
  throw UsageError("unknown builtin '" + name + "'");
}

ModelDocument read_document(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto result = parse_document(buf.str());
  for (const auto& d : result.diagnostics) {
    if (d.severity != Severity::Warning) continue;
    err << "warning: " << error_name(d.code) << ": " << path << ":" << d.line << ":" << d.column
        << ": " << d.message << "\n";
  }
  if (const auto* e = result.first_error())
    throw Error(e->code, path + ":" + std::to_string(e->line) + ":" + std::to_string(e->column) +
                             ": " + e->message);
  return std::move(*result.document);
}

LoadedModel load(const std::string& file, const std::string& builtin, const Options& o,
                 std::ostream& err) {
  if (file.empty() == builtin.empty())
    throw UsageError("give exactly one of --file and --builtin");
  if (!file.empty()) {
    auto doc = read_document(file, err);
    auto model = to_model(doc);
    return {std::move(model), std::move(doc), ""};
  }
  return {builtin_model(builtin, o), std::nullopt, builtin};
}

LoadedModel load_primary(const Options& o, std::ostream& err) {
  return load(o.file, o.builtin, o, err);
}

// ---------------------------------------------------------------------------
// Output

json value_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json values_json(const std::vector<Value>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

std::string scalar_text(const json& v) {
  switch (v.type()) {
    case json::value_t::string: return v.get<std::string>();
    case json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case json::value_t::number_float: return format_double(v.get<double>());
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::null: return "none";
    case json::value_t::array: {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + scalar_text(v[i]);
      return out;
    }
    default: return v.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Record {
  std::string command;
  json payload = json::object();
};

/// Adds a table as "columns" and "rows" (one object per row).
void set_table(Record& r, const std::vector<std::string>& columns,
               const std::vector<std::vector<json>>& rows) {
  r.payload["columns"] = columns;
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  r.payload["rows"] = std::move(arr);
}

void render(const Record& r, const std::string& format, std::ostream& out) {
  const json& p = r.payload;
  if (format == "json") {
    json doc = json::object();
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = r.command;
    doc["payload"] = p;
    out << doc.dump(2) << "\n";
    return;
  }
  const bool has_table = p.contains("rows");
  if (format == "csv") {
    if (has_table) {
      const auto& cols = p["columns"];
      for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << csv_field(cols[i].get<std::string>());
      out << "\n";
      for (const auto& row : p["rows"]) {
        for (std::size_t i = 0; i < cols.size(); ++i)
          out << (i ? "," : "") << csv_field(scalar_text(row[cols[i].get<std::string>()]));
        out << "\n";
      }
    } else {
      out << "key,value\n";
      for (const auto& [key, v] : p.items()) out << csv_field(key) << "," << csv_field(scalar_text(v)) << "\n";
    }
    return;
  }
  for (const auto& [key, v] : p.items()) {
    if (key == "columns" || key == "rows") continue;
    out << key << "=" << scalar_text(v) << "\n";
  }
  if (has_table) {
    const auto& cols = p["columns"];
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i].get<std::string>();
    out << "\n";
    for (const auto& row : p["rows"]) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "\t" : "") << scalar_text(row[cols[i].get<std::string>()]);
      out << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Shared pieces of the analyses

Sample observations(const DiscreteModel& model, const std::string& obs, const std::string& sample,
                    const char* obs_flag, const char* sample_flag) {
  if (!obs.empty() && !sample.empty())
    throw UsageError(std::string("give only one of ") + obs_flag + " and " + sample_flag);
  if (obs.empty() && sample.empty())
    throw UsageError(std::string(obs_flag) + " or " + sample_flag + " is required");
  std::vector<Value> values;
  if (!obs.empty()) {
    values.push_back(model.outcomes().parse(obs));
  } else {
    for (const auto& s : split(sample, ',')) values.push_back(model.outcomes().parse(s));
  }
  return Sample(std::move(values));
}

LikelihoodFunction likelihood_of(const DiscreteModel& model, const Sample& s) {
  if (s.size() == 1) return likelihood(model, s.observations().front());
  return iid_likelihood(model, s);
}

void describe_data(Record& r, const DiscreteModel& model, const Sample& s) {
  r.payload["model"] = model.name();
  r.payload["observations"] = values_json(s.observations());
}

void add_likelihood_table(Record& r, const LikelihoodFunction& l, const std::string& value_col) {
  std::vector<std::string> cols;
  for (const auto& d : l.space().dimensions()) cols.push_back(d.name());
  cols.push_back(value_col);
  std::vector<std::vector<json>> rows;
  for (std::size_t i = 0; i < l.points().size(); ++i) {
    std::vector<json> row;
    for (const auto& c : l.points()[i].coords) row.push_back(value_json(c));
    row.push_back(number_json(l.values()[i]));
    rows.push_back(std::move(row));
  }
  set_table(r, cols, rows);
}

void add_comparison(Record& r, const ParameterSpace& space, const EvidenceComparison& c,
                    double la, double lb) {
  r.payload["a"] = space.format(c.point_a);
  r.payload["b"] = space.format(c.point_b);
  r.payload["likelihood_a"] = number_json(la);
  r.payload["likelihood_b"] = number_json(lb);
  r.payload["ratio"] = number_json(c.ratio);
  r.payload["classification"] = std::string(support_name(c.classification));
}

void maybe_compare(Record& r, const LikelihoodFunction& l, const Options& o) {
  if (o.a.empty() && o.b.empty()) return;
  if (o.a.empty() || o.b.empty()) throw UsageError("--a and --b go together");
  auto a = l.space().parse_point(o.a);
  auto b = l.space().parse_point(o.b);
  auto c = likelihood_ratio(l, a, b);
  add_comparison(r, l.space(), c, l.at(a), l.at(b));
}

NuisanceSpec nuisance_spec(const LoadedModel& m, const Options& o) {
  const auto& space = m.model.space();
  if (!o.nuisance.empty() && !o.interest.empty())
    throw UsageError("give only one of --nuisance and --interest");
  if (!o.nuisance.empty()) return NuisanceSpec::with_nuisance(space, split_names(o.nuisance));
  if (!o.interest.empty()) return NuisanceSpec::with_interest(space, split_names(o.interest));
  auto it = kDefaultInterest.find(m.builtin);
  if (it == kDefaultInterest.end()) throw UsageError("--nuisance or --interest is required");
  return NuisanceSpec::with_interest(space, it->second);
}

void describe_split(Record& r, const NuisanceSpec& spec) {
  r.payload["interest"] = spec.interest;
  r.payload["nuisance"] = spec.nuisance;
}

DerivedStatistic statistic_named(const std::string& name) {
  if (name == "distinct-count") return distinct_count_statistic(true);
  if (name == "distinct-count-exact") return distinct_count_statistic(false);
  throw UsageError("unknown statistic '" + name + "'");
}

// ---------------------------------------------------------------------------
// Commands

Record cmd_validate(const Options& o, std::ostream& err) {
  std::ifstream in(o.validate_file, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + o.validate_file);
  std::stringstream buf;
  buf << in.rdbuf();
  auto result = parse_document(buf.str());
  std::size_t warnings = 0;
  for (const auto& d : result.diagnostics) {
    if (d.severity != Severity::Warning) continue;
    ++warnings;
    err << "warning: " << error_name(d.code) << ": " << o.validate_file << ":" << d.line << ":"
        << d.column << ": " << d.message << "\n";
  }
  if (const auto* e = result.first_error())
    throw Error(e->code, o.validate_file + ":" + std::to_string(e->line) + ":" +
                             std::to_string(e->column) + ": " + e->message);
  const auto& doc = *result.document;
  auto model = to_model(doc);
  Record r{"validate"};
  r.payload["file"] = o.validate_file;
  r.payload["valid"] = true;
  r.payload["model"] = doc.name;
  json params = json::array();
  for (const auto& p : doc.params) params.push_back(p.name);
  r.payload["params"] = params;
  r.payload["points"] = model.space().size();
  r.payload["outcomes"] = doc.outcomes.size();
  r.payload["warnings"] = warnings;
  return r;
}

Record cmd_likelihood(const Options& o, std::ostream& err) {
  auto m = load_primary(o, err);
  auto s = observations(m.model, o.obs, o.sample, "--obs", "--sample");
  auto l = likelihood_of(m.model, s);
  Record r{"likelihood"};
  describe_data(r, m.model, s);
  r.payload["exhaustive"] = l.exhaustive();
  r.payload["points"] = l.points().size();
  add_likelihood_table(r, l, "likelihood");
  return r;
}

Record cmd_ratio(const Options& o, std::ostream& err) {
  if (o.a.empty() || o.b.empty()) throw UsageError("--a and --b are required");
  auto m = load_primary(o, err);
  auto s = observations(m.model, o.obs, o.sample, "--obs", "--sample");
  auto la = likelihood_of(m.model, s);
  Record r{"ratio"};
  describe_data(r, m.model, s);
  auto a = m.model.space().parse_point(o.a);
  if (o.b_file.empty() && o.b_builtin.empty()) {
    auto b = m.model.space().parse_point(o.b);
    auto c = likelihood_ratio(la, a, b);
    add_comparison(r, m.model.space(), c, la.at(a), la.at(b));
    return r;
  }
  auto mb = load(o.b_file, o.b_builtin, o, err);
  const bool own_data = !o.b_obs.empty() || !o.b_sample.empty();
  auto sb = own_data ? observations(mb.model, o.b_obs, o.b_sample, "--b-obs", "--b-sample")
                     : observations(mb.model, o.obs, o.sample, "--obs", "--sample");
  auto lb = likelihood_of(mb.model, sb);
  auto b = mb.model.space().parse_point(o.b);
  r.payload["b_model"] = mb.model.name();
  r.payload["b_observations"] = values_json(sb.observations());
  auto c = likelihood_ratio(la, a, lb, b);
  add_comparison(r, m.model.space(), c, la.at(a), lb.at(b));
  return r;
}

Record cmd_mle(const Options& o, std::ostream& err) {
  auto m = load_primary(o, err);
  auto s = observations(m.model, o.obs, o.sample, "--obs", "--sample");
  auto l = likelihood_of(m.model, s);
  auto best = max_likelihood_points(l);
  Record r{"mle"};
  describe_data(r, m.model, s);
  r.payload["max_likelihood"] = number_json(l.max_value());
  r.payload["count"] = best.size();
  std::vector<std::string> cols;
  for (const auto& d : m.model.space().dimensions()) cols.push_back(d.name());
  std::vector<std::vector<json>> rows;
  for (const auto& p : best) {
    std::vector<json> row;
    for (const auto& c : p.coords) row.push_back(value_json(c));
    rows.push_back(std::move(row));
  }
  set_table(r, cols, rows);
  return r;
}

Record cmd_reduce(const Options& o, std::ostream& err, bool marginal) {
  auto m = load_primary(o, err);
  auto s = observations(m.model, o.obs, o.sample, "--obs", "--sample");
  auto spec = nuisance_spec(m, o);
  auto l = likelihood_of(m.model, s);
  auto reduced = marginal ? marginalize(l, spec) : profile(l, spec);
  Record r{marginal ? "marginalize" : "profile"};
  describe_data(r, m.model, s);
  describe_split(r, spec);
  if (marginal) r.payload["weights"] = o.weights;
  maybe_compare(r, reduced, o);
  add_likelihood_table(r, reduced, "likelihood");
  return r;
}

Record cmd_derive(const Options& o, std::ostream& err) {
  auto m = load_primary(o, err);
  auto spec = nuisance_spec(m, o);
  auto stat = statistic_named(o.stat);
  DerivedModelOptions dopt;
  dopt.threads = default_thread_count();
  auto derived = derived_statistic_model(m.model, stat, o.n, spec, dopt);
  Record r{"derive-stat"};
  r.payload["model"] = m.model.name();
  r.payload["statistic"] = stat.name;
  r.payload["n"] = o.n;
  describe_split(r, spec);
  if (!o.obs.empty()) {
    auto s = observations(derived, o.obs, "", "--obs", "--sample");
    r.payload["observation"] = to_string(s.observations().front());
    maybe_compare(r, likelihood(derived, s.observations().front()), o);
  } else if (!o.a.empty() || !o.b.empty()) {
    throw UsageError("--a/--b need --obs (a statistic value)");
  }
  std::vector<std::string> cols = spec.interest;
  cols.push_back("statistic");
  cols.push_back("probability");
  std::vector<std::vector<json>> rows;
  for (const auto& p : derived.space().points()) {
    for (const auto& x : derived.outcomes().labels()) {
      std::vector<json> row;
      for (const auto& c : p.coords) row.push_back(value_json(c));
      row.push_back(to_string(x));
      row.push_back(number_json(derived.probability(p, x)));
      rows.push_back(std::move(row));
    }
  }
  set_table(r, cols, rows);
  return r;
}

FavoredSet favored_set(const LoadedModel& m, const ParameterPoint& truth, ComparisonStyle style,
                       const Options& o) {
  const auto& space = m.model.space();
  if (o.favored.empty()) {
    std::vector<std::string> dims;
    if (style == ComparisonStyle::FixedPair) {
      for (const auto& d : space.dimensions()) dims.push_back(d.name());
    } else if (!o.interest.empty()) {
      dims = split_names(o.interest);
    } else if (auto it = kDefaultInterest.find(m.builtin); it != kDefaultInterest.end()) {
      dims = it->second;
    } else {
      for (const auto& d : space.dimensions()) dims.push_back(d.name());
    }
    return favor_all_but_truth(space, truth, std::move(dims));
  }
  FavoredSet set;
  std::vector<std::size_t> order;
  for (const auto& text : o.favored) {
    auto assignment = space.parse_assignment(text);
    if (order.empty()) {
      for (const auto& [idx, v] : assignment) {
        order.push_back(idx);
        set.dims.push_back(space.dimensions()[idx].name());
      }
    }
    std::map<std::size_t, Value> by_dim(assignment.begin(), assignment.end());
    if (by_dim.size() != order.size())
      throw UsageError("every --favored must name the same dimensions");
    std::vector<Value> tuple;
    for (auto idx : order) {
      auto it = by_dim.find(idx);
      if (it == by_dim.end()) throw UsageError("every --favored must name the same dimensions");
      tuple.push_back(it->second);
    }
    set.values.push_back(std::move(tuple));
  }
  return set;
}

Record cmd_misleading(const Options& o, std::ostream& err) {
  auto m = load_primary(o, err);
  if (o.truth.empty()) throw UsageError("--true is required");
  auto truth = m.model.space().parse_point(o.truth);
  auto style = parse_style(o.style);
  if (!style) throw UsageError("unknown style '" + o.style + "'");
  ComparisonSpec spec;
  spec.style = *style;
  spec.threshold = o.k;
  spec.favored = favored_set(m, truth, *style, o);
  spec.statistic = statistic_named(o.stat);
  spec.derived_options.threads = default_thread_count();
  SimulationOptions sim;
  sim.max_sequences = o.max_sequences;
  sim.threads = default_thread_count();
  const bool exact = o.method == "exact";
  auto report = exact ? exact_misleading_probability(m.model, truth, spec, o.n, sim)
                      : monte_carlo_misleading(m.model, truth, spec, o.n, o.trials, o.seed, sim);
  Record r{"misleading"};
  r.payload["model"] = m.model.name();
  r.payload["true"] = m.model.space().format(truth);
  r.payload["style"] = std::string(style_name(spec.style));
  json favored = json::array();
  for (const auto& tuple : spec.favored.values) {
    std::string text;
    for (std::size_t i = 0; i < tuple.size(); ++i)
      text += (i ? "," : "") + spec.favored.dims[i] + "=" + to_string(tuple[i]);
    favored.push_back(text);
  }
  r.payload["favored"] = favored;
  r.payload["k"] = number_json(o.k);
  r.payload["n"] = o.n;
  r.payload["method"] = exact ? "exact" : "monte-carlo";
  r.payload["probability"] = number_json(report.probability);
  r.payload[exact ? "sequences" : "trials"] = report.size;
  if (!exact) {
    r.payload["standard_error"] = number_json(*report.standard_error);
    r.payload["seed"] = *report.seed;
  }
  r.payload["min_misleading_ratio"] =
      report.min_misleading_ratio ? number_json(*report.min_misleading_ratio) : json(nullptr);
  return r;
}

Record cmd_export(const Options& o, std::ostream& out, std::ostream& err, bool& written) {
  auto m = load_primary(o, err);
  if (o.format == "lmod") {
    if (!o.obs.empty() || !o.sample.empty())
      throw UsageError("--format lmod exports the model, not a likelihood");
    out << serialize(m.document ? *m.document : document_from_model(m.model));
    written = true;
    return {};
  }
  Record r{"export"};
  if (!o.obs.empty() || !o.sample.empty()) {
    auto s = observations(m.model, o.obs, o.sample, "--obs", "--sample");
    auto l = likelihood_of(m.model, s);
    describe_data(r, m.model, s);
    add_likelihood_table(r, l, "likelihood");
    return r;
  }
  r.payload["model"] = m.model.name();
  std::vector<std::string> cols;
  for (const auto& d : m.model.space().dimensions()) cols.push_back(d.name());
  cols.push_back("outcome");
  cols.push_back("probability");
  std::vector<std::vector<json>> rows;
  for (const auto& p : m.model.space().points()) {
    const auto outcomes = m.model.is_dense() ? m.model.outcomes().labels() : m.model.support(p);
    for (const auto& x : outcomes) {
      std::vector<json> row;
      for (const auto& c : p.coords) row.push_back(value_json(c));
      row.push_back(value_json(x));
      row.push_back(number_json(m.model.probability(p, x)));
      rows.push_back(std::move(row));
    }
  }
  set_table(r, cols, rows);
  return r;
}

// ---------------------------------------------------------------------------
// Argument wiring

void add_source(CLI::App* cmd, Options& o) {
  auto* file = cmd->add_option("--file", o.file, "Model file (.lmod)");
  auto* builtin = cmd->add_option("--builtin", o.builtin, "Builtin model")
                      ->check(CLI::IsMember(kBuiltins));
  file->excludes(builtin);
  cmd->add_option("--mu", o.mu, "Known mu (birnbaum-known-mu)");
  cmd->add_option("--mu-range", o.mu_range, "LO:HI range of mu (birnbaum)");
  cmd->add_option("--coin-n", o.coin_n, "Number of tosses (binomial)");
  cmd->add_option("--p-grid", o.p_grid, "Comma-separated p values (binomial)");
  cmd->add_option("--sequence", o.sequence, "Observed H/T sequence (sure-thing)");
  cmd->add_option("--urn", o.urn, "SHARED:COUNT,COLOR:COUNT,... (urn2)");
}

void add_data(CLI::App* cmd, Options& o) {
  cmd->add_option("--obs", o.obs, "Single observation");
  cmd->add_option("--sample", o.sample, "Comma-separated i.i.d. observations");
}

void add_points(CLI::App* cmd, Options& o, bool required) {
  auto* a = cmd->add_option("--a", o.a, "Point a as dim=value[,dim=value...]");
  auto* b = cmd->add_option("--b", o.b, "Point b as dim=value[,dim=value...]");
  if (required) {
    a->required();
    b->required();
  }
}

void add_split(CLI::App* cmd, Options& o) {
  auto* nuisance = cmd->add_option("--nuisance", o.nuisance, "Comma-separated nuisance dimensions");
  auto* interest = cmd->add_option("--interest", o.interest, "Comma-separated interest dimensions");
  nuisance->excludes(interest);
}

void add_format(CLI::App* cmd, Options& o, std::vector<std::string> formats) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Likelihood evidence for finite discrete models", "likev"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  const std::vector<std::string> table_formats = {"text", "csv", "json"};

  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("file", o.validate_file, "Model file (.lmod)")->required();
  add_format(validate, o, table_formats);

  auto* lik = app.add_subcommand("likelihood", "Likelihood function of the data");
  add_source(lik, o);
  add_data(lik, o);
  add_format(lik, o, table_formats);

  auto* ratio = app.add_subcommand("ratio", "Likelihood ratio L(a)/L(b)");
  add_source(ratio, o);
  add_data(ratio, o);
  add_points(ratio, o, true);
  ratio->add_option("--b-file", o.b_file, "Model file holding point b");
  ratio->add_option("--b-builtin", o.b_builtin, "Builtin model holding point b")
      ->check(CLI::IsMember(kBuiltins));
  ratio->add_option("--b-obs", o.b_obs, "Observation for the model of b");
  ratio->add_option("--b-sample", o.b_sample, "Sample for the model of b");
  add_format(ratio, o, table_formats);

  auto* mle = app.add_subcommand("mle", "Points of maximal likelihood");
  add_source(mle, o);
  add_data(mle, o);
  add_format(mle, o, table_formats);

  auto* marg = app.add_subcommand("marginalize", "Sum nuisance dimensions out of the likelihood");
  add_source(marg, o);
  add_data(marg, o);
  add_split(marg, o);
  marg->add_option("--weights", o.weights, "Nuisance weights")
      ->check(CLI::IsMember({"uniform"}))
      ->capture_default_str();
  add_points(marg, o, false);
  add_format(marg, o, table_formats);

  auto* prof = app.add_subcommand("profile", "Maximise nuisance dimensions out of the likelihood");
  add_source(prof, o);
  add_data(prof, o);
  add_split(prof, o);
  add_points(prof, o, false);
  add_format(prof, o, table_formats);

  auto* derive = app.add_subcommand("derive-stat", "Model of a derived statistic");
  add_source(derive, o);
  add_split(derive, o);
  derive->add_option("--stat", o.stat, "Statistic")
      ->check(CLI::IsMember({"distinct-count", "distinct-count-exact"}))
      ->capture_default_str();
  derive->add_option("--n", o.n, "Sample size")->required();
  derive->add_option("--obs", o.obs, "Observed statistic value");
  add_points(derive, o, false);
  add_format(derive, o, table_formats);

  auto* mis = app.add_subcommand("misleading", "Probability of misleading evidence");
  mis->add_option("method", o.method, "exact or mc")
      ->required()
      ->check(CLI::IsMember({"exact", "mc"}));
  add_source(mis, o);
  mis->add_option("--true", o.truth, "True point as dim=value,...")->required();
  mis->add_option("--style", o.style, "Comparison style")
      ->check(CLI::IsMember(
          {"vector-argmax", "fixed-pair", "interest-marginal", "interest-derived"}))
      ->capture_default_str();
  mis->add_option("--k", o.k, "Evidence threshold (> 1)")->required();
  mis->add_option("--n", o.n, "Sample size")->required();
  mis->add_option("--favored", o.favored, "Favoured value as dim=value,... (repeatable)");
  mis->add_option("--interest", o.interest, "Interest dimensions when --favored is absent");
  mis->add_option("--stat", o.stat, "Statistic for interest-derived")
      ->check(CLI::IsMember({"distinct-count", "distinct-count-exact"}))
      ->capture_default_str();
  mis->add_option("--trials", o.trials, "Monte Carlo trials")->capture_default_str();
  mis->add_option("--seed", o.seed, "Monte Carlo seed")->capture_default_str();
  mis->add_option("--max-sequences", o.max_sequences, "Bound on enumerated sequences")
      ->capture_default_str();
  add_format(mis, o, table_formats);

  auto* exp = app.add_subcommand("export", "Model table, or likelihood table with --obs");
  add_source(exp, o);
  add_data(exp, o);
  add_format(exp, o, {"text", "csv", "json", "lmod"});

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    Record record;
    bool written = false;
    if (validate->parsed()) record = cmd_validate(o, err);
    else if (lik->parsed()) record = cmd_likelihood(o, err);
    else if (ratio->parsed()) record = cmd_ratio(o, err);
    else if (mle->parsed()) record = cmd_mle(o, err);
    else if (marg->parsed()) record = cmd_reduce(o, err, true);
    else if (prof->parsed()) record = cmd_reduce(o, err, false);
    else if (derive->parsed()) record = cmd_derive(o, err);
    else if (mis->parsed()) record = cmd_misleading(o, err);
    else if (exp->parsed()) record = cmd_export(o, out, err, written);
    if (!written) render(record, o.format, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: Usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << one_line(e.what()) << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitDomain;
  } catch (const std::exception& e) {
    err << "error: Internal: " << one_line(e.what()) << "\n";
    return kExitDomain;
  }
}

}  // namespace likev::cli
