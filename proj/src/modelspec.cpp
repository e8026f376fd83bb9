#include "likev/modelspec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "likev/space.hpp"

namespace likev {

namespace {

constexpr std::size_t kMaxDiagnostics = 100;
constexpr std::size_t kMaxMissingReported = 5;

struct Token {
  std::string text;
  bool quoted = false;
  std::size_t column = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t'; }

bool is_control(unsigned char c) { return (c < 0x20 && c != '\t') || c == 0x7f; }

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

/// Integer text in the exact form to_string() would print.
std::optional<std::int64_t> canonical_int(std::string_view s) {
  auto v = parse_int64(s);
  if (!v || std::to_string(*v) != s) return std::nullopt;
  return v;
}

bool bare_safe(const std::string& s) {
  if (s.empty() || s == ":") return false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (is_space(ch) || ch == '"' || ch == '#' || ch == '\\' || is_control(c)) return false;
  }
  return true;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      auto end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      auto line = text_.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      parse_line(line, line_no);
      if (diagnostics_.size() >= kMaxDiagnostics) break;
      if (end == text_.size()) break;
      start = end + 1;
    }
    last_line_ = line_no;
    finish();
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (!failed_) result.document = std::move(doc_);
    return result;
  }

 private:
  void error(ErrorCode code, std::string message, std::size_t line, std::size_t column) {
    failed_ = true;
    if (diagnostics_.size() < kMaxDiagnostics)
      diagnostics_.push_back({Severity::Error, code, std::move(message), line, column});
  }

  void warn(std::string message, std::size_t line, std::size_t column) {
    if (diagnostics_.size() < kMaxDiagnostics)
      diagnostics_.push_back(
          {Severity::Warning, ErrorCode::RowNotNormalized, std::move(message), line, column});
  }

  std::optional<std::vector<Token>> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    std::size_t column = 1;
    auto advance = [&] {
      ++i;
      while (i < line.size() && (static_cast<unsigned char>(line[i]) & 0xC0) == 0x80) ++i;
      ++column;
    };
    while (i < line.size()) {
      const char ch = line[i];
      if (is_space(ch)) {
        advance();
        continue;
      }
      if (ch == '#') break;
      if (is_control(static_cast<unsigned char>(ch))) {
        error(ErrorCode::SyntaxError, "control character in input", line_no, column);
        return std::nullopt;
      }
      Token tok;
      tok.column = column;
      if (ch == '"') {
        tok.quoted = true;
        advance();
        bool closed = false;
        while (i < line.size()) {
          const char c = line[i];
          if (c == '"') {
            closed = true;
            advance();
            break;
          }
          if (is_control(static_cast<unsigned char>(c))) {
            error(ErrorCode::SyntaxError, "control character in input", line_no, column);
            return std::nullopt;
          }
          if (c == '\\') {
            if (i + 1 >= line.size() || (line[i + 1] != '"' && line[i + 1] != '\\')) {
              error(ErrorCode::SyntaxError, "unknown escape in quoted value", line_no, column);
              return std::nullopt;
            }
            tok.text += line[i + 1];
            advance();
            advance();
            continue;
          }
          const std::size_t from = i;
          advance();
          tok.text.append(line.substr(from, i - from));
        }
        if (!closed) {
          error(ErrorCode::SyntaxError, "unterminated quoted value", line_no, tok.column);
          return std::nullopt;
        }
        if (i < line.size() && !is_space(line[i]) && line[i] != '#') {
          error(ErrorCode::SyntaxError, "expected whitespace after quoted value", line_no, column);
          return std::nullopt;
        }
      } else {
        while (i < line.size() && !is_space(line[i]) && line[i] != '#') {
          const char c = line[i];
          if (c == '"') {
            error(ErrorCode::SyntaxError, "quote inside bare value", line_no, column);
            return std::nullopt;
          }
          if (is_control(static_cast<unsigned char>(c))) {
            error(ErrorCode::SyntaxError, "control character in input", line_no, column);
            return std::nullopt;
          }
          const std::size_t from = i;
          advance();
          tok.text.append(line.substr(from, i - from));
        }
      }
      tokens.push_back(std::move(tok));
    }
    return tokens;
  }

  static bool is_colon(const Token& t) { return !t.quoted && t.text == ":"; }

  void parse_line(std::string_view line, std::size_t line_no) {
    auto tokens = tokenize(line, line_no);
    if (!tokens || tokens->empty()) return;
    const Token& head = tokens->front();
    if (head.quoted) {
      error(ErrorCode::SyntaxError, "expected a keyword", line_no, head.column);
      return;
    }
    if (head.text == "model") {
      parse_model(*tokens, line_no);
    } else if (head.text == "param") {
      parse_param(*tokens, line_no);
    } else if (head.text == "outcome") {
      parse_outcome(*tokens, line_no);
    } else if (head.text == "row") {
      parse_row(*tokens, line_no);
    } else {
      error(ErrorCode::SyntaxError, "unknown keyword '" + head.text + "'", line_no, head.column);
    }
  }

  void parse_model(const std::vector<Token>& t, std::size_t line_no) {
    if (have_model_) {
      error(ErrorCode::SyntaxError, "second model declaration", line_no, t[0].column);
      return;
    }
    if (t.size() != 2 || is_colon(t[1])) {
      error(ErrorCode::SyntaxError, "expected 'model <name>'", line_no,
            t.size() > 1 ? t[1].column : t[0].column);
      return;
    }
    have_model_ = true;
    doc_.name = t[1].text;
    doc_.name_span = {line_no, t[0].column};
  }

  /// Values of a declaration: integers when every token is a bare canonical
  /// integer, labels otherwise. Reports repeats.
  std::optional<std::vector<Value>> declared_values(const std::vector<Token>& t, std::size_t from,
                                                    std::size_t line_no, const std::string& what) {
    if (from >= t.size()) {
      error(ErrorCode::SyntaxError, what + " declares no values", line_no,
            t.back().column + t.back().text.size());
      return std::nullopt;
    }
    bool integers = true;
    for (std::size_t i = from; i < t.size(); ++i) {
      if (is_colon(t[i])) {
        error(ErrorCode::SyntaxError, "unexpected ':'", line_no, t[i].column);
        return std::nullopt;
      }
      integers = integers && !t[i].quoted && canonical_int(t[i].text).has_value();
    }
    std::vector<Value> values;
    std::set<std::string> seen;
    bool ok = true;
    for (std::size_t i = from; i < t.size(); ++i) {
      if (!seen.insert(t[i].text).second) {
        error(ErrorCode::SyntaxError, "duplicate value '" + t[i].text + "' in " + what, line_no,
              t[i].column);
        ok = false;
        continue;
      }
      if (integers)
        values.emplace_back(*canonical_int(t[i].text));
      else
        values.emplace_back(t[i].text);
    }
    if (!ok) return std::nullopt;
    return values;
  }

  void parse_param(const std::vector<Token>& t, std::size_t line_no) {
    if (!doc_.rows.empty() || !rows_.empty()) {
      error(ErrorCode::SyntaxError, "param declared after rows", line_no, t[0].column);
      return;
    }
    if (have_outcome_) {
      error(ErrorCode::SyntaxError, "param declared after outcome", line_no, t[0].column);
      return;
    }
    if (t.size() < 3 || t[1].quoted || !is_identifier(t[1].text) || !is_colon(t[2])) {
      error(ErrorCode::SyntaxError, "expected 'param <name> : <values>'", line_no,
            t.size() > 1 ? t[1].column : t[0].column);
      return;
    }
    for (const auto& p : doc_.params) {
      if (p.name == t[1].text) {
        error(ErrorCode::SyntaxError, "param '" + t[1].text + "' declared twice", line_no,
              t[1].column);
        return;
      }
    }
    auto values = declared_values(t, 3, line_no, "param " + t[1].text);
    if (!values) {
      params_failed_ = true;
      return;
    }
    std::unordered_map<std::string, std::size_t> lookup;
    for (std::size_t i = 0; i < values->size(); ++i) lookup.emplace(to_string((*values)[i]), i);
    lookups_.push_back(std::move(lookup));
    doc_.params.push_back({t[1].text, std::move(*values), {line_no, t[0].column}});
  }

  void parse_outcome(const std::vector<Token>& t, std::size_t line_no) {
    if (have_outcome_) {
      error(ErrorCode::SyntaxError, "second outcome declaration", line_no, t[0].column);
      return;
    }
    have_outcome_ = true;
    if (t.size() < 2 || !is_colon(t[1])) {
      error(ErrorCode::SyntaxError, "expected 'outcome : <values>'", line_no,
            t.size() > 1 ? t[1].column : t[0].column);
      outcome_failed_ = true;
      return;
    }
    auto values = declared_values(t, 2, line_no, "outcome");
    if (!values) {
      outcome_failed_ = true;
      return;
    }
    doc_.outcomes = std::move(*values);
    doc_.outcome_span = {line_no, t[0].column};
  }

  std::optional<Probability> probability(const Token& tok, std::size_t line_no) {
    if (tok.quoted) {
      error(ErrorCode::SyntaxError, "probability must not be quoted", line_no, tok.column);
      return std::nullopt;
    }
    const std::string& s = tok.text;
    const auto slash = s.find('/');
    auto digits_only = [](std::string_view d) {
      return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (slash != std::string::npos) {
      std::string_view num(s.data(), slash);
      std::string_view den(s.data() + slash + 1, s.size() - slash - 1);
      std::uint64_t a = 0, b = 0;
      if (!digits_only(num) || !digits_only(den) ||
          std::from_chars(num.data(), num.data() + num.size(), a).ec != std::errc{} ||
          std::from_chars(den.data(), den.data() + den.size(), b).ec != std::errc{}) {
        error(ErrorCode::SyntaxError, "malformed rational '" + s + "'", line_no, tok.column);
        return std::nullopt;
      }
      if (b == 0) {
        error(ErrorCode::SyntaxError, "zero denominator in '" + s + "'", line_no, tok.column);
        return std::nullopt;
      }
      return Probability{static_cast<double>(a) / static_cast<double>(b), s};
    }
    const bool decimal_chars = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+';
    });
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!decimal_chars || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
      error(ErrorCode::SyntaxError, "malformed probability '" + s + "'", line_no, tok.column);
      return std::nullopt;
    }
    if (v < 0.0) {
      error(ErrorCode::NegativeProbability, "negative probability '" + s + "'", line_no,
            tok.column);
      return std::nullopt;
    }
    return Probability{v == 0.0 ? 0.0 : v, std::nullopt};
  }

  void parse_row(const std::vector<Token>& t, std::size_t line_no) {
    if (doc_.params.empty() || !have_outcome_) {
      error(ErrorCode::SyntaxError, "row before param and outcome declarations", line_no,
            t[0].column);
      return;
    }
    if (params_failed_ || outcome_failed_) return;
    std::size_t colon = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (is_colon(t[i])) {
        colon = i;
        break;
      }
    }
    if (colon == 0) {
      error(ErrorCode::SyntaxError, "expected ':' in row", line_no, t[0].column);
      return;
    }
    const std::size_t rank = doc_.params.size();
    if (colon - 1 != rank) {
      error(ErrorCode::SyntaxError,
            "row names " + std::to_string(colon - 1) + " coordinates, expected " +
                std::to_string(rank),
            line_no, t[0].column);
      return;
    }
    std::vector<std::size_t> index(rank);
    ModelRow row;
    row.span = {line_no, t[0].column};
    bool ok = true;
    for (std::size_t d = 0; d < rank; ++d) {
      const Token& tok = t[1 + d];
      auto it = lookups_[d].find(tok.text);
      if (it == lookups_[d].end()) {
        error(ErrorCode::UnknownValue,
              "'" + tok.text + "' is not a value of param " + doc_.params[d].name, line_no,
              tok.column);
        ok = false;
        continue;
      }
      index[d] = it->second;
      row.coords.push_back(doc_.params[d].values[it->second]);
    }
    const std::size_t k = t.size() - colon - 1;
    if (k != doc_.outcomes.size()) {
      error(ErrorCode::SyntaxError,
            "row has " + std::to_string(k) + " probabilities, expected " +
                std::to_string(doc_.outcomes.size()),
            line_no, colon + 1 < t.size() ? t[colon + 1].column : t[colon].column);
      return;
    }
    for (std::size_t i = colon + 1; i < t.size(); ++i) {
      auto p = probability(t[i], line_no);
      if (!p) {
        ok = false;
        continue;
      }
      row.probabilities.push_back(std::move(*p));
    }
    if (!ok) return;
    double sum = 0.0;
    for (const auto& p : row.probabilities) sum += p.value;
    const double dev = std::fabs(sum - 1.0);
    if (dev > kNormalizationTolerance) {
      error(ErrorCode::RowNotNormalized, "row sums to " + format_double(sum), line_no,
            t[0].column);
      return;
    }
    if (dev > 1e-12) warn("row sums to " + format_double(sum), line_no, t[0].column);
    auto [it, inserted] = rows_.emplace(std::move(index), std::move(row));
    if (!inserted)
      error(ErrorCode::DuplicateRow,
            "duplicate row, first given on line " + std::to_string(it->second.span.line), line_no,
            t[0].column);
  }

  void finish() {
    if (!have_model_) error(ErrorCode::SyntaxError, "missing 'model' declaration", 1, 1);
    if (doc_.params.empty() && !params_failed_)
      error(ErrorCode::SyntaxError, "missing 'param' declaration", last_line_, 1);
    if (!have_outcome_) error(ErrorCode::SyntaxError, "missing 'outcome' declaration", last_line_, 1);
    if (failed_) return;

    std::uint64_t total = 1;
    for (const auto& p : doc_.params) {
      const std::uint64_t n = p.values.size();
      total = total > std::numeric_limits<std::uint64_t>::max() / n
                  ? std::numeric_limits<std::uint64_t>::max()
                  : total * n;
    }
    if (rows_.size() < total) {
      std::vector<std::size_t> idx(doc_.params.size(), 0);
      std::size_t reported = 0;
      const std::uint64_t missing = total - rows_.size();
      while (reported < kMaxMissingReported && reported < missing) {
        if (!rows_.count(idx)) {
          std::string tuple;
          for (std::size_t d = 0; d < idx.size(); ++d)
            tuple += (d ? " " : "") + to_string(doc_.params[d].values[idx[d]]);
          error(ErrorCode::MissingRow, "no row for (" + tuple + ")", last_line_, 1);
          ++reported;
        }
        std::size_t pos = idx.size();
        while (pos-- > 0) {
          if (++idx[pos] < doc_.params[pos].values.size()) break;
          idx[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
      }
      if (missing > reported)
        error(ErrorCode::MissingRow, std::to_string(missing - reported) + " more rows missing",
              last_line_, 1);
      return;
    }
    for (auto& [idx, row] : rows_) doc_.rows.push_back(std::move(row));
  }

  std::string_view text_;
  ModelDocument doc_;
  std::vector<std::unordered_map<std::string, std::size_t>> lookups_;
  std::map<std::vector<std::size_t>, ModelRow> rows_;
  std::vector<ParseDiagnostic> diagnostics_;
  std::size_t last_line_ = 1;
  bool failed_ = false;
  bool have_model_ = false;
  bool have_outcome_ = false;
  bool params_failed_ = false;
  bool outcome_failed_ = false;
};

std::string value_token(const Value& v) {
  const std::string text = to_string(v);
  if (std::holds_alternative<std::string>(v) && (!bare_safe(text) || canonical_int(text)))
    return quote(text);
  return text;
}

void append_values(std::string& out, const std::vector<Value>& values) {
  for (const auto& v : values) out += ' ' + value_token(v);
}

}  // namespace

bool structurally_equal(const ModelDocument& a, const ModelDocument& b) {
  if (a.name != b.name || a.outcomes != b.outcomes || a.params.size() != b.params.size() ||
      a.rows.size() != b.rows.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name || a.params[i].values != b.params[i].values)
      return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].coords != b.rows[i].coords ||
        a.rows[i].probabilities != b.rows[i].probabilities)
      return false;
  return true;
}

std::string format_diagnostic(const ParseDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         (d.severity == Severity::Error ? "error" : "warning") + ": " +
         std::string(error_name(d.code)) + ": " + d.message;
}

const ParseDiagnostic* ParseResult::first_error() const {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return &d;
  return nullptr;
}

ParseResult parse_document(std::string_view text) { return Parser(text).run(); }

std::string serialize(const ModelDocument& doc) {
  std::string out = "model ";
  out += bare_safe(doc.name) ? doc.name : quote(doc.name);
  out += '\n';
  for (const auto& p : doc.params) {
    out += "param " + p.name + " :";
    append_values(out, p.values);
    out += '\n';
  }
  out += "outcome :";
  append_values(out, doc.outcomes);
  out += '\n';
  for (const auto& row : doc.rows) {
    out += "row";
    append_values(out, row.coords);
    out += " :";
    for (const auto& p : row.probabilities) {
      out += ' ';
      out += p.rational ? *p.rational : format_double(p.value);
    }
    out += '\n';
  }
  return out;
}

DiscreteModel to_model(const ModelDocument& doc) {
  std::vector<Dimension> dims;
  for (const auto& p : doc.params) dims.push_back(Dimension::list(p.name, p.values));
  std::vector<double> table;
  table.reserve(doc.rows.size() * doc.outcomes.size());
  for (const auto& row : doc.rows)
    for (const auto& p : row.probabilities) table.push_back(p.value);
  return build_model(doc.name, ParameterSpace(std::move(dims)),
                     OutcomeSpace::enumerated(doc.outcomes), std::move(table));
}

ModelDocument document_from_model(const DiscreteModel& model) {
  if (!model.is_dense())
    throw Error(ErrorCode::InvalidArgument,
                "model '" + model.name() + "' is function-backed and has no table form");
  if (model.outcomes().is_interval())
    throw Error(ErrorCode::InvalidArgument,
                "model '" + model.name() + "' has an integer-interval outcome space");
  auto representable = [](const std::vector<Value>& values) {
    for (const auto& v : values) {
      if (std::holds_alternative<double>(v)) return false;
      if (const auto* s = std::get_if<std::string>(&v))
        if (s->find_first_of("\r\n") != std::string::npos) return false;
    }
    return true;
  };
  ModelDocument doc;
  doc.name = model.name();
  for (const auto& d : model.space().dimensions()) {
    if (d.is_range() || !representable(d.values()) || !is_identifier(d.name()))
      throw Error(ErrorCode::InvalidArgument,
                  "dimension '" + d.name() + "' cannot be written as a param declaration");
    doc.params.push_back({d.name(), d.values(), {}});
  }
  if (!representable(model.outcomes().labels()))
    throw Error(ErrorCode::InvalidArgument, "outcomes cannot be written as an outcome declaration");
  doc.outcomes = model.outcomes().labels();
  for (const auto& point : model.space().points()) {
    ModelRow row;
    row.coords = point.coords;
    for (const auto& x : doc.outcomes)
      row.probabilities.push_back({model.probability(point, x), std::nullopt});
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

}  // namespace likev
