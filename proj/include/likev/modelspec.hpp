#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "likev/error.hpp"
#include "likev/model.hpp"
#include "likev/value.hpp"

namespace likev {

/// Text model format (.lmod), one construct per line:
///
///     # comment
///     model rain
///     param day : Monday Tuesday Wednesday
///     outcome : rain not-rain
///     row Monday : 0.4 0.6
///     row Tuesday : 3/4 1/4
///
/// Values are bare tokens or double-quoted strings (escapes \" and \\). A
/// declaration whose values are all bare canonical integers holds integers;
/// any other declaration holds labels.

struct SourceSpan {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based, in code points
};

/// A table entry. `rational` keeps the a/b text verbatim; decimals keep only
/// their value.
struct Probability {
  double value = 0.0;
  std::optional<std::string> rational;

  friend bool operator==(const Probability&, const Probability&) = default;
};

struct ParamDecl {
  std::string name;
  std::vector<Value> values;
  SourceSpan span;
};

struct ModelRow {
  std::vector<Value> coords;
  std::vector<Probability> probabilities;
  SourceSpan span;
};

struct ModelDocument {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<Value> outcomes;
  /// One per parameter tuple, in Cartesian order of the declarations.
  std::vector<ModelRow> rows;
  SourceSpan name_span;
  SourceSpan outcome_span;
};

/// Equality ignoring source positions.
bool structurally_equal(const ModelDocument& a, const ModelDocument& b);

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  ErrorCode code = ErrorCode::SyntaxError;
  std::string message;
  std::size_t line = 0;
  std::size_t column = 0;
};

/// "3:7: error: RowNotNormalized: ..."
std::string format_diagnostic(const ParseDiagnostic& d);

struct ParseResult {
  /// Present iff there are no error diagnostics.
  std::optional<ModelDocument> document;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
  const ParseDiagnostic* first_error() const;
};

/// Never throws on malformed input.
ParseResult parse_document(std::string_view text);

/// Canonical text: declarations in order, rows in Cartesian order, single
/// spaces, shortest round-trip decimals, rationals verbatim, no comments.
std::string serialize(const ModelDocument& doc);

/// Dense model with the document's values as coordinates and outcomes.
DiscreteModel to_model(const ModelDocument& doc);

/// Document for a dense model over listed dimensions and enumerated outcomes.
/// Throws InvalidArgument for function-backed models.
ModelDocument document_from_model(const DiscreteModel& model);

}  // namespace likev
