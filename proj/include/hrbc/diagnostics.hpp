#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hrbc {

/// Line/column of a source construct (1-based; 0 means "no location").
/// Spans are metadata: they never take part in structural equality, so
/// two trees parsed from differently formatted text compare equal.
struct SourceSpan {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

enum class Severity { error, warning, note };

struct Diagnostic {
  Severity severity = Severity::error;
  SourceSpan span;
  std::string message;
};

const char* severity_name(Severity severity);

/// `file:line:col: severity: message`
std::string format_diagnostic(const Diagnostic& diagnostic, const std::string& file,
                              bool color = false);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Raised by stages that stop at the first problem (lexer, parser, translator).
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(Diagnostic diagnostic);
  DiagnosticError(SourceSpan span, const std::string& message);

  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

}  // namespace hrbc
