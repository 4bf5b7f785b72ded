#include "hrbc/diagnostics.hpp"

#include <algorithm>

namespace hrbc {

const char* severity_name(Severity severity) {
  switch (severity) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::note: return "note";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic& diagnostic, const std::string& file, bool color) {
  std::string out = file;
  if (diagnostic.span.line > 0) {
    out += ':' + std::to_string(diagnostic.span.line) + ':' + std::to_string(diagnostic.span.column);
  }
  out += ": ";
  const char* name = severity_name(diagnostic.severity);
  if (color) {
    const char* code = diagnostic.severity == Severity::error     ? "\x1b[1;31m"
                       : diagnostic.severity == Severity::warning ? "\x1b[1;35m"
                                                                  : "\x1b[1;36m";
    out += code;
    out += name;
    out += "\x1b[0m";
  } else {
    out += name;
  }
  out += ": " + diagnostic.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

DiagnosticError::DiagnosticError(Diagnostic diagnostic)
    : std::runtime_error(diagnostic.message), diagnostic_(std::move(diagnostic)) {}

DiagnosticError::DiagnosticError(SourceSpan span, const std::string& message)
    : DiagnosticError(Diagnostic{Severity::error, span, message}) {}

}  // namespace hrbc
