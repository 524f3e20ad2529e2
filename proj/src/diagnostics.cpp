#include "sit/diagnostics.hpp"

#include <sstream>

namespace sit {

SourceSpan merge(const SourceSpan& a, const SourceSpan& b) {
  if (!a.valid()) return b;
  if (!b.valid()) return a;
  SourceSpan out = a;
  out.end_line = b.end_line;
  out.end_col = b.end_col;
  return out;
}

DiagClass Diagnostic::diag_class() const {
  if (code.size() < 2) return DiagClass::Type;
  switch (code[1]) {
    case '0':
      return DiagClass::Parse;
    case '4':
      return DiagClass::Fuel;
    default:
      return DiagClass::Type;
  }
}

std::string Diagnostic::format() const {
  std::ostringstream os;
  os << (span.file.empty() ? "<input>" : span.file) << ':' << span.start_line << ':'
     << span.start_col << ": " << (severity == Severity::Error ? "error" : "warning") << '['
     << code << "]: " << message;
  if (expected) os << " (expected: " << *expected;
  if (actual) os << (expected ? ", " : " (") << "actual: " << *actual;
  if (expected || actual) os << ')';
  return os.str();
}

DiagnosticError::DiagnosticError(Diagnostic d)
    : std::runtime_error(d.format()), diag_(std::move(d)) {}

}  // namespace sit
