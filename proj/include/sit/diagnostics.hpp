#ifndef SIT_DIAGNOSTICS_HPP
#define SIT_DIAGNOSTICS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sit {

/// 1-based source range.
struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool valid() const { return start_line > 0; }
};

SourceSpan merge(const SourceSpan& a, const SourceSpan& b);

enum class Severity { Warning, Error };

// Diagnostic classes, ordered by exit status.
enum class DiagClass { Type = 1, Parse = 2, Fuel = 4 };

namespace codes {
// lexing, parsing and name resolution
inline constexpr std::string_view kLexical = "E001";
inline constexpr std::string_view kSyntax = "E002";
inline constexpr std::string_view kUnknownName = "E003";
inline constexpr std::string_view kDuplicateName = "E004";
inline constexpr std::string_view kOverApplied = "E005";
inline constexpr std::string_view kShadowsCtor = "E006";
inline constexpr std::string_view kNotAConstructor = "E007";
// type checking
inline constexpr std::string_view kTypeMismatch = "E100";
inline constexpr std::string_view kArity = "E101";
inline constexpr std::string_view kUnknownHead = "E102";
inline constexpr std::string_view kUnboundVar = "E103";
inline constexpr std::string_view kNotAFunction = "E104";
inline constexpr std::string_view kNotData = "E105";
inline constexpr std::string_view kForeignCtor = "E106";
inline constexpr std::string_view kCtorUnavailable = "E107";
inline constexpr std::string_view kCtorStuck = "E108";
inline constexpr std::string_view kImpossibleAvailable = "E109";
inline constexpr std::string_view kImpossibleStuck = "E110";
inline constexpr std::string_view kDuplicatePatVar = "E111";
inline constexpr std::string_view kBodyWithImpossible = "E112";
inline constexpr std::string_view kMissingBody = "E113";
inline constexpr std::string_view kCannotInfer = "E114";
inline constexpr std::string_view kDuplicateDecl = "E115";
// coverage
inline constexpr std::string_view kMissingCase = "E200";
inline constexpr std::string_view kCannotSplit = "E201";
inline constexpr std::string_view kUnreachableClause = "W200";
// strict field-telescope check
inline constexpr std::string_view kStrictFieldScope = "W300";
// evaluation
inline constexpr std::string_view kFuelExhausted = "E400";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::optional<std::string> expected;
  std::optional<std::string> actual;

  DiagClass diag_class() const;
  /// "FILE:LINE:COL: error[Ennn]: message"
  std::string format() const;
};

/// Base of all user-facing failures; carries exactly one primary diagnostic.
class DiagnosticError : public std::runtime_error {
 public:
  explicit DiagnosticError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }
  const std::string& code() const { return diag_.code; }

 private:
  Diagnostic diag_;
};

class ParseError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

class TypeError : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

class FuelExhausted : public DiagnosticError {
 public:
  using DiagnosticError::DiagnosticError;
};

}  // namespace sit

#endif  // SIT_DIAGNOSTICS_HPP
