#ifndef SIT_TYPECHECK_HPP
#define SIT_TYPECHECK_HPP

#include <span>
#include <string>
#include <vector>

#include "sit/core.hpp"
#include "sit/diagnostics.hpp"
#include "sit/evaluator.hpp"

namespace sit {

/// In-scope bindings, outermost first.
class Context {
 public:
  Context() = default;
  explicit Context(Telescope entries) : entries_(std::move(entries)) {}

  const Term* lookup(const Var& v) const;
  Context extend(const Var& v, Term type) const;
  Context extend(const Telescope& tele) const;
  const Telescope& entries() const { return entries_; }

 private:
  Telescope entries_;
};

struct CheckOptions {
  bool coverage = true;
  /// Additionally check pattern-row field telescopes under the data
  /// telescope alone and warn where that disagrees.
  bool strict_fig6 = false;
  EvalOptions eval;
};

/// Result of checking patterns: the patterns with binding types filled in
/// and the bindings they introduce.
struct PatternsResult {
  std::vector<Pattern> patterns;
  Telescope bindings;
};

class TypeChecker {
 public:
  TypeChecker(Signature& sig, Evaluator& eval, CheckOptions opts = {});

  void check_term(const Context& ctx, const Term& u, const Term& type);
  Term infer(const Context& ctx, const Term& u);
  void check_args(const Context& ctx, std::span<const Term> us, const Telescope& tele);
  void check_type(const Context& ctx, const Term& type);
  void check_telescope(const Context& ctx, const Telescope& tele);

  PatternsResult check_pattern(const Context& ctx, const Pattern& p, const Term& type);
  PatternsResult check_patterns(const Context& ctx, std::span<const Pattern> ps,
                                const Telescope& tele);

  Clause check_clause(const Context& ctx, const Telescope& tele, const Term& result,
                      const Clause& cl);
  CtorRow check_ctor_row(const Context& ctx, const DataDecl& data, const CtorRow& row);

  /// Checks one declaration against the current signature and appends the
  /// elaborated form to it.
  void check_declaration(const Declaration& decl);

  const std::vector<Diagnostic>& warnings() const { return warnings_; }

  /// Span attached to diagnostics raised from here on.
  void set_span(SourceSpan span) { span_ = std::move(span); }

 private:
  [[noreturn]] void fail(std::string_view code, std::string message,
                         std::optional<std::string> expected = std::nullopt,
                         std::optional<std::string> actual = std::nullopt) const;
  void warn(std::string_view code, std::string message, const SourceSpan& span);

  Term apply_spine(const Context& ctx, Term type, std::span<const Term> args);
  void check_con_call(const Context& ctx, const ConCall& c, const Term& type);
  Telescope ctor_fields_at(const Signature::CtorRef& ref, std::span<const Term> indices,
                           bool lenient, const std::string& ctor);
  PatternsResult check_pattern_impl(const Context& ctx, const Pattern& p, const Term& type,
                                    bool lenient);
  PatternsResult check_patterns_impl(const Context& ctx, std::span<const Pattern> ps,
                                     const Telescope& tele, bool lenient);
  void check_data(const DataDecl& d);
  void check_func(const FuncDecl& f);

  Signature& sig_;
  Evaluator& eval_;
  CheckOptions opts_;
  SourceSpan span_;
  std::vector<Diagnostic> warnings_;
};

struct CheckedProgram {
  Signature signature;
  std::vector<Diagnostic> warnings;
};

/// Checks declarations one after another, running coverage on every
/// function unless disabled. Throws TypeError on the first failure.
CheckedProgram check_signature(std::span<const Declaration> decls, CheckOptions opts = {});

}  // namespace sit

#endif  // SIT_TYPECHECK_HPP
