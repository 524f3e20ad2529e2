// Test-only helpers: corpus loading, an independent unification oracle,
// a typed value enumerator and seeded random generators.
#ifndef SIT_TEST_SUPPORT_HPP
#define SIT_TEST_SUPPORT_HPP

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sit/core.hpp"
#include "sit/evaluator.hpp"
#include "sit/frontend.hpp"
#include "sit/typecheck.hpp"

namespace sit::test {

std::string corpus_path(const std::string& name);
std::string fixture_dir();
std::string read_text(const std::string& path);

/// A parsed, resolved and checked program. Heap-allocated so the evaluator
/// can keep a stable reference to the signature.
struct Program {
  ResolvedProgram resolved;
  CheckedProgram checked;
  std::unique_ptr<Evaluator> eval;

  const Signature& sig() const { return checked.signature; }
  Signature& sig() { return checked.signature; }

  /// Resolves surface text against the program's globals. `locals` are in
  /// scope by surface name.
  Term term(const std::string& text, const std::vector<Var>& locals = {}) const;
  const FuncDecl& func(const std::string& name) const;
  const DataDecl& data(const std::string& name) const;
};

std::unique_ptr<Program> load_text(const std::string& text, CheckOptions opts = {});
std::unique_ptr<Program> load_corpus(const std::string& name, CheckOptions opts = {});

/// Every corpus file name, e.g. "vec.sit".
std::vector<std::string> corpus_files();

/// A file under fixtures/negative with its "-- expect:" code and optional
/// "-- message:" substring.
struct NegativeFixture {
  std::string path;
  std::string code;
  std::string message;
};
std::vector<NegativeFixture> negative_fixtures();

// ---------------------------------------------------------------------------
// First-order unification oracle. Written from the textbook algorithm and
// sharing no code with the matcher.

namespace oracle {

enum class Class { Matched, Mismatch, Stuck };

const char* name(Class c);

/// Unifies `indices` with `to_terms(patterns)`, treating pattern variables
/// and free variables of the indices alike as flexible, with occurs check.
/// No unifier: Mismatch. A unifier that leaves every index variable free
/// and distinct: Matched. Otherwise (an index variable had to be
/// instantiated or identified): Stuck.
Class classify(const std::vector<Term>& indices, const std::vector<Term>& pattern_terms,
               const std::vector<Var>& pattern_vars);

/// The most general unifier restricted to `vars`, when `classify` would say
/// Matched. Values are fully resolved terms.
std::optional<Substitution> solve(const std::vector<Term>& indices,
                                  const std::vector<Term>& pattern_terms,
                                  const std::vector<Var>& pattern_vars);

}  // namespace oracle

/// Pattern variables of a (possibly unchecked) row, depth first.
std::vector<Var> pattern_vars(const std::vector<Pattern>& ps);
/// to_terms for rows whose bind types may still be empty.
std::vector<Term> pattern_terms(const std::vector<Pattern>& ps);

// ---------------------------------------------------------------------------
// Typed enumeration of closed values, driven by the oracle for constructor
// availability and field instantiation.

class Enumerator {
 public:
  explicit Enumerator(Evaluator& eval) : eval_(eval) {}

  /// Closed values of `type` whose constructor depth is at most `depth`.
  /// Types themselves are enumerated as closed data types.
  std::vector<Term> values(const Term& type, int depth);

  /// Closed instances of a telescope, later entries depending on earlier
  /// values. Stops after `cap` tuples.
  std::vector<std::vector<Term>> tuples(const Telescope& tele, int depth, std::size_t cap);

 private:
  std::vector<Term> types(int depth);

  Evaluator& eval_;
};

// ---------------------------------------------------------------------------
// Random generation (fixed seeds at call sites).

/// A random impossible-free pattern row for `tele`, typed by construction:
/// a constructor is only chosen where the oracle says it is available.
std::vector<Pattern> random_row(std::mt19937& rng, Evaluator& eval, const Telescope& tele,
                                int depth);

/// A random untyped pattern over the constructors of `sig`.
Pattern random_pattern(std::mt19937& rng, const Signature& sig, int depth);

/// A random term built from constructors of `sig` and the variables in
/// `pool`.
Term random_term(std::mt19937& rng, const Signature& sig, const std::vector<Var>& pool,
                 int depth);

}  // namespace sit::test

#endif  // SIT_TEST_SUPPORT_HPP
