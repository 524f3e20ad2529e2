#ifndef SIT_CORE_HPP
#define SIT_CORE_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sit/diagnostics.hpp"

namespace sit {

/// A bound or free variable. Identity is the numeric id; the name is only
/// used for printing.
struct Var {
  std::uint64_t id = 0;
  std::string name;

  friend bool operator==(const Var& a, const Var& b) { return a.id == b.id; }
};

/// Returns a variable with a process-wide unique id.
Var fresh_var(std::string name);

struct TermNode;

/// Immutable, shared core term.
class Term {
 public:
  explicit Term(TermNode node);

  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

  /// Over-approximation of the variable ids occurring in this term (free
  /// or bound), hashed into 64 bits.
  std::uint64_t var_mask() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const TermNode> node_;
};

struct FnCall {
  std::string name;
  std::vector<Term> args;
};
struct VarCall {
  Var var;
  std::vector<Term> args;
};
struct DataCall {
  std::string name;
  std::vector<Term> args;
};
struct ConCall {
  std::string name;
  std::vector<Term> args;
};
struct Pi {
  Var binder;
  Term domain;
  Term codomain;
};
struct Lam {
  Var binder;
  Term body;
};
struct Univ {};
// Elimination on a head that is neither a variable nor a fully applied
// definition: a lambda redex, or a function call whose result is a Pi.
struct App {
  Term head;
  std::vector<Term> args;
};

struct TermNode {
  std::variant<FnCall, VarCall, DataCall, ConCall, Pi, Lam, Univ, App> value;
  std::uint64_t mask = 0;
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(&node_->value);
}

Term fn_call(std::string name, std::vector<Term> args = {});
Term var_call(Var v, std::vector<Term> args = {});
Term data_call(std::string name, std::vector<Term> args = {});
Term con_call(std::string name, std::vector<Term> args = {});
Term pi(Var binder, Term domain, Term codomain);
Term lam(Var binder, Term body);
Term univ();
/// Applies `head` to `args`, extending a variable spine or an existing App
/// instead of nesting.
Term apply(const Term& head, std::vector<Term> args);

struct Binding {
  Var var;
  Term type;
};
using Telescope = std::vector<Binding>;

struct PatternNode;

class Pattern {
 public:
  explicit Pattern(PatternNode node);

  const PatternNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  template <class T>
  bool is() const { return as<T>() != nullptr; }

 private:
  std::shared_ptr<const PatternNode> node_;
};

struct BindPat {
  Var var;
  std::optional<Term> type;  // filled in by pattern checking
};
struct ConPat {
  std::string name;
  std::vector<Pattern> args;
};
struct ImpossiblePat {};

struct PatternNode {
  std::variant<BindPat, ConPat, ImpossiblePat> value;
};

template <class T>
const T* Pattern::as() const {
  return std::get_if<T>(&node_->value);
}

Pattern bind_pat(Var v, std::optional<Term> type = std::nullopt);
Pattern con_pat(std::string name, std::vector<Pattern> args = {});
Pattern impossible_pat();

bool contains_impossible(const Pattern& p);
bool contains_impossible(std::span<const Pattern> ps);

struct CtorRow {
  std::optional<std::vector<Pattern>> patterns;
  std::string name;
  Telescope fields;
  SourceSpan span;
};

struct Clause {
  std::vector<Pattern> patterns;
  std::optional<Term> body;
  SourceSpan span;
};

struct DataDecl {
  std::string name;
  Telescope telescope;
  std::vector<CtorRow> ctors;
  SourceSpan span;
};

struct FuncDecl {
  std::string name;
  Telescope telescope;
  Term result;
  std::vector<Clause> clauses;
  SourceSpan span;
};

using Declaration = std::variant<DataDecl, FuncDecl>;

const std::string& decl_name(const Declaration& d);
const SourceSpan& decl_span(const Declaration& d);

/// Ordered declarations with name lookup. Entries are stored in a deque so
/// references handed out stay valid while the signature grows.
class Signature {
 public:
  struct CtorRef {
    const DataDecl* data;
    const CtorRow* row;
    std::size_t index;
  };

  const DataDecl* find_data(const std::string& name) const;
  const FuncDecl* find_func(const std::string& name) const;
  std::optional<CtorRef> find_ctor(const std::string& name) const;
  bool contains(const std::string& name) const;

  /// Throws std::logic_error on a duplicate declaration or constructor name.
  void add(Declaration decl);
  /// Replaces the most recent declaration with an elaborated version of it.
  void replace_last(Declaration decl);

  const std::deque<Declaration>& decls() const { return decls_; }

 private:
  void index_last();

  std::deque<Declaration> decls_;
  std::unordered_map<std::string, std::size_t> data_;
  std::unordered_map<std::string, std::size_t> funcs_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> ctors_;
};

/// Replacements applied one after another, left to right.
struct Substitution {
  std::vector<std::pair<Var, Term>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  const Term* lookup(const Var& v) const;
};

Term subst(const Term& u, const Var& x, const Term& v);
Term subst(const Term& u, const Substitution& s);
std::vector<Term> subst(std::span<const Term> us, const Substitution& s);
/// Substitutes into every entry type, renaming telescope binders that would
/// capture a free variable of a replacement.
Telescope subst(const Telescope& tele, const Substitution& s);
Pattern subst(const Pattern& p, const Substitution& s);

/// Composition for sequential application: subst(u, compose(a, b)) equals
/// subst(subst(u, a), b).
Substitution compose(const Substitution& first, const Substitution& second);

/// Concatenation of two substitutions or telescopes whose domains must not
/// overlap; overlap is an internal error.
Substitution disjoint_union(const Substitution& a, const Substitution& b);
Telescope disjoint_union(const Telescope& a, const Telescope& b);

std::vector<Var> free_vars(const Term& u);
bool occurs_free(const Var& x, const Term& u);

/// Structural equality up to renaming of bound variables.
bool alpha_equal(const Term& a, const Term& b);

struct PrintOptions {
  bool unicode = false;
};
std::string to_string(const Term& u, PrintOptions opts = {});
std::string to_string(const Pattern& p);
std::string to_string(std::span<const Term> us, PrintOptions opts = {});
std::string to_string(std::span<const Pattern> ps);
std::string to_string(const Telescope& tele, PrintOptions opts = {});
std::string to_string(const Substitution& s);

/// Raised when a documented precondition of a core operation is violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sit

#endif  // SIT_CORE_HPP
