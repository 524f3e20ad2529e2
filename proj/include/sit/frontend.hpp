#ifndef SIT_FRONTEND_HPP
#define SIT_FRONTEND_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sit/core.hpp"
#include "sit/diagnostics.hpp"

namespace sit {

// ---------------------------------------------------------------------------
// Surface syntax, as written in .sit files.

namespace surface {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Ident {
  std::string name;
};
struct TypeLit {};
struct Apply {
  ExprPtr head;
  std::vector<ExprPtr> args;
};
/// `(x y : A) -> B`, or `A -> B` when `names` is empty.
struct PiType {
  std::vector<std::string> names;
  ExprPtr domain;
  ExprPtr codomain;
};
struct Lambda {
  std::string name;
  ExprPtr body;
};

struct Expr {
  std::variant<Ident, TypeLit, Apply, PiType, Lambda> node;
  SourceSpan span;
};

struct Pat {
  bool impossible = false;
  std::string name;
  std::vector<Pat> args;
  SourceSpan span;
};

struct TeleEntry {
  std::vector<std::string> names;
  ExprPtr type;
  SourceSpan span;
};

struct CtorRow {
  std::optional<std::vector<Pat>> patterns;
  std::string name;
  std::vector<TeleEntry> fields;
  SourceSpan span;
};

struct Clause {
  std::vector<Pat> patterns;
  ExprPtr body;  // null for absurd clauses
  SourceSpan span;
};

struct DataDecl {
  std::string name;
  std::vector<TeleEntry> telescope;
  std::vector<CtorRow> rows;
  SourceSpan span;
};

struct DefDecl {
  std::string name;
  std::vector<TeleEntry> telescope;
  ExprPtr result;
  std::vector<Clause> clauses;
  SourceSpan span;
};

using Decl = std::variant<DataDecl, DefDecl>;

struct File {
  std::vector<Decl> decls;
};

/// Structural equality, ignoring source spans.
bool same_shape(const File& a, const File& b);
bool same_shape(const Expr& a, const Expr& b);

std::string print(const File& f);
std::string print(const Expr& e);

}  // namespace surface

// ---------------------------------------------------------------------------
// Lexing and parsing

enum class TokenKind {
  Ident,
  KwData,
  KwDef,
  KwFn,
  KwImpossible,
  KwType,
  LParen,
  RParen,
  Colon,
  Comma,
  Bar,
  FatArrow,
  Arrow,
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  SourceSpan span;
};

/// Throws ParseError (E001) on characters outside the token grammar.
std::vector<Token> lex(std::string_view text, const std::string& file = "<input>");

/// Throws ParseError (E001/E002).
surface::File parse_file(std::string_view text, const std::string& file = "<input>");
surface::ExprPtr parse_expr(std::string_view text, const std::string& file = "<input>");

// ---------------------------------------------------------------------------
// Name resolution

struct GlobalEntity {
  enum class Kind { Function, Data, Constructor };
  Kind kind;
  /// Telescope binder names (fields, for constructors); the arity is their
  /// count.
  std::vector<std::string> params;
};

class GlobalScope {
 public:
  const GlobalEntity* find(const std::string& name) const;
  bool is_constructor(const std::string& name) const;
  void declare(const std::string& name, GlobalEntity entity);

 private:
  std::unordered_map<std::string, GlobalEntity> names_;
};

struct ResolvedProgram {
  std::vector<Declaration> decls;
  GlobalScope globals;
};

/// Turns surface declarations into core declarations with fresh binders.
/// Throws ParseError (E003-E007) on scope errors.
ResolvedProgram resolve(const surface::File& file);

/// Resolves an expression against the globals of a program, with `locals`
/// in scope (innermost last).
Term resolve_expr(const GlobalScope& globals, const surface::Expr& e,
                  const std::vector<Var>& locals = {});

}  // namespace sit

#endif  // SIT_FRONTEND_HPP
