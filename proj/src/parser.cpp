#include "sit/frontend.hpp"

namespace sit {

namespace {

using surface::Apply;
using surface::Clause;
using surface::CtorRow;
using surface::DataDecl;
using surface::DefDecl;
using surface::Expr;
using surface::ExprPtr;
using surface::File;
using surface::Ident;
using surface::Lambda;
using surface::Pat;
using surface::PiType;
using surface::TeleEntry;
using surface::TypeLit;

std::string token_name(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::KwData: return "'data'";
    case TokenKind::KwDef: return "'def'";
    case TokenKind::KwFn: return "'fn'";
    case TokenKind::KwImpossible: return "'impossible'";
    case TokenKind::KwType: return "'Type'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Comma: return "','";
    case TokenKind::Bar: return "'|'";
    case TokenKind::FatArrow: return "'=>'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  File file() {
    File f;
    while (!at(TokenKind::End)) {
      if (at(TokenKind::KwData)) {
        f.decls.emplace_back(data());
      } else if (at(TokenKind::KwDef)) {
        f.decls.emplace_back(def());
      } else {
        error("expected 'data' or 'def'");
      }
    }
    return f;
  }

  ExprPtr whole_expr() {
    ExprPtr e = expr();
    expect(TokenKind::End);
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return peek().kind == k; }

  const Token& expect(TokenKind k) {
    if (!at(k)) error("expected " + token_name(k));
    return toks_[pos_++];
  }

  [[noreturn]] void error(const std::string& what) const {
    Diagnostic d;
    d.code = std::string(codes::kSyntax);
    d.message = what + ", found " + token_name(peek().kind) +
                (peek().text.empty() ? "" : " '" + peek().text + "'");
    d.span = peek().span;
    throw ParseError(std::move(d));
  }

  SourceSpan since(const SourceSpan& start) const {
    return merge(start, toks_[pos_ == 0 ? 0 : pos_ - 1].span);
  }

  DataDecl data() {
    const SourceSpan start = expect(TokenKind::KwData).span;
    DataDecl d;
    d.name = expect(TokenKind::Ident).text;
    d.telescope = telescope();
    expect(TokenKind::Colon);
    expect(TokenKind::KwType);
    d.span = since(start);
    while (at(TokenKind::Bar)) d.rows.push_back(ctor_row());
    return d;
  }

  DefDecl def() {
    const SourceSpan start = expect(TokenKind::KwDef).span;
    DefDecl d;
    d.name = expect(TokenKind::Ident).text;
    d.telescope = telescope();
    expect(TokenKind::Colon);
    d.result = expr();
    d.span = since(start);
    while (at(TokenKind::Bar)) d.clauses.push_back(clause());
    return d;
  }

  std::vector<TeleEntry> telescope() {
    std::vector<TeleEntry> out;
    while (at(TokenKind::LParen)) {
      const SourceSpan start = expect(TokenKind::LParen).span;
      TeleEntry e;
      e.names.push_back(expect(TokenKind::Ident).text);
      while (at(TokenKind::Ident)) e.names.push_back(expect(TokenKind::Ident).text);
      expect(TokenKind::Colon);
      e.type = expr();
      expect(TokenKind::RParen);
      e.span = since(start);
      out.push_back(std::move(e));
    }
    return out;
  }

  CtorRow ctor_row() {
    const SourceSpan start = expect(TokenKind::Bar).span;
    CtorRow row;
    // A pattern row is recognised by the "=>" after its pattern list.
    const std::size_t save = pos_;
    if (auto pats = try_pattern_list(); pats && at(TokenKind::FatArrow)) {
      expect(TokenKind::FatArrow);
      row.patterns = std::move(*pats);
    } else {
      pos_ = save;
    }
    row.name = expect(TokenKind::Ident).text;
    row.fields = telescope();
    row.span = since(start);
    return row;
  }

  Clause clause() {
    const SourceSpan start = expect(TokenKind::Bar).span;
    Clause cl;
    cl.patterns = pattern_list();
    if (at(TokenKind::FatArrow)) {
      expect(TokenKind::FatArrow);
      cl.body = expr();
    }
    cl.span = since(start);
    return cl;
  }

  std::optional<std::vector<Pat>> try_pattern_list() {
    try {
      return pattern_list();
    } catch (const ParseError&) {
      return std::nullopt;
    }
  }

  std::vector<Pat> pattern_list() {
    std::vector<Pat> out;
    out.push_back(pattern());
    while (at(TokenKind::Comma)) {
      expect(TokenKind::Comma);
      out.push_back(pattern());
    }
    return out;
  }

  Pat pattern() {
    if (at(TokenKind::KwImpossible)) {
      Pat p;
      p.impossible = true;
      p.span = expect(TokenKind::KwImpossible).span;
      return p;
    }
    const Token& head = expect(TokenKind::Ident);
    Pat p;
    p.name = head.text;
    while (at(TokenKind::Ident) || at(TokenKind::KwImpossible) || at(TokenKind::LParen))
      p.args.push_back(pattern_atom());
    p.span = since(head.span);
    return p;
  }

  Pat pattern_atom() {
    if (at(TokenKind::LParen)) {
      expect(TokenKind::LParen);
      Pat p = pattern();
      expect(TokenKind::RParen);
      return p;
    }
    Pat p;
    if (at(TokenKind::KwImpossible)) {
      p.impossible = true;
      p.span = expect(TokenKind::KwImpossible).span;
    } else {
      const Token& t = expect(TokenKind::Ident);
      p.name = t.text;
      p.span = t.span;
    }
    return p;
  }

  bool at_binder_group() const {
    if (peek().kind != TokenKind::LParen || peek(1).kind != TokenKind::Ident) return false;
    std::size_t i = 1;
    while (peek(i).kind == TokenKind::Ident) ++i;
    return peek(i).kind == TokenKind::Colon;
  }

  ExprPtr expr() {
    const SourceSpan start = peek().span;
    if (at(TokenKind::KwFn)) {
      expect(TokenKind::KwFn);
      Lambda l;
      l.name = expect(TokenKind::Ident).text;
      expect(TokenKind::FatArrow);
      l.body = expr();
      return make(Expr{std::move(l), since(start)});
    }
    if (at_binder_group()) {
      expect(TokenKind::LParen);
      PiType p;
      while (at(TokenKind::Ident)) p.names.push_back(expect(TokenKind::Ident).text);
      expect(TokenKind::Colon);
      p.domain = expr();
      expect(TokenKind::RParen);
      expect(TokenKind::Arrow);
      p.codomain = expr();
      return make(Expr{std::move(p), since(start)});
    }
    ExprPtr lhs = application();
    if (!at(TokenKind::Arrow)) return lhs;
    expect(TokenKind::Arrow);
    PiType p;
    p.domain = std::move(lhs);
    p.codomain = expr();
    return make(Expr{std::move(p), since(start)});
  }

  bool at_atom() const {
    return at(TokenKind::Ident) || at(TokenKind::KwType) || at(TokenKind::LParen);
  }

  ExprPtr application() {
    const SourceSpan start = peek().span;
    ExprPtr head = atom();
    if (!at_atom()) return head;
    Apply a;
    a.head = std::move(head);
    while (at_atom()) a.args.push_back(atom());
    return make(Expr{std::move(a), since(start)});
  }

  ExprPtr atom() {
    const SourceSpan start = peek().span;
    if (at(TokenKind::Ident)) return make(Expr{Ident{expect(TokenKind::Ident).text}, start});
    if (at(TokenKind::KwType)) {
      expect(TokenKind::KwType);
      return make(Expr{TypeLit{}, start});
    }
    if (at(TokenKind::LParen)) {
      expect(TokenKind::LParen);
      ExprPtr e = expr();
      expect(TokenKind::RParen);
      return e;
    }
    error("expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

surface::File parse_file(std::string_view text, const std::string& file) {
  return Parser(lex(text, file)).file();
}

surface::ExprPtr parse_expr(std::string_view text, const std::string& file) {
  return Parser(lex(text, file)).whole_expr();
}

}  // namespace sit
