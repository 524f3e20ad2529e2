#include <cctype>

#include "sit/frontend.hpp"

namespace sit {

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    if (starts_with("\xEF\xBB\xBF")) pos_ = 3;  // byte order mark
    for (;;) {
      skip_trivia();
      const int line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back(Token{TokenKind::End, "", span(line, col)});
        return out;
      }
      out.push_back(next(line, col));
    }
  }

 private:
  SourceSpan span(int line, int col) const { return SourceSpan{file_, line, col, line_, col_}; }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      const auto c = static_cast<unsigned char>(text_[pos_++]);
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;  // count code points, not continuation bytes
      }
    }
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (starts_with("--")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token symbol(TokenKind kind, std::size_t len, int line, int col) {
    std::string text(text_.substr(pos_, len));
    advance(len);
    return Token{kind, std::move(text), span(line, col)};
  }

  Token next(int line, int col) {
    if (starts_with("->")) return symbol(TokenKind::Arrow, 2, line, col);
    if (starts_with("=>")) return symbol(TokenKind::FatArrow, 2, line, col);
    if (starts_with("→")) return symbol(TokenKind::Arrow, 3, line, col);
    if (starts_with("⇒")) return symbol(TokenKind::FatArrow, 3, line, col);
    switch (text_[pos_]) {
      case '(':
        return symbol(TokenKind::LParen, 1, line, col);
      case ')':
        return symbol(TokenKind::RParen, 1, line, col);
      case ':':
        return symbol(TokenKind::Colon, 1, line, col);
      case ',':
        return symbol(TokenKind::Comma, 1, line, col);
      case '|':
        return symbol(TokenKind::Bar, 1, line, col);
      default:
        break;
    }
    if (!is_ident_start(static_cast<unsigned char>(text_[pos_]))) {
      Diagnostic d;
      d.code = std::string(codes::kLexical);
      d.message = std::string("unexpected character '") + text_[pos_] + "'";
      d.span = span(line, col);
      throw ParseError(std::move(d));
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(static_cast<unsigned char>(text_[pos_])) &&
           !starts_with("→") && !starts_with("⇒"))
      advance();
    std::string word(text_.substr(start, pos_ - start));
    TokenKind kind = TokenKind::Ident;
    if (word == "data") kind = TokenKind::KwData;
    else if (word == "def") kind = TokenKind::KwDef;
    else if (word == "fn") kind = TokenKind::KwFn;
    else if (word == "impossible") kind = TokenKind::KwImpossible;
    else if (word == "Type") kind = TokenKind::KwType;
    return Token{kind, std::move(word), span(line, col)};
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file) {
  return Lexer(text, file).run();
}

}  // namespace sit
