#include "hrbc/frontend/lexer.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>

namespace hrbc::frontend {
namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"softwareclass", TokenKind::kw_softwareclass},
      {"physicalclass", TokenKind::kw_physicalclass},
      {"knownrebecs", TokenKind::kw_knownrebecs},
      {"statevars", TokenKind::kw_statevars},
      {"msgsrv", TokenKind::kw_msgsrv},
      {"mode", TokenKind::kw_mode},
      {"inv", TokenKind::kw_inv},
      {"guard", TokenKind::kw_guard},
      {"delay", TokenKind::kw_delay},
      {"setmode", TokenKind::kw_setmode},
      {"main", TokenKind::kw_main},
      {"CAN", TokenKind::kw_can},
      {"priorities", TokenKind::kw_priorities},
      {"delays", TokenKind::kw_delays},
      {"self", TokenKind::kw_self},
      {"if", TokenKind::kw_if},
      {"else", TokenKind::kw_else},
      {"const", TokenKind::kw_const},
      {"int", TokenKind::kw_int},
      {"real", TokenKind::kw_real},
      {"float", TokenKind::kw_float},
      {"true", TokenKind::kw_true},
      {"false", TokenKind::kw_false},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const SourceSpan start{line_, column_};
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw DiagnosticError(start, "unterminated block comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    const SourceSpan span{line_, column_};
    const std::size_t start = pos_;
    const char c = peek();
    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      std::string text(src_.substr(start, pos_ - start));
      auto it = keywords().find(text);
      return {it == keywords().end() ? TokenKind::identifier : it->second, std::move(text), span};
    }
    if (digit(c)) {
      while (digit(peek())) advance();
      if (peek() == '.' && digit(peek(1))) {
        advance();
        while (digit(peek())) advance();
      }
      if ((peek() == 'e' || peek() == 'E') &&
          (digit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && digit(peek(2))))) {
        advance();
        if (peek() == '-' || peek() == '+') advance();
        while (digit(peek())) advance();
      }
      return {TokenKind::number, std::string(src_.substr(start, pos_ - start)), span};
    }
    auto two = [&](char second, TokenKind kind) -> std::optional<Token> {
      if (peek(1) != second) return std::nullopt;
      advance();
      advance();
      return Token{kind, std::string(src_.substr(start, 2)), span};
    };
    switch (c) {
      case '=':
        if (auto t = two('=', TokenKind::eq_eq)) return *t;
        break;
      case '!':
        if (auto t = two('=', TokenKind::not_eq_)) return *t;
        break;
      case '<':
        if (auto t = two('=', TokenKind::less_eq)) return *t;
        break;
      case '>':
        if (auto t = two('=', TokenKind::greater_eq)) return *t;
        break;
      case '-':
        if (auto t = two('>', TokenKind::arrow)) return *t;
        break;
      case '&':
        if (auto t = two('&', TokenKind::and_and)) return *t;
        throw DiagnosticError(span, "illegal character '&' (did you mean '&&'?)");
      case '|':
        if (auto t = two('|', TokenKind::or_or)) return *t;
        throw DiagnosticError(span, "illegal character '|' (did you mean '||'?)");
      default: break;
    }
    TokenKind kind;
    switch (c) {
      case '{': kind = TokenKind::lbrace; break;
      case '}': kind = TokenKind::rbrace; break;
      case '(': kind = TokenKind::lparen; break;
      case ')': kind = TokenKind::rparen; break;
      case ';': kind = TokenKind::semicolon; break;
      case ',': kind = TokenKind::comma; break;
      case '.': kind = TokenKind::dot; break;
      case ':': kind = TokenKind::colon; break;
      case '@': kind = TokenKind::at; break;
      case '\'': kind = TokenKind::prime; break;
      case '=': kind = TokenKind::eq; break;
      case '+': kind = TokenKind::plus; break;
      case '-': kind = TokenKind::minus; break;
      case '*': kind = TokenKind::star; break;
      case '/': kind = TokenKind::slash; break;
      case '!': kind = TokenKind::bang; break;
      case '<': kind = TokenKind::less; break;
      case '>': kind = TokenKind::greater; break;
      default: {
        std::string shown = static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f
                                ? "byte " + std::to_string(static_cast<unsigned char>(c))
                                : std::string("'") + c + "'";
        throw DiagnosticError(span, "illegal character " + shown);
      }
    }
    advance();
    return {kind, std::string(1, c), span};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::string describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::end_of_file: return "end of file";
    case TokenKind::identifier: return "identifier";
    case TokenKind::number: return "number";
    case TokenKind::kw_softwareclass: return "'softwareclass'";
    case TokenKind::kw_physicalclass: return "'physicalclass'";
    case TokenKind::kw_knownrebecs: return "'knownrebecs'";
    case TokenKind::kw_statevars: return "'statevars'";
    case TokenKind::kw_msgsrv: return "'msgsrv'";
    case TokenKind::kw_mode: return "'mode'";
    case TokenKind::kw_inv: return "'inv'";
    case TokenKind::kw_guard: return "'guard'";
    case TokenKind::kw_delay: return "'delay'";
    case TokenKind::kw_setmode: return "'setmode'";
    case TokenKind::kw_main: return "'main'";
    case TokenKind::kw_can: return "'CAN'";
    case TokenKind::kw_priorities: return "'priorities'";
    case TokenKind::kw_delays: return "'delays'";
    case TokenKind::kw_self: return "'self'";
    case TokenKind::kw_if: return "'if'";
    case TokenKind::kw_else: return "'else'";
    case TokenKind::kw_const: return "'const'";
    case TokenKind::kw_int: return "'int'";
    case TokenKind::kw_real: return "'real'";
    case TokenKind::kw_float: return "'float'";
    case TokenKind::kw_true: return "'true'";
    case TokenKind::kw_false: return "'false'";
    case TokenKind::lbrace: return "'{'";
    case TokenKind::rbrace: return "'}'";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::semicolon: return "';'";
    case TokenKind::comma: return "','";
    case TokenKind::dot: return "'.'";
    case TokenKind::colon: return "':'";
    case TokenKind::at: return "'@'";
    case TokenKind::prime: return "'''";
    case TokenKind::eq: return "'='";
    case TokenKind::arrow: return "'->'";
    case TokenKind::plus: return "'+'";
    case TokenKind::minus: return "'-'";
    case TokenKind::star: return "'*'";
    case TokenKind::slash: return "'/'";
    case TokenKind::bang: return "'!'";
    case TokenKind::and_and: return "'&&'";
    case TokenKind::or_or: return "'||'";
    case TokenKind::eq_eq: return "'=='";
    case TokenKind::not_eq_: return "'!='";
    case TokenKind::less: return "'<'";
    case TokenKind::less_eq: return "'<='";
    case TokenKind::greater: return "'>'";
    case TokenKind::greater_eq: return "'>='";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace hrbc::frontend
