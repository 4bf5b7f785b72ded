#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hrbc/diagnostics.hpp"

namespace hrbc::frontend {

enum class TokenKind {
  end_of_file,
  identifier,
  number,
  // keywords
  kw_softwareclass,
  kw_physicalclass,
  kw_knownrebecs,
  kw_statevars,
  kw_msgsrv,
  kw_mode,
  kw_inv,
  kw_guard,
  kw_delay,
  kw_setmode,
  kw_main,
  kw_can,
  kw_priorities,
  kw_delays,
  kw_self,
  kw_if,
  kw_else,
  kw_const,
  kw_int,
  kw_real,
  kw_float,
  kw_true,
  kw_false,
  // punctuation
  lbrace,
  rbrace,
  lparen,
  rparen,
  semicolon,
  comma,
  dot,
  colon,
  at,
  prime,
  eq,
  arrow,
  // operators
  plus,
  minus,
  star,
  slash,
  bang,
  and_and,
  or_or,
  eq_eq,
  not_eq_,
  less,
  less_eq,
  greater,
  greater_eq,
};

struct Token {
  TokenKind kind = TokenKind::end_of_file;
  std::string text;
  SourceSpan span;

  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text;
  }
};

/// Human-readable spelling used in diagnostics, e.g. `'{'` or `identifier`.
std::string describe(TokenKind kind);

/// Splits source text into tokens. The trailing end_of_file token is not
/// included. Throws DiagnosticError on an illegal character or an
/// unterminated block comment.
std::vector<Token> tokenize(std::string_view source);

}  // namespace hrbc::frontend
