#include "hrbc/frontend/parser.hpp"

#include <initializer_list>

namespace hrbc::frontend {
namespace {

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, bool allow_location)
      : tokens_(tokens), allow_location_(allow_location) {
    eof_.kind = TokenKind::end_of_file;
    if (!tokens_.empty()) {
      eof_.span = tokens_.back().span;
      eof_.span.column += static_cast<int>(tokens_.back().text.size());
    } else {
      eof_.span = {1, 1};
    }
  }

  ModelAST model() {
    ModelAST ast;
    while (true) {
      if (at(TokenKind::kw_const)) {
        ast.constants.push_back(const_decl());
      } else if (at(TokenKind::kw_softwareclass) || at(TokenKind::kw_physicalclass)) {
        ast.classes.push_back(class_decl());
      } else {
        break;
      }
    }
    if (ast.classes.empty()) {
      fail({TokenKind::kw_softwareclass, TokenKind::kw_physicalclass, TokenKind::kw_const});
    }
    expect(TokenKind::kw_main);
    expect(TokenKind::lbrace);
    while (at(TokenKind::identifier)) ast.instances.push_back(instance_decl());
    if (at(TokenKind::kw_can)) ast.can_spec = can_spec();
    if (!at(TokenKind::rbrace)) fail({TokenKind::identifier, TokenKind::kw_can, TokenKind::rbrace});
    expect(TokenKind::rbrace);
    if (!at(TokenKind::end_of_file)) fail({TokenKind::end_of_file});
    return ast;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!at(TokenKind::end_of_file)) fail({TokenKind::end_of_file});
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof_;
  }
  bool at(TokenKind kind, std::size_t ahead = 0) const { return peek(ahead).kind == kind; }

  const Token& take() {
    const Token& t = peek();
    if (pos_ < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    take();
    return true;
  }

  const Token& expect(TokenKind kind) {
    if (!at(kind)) fail({kind});
    return take();
  }

  [[noreturn]] void fail(std::initializer_list<TokenKind> expected) const {
    std::string message = "expected ";
    std::size_t i = 0;
    for (TokenKind kind : expected) {
      if (i > 0) message += i + 1 == expected.size() ? " or " : ", ";
      message += describe(kind);
      ++i;
    }
    const Token& found = peek();
    message += "; found " + describe(found.kind);
    if (found.kind == TokenKind::identifier || found.kind == TokenKind::number) {
      message += " '" + found.text + "'";
    }
    throw DiagnosticError(found.span, message);
  }

  std::string identifier() { return expect(TokenKind::identifier).text; }

  Rational number_literal(bool allow_negative) {
    const SourceSpan span = peek().span;
    const bool negative = allow_negative && accept(TokenKind::minus);
    const Token& t = expect(TokenKind::number);
    auto value = parse_rational(t.text);
    if (!value) throw DiagnosticError(span, "numeric literal out of range: " + t.text);
    return negative ? -*value : *value;
  }

  ConstDecl const_decl() {
    ConstDecl decl;
    decl.span = expect(TokenKind::kw_const).span;
    if (at(TokenKind::kw_int) || at(TokenKind::kw_real) || at(TokenKind::kw_float)) take();
    decl.name = identifier();
    expect(TokenKind::eq);
    decl.value = number_literal(true);
    expect(TokenKind::semicolon);
    return decl;
  }

  PrimType prim_type() {
    if (accept(TokenKind::kw_int)) return PrimType::int_type;
    if (accept(TokenKind::kw_real)) return PrimType::real_type;
    if (accept(TokenKind::kw_float)) return PrimType::float_type;
    fail({TokenKind::kw_int, TokenKind::kw_real, TokenKind::kw_float});
  }

  ClassDecl class_decl() {
    ClassDecl cls;
    cls.physical = at(TokenKind::kw_physicalclass);
    cls.span = take().span;
    cls.name = identifier();
    expect(TokenKind::lbrace);
    if (accept(TokenKind::kw_knownrebecs)) {
      expect(TokenKind::lbrace);
      while (at(TokenKind::identifier)) {
        const Token& type = take();
        do {
          const Token& name = expect(TokenKind::identifier);
          cls.known_rebecs.push_back({type.text, name.text, name.span});
        } while (accept(TokenKind::comma));
        expect(TokenKind::semicolon);
      }
      expect(TokenKind::rbrace);
    }
    if (accept(TokenKind::kw_statevars)) {
      expect(TokenKind::lbrace);
      while (at(TokenKind::kw_int) || at(TokenKind::kw_real) || at(TokenKind::kw_float)) {
        const PrimType type = prim_type();
        do {
          const Token& name = expect(TokenKind::identifier);
          cls.state_vars.push_back({type, name.text, name.span});
        } while (accept(TokenKind::comma));
        expect(TokenKind::semicolon);
      }
      expect(TokenKind::rbrace);
    }
    while (true) {
      if (at(TokenKind::kw_msgsrv)) {
        cls.msgsrvs.push_back(msgsrv());
      } else if (cls.physical && at(TokenKind::kw_mode)) {
        cls.modes.push_back(mode());
      } else if (at(TokenKind::rbrace)) {
        break;
      } else if (cls.physical) {
        fail({TokenKind::kw_msgsrv, TokenKind::kw_mode, TokenKind::rbrace});
      } else {
        fail({TokenKind::kw_msgsrv, TokenKind::rbrace});
      }
    }
    expect(TokenKind::rbrace);
    return cls;
  }

  MsgSrv msgsrv() {
    MsgSrv srv;
    srv.span = expect(TokenKind::kw_msgsrv).span;
    srv.name = identifier();
    expect(TokenKind::lparen);
    if (!at(TokenKind::rparen)) {
      do {
        const PrimType type = prim_type();
        const Token& name = expect(TokenKind::identifier);
        srv.params.push_back({type, name.text, name.span});
      } while (accept(TokenKind::comma));
    }
    expect(TokenKind::rparen);
    srv.body = braced_block();
    return srv;
  }

  Mode mode() {
    Mode m;
    m.span = expect(TokenKind::kw_mode).span;
    m.name = identifier();
    expect(TokenKind::lbrace);
    expect(TokenKind::kw_inv);
    expect(TokenKind::lparen);
    m.invariant = expression();
    expect(TokenKind::rparen);
    accept(TokenKind::semicolon);
    do {
      Flow flow;
      flow.span = peek().span;
      flow.var = identifier();
      expect(TokenKind::prime);
      expect(TokenKind::eq);
      flow.rate = expression();
      accept(TokenKind::semicolon);
      m.flows.push_back(std::move(flow));
    } while (at(TokenKind::identifier));
    if (!at(TokenKind::kw_guard)) fail({TokenKind::identifier, TokenKind::kw_guard});
    take();
    expect(TokenKind::lparen);
    m.guard = expression();
    expect(TokenKind::rparen);
    m.actions = statement_or_block();
    expect(TokenKind::rbrace);
    return m;
  }

  Block braced_block() {
    expect(TokenKind::lbrace);
    Block block;
    while (!at(TokenKind::rbrace)) {
      if (at(TokenKind::end_of_file)) fail({TokenKind::rbrace});
      block.push_back(statement());
    }
    expect(TokenKind::rbrace);
    return block;
  }

  Block statement_or_block() {
    if (at(TokenKind::lbrace)) return braced_block();
    return Block{statement()};
  }

  Statement statement() {
    Statement s;
    s.span = peek().span;
    if (accept(TokenKind::kw_if)) {
      s.kind = StmtKind::if_else;
      expect(TokenKind::lparen);
      s.expr = expression();
      expect(TokenKind::rparen);
      s.then_block = statement_or_block();
      if (accept(TokenKind::kw_else)) {
        s.has_else = true;
        s.else_block = statement_or_block();
      }
      return s;
    }
    if (accept(TokenKind::kw_delay)) {
      s.kind = StmtKind::delay;
      expect(TokenKind::lparen);
      s.expr = expression();
      expect(TokenKind::rparen);
      expect(TokenKind::semicolon);
      return s;
    }
    if (accept(TokenKind::kw_setmode)) {
      s.kind = StmtKind::set_mode;
      expect(TokenKind::lparen);
      s.name = identifier();
      expect(TokenKind::rparen);
      expect(TokenKind::semicolon);
      return s;
    }
    if (at(TokenKind::identifier) && at(TokenKind::eq, 1)) {
      s.kind = StmtKind::assign;
      s.name = take().text;
      take();
      s.expr = expression();
      expect(TokenKind::semicolon);
      return s;
    }
    if (at(TokenKind::identifier) || at(TokenKind::kw_self)) {
      s.target = take().text;
      if (!at(TokenKind::dot)) {
        if (s.target != "self") fail({TokenKind::eq, TokenKind::dot});
        fail({TokenKind::dot});
      }
      take();
      s.server = identifier();
      expect(TokenKind::lparen);
      if (s.server == "setMode") {
        s.kind = StmtKind::send_set_mode;
        s.name = identifier();
        s.server.clear();
      } else {
        s.kind = StmtKind::send;
        if (!at(TokenKind::rparen)) {
          do {
            s.args.push_back(expression());
          } while (accept(TokenKind::comma));
        }
      }
      expect(TokenKind::rparen);
      expect(TokenKind::semicolon);
      return s;
    }
    fail({TokenKind::identifier, TokenKind::kw_self, TokenKind::kw_if, TokenKind::kw_delay,
          TokenKind::kw_setmode});
  }

  InstanceDecl instance_decl() {
    InstanceDecl inst;
    inst.span = peek().span;
    inst.class_name = identifier();
    inst.name = identifier();
    expect(TokenKind::lparen);
    if (!at(TokenKind::rparen)) {
      do {
        Binding binding;
        binding.span = expect(TokenKind::at).span;
        if (accept(TokenKind::kw_can)) {
          binding.connection = Connection::can;
        } else if (at(TokenKind::identifier) && peek().text == "Wire") {
          take();
          binding.connection = Connection::wire;
        } else {
          throw DiagnosticError(peek().span, "expected 'Wire' or 'CAN' after '@'; found " +
                                                 describe(peek().kind));
        }
        binding.rebec = identifier();
        inst.bindings.push_back(std::move(binding));
      } while (accept(TokenKind::comma));
    }
    expect(TokenKind::rparen);
    expect(TokenKind::colon);
    expect(TokenKind::lparen);
    if (!at(TokenKind::rparen)) {
      do {
        inst.init_args.push_back(number_literal(true));
      } while (accept(TokenKind::comma));
    }
    expect(TokenKind::rparen);
    expect(TokenKind::semicolon);
    return inst;
  }

  CanSpec can_spec() {
    CanSpec spec;
    spec.present = true;
    spec.span = expect(TokenKind::kw_can).span;
    expect(TokenKind::lbrace);
    bool seen_priorities = false;
    bool seen_delays = false;
    while (true) {
      if (!seen_priorities && at(TokenKind::kw_priorities)) {
        take();
        seen_priorities = true;
        spec.priorities = can_entries();
      } else if (!seen_delays && at(TokenKind::kw_delays)) {
        take();
        seen_delays = true;
        spec.delays = can_entries();
      } else {
        break;
      }
    }
    if (!at(TokenKind::rbrace)) fail({TokenKind::kw_priorities, TokenKind::kw_delays, TokenKind::rbrace});
    take();
    return spec;
  }

  std::vector<CanEntry> can_entries() {
    std::vector<CanEntry> entries;
    expect(TokenKind::lbrace);
    while (at(TokenKind::identifier)) {
      CanEntry entry;
      entry.span = peek().span;
      entry.sender = take().text;
      entry.receiver = identifier();
      expect(TokenKind::dot);
      entry.server = identifier();
      accept(TokenKind::arrow);
      entry.value = number_literal(false);
      expect(TokenKind::semicolon);
      entries.push_back(std::move(entry));
    }
    expect(TokenKind::rbrace);
    return entries;
  }

  // Expressions, lowest precedence first.
  Expr expression() { return disjunction(); }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (at(TokenKind::or_or)) {
      const SourceSpan span = take().span;
      lhs = Expr::binary(Op::logical_or, lhs, conjunction(), span);
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = comparison();
    while (at(TokenKind::and_and)) {
      const SourceSpan span = take().span;
      lhs = Expr::binary(Op::logical_and, lhs, comparison(), span);
    }
    return lhs;
  }

  Expr comparison() {
    Expr lhs = additive();
    Op op;
    switch (peek().kind) {
      case TokenKind::less: op = Op::less; break;
      case TokenKind::less_eq: op = Op::less_equal; break;
      case TokenKind::greater: op = Op::greater; break;
      case TokenKind::greater_eq: op = Op::greater_equal; break;
      case TokenKind::eq_eq: op = Op::equal; break;
      case TokenKind::not_eq_: op = Op::not_equal; break;
      default: return lhs;
    }
    const SourceSpan span = take().span;
    return Expr::binary(op, lhs, additive(), span);
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (at(TokenKind::plus) || at(TokenKind::minus)) {
      const Op op = at(TokenKind::plus) ? Op::add : Op::subtract;
      const SourceSpan span = take().span;
      lhs = Expr::binary(op, lhs, multiplicative(), span);
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (at(TokenKind::star) || at(TokenKind::slash)) {
      const Op op = at(TokenKind::star) ? Op::multiply : Op::divide;
      const SourceSpan span = take().span;
      lhs = Expr::binary(op, lhs, unary(), span);
    }
    return lhs;
  }

  Expr unary() {
    if (at(TokenKind::minus) || at(TokenKind::bang)) {
      const Op op = at(TokenKind::minus) ? Op::negate : Op::logical_not;
      const SourceSpan span = take().span;
      return Expr::unary(op, unary(), span);
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::number: {
        auto value = parse_rational(t.text);
        if (!value) throw DiagnosticError(t.span, "numeric literal out of range: " + t.text);
        take();
        return Expr::number(*value, t.span);
      }
      case TokenKind::kw_true: take(); return Expr::boolean(true, t.span);
      case TokenKind::kw_false: take(); return Expr::boolean(false, t.span);
      case TokenKind::identifier:
        take();
        if (allow_location_ && t.text == "loc" && at(TokenKind::lparen)) {
          take();
          if (at(TokenKind::identifier)) take();  // loc(sys) as written in SpaceEx configs
          expect(TokenKind::rparen);
          return Expr::location(t.span);
        }
        return Expr::variable(t.text, t.span);
      case TokenKind::lparen: {
        take();
        Expr inner = expression();
        expect(TokenKind::rparen);
        return inner;
      }
      default:
        fail({TokenKind::number, TokenKind::identifier, TokenKind::lparen, TokenKind::minus,
              TokenKind::bang});
    }
  }

  const std::vector<Token>& tokens_;
  bool allow_location_;
  std::size_t pos_ = 0;
  Token eof_;
};

}  // namespace

ModelAST parse(const std::vector<Token>& tokens) { return Parser(tokens, false).model(); }

ModelAST parse_source(std::string_view source) { return parse(tokenize(source)); }

Expr parse_expression(std::string_view text) {
  const std::vector<Token> tokens = tokenize(text);
  return Parser(tokens, true).standalone_expression();
}

}  // namespace hrbc::frontend
