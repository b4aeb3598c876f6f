#include <schwarzian_lab/expr.hpp>

#include <cctype>
#include <charconv>
#include <limits>

namespace schwarzian_lab {

namespace {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string_view text;
  bool has_fraction = false;
  double number = 0.0;

  std::size_t end() const { return offset + length; }
};

constexpr std::size_t kMaxDepth = 200;

constexpr const char* kPrimaryExpected = "primary (number, z, n, i, exp(, log( or '(')";

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next(std::size_t pos) const {
    while (pos < src_.size() && is_space(src_[pos])) ++pos;
    Token tok;
    tok.offset = pos;
    if (pos >= src_.size()) return tok;

    const char c = src_[pos];
    if (is_digit(c)) return lex_number(pos);
    if (is_ident_start(c)) {
      std::size_t end = pos;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      tok.kind = TokenKind::Ident;
      tok.length = end - pos;
      tok.text = src_.substr(pos, tok.length);
      return tok;
    }
    tok.length = 1;
    tok.text = src_.substr(pos, 1);
    switch (c) {
      case '+': tok.kind = TokenKind::Plus; break;
      case '-': tok.kind = TokenKind::Minus; break;
      case '*': tok.kind = TokenKind::Star; break;
      case '/': tok.kind = TokenKind::Slash; break;
      case '^': tok.kind = TokenKind::Caret; break;
      case '(': tok.kind = TokenKind::LParen; break;
      case ')': tok.kind = TokenKind::RParen; break;
      default:
        throw ParseError(pos, std::string("unexpected character '") + c + "'", "");
    }
    return tok;
  }

 private:
  Token lex_number(std::size_t pos) const {
    std::size_t end = pos;
    while (end < src_.size() && is_digit(src_[end])) ++end;
    bool fraction = false;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      if (end >= src_.size() || !is_digit(src_[end]))
        throw ParseError(end, "digits required after decimal point", "digits");
      while (end < src_.size() && is_digit(src_[end])) ++end;
      fraction = true;
    }
    Token tok;
    tok.kind = TokenKind::Number;
    tok.offset = pos;
    tok.length = end - pos;
    tok.text = src_.substr(pos, tok.length);
    tok.has_fraction = fraction;
    const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
    if (ec != std::errc() || !std::isfinite(tok.number))
      throw ParseError(pos, "numeric literal out of range", "");
    return tok;
  }

  std::string_view src_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), lexer_(src) { advance(0); }

  FamilyExpr run() {
    const NodeId root = parse_expr();
    if (tok_.kind != TokenKind::End)
      throw ParseError(tok_.offset, "unexpected '" + std::string(tok_.text) + "'", "operator or end of input");
    out_.set_root(root);
    out_.set_source(std::string(src_));
    return std::move(out_);
  }

 private:
  void advance(std::size_t pos) { tok_ = lexer_.next(pos); }
  void consume() { advance(tok_.end()); }

  SourceSpan span_of(NodeId first, NodeId last) const {
    const auto& a = out_.node(first).span;
    const auto& b = out_.node(last).span;
    return {a.offset, b.offset + b.length - a.offset};
  }

  NodeId binary(NodeKind kind, NodeId lhs, NodeId rhs) {
    ExprNode node;
    node.kind = kind;
    node.lhs = lhs;
    node.rhs = rhs;
    node.span = span_of(lhs, rhs);
    return out_.add_node(node);
  }

  NodeId leaf(NodeKind kind, const Token& tok) {
    ExprNode node;
    node.kind = kind;
    node.span = {tok.offset, tok.length};
    if (kind == NodeKind::ConstNum) node.literal = tok.number;
    return out_.add_node(node);
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) throw ParseError(p.tok_.offset, "expression nested too deeply", "");
    }
    ~DepthGuard() { --p.depth_; }
  };

  NodeId parse_expr() {
    DepthGuard guard(*this);
    NodeId lhs = parse_term();
    while (tok_.kind == TokenKind::Plus || tok_.kind == TokenKind::Minus) {
      const NodeKind kind = tok_.kind == TokenKind::Plus ? NodeKind::Add : NodeKind::Sub;
      consume();
      lhs = binary(kind, lhs, parse_term());
    }
    return lhs;
  }

  NodeId parse_term() {
    NodeId lhs = parse_factor();
    while (tok_.kind == TokenKind::Star || tok_.kind == TokenKind::Slash) {
      const NodeKind kind = tok_.kind == TokenKind::Star ? NodeKind::Mul : NodeKind::Div;
      consume();
      lhs = binary(kind, lhs, parse_factor());
    }
    return lhs;
  }

  NodeId parse_factor() {
    if (tok_.kind != TokenKind::Minus) return parse_power();
    DepthGuard guard(*this);
    const std::size_t start = tok_.offset;
    consume();
    const NodeId operand = parse_factor();
    ExprNode node;
    node.kind = NodeKind::Neg;
    node.lhs = operand;
    const auto& s = out_.node(operand).span;
    node.span = {start, s.offset + s.length - start};
    return out_.add_node(node);
  }

  NodeId parse_power() {
    const NodeId base = parse_primary();
    if (tok_.kind != TokenKind::Caret) return base;
    consume();
    bool negative = false;
    if (tok_.kind == TokenKind::Minus) {
      negative = true;
      consume();
    }
    if (tok_.kind != TokenKind::Number || tok_.has_fraction)
      throw ParseError(tok_.offset, "exponent must be an integer literal", "integer");
    int k = 0;
    const auto [ptr, ec] = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), k);
    if (ec != std::errc()) throw ParseError(tok_.offset, "exponent out of range", "integer");
    const std::size_t end = tok_.end();
    consume();
    if (tok_.kind == TokenKind::Caret)
      throw ParseError(tok_.offset, "'^' does not chain; parenthesize the base", "operator or end of input");

    ExprNode node;
    node.kind = NodeKind::PowInt;
    node.lhs = base;
    node.exponent = negative ? -k : k;
    const auto& s = out_.node(base).span;
    node.span = {s.offset, end - s.offset};
    return out_.add_node(node);
  }

  NodeId parse_primary() {
    const Token tok = tok_;
    switch (tok.kind) {
      case TokenKind::Number:
        consume();
        return leaf(NodeKind::ConstNum, tok);
      case TokenKind::LParen: {
        DepthGuard guard(*this);
        consume();
        const NodeId inner = parse_expr();
        const std::size_t end = tok_.end();
        expect_rparen();
        // parenthesized subexpressions report their span with the parentheses
        out_.set_span(inner, {tok.offset, end - tok.offset});
        return inner;
      }
      case TokenKind::Ident: {
        if (tok.text == "z") return consume(), leaf(NodeKind::Var, tok);
        if (tok.text == "n") return consume(), leaf(NodeKind::Param, tok);
        if (tok.text == "i") return consume(), leaf(NodeKind::ImagUnit, tok);
        if (tok.text == "exp" || tok.text == "log") {
          DepthGuard guard(*this);
          consume();
          if (tok_.kind != TokenKind::LParen)
            throw ParseError(tok_.offset, "function name must be followed by '('", "'('");
          consume();
          const NodeId arg = parse_expr();
          const std::size_t end = tok_.end();
          expect_rparen();
          ExprNode node;
          node.kind = tok.text == "exp" ? NodeKind::Exp : NodeKind::Log;
          node.lhs = arg;
          node.span = {tok.offset, end - tok.offset};
          return out_.add_node(node);
        }
        throw ParseError(tok.offset, "unknown identifier '" + std::string(tok.text) + "'",
                         "z, n, i, exp or log");
      }
      default:
        throw ParseError(tok.offset,
                         tok.kind == TokenKind::End ? "unexpected end of input"
                                                    : "unexpected '" + std::string(tok.text) + "'",
                         kPrimaryExpected);
    }
  }

  void expect_rparen() {
    if (tok_.kind != TokenKind::RParen) throw ParseError(tok_.offset, "unbalanced parenthesis", "')'");
    consume();
  }

  std::string_view src_;
  Lexer lexer_;
  Token tok_;
  FamilyExpr out_;
  std::size_t depth_ = 0;
};

}  // namespace

FamilyExpr parse(std::string_view source) { return Parser(source).run(); }

Complex parse_complex(std::string_view text) {
  // [sign] (number [i] | i) [ (+|-) (number [i] | i) ]
  const Lexer lexer(text);
  std::size_t pos = 0;
  double re = 0.0;
  double im = 0.0;
  int terms = 0;
  bool saw_real = false;
  bool saw_imag = false;

  Token tok = lexer.next(pos);
  while (tok.kind != TokenKind::End) {
    if (terms == 2) throw ParseError(tok.offset, "too many terms in complex literal", "end of input");
    double sign = 1.0;
    if (tok.kind == TokenKind::Plus || tok.kind == TokenKind::Minus) {
      sign = tok.kind == TokenKind::Minus ? -1.0 : 1.0;
      tok = lexer.next(tok.end());
    } else if (terms > 0) {
      throw ParseError(tok.offset, "expected '+' or '-' between terms", "'+' or '-'");
    }
    double magnitude = 1.0;
    bool has_number = false;
    if (tok.kind == TokenKind::Number) {
      magnitude = tok.number;
      has_number = true;
      tok = lexer.next(tok.end());
    }
    bool imaginary = false;
    if (tok.kind == TokenKind::Ident && tok.text == "i") {
      imaginary = true;
      tok = lexer.next(tok.end());
    } else if (tok.kind == TokenKind::Ident && tok.text.size() > 1 && tok.text.front() == 'i') {
      throw ParseError(tok.offset, "unexpected '" + std::string(tok.text) + "'", "'i'");
    }
    if (!has_number && !imaginary) throw ParseError(tok.offset, "expected a number", "number or 'i'");
    if (imaginary) {
      if (saw_imag) throw ParseError(tok.offset, "duplicate imaginary part", "");
      saw_imag = true;
      im = sign * magnitude;
    } else {
      if (saw_real) throw ParseError(tok.offset, "duplicate real part", "");
      saw_real = true;
      re = sign * magnitude;
    }
    ++terms;
  }
  if (terms == 0) throw ParseError(tok.offset, "empty complex literal", "number");
  return {re, im};
}

}  // namespace schwarzian_lab
