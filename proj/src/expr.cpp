#include "pconvex/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pconvex {

struct Expr::Node {
  enum class Kind { constant, coordinate, add, sub, mul, div, pow, neg, abs, sqrt };
  Kind kind;
  double value = 0.0;        // constant
  std::size_t coord = 0;     // coordinate
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

// hand-rolled recursive descent; the grammar is small enough that a tokenizer
// would be more code than the parser
struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression parse error at position " +
                                std::to_string(pos) + ": " + what);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (eat('+')) {
        lhs = make(Node::Kind::add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = make(Node::Kind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (eat('*')) {
        lhs = make(Node::Kind::mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = make(Node::Kind::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Node::Kind::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) {
      // right-associative; the exponent may carry its own sign
      return make(Node::Kind::pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];

    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (pos < s.size() &&
             std::isalpha(static_cast<unsigned char>(s[pos]))) {
        word += s[pos++];
      }
      if (word == "abs" || word == "sqrt") {
        if (!eat('(')) fail("expected '(' after " + word);
        NodePtr inner = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make(word == "abs" ? Node::Kind::abs : Node::Kind::sqrt, inner);
      }
      if (word == "x") {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::coordinate;
        n->coord = 0;
        if (eat('[')) {
          skip_ws();
          std::size_t idx = 0;
          bool any = false;
          while (pos < s.size() &&
                 std::isdigit(static_cast<unsigned char>(s[pos]))) {
            idx = idx * 10 + static_cast<std::size_t>(s[pos] - '0');
            ++pos;
            any = true;
          }
          if (!any) fail("expected coordinate index");
          if (!eat(']')) fail("expected ']'");
          n->coord = idx;
        }
        return n;
      }
      fail("unknown identifier '" + word + "'");
    }

    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '+' || s[pos] == '-') && pos > start &&
             (s[pos - 1] == 'e' || s[pos - 1] == 'E')))) {
      ++pos;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(start, pos - start), &used);
      if (used != pos - start) fail("malformed number");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::constant;
      n->value = v;
      return n;
    } catch (const std::exception&) {
      fail("malformed number");
    }
  }
};

double eval_node(const Node& n, const Vec& x) {
  switch (n.kind) {
    case Node::Kind::constant:
      return n.value;
    case Node::Kind::coordinate:
      if (n.coord >= x.size()) {
        throw std::invalid_argument("expression references coordinate x[" +
                                    std::to_string(n.coord) +
                                    "] beyond the point dimension");
      }
      return x[n.coord];
    case Node::Kind::add:
      return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Node::Kind::sub:
      return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Node::Kind::mul:
      return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Node::Kind::div:
      return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
    case Node::Kind::pow:
      return std::pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case Node::Kind::neg:
      return -eval_node(*n.lhs, x);
    case Node::Kind::abs:
      return std::abs(eval_node(*n.lhs, x));
    case Node::Kind::sqrt:
      return std::sqrt(eval_node(*n.lhs, x));
  }
  return 0.0;
}

std::size_t max_coord_node(const Node& n) {
  std::size_t m = 0;
  if (n.kind == Node::Kind::coordinate) m = n.coord;
  if (n.lhs) m = std::max(m, max_coord_node(*n.lhs));
  if (n.rhs) m = std::max(m, max_coord_node(*n.rhs));
  return m;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expr Expr::parse(const std::string& text) {
  Parser parser{text};
  NodePtr root = parser.parse_expr();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing input");
  return Expr(std::move(root), text);
}

double Expr::eval(const Vec& point) const { return eval_node(*root_, point); }

std::size_t Expr::max_coordinate() const { return max_coord_node(*root_); }

}  // namespace pconvex
