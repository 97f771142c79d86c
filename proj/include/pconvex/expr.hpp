#pragma once
// Tiny arithmetic expression grammar for portable instance files:
// +, -, *, /, ^ (right-assoc), abs(...), sqrt(...), numeric constants and
// coordinates x or x[i].

#include <memory>
#include <string>

#include "pconvex/pcore.hpp"

namespace pconvex {

class Expr {
 public:
  struct Node;  // opaque AST node

  // Throws std::invalid_argument with the offending position on parse errors.
  static Expr parse(const std::string& text);

  double eval(const Vec& point) const;
  std::size_t max_coordinate() const;  // highest coordinate index referenced
  const std::string& text() const { return text_; }

 private:
  explicit Expr(std::shared_ptr<const Node> root, std::string text);
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace pconvex
