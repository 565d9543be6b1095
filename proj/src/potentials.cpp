#include "chq/potentials.hpp"

#include <cctype>
#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace chq {

VectorFunction zero_vector_potential() {
  return [](const Point3&) { return Point3{0.0, 0.0, 0.0}; };
}

VectorFunction standard_vector_potential() {
  return [](const Point3& x) { return Point3{-x[1], x[0], 0.0}; };
}

ScalarFunction constant_potential(double lambda) {
  return [lambda](const Point3&) { return lambda; };
}

ScalarFunction ring_well_potential(const RingWell& p) {
  return [p](const Point3& x) {
    const double rho = std::hypot(x[0], x[1]);
    return p.v0 + p.a * (rho - p.r0) * (rho - p.r0) + p.b * x[2] * x[2];
  };
}

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum Op { kNum, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall } op;
  double value = 0.0;
  int var = 0;
  std::string fn;
  NodePtr lhs, rhs;

  double eval(const Point3& x) const {
    switch (op) {
      case kNum:
        return value;
      case kVar:
        switch (var) {
          case 0:
          case 1:
          case 2:
            return x[std::size_t(var)];
          case 3:
            return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
          default:
            return std::hypot(x[0], x[1]);
        }
      case kNeg:
        return -lhs->eval(x);
      case kAdd:
        return lhs->eval(x) + rhs->eval(x);
      case kSub:
        return lhs->eval(x) - rhs->eval(x);
      case kMul:
        return lhs->eval(x) * rhs->eval(x);
      case kDiv:
        return lhs->eval(x) / rhs->eval(x);
      case kPow:
        return std::pow(lhs->eval(x), rhs->eval(x));
      case kCall:
        break;
    }
    const double a = lhs->eval(x);
    if (fn == "sqrt") return std::sqrt(a);
    if (fn == "exp") return std::exp(a);
    if (fn == "log") return std::log(a);
    if (fn == "sin") return std::sin(a);
    if (fn == "cos") return std::cos(a);
    if (fn == "tanh") return std::tanh(a);
    if (fn == "abs") return std::abs(a);
    if (fn == "min") return std::min(a, rhs->eval(x));
    return std::max(a, rhs->eval(x));
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression '" + s_ + "': " + what + " at offset " +
                std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (eat('+')) e = make(Node::kAdd, e, term());
      else if (eat('-')) e = make(Node::kSub, e, term());
      else return e;
    }
  }
  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (eat('*')) e = make(Node::kMul, e, unary());
      else if (eat('/')) e = make(Node::kDiv, e, unary());
      else return e;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::kNeg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::kPow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->op = Node::kNum;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      static const std::vector<std::string> vars = {"x", "y", "z", "r", "rho"};
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (name == vars[i]) {
          auto n = std::make_shared<Node>();
          n->op = Node::kVar;
          n->var = int(i);
          return n;
        }
      }
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->op = Node::kNum;
        n->value = M_PI;
        return n;
      }
      static const std::vector<std::string> unary_fns = {
          "sqrt", "exp", "log", "sin", "cos", "tanh", "abs"};
      const bool binary = name == "min" || name == "max";
      bool known = binary;
      for (const auto& f : unary_fns) known = known || name == f;
      if (!known) fail("unknown identifier '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      auto n = std::make_shared<Node>();
      n->op = Node::kCall;
      n->fn = name;
      n->lhs = expr();
      if (binary) {
        if (!eat(',')) fail("expected ',' in " + name);
        n->rhs = expr();
      }
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarFunction parse_scalar_expression(const std::string& text) {
  NodePtr root = Parser(text).parse();
  return [root](const Point3& x) { return root->eval(x); };
}

}  // namespace chq
