#include "cli/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace magcurv {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
  }
  return "?";
}

namespace {

using Kind = ExprNode::Kind;

NodePtr make(Kind kind, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}

NodePtr call(Func f, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = std::move(a);
  return n;
}

bool is_num(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }

[[noreturn]] void domain(const std::string& what) { fail(ErrorKind::Domain, "evaluation error: " + what); }

double checked(double r) {
  if (!std::isfinite(r)) domain("non-finite result");
  return r;
}

double apply_call(Func f, double a) {
  switch (f) {
    case Func::Sin: return checked(std::sin(a));
    case Func::Cos: return checked(std::cos(a));
    case Func::Tan: return checked(std::tan(a));
    case Func::Exp: return checked(std::exp(a));
    case Func::Log:
      if (!(a > 0.0)) domain("log of nonpositive value");
      return checked(std::log(a));
    case Func::Sqrt:
      if (a < 0.0) domain("sqrt of negative value");
      return checked(std::sqrt(a));
    case Func::Abs: return std::abs(a);
    case Func::Sinh: return checked(std::sinh(a));
    case Func::Cosh: return checked(std::cosh(a));
  }
  return 0.0;
}

double apply_binary(Kind op, double a, double b) {
  switch (op) {
    case Kind::Add: return checked(a + b);
    case Kind::Sub: return checked(a - b);
    case Kind::Mul: return checked(a * b);
    case Kind::Div:
      if (b == 0.0) domain("division by zero");
      return checked(a / b);
    case Kind::Pow:
      if (a < 0.0 && b != std::floor(b)) domain("negative base with non-integer exponent");
      if (a == 0.0 && b < 0.0) domain("zero base with negative exponent");
      return checked(std::pow(a, b));
    default: break;
  }
  fail(ErrorKind::Internal, "bad binary operator");
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
    if (s_[pos_] != c) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok = s_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok == ".") throw ParseError(start, "malformed number '" + tok + "'");
    return number(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    static const std::pair<const char*, Func> funcs[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},  {"log", Func::Log},
        {"sqrt", Func::Sqrt}, {"abs", Func::Abs}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh}};
    for (const auto& [name, f] : funcs)
      if (id == name) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return call(f, arg);
      }
    if (id == "pi") return number(M_PI);
    if (id == "k") return make(Kind::Energy);
    if (id.size() >= 2 && id[0] == 'x' && id.find_first_not_of("0123456789", 1) == std::string::npos &&
        id[1] != '0') {
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::Variable;
      n->index = std::atoi(id.c_str() + 1) - 1;
      return n;
    }
    throw ParseError(start, "unknown identifier '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double walk(const ExprNode& n, const Vec& x, double k) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Variable:
      if (n.index >= x.size()) fail(ErrorKind::InvalidArgument, "expression variable index exceeds dimension");
      return x[n.index];
    case Kind::Energy: return k;
    case Kind::Negate: return -walk(*n.a, x, k);
    case Kind::Call: return apply_call(n.func, walk(*n.a, x, k));
    default: {
      const double a = walk(*n.a, x, k);
      const double b = walk(*n.b, x, k);
      return apply_binary(n.kind, a, b);
    }
  }
}

void print(const ExprNode& n, std::string& out) {
  char buf[40];
  switch (n.kind) {
    case Kind::Number:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0) {
        out += "(";
        out += buf;
        out += ")";
      } else {
        out += buf;
      }
      return;
    case Kind::Variable: out += "x" + std::to_string(n.index + 1); return;
    case Kind::Energy: out += "k"; return;
    case Kind::Negate:
      out += "(-";
      print(*n.a, out);
      out += ")";
      return;
    case Kind::Call:
      out += func_name(n.func);
      out += "(";
      print(*n.a, out);
      out += ")";
      return;
    default: {
      const char* op = n.kind == Kind::Add ? "+" : n.kind == Kind::Sub ? "-" : n.kind == Kind::Mul ? "*"
                       : n.kind == Kind::Div ? "/" : "^";
      out += "(";
      print(*n.a, out);
      out += op;
      print(*n.b, out);
      out += ")";
    }
  }
}

// Simplifying constructors for the derivative.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  return make(Kind::Add, a, b);
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_num(b, 0.0)) return a;
  if (is_num(a, 0.0)) return make(Kind::Negate, b);
  return make(Kind::Sub, a, b);
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0) || is_num(b, 0.0)) return number(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  return make(Kind::Mul, a, b);
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0)) return number(0.0);
  if (is_num(b, 1.0)) return a;
  return make(Kind::Div, a, b);
}
NodePtr neg(NodePtr a) {
  if (a->kind == Kind::Number) return number(-a->value);
  if (a->kind == Kind::Negate) return a->a;
  return make(Kind::Negate, a);
}

bool depends_on(const NodePtr& n, int var) {
  if (!n) return false;
  if (n->kind == Kind::Variable) return n->index == var;
  return depends_on(n->a, var) || depends_on(n->b, var);
}

NodePtr diff(const NodePtr& n, int var) {
  if (!depends_on(n, var)) return number(0.0);
  switch (n->kind) {
    case Kind::Variable: return number(1.0);
    case Kind::Negate: return neg(diff(n->a, var));
    case Kind::Add: return add(diff(n->a, var), diff(n->b, var));
    case Kind::Sub: return sub(diff(n->a, var), diff(n->b, var));
    case Kind::Mul: return add(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var)));
    case Kind::Div:
      return div(sub(mul(diff(n->a, var), n->b), mul(n->a, diff(n->b, var))), make(Kind::Mul, n->b, n->b));
    case Kind::Pow: {
      const NodePtr& u = n->a;
      const NodePtr& v = n->b;
      if (!depends_on(v, var)) {
        // v u^(v-1) u'
        NodePtr vm1 = v->kind == Kind::Number ? number(v->value - 1.0) : sub(v, number(1.0));
        return mul(mul(v, make(Kind::Pow, u, vm1)), diff(u, var));
      }
      // u^v (v' log u + v u'/u)
      return mul(n, add(mul(diff(v, var), call(Func::Log, u)), div(mul(v, diff(u, var)), u)));
    }
    case Kind::Call: {
      const NodePtr& u = n->a;
      const NodePtr du = diff(u, var);
      switch (n->func) {
        case Func::Sin: return mul(call(Func::Cos, u), du);
        case Func::Cos: return neg(mul(call(Func::Sin, u), du));
        case Func::Tan: {
          NodePtr c = call(Func::Cos, u);
          return div(du, make(Kind::Mul, c, c));
        }
        case Func::Exp: return mul(n, du);
        case Func::Log: return div(du, u);
        case Func::Sqrt: return div(du, mul(number(2.0), n));
        case Func::Abs: return mul(div(u, n), du);
        case Func::Sinh: return mul(call(Func::Cosh, u), du);
        case Func::Cosh: return mul(call(Func::Sinh, u), du);
      }
      break;
    }
    default: break;
  }
  return number(0.0);
}

}  // namespace

Expression::Expression() : root_(number(0.0)) { compile(); }

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return from_tree(p.parse());
}

Expression Expression::from_tree(NodePtr root) {
  Expression e;
  e.root_ = std::move(root);
  e.compile();
  return e;
}

void Expression::compile() {
  program_.clear();
  variable_count_ = 0;
  uses_energy_ = false;
  int depth = 0;
  stack_depth_ = 0;
  auto emit = [&](auto&& self, const ExprNode& n) -> void {
    switch (n.kind) {
      case Kind::Number:
      case Kind::Variable:
      case Kind::Energy:
        if (n.kind == Kind::Variable) variable_count_ = std::max(variable_count_, n.index + 1);
        if (n.kind == Kind::Energy) uses_energy_ = true;
        program_.push_back({n.kind, n.value, n.index, n.func});
        stack_depth_ = std::max(stack_depth_, ++depth);
        return;
      case Kind::Negate:
      case Kind::Call:
        self(self, *n.a);
        program_.push_back({n.kind, 0.0, 0, n.func});
        return;
      default:
        self(self, *n.a);
        self(self, *n.b);
        program_.push_back({n.kind, 0.0, 0, n.func});
        --depth;
        return;
    }
  };
  emit(emit, *root_);
}

double Expression::eval(const Vec& x, double k) const {
  if (variable_count_ > x.size()) fail(ErrorKind::InvalidArgument, "expression variable index exceeds dimension");
  constexpr int kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (stack_depth_ > kInline) {
    heap.resize(static_cast<std::size_t>(stack_depth_));
    st = heap.data();
  }
  int top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Kind::Number: st[top++] = in.value; break;
      case Kind::Variable: st[top++] = x[in.index]; break;
      case Kind::Energy: st[top++] = k; break;
      case Kind::Negate: st[top - 1] = -st[top - 1]; break;
      case Kind::Call: st[top - 1] = apply_call(in.func, st[top - 1]); break;
      default:
        --top;
        st[top - 1] = apply_binary(in.op, st[top - 1], st[top]);
        break;
    }
  }
  return st[0];
}

double Expression::eval_tree(const Vec& x, double k) const { return walk(*root_, x, k); }

Expression Expression::derivative(int var) const {
  require(var >= 0, "derivative variable must be nonnegative");
  return from_tree(diff(root_, var));
}

bool Expression::is_constant_zero() const { return is_num(root_, 0.0); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

}  // namespace magcurv
