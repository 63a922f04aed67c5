#pragma once

#include <memory>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/types.hpp"

namespace magcurv {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::Parse, "syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh };

struct ExprNode {
  enum class Kind { Number, Variable, Energy, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double value = 0.0;  // Number
  int index = 0;       // Variable: 0-based (x1 is 0)
  Func func = Func::Sin;
  std::shared_ptr<const ExprNode> a, b;
};
using NodePtr = std::shared_ptr<const ExprNode>;

// Arithmetic expression over x1..xn, the energy parameter k and the constant
// pi. Grammar, loosest first: + -, then * /, then unary -, then ^ (right
// associative, so -x^2 = -(x^2) and 2^3^2 = 2^9). Functions: sin cos tan exp
// log sqrt abs sinh cosh. Evaluation runs a compiled postfix program; domain
// violations (log or sqrt out of range, division by zero, non-finite
// results) throw ErrorKind::Domain.
class Expression {
 public:
  Expression();  // the constant 0
  static Expression parse(const std::string& text);
  static Expression from_tree(NodePtr root);

  double eval(const Vec& x, double k = 0.0) const;
  // Reference tree-walking interpreter.
  double eval_tree(const Vec& x, double k = 0.0) const;

  // Symbolic d/dx_{var+1}.
  Expression derivative(int var) const;

  // Highest variable index used plus one (0 when no variables).
  int variable_count() const { return variable_count_; }
  bool uses_energy() const { return uses_energy_; }
  bool is_constant_zero() const;
  std::string to_string() const;
  const NodePtr& root() const { return root_; }

 private:
  struct Instr {
    ExprNode::Kind op;
    double value;
    int index;
    Func func;
  };

  void compile();

  NodePtr root_;
  std::vector<Instr> program_;
  int stack_depth_ = 0;
  int variable_count_ = 0;
  bool uses_energy_ = false;
};

const char* func_name(Func f);

}  // namespace magcurv
