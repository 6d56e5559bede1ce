#include "nfold/scalar_function.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "nfold/error.hpp"

namespace nfold {

namespace detail {

struct Node {
  virtual ~Node() = default;
  virtual Jet eval(const Jet& arg) const = 0;
  virtual std::string str() const = 0;
};

namespace {

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

struct ConstantNode final : Node {
  explicit ConstantNode(Complex v) : value(v) {}
  Jet eval(const Jet& arg) const override { return Jet::constant(arg.base_point(), value, arg.order()); }
  std::string str() const override { return format_complex(value); }
  Complex value;
};

struct VariableNode final : Node {
  Jet eval(const Jet& arg) const override { return arg; }
  std::string str() const override { return "x"; }
};

enum class BinaryOp { Add, Sub, Mul, Div };

struct BinaryNode final : Node {
  BinaryNode(BinaryOp o, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
      : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  Jet eval(const Jet& arg) const override {
    Jet a = lhs->eval(arg);
    Jet b = rhs->eval(arg);
    switch (op) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Div: return a / b;
    }
    return a;
  }
  std::string str() const override {
    static constexpr const char* sym[] = {" + ", " - ", "*", "/"};
    return "(" + lhs->str() + sym[static_cast<int>(op)] + rhs->str() + ")";
  }
  BinaryOp op;
  std::shared_ptr<const Node> lhs, rhs;
};

enum class UnaryOp { Neg, Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Tanh, Atan, Recip };

struct UnaryNode final : Node {
  UnaryNode(UnaryOp o, std::shared_ptr<const Node> c) : op(o), child(std::move(c)) {}
  Jet eval(const Jet& arg) const override {
    Jet a = child->eval(arg);
    switch (op) {
      case UnaryOp::Neg: return -a;
      case UnaryOp::Exp: return exp(a);
      case UnaryOp::Log: return log(a);
      case UnaryOp::Sqrt: return sqrt(a);
      case UnaryOp::Sin: return sin(a);
      case UnaryOp::Cos: return cos(a);
      case UnaryOp::Sinh: return sinh(a);
      case UnaryOp::Cosh: return cosh(a);
      case UnaryOp::Tanh: return tanh(a);
      case UnaryOp::Atan: return atan(a);
      case UnaryOp::Recip: return recip(a);
    }
    return a;
  }
  std::string str() const override {
    static constexpr const char* names[] = {"-", "exp", "ln", "sqrt", "sin", "cos", "sinh", "cosh", "tanh", "atan", "1/"};
    return std::string(names[static_cast<int>(op)]) + "(" + child->str() + ")";
  }
  UnaryOp op;
  std::shared_ptr<const Node> child;
};

struct PowIntNode final : Node {
  PowIntNode(std::shared_ptr<const Node> c, int e) : child(std::move(c)), exponent(e) {}
  Jet eval(const Jet& arg) const override { return pow(child->eval(arg), exponent); }
  std::string str() const override { return "(" + child->str() + ")^" + std::to_string(exponent); }
  std::shared_ptr<const Node> child;
  int exponent;
};

struct PowNode final : Node {
  PowNode(std::shared_ptr<const Node> c, Complex e) : child(std::move(c)), exponent(e) {}
  Jet eval(const Jet& arg) const override { return pow(child->eval(arg), exponent); }
  std::string str() const override { return "(" + child->str() + ")^" + format_complex(exponent); }
  std::shared_ptr<const Node> child;
  Complex exponent;
};

struct ComposeNode final : Node {
  ComposeNode(std::shared_ptr<const Node> o, std::shared_ptr<const Node> i) : outer(std::move(o)), inner(std::move(i)) {}
  Jet eval(const Jet& arg) const override { return outer->eval(inner->eval(arg)); }
  std::string str() const override { return "[" + outer->str() + "](" + inner->str() + ")"; }
  std::shared_ptr<const Node> outer, inner;
};

struct DerivativeNode final : Node {
  DerivativeNode(std::shared_ptr<const Node> c, int k) : child(std::move(c)), count(k) {}
  Jet eval(const Jet& arg) const override {
    Jet own = child->eval(Jet::variable(arg.value(), arg.order() + count));
    return compose_series(own.differentiate(count), arg);
  }
  std::string str() const override { return "d" + std::to_string(count) + "[" + child->str() + "]"; }
  std::shared_ptr<const Node> child;
  int count;
};

struct PrimitiveNode final : Node {
  explicit PrimitiveNode(std::shared_ptr<const Primitive> p) : prim(std::move(p)) {}
  Jet eval(const Jet& arg) const override { return compose_series(prim->taylor(arg.value(), arg.order()), arg); }
  std::string str() const override { return prim->name() + "(x)"; }
  std::shared_ptr<const Primitive> prim;
};

class CallablePrimitive final : public Primitive {
 public:
  CallablePrimitive(std::string name, std::function<Jet(Complex, int)> fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  Jet taylor(Complex x0, int order) const override { return fn_(x0, order); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<Jet(Complex, int)> fn_;
};

const ConstantNode* as_constant(const std::shared_ptr<const Node>& n) {
  return dynamic_cast<const ConstantNode*>(n.get());
}

}  // namespace
}  // namespace detail

using detail::BinaryNode;
using detail::BinaryOp;
using detail::ConstantNode;
using detail::UnaryNode;
using detail::UnaryOp;

namespace {

std::vector<Complex> merge_points(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out = a;
  for (const auto& p : b) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

}  // namespace

ScalarFunction::ScalarFunction() : node_(std::make_shared<ConstantNode>(Complex{})) {}

ScalarFunction::ScalarFunction(std::shared_ptr<const detail::Node> node, std::vector<Complex> singular)
    : node_(std::move(node)), singular_points_(std::move(singular)) {}

ScalarFunction ScalarFunction::constant(Complex value) { return ScalarFunction(std::make_shared<ConstantNode>(value)); }

ScalarFunction ScalarFunction::variable() { return ScalarFunction(std::make_shared<detail::VariableNode>()); }

ScalarFunction ScalarFunction::primitive(std::shared_ptr<const Primitive> p) {
  return ScalarFunction(std::make_shared<detail::PrimitiveNode>(std::move(p)));
}

ScalarFunction ScalarFunction::from_taylor(std::string name, std::function<Jet(Complex, int)> taylor) {
  return primitive(std::make_shared<detail::CallablePrimitive>(std::move(name), std::move(taylor)));
}

Jet ScalarFunction::eval_jet(Complex q0, int order) const { return node_->eval(Jet::variable(q0, order)); }

Jet ScalarFunction::eval(const Jet& arg) const { return node_->eval(arg); }

Complex ScalarFunction::operator()(Complex q) const { return eval_jet(q, 0).value(); }

ScalarFunction ScalarFunction::compose(const ScalarFunction& inner) const {
  if (constant_value() != nullptr) return *this;
  if (dynamic_cast<const detail::VariableNode*>(node_.get()) != nullptr) return inner;
  return ScalarFunction(std::make_shared<detail::ComposeNode>(node_, inner.node_));
}

ScalarFunction ScalarFunction::derivative(int k) const {
  if (k == 0) return *this;
  if (constant_value() != nullptr) return ScalarFunction();
  return ScalarFunction(std::make_shared<detail::DerivativeNode>(node_, k), singular_points_);
}

const Complex* ScalarFunction::constant_value() const {
  const auto* c = detail::as_constant(node_);
  return c != nullptr ? &c->value : nullptr;
}

bool ScalarFunction::is_zero() const {
  const Complex* c = constant_value();
  return c != nullptr && *c == Complex{};
}

ScalarFunction ScalarFunction::with_singular_points(std::vector<Complex> points) const {
  return ScalarFunction(node_, std::move(points));
}

std::string ScalarFunction::to_string() const { return node_->str(); }

ScalarFunction operator+(const ScalarFunction& a, const ScalarFunction& b) {
  const Complex* ca = a.constant_value();
  const Complex* cb = b.constant_value();
  if (ca && cb) return ScalarFunction::constant(*ca + *cb);
  if (ca && *ca == Complex{}) return b;
  if (cb && *cb == Complex{}) return a;
  return ScalarFunction(std::make_shared<BinaryNode>(BinaryOp::Add, a.node_, b.node_),
                        merge_points(a.singular_points_, b.singular_points_));
}

ScalarFunction operator-(const ScalarFunction& a, const ScalarFunction& b) {
  const Complex* ca = a.constant_value();
  const Complex* cb = b.constant_value();
  if (ca && cb) return ScalarFunction::constant(*ca - *cb);
  if (cb && *cb == Complex{}) return a;
  if (ca && *ca == Complex{}) return -b;
  return ScalarFunction(std::make_shared<BinaryNode>(BinaryOp::Sub, a.node_, b.node_),
                        merge_points(a.singular_points_, b.singular_points_));
}

ScalarFunction operator*(const ScalarFunction& a, const ScalarFunction& b) {
  const Complex* ca = a.constant_value();
  const Complex* cb = b.constant_value();
  if (ca && cb) return ScalarFunction::constant(*ca * *cb);
  if ((ca && *ca == Complex{}) || (cb && *cb == Complex{})) return ScalarFunction();
  if (ca && *ca == Complex(1.0)) return b;
  if (cb && *cb == Complex(1.0)) return a;
  return ScalarFunction(std::make_shared<BinaryNode>(BinaryOp::Mul, a.node_, b.node_),
                        merge_points(a.singular_points_, b.singular_points_));
}

ScalarFunction operator/(const ScalarFunction& a, const ScalarFunction& b) {
  const Complex* ca = a.constant_value();
  const Complex* cb = b.constant_value();
  if (ca && cb && *cb != Complex{}) return ScalarFunction::constant(*ca / *cb);
  if (ca && *ca == Complex{}) return ScalarFunction();
  if (cb && *cb == Complex(1.0)) return a;
  return ScalarFunction(std::make_shared<BinaryNode>(BinaryOp::Div, a.node_, b.node_),
                        merge_points(a.singular_points_, b.singular_points_));
}

ScalarFunction ScalarFunction::operator-() const {
  if (const Complex* c = constant_value()) return constant(-*c);
  return ScalarFunction(std::make_shared<UnaryNode>(UnaryOp::Neg, node_), singular_points_);
}

#define NFOLD_UNARY(fname, opname, scalar_fn)                                                     \
  ScalarFunction fname(const ScalarFunction& a) {                                                 \
    if (const Complex* c = a.constant_value()) return ScalarFunction::constant(scalar_fn(*c));    \
    return ScalarFunction(std::make_shared<UnaryNode>(UnaryOp::opname, a.node_), a.singular_points_); \
  }

NFOLD_UNARY(exp, Exp, std::exp)
NFOLD_UNARY(log, Log, std::log)
NFOLD_UNARY(sqrt, Sqrt, std::sqrt)
NFOLD_UNARY(sin, Sin, std::sin)
NFOLD_UNARY(cos, Cos, std::cos)
NFOLD_UNARY(sinh, Sinh, std::sinh)
NFOLD_UNARY(cosh, Cosh, std::cosh)
NFOLD_UNARY(tanh, Tanh, std::tanh)
NFOLD_UNARY(atan, Atan, std::atan)
NFOLD_UNARY(recip, Recip, Complex(1.0) /)

#undef NFOLD_UNARY

ScalarFunction pow(const ScalarFunction& a, int exponent) {
  if (exponent == 0) return ScalarFunction::constant(1.0);
  if (exponent == 1) return a;
  if (const Complex* c = a.constant_value()) return ScalarFunction::constant(std::pow(*c, exponent));
  return ScalarFunction(std::make_shared<detail::PowIntNode>(a.node_, exponent), a.singular_points_);
}

ScalarFunction pow(const ScalarFunction& a, Complex exponent) {
  if (exponent.imag() == 0.0 && std::nearbyint(exponent.real()) == exponent.real() && std::abs(exponent.real()) < 64.0) {
    return pow(a, static_cast<int>(exponent.real()));
  }
  if (const Complex* c = a.constant_value()) return ScalarFunction::constant(std::pow(*c, exponent));
  return ScalarFunction(std::make_shared<detail::PowNode>(a.node_, exponent), a.singular_points_);
}

ScalarFunction operator+(const ScalarFunction& a, Complex b) { return a + ScalarFunction::constant(b); }
ScalarFunction operator+(Complex a, const ScalarFunction& b) { return ScalarFunction::constant(a) + b; }
ScalarFunction operator-(const ScalarFunction& a, Complex b) { return a - ScalarFunction::constant(b); }
ScalarFunction operator-(Complex a, const ScalarFunction& b) { return ScalarFunction::constant(a) - b; }
ScalarFunction operator*(const ScalarFunction& a, Complex b) { return a * ScalarFunction::constant(b); }
ScalarFunction operator*(Complex a, const ScalarFunction& b) { return ScalarFunction::constant(a) * b; }
ScalarFunction operator/(const ScalarFunction& a, Complex b) { return a / ScalarFunction::constant(b); }
ScalarFunction operator/(Complex a, const ScalarFunction& b) { return ScalarFunction::constant(a) / b; }

ScalarFunction polynomial(const std::vector<Complex>& coeffs) {
  const ScalarFunction x = ScalarFunction::variable();
  ScalarFunction result;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    result = result * x + coeffs[k];
  }
  return result;
}

}  // namespace nfold
