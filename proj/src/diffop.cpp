#include "nfold/diffop.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

#include "nfold/error.hpp"

namespace nfold {

namespace detail {

struct OpNode {
  virtual ~OpNode() = default;
  virtual int order() const = 0;
  /// (op f) to order f.order() - order().
  virtual Jet apply(const Jet& f) const = 0;
  /// (op^t f) to order f.order() - order().
  virtual Jet apply_transposed(const Jet& f) const = 0;
};

}  // namespace detail

namespace {

using detail::OpNode;
using NodePtr = std::shared_ptr<const OpNode>;

int result_order(const Jet& f, int op_order) {
  const int r = f.order() - op_order;
  if (r < 0) {
    throw Error(ErrorKind::OrderTooLow, "jet of order " + std::to_string(f.order()) + " cannot feed an operator of order " +
                                            std::to_string(op_order));
  }
  return r;
}

class CoefficientNode final : public OpNode {
 public:
  explicit CoefficientNode(std::vector<ScalarFunction> c) : c_(std::move(c)) {
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
    if (c_.empty()) c_.push_back(ScalarFunction());
  }
  int order() const override { return static_cast<int>(c_.size()) - 1; }

  Jet apply(const Jet& f) const override {
    const int r = result_order(f, order());
    const Complex q0 = f.base_point();
    Jet out = Jet::constant(q0, 0.0, r);
    for (int k = 0; k <= order(); ++k) {
      if (c_[k].is_zero()) continue;
      out += c_[k].eval_jet(q0, r) * f.differentiate(k).truncated(r);
    }
    return out;
  }

  Jet apply_transposed(const Jet& f) const override {
    const int r = result_order(f, order());
    const Complex q0 = f.base_point();
    Jet out = Jet::constant(q0, 0.0, r);
    for (int k = 0; k <= order(); ++k) {
      if (c_[k].is_zero()) continue;
      Jet term = (c_[k].eval_jet(q0, f.order()) * f).differentiate(k).truncated(r);
      if (k % 2 == 1) term = -term;
      out += term;
    }
    return out;
  }

 private:
  std::vector<ScalarFunction> c_;
};

class ComposeNode final : public OpNode {
 public:
  ComposeNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  int order() const override { return a_->order() + b_->order(); }
  Jet apply(const Jet& f) const override { return a_->apply(b_->apply(f)); }
  Jet apply_transposed(const Jet& f) const override { return b_->apply_transposed(a_->apply_transposed(f)); }

 private:
  NodePtr a_, b_;
};

class SumNode final : public OpNode {
 public:
  SumNode(NodePtr a, Complex sa, NodePtr b, Complex sb)
      : a_(std::move(a)), b_(std::move(b)), sa_(sa), sb_(sb) {}
  int order() const override { return std::max(a_->order(), b_->order()); }
  Jet apply(const Jet& f) const override {
    const int r = result_order(f, order());
    return sa_ * a_->apply(f).truncated(r) + sb_ * b_->apply(f).truncated(r);
  }
  Jet apply_transposed(const Jet& f) const override {
    const int r = result_order(f, order());
    return sa_ * a_->apply_transposed(f).truncated(r) + sb_ * b_->apply_transposed(f).truncated(r);
  }

 private:
  NodePtr a_, b_;
  Complex sa_, sb_;
};

/// e^{sign G} with G(q0) = 0, to order K.
Jet gauge_factor(const ScalarFunction& gauge_prime, Complex q0, int order, double sign) {
  if (order == 0) return Jet::constant(q0, 1.0, 0);
  return exp(sign * gauge_prime.eval_jet(q0, order - 1).integrate(0.0));
}

class ConjugateNode final : public OpNode {
 public:
  ConjugateNode(NodePtr op, ScalarFunction gauge_prime) : op_(std::move(op)), gp_(std::move(gauge_prime)) {}
  int order() const override { return op_->order(); }
  Jet apply(const Jet& f) const override {
    const int r = result_order(f, order());
    const Jet up = gauge_factor(gp_, f.base_point(), f.order(), 1.0);
    return op_->apply(up * f) * recip(up.truncated(r));
  }
  Jet apply_transposed(const Jet& f) const override {
    const int r = result_order(f, order());
    const Jet down = gauge_factor(gp_, f.base_point(), f.order(), -1.0);
    return op_->apply_transposed(down * f) * recip(down.truncated(r));
  }

 private:
  NodePtr op_;
  ScalarFunction gp_;
};

class TransposeNode final : public OpNode {
 public:
  explicit TransposeNode(NodePtr op) : op_(std::move(op)) {}
  int order() const override { return op_->order(); }
  Jet apply(const Jet& f) const override { return op_->apply_transposed(f); }
  Jet apply_transposed(const Jet& f) const override { return op_->apply(f); }
  const NodePtr& inner() const { return op_; }

 private:
  NodePtr op_;
};

/// Row-equilibrated LU with partial pivoting on jet values. Solves
/// sum_k a[i][k] x_k = rhs_i and returns the determinant of `a`.
struct JetSolve {
  std::vector<Jet> x;
  Jet det;
};

JetSolve pivoted_solve(std::vector<std::vector<Jet>> a, std::vector<Jet> rhs, double tolerance) {
  const std::size_t n = a.size();
  const Complex q0 = a.front().front().base_point();
  const int order = a.front().front().order();
  Jet det = Jet::constant(q0, 1.0, order);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (const Jet& v : a[i]) norm = std::max(norm, std::abs(v.value()));
    if (norm == 0.0) throw Error(ErrorKind::DegenerateBasis, "basis function vanishes with all its derivatives");
    for (Jet& v : a[i]) v /= norm;
    rhs[i] /= norm;
    det *= norm;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::abs(a[i][col].value()) > std::abs(a[piv][col].value())) piv = i;
    }
    if (std::abs(a[piv][col].value()) < tolerance) {
      throw Error(ErrorKind::DegenerateBasis, "Wronskian vanishes at z = " + std::to_string(q0.real()) +
                                                  (q0.imag() != 0.0 ? "+" + std::to_string(q0.imag()) + "i" : ""));
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(rhs[piv], rhs[col]);
      det = -det;
    }
    const Jet inv = recip(a[col][col]);
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const Jet factor = a[i][col] * inv;
      for (std::size_t k = col; k < n; ++k) a[i][k] -= factor * a[col][k];
      rhs[i] -= factor * rhs[col];
    }
  }
  std::vector<Jet> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Jet s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return {std::move(x), std::move(det)};
}

constexpr double kDegenerateTolerance = 1e-10;

/// Jets of phi_i^(r), r = 0..rows-1, each of order `order`.
std::vector<std::vector<Jet>> derivative_table(const std::vector<ScalarFunction>& basis, Complex z0, int order,
                                               int rows) {
  std::vector<std::vector<Jet>> table;
  table.reserve(basis.size());
  for (const ScalarFunction& phi : basis) {
    const Jet j = phi.eval_jet(z0, order + rows - 1);
    std::vector<Jet> row;
    row.reserve(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) row.push_back(j.differentiate(r).truncated(order));
    table.push_back(std::move(row));
  }
  return table;
}

/// Solves for w_0..w_{N-1} and W at z0.
JetSolve wronskian_solve(const std::vector<ScalarFunction>& basis, Complex z0, int order) {
  const int n = static_cast<int>(basis.size());
  auto table = derivative_table(basis, z0, order, n + 1);
  std::vector<std::vector<Jet>> a(basis.size());
  std::vector<Jet> rhs(basis.size());
  for (int i = 0; i < n; ++i) {
    a[i].assign(table[i].begin(), table[i].begin() + n);
    rhs[i] = -table[i][n];
  }
  return pivoted_solve(std::move(a), std::move(rhs), kDegenerateTolerance);
}

class AnnihilatorNode final : public OpNode {
 public:
  AnnihilatorNode(std::vector<ScalarFunction> basis, ScalarFunction g) : basis_(std::move(basis)), g_(std::move(g)) {}
  int order() const override { return static_cast<int>(basis_.size()); }

  Jet apply(const Jet& f) const override {
    const int r = result_order(f, order());
    const Complex z0 = f.base_point();
    const JetSolve s = wronskian_solve(basis_, z0, r);
    Jet out = f.differentiate(order());
    for (int k = 0; k < order(); ++k) out += s.x[k] * f.differentiate(k).truncated(r);
    return g_.eval_jet(z0, r) * out;
  }

  Jet apply_transposed(const Jet& f) const override {
    const int r = result_order(f, order());
    const Complex z0 = f.base_point();
    const JetSolve s = wronskian_solve(basis_, z0, f.order());
    const Jet gf = g_.eval_jet(z0, f.order()) * f;
    Jet out = gf.differentiate(order());
    if (order() % 2 == 1) out = -out;
    for (int k = 0; k < order(); ++k) {
      Jet term = (s.x[k] * gf).differentiate(k).truncated(r);
      if (k % 2 == 1) term = -term;
      out += term;
    }
    return out;
  }

 private:
  std::vector<ScalarFunction> basis_;
  ScalarFunction g_;
};

}  // namespace

LinearDiffOp::LinearDiffOp() : node_(std::make_shared<CoefficientNode>(std::vector<ScalarFunction>{})) {}

LinearDiffOp::LinearDiffOp(std::shared_ptr<const detail::OpNode> node) : node_(std::move(node)) {}

LinearDiffOp LinearDiffOp::from_coefficients(std::vector<ScalarFunction> coeffs) {
  return LinearDiffOp(std::make_shared<CoefficientNode>(std::move(coeffs)));
}

LinearDiffOp LinearDiffOp::identity() { return multiply(ScalarFunction::constant(1.0)); }

LinearDiffOp LinearDiffOp::multiply(const ScalarFunction& f) { return from_coefficients({f}); }

LinearDiffOp LinearDiffOp::derivative(int k) {
  std::vector<ScalarFunction> c(static_cast<std::size_t>(k) + 1);
  c.back() = ScalarFunction::constant(1.0);
  return from_coefficients(std::move(c));
}

LinearDiffOp LinearDiffOp::conjugate(const LinearDiffOp& op, const ScalarFunction& gauge_prime) {
  if (gauge_prime.is_zero()) return op;
  return LinearDiffOp(std::make_shared<ConjugateNode>(op.node_, gauge_prime));
}

int LinearDiffOp::order() const { return node_->order(); }

Jet LinearDiffOp::apply(const Jet& f) const { return node_->apply(f); }

Complex LinearDiffOp::apply(const ScalarFunction& f, Complex q0) const {
  return node_->apply(f.eval_jet(q0, order())).value();
}

LinearDiffOp LinearDiffOp::transpose() const {
  if (auto t = std::dynamic_pointer_cast<const TransposeNode>(node_)) return LinearDiffOp(t->inner());
  return LinearDiffOp(std::make_shared<TransposeNode>(node_));
}

LinearDiffOp LinearDiffOp::compose(const LinearDiffOp& rhs) const {
  return LinearDiffOp(std::make_shared<ComposeNode>(node_, rhs.node_));
}

LinearDiffOp operator+(const LinearDiffOp& a, const LinearDiffOp& b) {
  return LinearDiffOp(std::make_shared<SumNode>(a.node_, 1.0, b.node_, 1.0));
}

LinearDiffOp operator-(const LinearDiffOp& a, const LinearDiffOp& b) {
  return LinearDiffOp(std::make_shared<SumNode>(a.node_, 1.0, b.node_, -1.0));
}

LinearDiffOp operator*(Complex s, const LinearDiffOp& a) {
  return LinearDiffOp(std::make_shared<SumNode>(a.node_, s, a.node_, 0.0));
}

LinearDiffOp operator*(const ScalarFunction& f, const LinearDiffOp& a) { return LinearDiffOp::multiply(f).compose(a); }

LinearDiffOp LinearDiffOp::operator-() const { return Complex(-1.0) * *this; }

std::vector<Jet> coefficient_jets(const LinearDiffOp& op, Complex q0, int order) {
  const int n = op.order();
  const int probe_order = order + n;
  std::vector<Jet> c;
  c.reserve(static_cast<std::size_t>(n) + 1);
  double factorial = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) factorial *= j;
    Jet probe = Jet::constant(q0, 0.0, probe_order);
    probe[j] = 1.0 / factorial;
    Jet g = op.apply(probe);
    // Applying sum_k c_k d^k to (q-q0)^j/j! gives sum_{k<=j} c_k (q-q0)^{j-k}/(j-k)!.
    double f = 1.0;
    for (int k = j - 1; k >= 0; --k) {
      const int shift = j - k;
      f *= shift;
      for (int i = order; i >= shift; --i) g[i] -= c[k][i - shift] / f;
    }
    c.push_back(std::move(g));
  }
  return c;
}

double application_magnitude(const LinearDiffOp& op, const Jet& f) {
  const auto c = coefficient_jets(op, f.base_point(), 0);
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) total += std::abs(c[k][0] * f.derivative(static_cast<int>(k)));
  return total;
}

Jet jet_determinant(const std::vector<std::vector<Jet>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return Jet();
  const Complex q0 = rows.front().front().base_point();
  const int order = rows.front().front().order();
  const std::size_t full = (std::size_t{1} << n);
  std::vector<Jet> dp(full, Jet::constant(q0, 0.0, order));
  dp[0] = Jet::constant(q0, 1.0, order);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int r = std::popcount(mask) - 1;
    Jet acc = Jet::constant(q0, 0.0, order);
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const int below = std::popcount(mask & ((std::size_t{1} << j) - 1));
      const Jet term = rows[static_cast<std::size_t>(r)][j] * dp[mask & ~(std::size_t{1} << j)];
      if ((r + below) % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    dp[mask] = std::move(acc);
  }
  return dp[full - 1];
}

Annihilator annihilator_from_basis(const std::vector<ScalarFunction>& basis, const ScalarFunction& g) {
  if (basis.empty()) throw Error(ErrorKind::BadParams, "annihilator needs a nonempty basis");
  const int n = static_cast<int>(basis.size());
  Annihilator out;
  out.op = LinearDiffOp(std::make_shared<AnnihilatorNode>(basis, g));
  for (int k = 0; k < n; ++k) {
    out.w.push_back(ScalarFunction::from_taylor("wronskian_coeff_" + std::to_string(k),
                                                [basis, k](Complex z0, int order) {
                                                  return wronskian_solve(basis, z0, order).x[k];
                                                }));
  }
  out.wronskian = ScalarFunction::from_taylor(
      "wronskian", [basis](Complex z0, int order) { return wronskian_solve(basis, z0, order).det; });
  for (int i = n - 1; i >= 0; --i) {
    out.adjoint_kernel.push_back(ScalarFunction::from_taylor(
        "adjoint_kernel_" + std::to_string(i), [basis, i, n](Complex z0, int order) {
          const Jet w = wronskian_solve(basis, z0, order).det;
          if (n == 1) return recip(w);
          std::vector<ScalarFunction> rest;
          for (int j = 0; j < n; ++j) {
            if (j != i) rest.push_back(basis[j]);
          }
          auto table = derivative_table(rest, z0, order, n - 1);
          return jet_determinant(table) / w;
        }));
  }
  return out;
}

}  // namespace nfold
