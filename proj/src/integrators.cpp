#include "nfold/integrators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <utility>

#include "nfold/error.hpp"

namespace nfold {

namespace {

long lattice_index(Complex x, Complex anchor) {
  return std::lround((x - anchor).real() / kCheckpointSpacing);
}

Complex lattice_point(Complex anchor, long k) { return anchor + static_cast<double>(k) * kCheckpointSpacing; }

}  // namespace

Antiderivative::Antiderivative(ScalarFunction integrand, Complex anchor, Complex anchor_value, double tolerance)
    : integrand_(std::move(integrand)), anchor_(anchor), anchor_value_(anchor_value), tolerance_(tolerance) {
  checkpoints_.emplace(0, anchor_value_);
}

Complex Antiderivative::segment(Complex a, Complex b) const {
  if (a == b) return 0.0;
  const Complex d = b - a;
  auto f = [&](double t) { return integrand_(a + t * d) * d; };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 15, tolerance_, &error);
}

Complex Antiderivative::value(Complex x) const {
  const long k = lattice_index(x, anchor_);
  const std::pair<double, double> key{x.real(), x.imag()};
  Complex base;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    const long step = k >= 0 ? 1 : -1;
    for (long j = step; k >= 0 ? j <= k : j >= k; j += step) {
      if (checkpoints_.count(j) != 0) continue;
      const Complex prev = checkpoints_.at(j - step);
      checkpoints_.emplace(j, prev + segment(lattice_point(anchor_, j - step), lattice_point(anchor_, j)));
    }
    base = checkpoints_.at(k);
  }
  const Complex v = base + segment(lattice_point(anchor_, k), x);
  std::lock_guard<std::mutex> lock(mutex_);
  if (memo_.size() < kMemoCapacity) memo_.emplace(key, v);
  return v;
}

Jet Antiderivative::taylor(Complex x0, int order) const {
  const Complex v = value(x0);
  if (order == 0) return Jet::constant(x0, v, 0);
  return integrand_.eval_jet(x0, order - 1).integrate(v);
}

ScalarFunction antiderivative(const ScalarFunction& integrand, Complex anchor, Complex anchor_value) {
  return ScalarFunction::primitive(std::make_shared<Antiderivative>(integrand, anchor, anchor_value));
}

TaylorOdeSolution::TaylorOdeSolution(std::string name, Rhs rhs, Complex anchor, Complex y_anchor, Complex slope_hint)
    : name_(std::move(name)), rhs_(std::move(rhs)), anchor_(anchor) {
  const Jet j = local_jet(anchor, y_anchor, slope_hint, 1);
  checkpoints_.emplace(0, State{y_anchor, j[1]});
}

Jet TaylorOdeSolution::local_jet(Complex q0, Complex y0, Complex slope_hint, int order) const {
  std::vector<Complex> y{y0};
  y.reserve(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k < order; ++k) {
    const Jet qj = Jet::variable(q0, k);
    const Jet yj(q0, y);
    Jet r;
    try {
      r = rhs_(qj, yj, slope_hint);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularJet) {
        throw Error(ErrorKind::SingularTurningPoint, name_ + ": right-hand side singular near q = " +
                                                         std::to_string(q0.real()) + (q0.imag() != 0.0 ? " (complex)" : ""));
      }
      throw;
    }
    y.push_back(r[k] / static_cast<double>(k + 1));
  }
  return Jet(q0, std::move(y));
}

TaylorOdeSolution::State TaylorOdeSolution::advance(Complex from, const State& s, Complex to) const {
  Complex pos = from;
  State state = s;
  for (int iter = 0; pos != to; ++iter) {
    if (iter > 100000) throw Error(ErrorKind::SingularTurningPoint, name_ + ": step size collapsed");
    const Jet j = local_jet(pos, state.y, state.slope, kStepOrder);
    const double scale = std::max(1.0, std::abs(j[0]));
    double radius = std::numeric_limits<double>::infinity();
    for (int k : {kStepOrder - 1, kStepOrder}) {
      const double c = std::abs(j[k]);
      if (c > 0.0) radius = std::min(radius, std::pow(scale / c, 1.0 / k));
    }
    const Complex remaining = to - pos;
    double h = 0.2 * radius;
    Complex next = to;
    if (h < std::abs(remaining)) {
      if (h < 1e-10 * std::max(1.0, std::abs(pos))) {
        throw Error(ErrorKind::SingularTurningPoint, name_ + ": step size collapsed near a singular point");
      }
      next = pos + remaining / std::abs(remaining) * h;
    }
    const Complex dq = next - pos;
    Complex y{}, slope{};
    for (int k = kStepOrder; k >= 0; --k) y = y * dq + j[k];
    for (int k = kStepOrder; k >= 1; --k) slope = slope * dq + static_cast<double>(k) * j[k];
    state = State{y, slope};
    pos = next;
  }
  return state;
}

std::pair<Complex, TaylorOdeSolution::State> TaylorOdeSolution::nearest_checkpoint(Complex x) const {
  const long k = lattice_index(x, anchor_);
  std::lock_guard<std::mutex> lock(mutex_);
  const long step = k >= 0 ? 1 : -1;
  for (long j = step; k >= 0 ? j <= k : j >= k; j += step) {
    if (checkpoints_.count(j) != 0) continue;
    const State prev = checkpoints_.at(j - step);
    checkpoints_.emplace(j, advance(lattice_point(anchor_, j - step), prev, lattice_point(anchor_, j)));
  }
  return {lattice_point(anchor_, k), checkpoints_.at(k)};
}

Jet TaylorOdeSolution::taylor(Complex x0, int order) const {
  const std::pair<double, double> key{x0.real(), x0.imag()};
  State at;
  bool cached = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (const auto it = memo_.find(key); it != memo_.end()) {
      at = it->second;
      cached = true;
    }
  }
  if (!cached) {
    auto [cp, state] = nearest_checkpoint(x0);
    at = advance(cp, state, x0);
    std::lock_guard<std::mutex> lock(mutex_);
    if (memo_.size() < kMemoCapacity) memo_.emplace(key, at);
  }
  return local_jet(x0, at.y, at.slope, order);
}

}  // namespace nfold
