#include "iontomo/oscillator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "iontomo/error.hpp"

namespace iontomo {

void OscillatorParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be finite and >= 0");
  }
  if (!(omega_drive > 0.0) || !std::isfinite(omega_drive)) {
    throw std::invalid_argument("omega_drive must be finite and > 0");
  }
}

double omega_squared(double t, const OscillatorParams& params) {
  const double s = std::sin(params.omega_drive * t);
  return 1.0 + params.kappa * params.kappa * s * s;
}

namespace {

struct State {
  cplx eps;
  cplx deps;
};

State operator+(State a, State b) { return {a.eps + b.eps, a.deps + b.deps}; }
State operator*(double h, State a) { return {h * a.eps, h * a.deps}; }

State rhs(double t, const State& y, const OscillatorParams& params) {
  return {y.deps, -omega_squared(t, params) * y.eps};
}

State rk4_step(double t, const State& y, double h, const OscillatorParams& p) {
  const State k1 = rhs(t, y, p);
  const State k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1, p);
  const State k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2, p);
  const State k4 = rhs(t + h, y + h * k3, p);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class AdaptiveStepper {
 public:
  // Local error per step is held below tol * h / span, so the accumulated
  // error over the whole span stays of order tol.
  AdaptiveStepper(const OscillatorParams& params, double tol, double span,
                  std::size_t max_steps)
      : params_(params), tol_(tol), span_(span), max_steps_(max_steps) {}

  // Advances y from t0 to t1 exactly.
  State advance(double t0, double t1, State y) {
    double t = t0;
    if (h_ <= 0.0) h_ = std::min(t1 - t0, 0.05);
    while (t < t1) {
      double h = std::min(h_, t1 - t);
      const bool last = (t + h >= t1);
      if (++steps_ > max_steps_) {
        std::ostringstream msg;
        msg << "solve_epsilon: exceeded " << max_steps_ << " steps at t=" << t;
        throw SolverFailure(msg.str());
      }
      const State k1 = rhs(t, y, params_);
      const State k2 = rhs(t + c2 * h, y + (h * a21) * k1, params_);
      const State k3 =
          rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2), params_);
      const State k4 =
          rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), params_);
      const State k5 = rhs(
          t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4),
          params_);
      const State k6 = rhs(
          t + h,
          y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
          params_);
      const State y5 =
          y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = rhs(t + h, y5, params_);
      const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                             e6 * k6 + e7 * k7);

      const double local = tol_ * h / span_;
      const double scale_eps =
          local * (1.0 + std::max(std::abs(y.eps), std::abs(y5.eps)));
      const double scale_deps =
          local * (1.0 + std::max(std::abs(y.deps), std::abs(y5.deps)));
      const double ratio = std::max(std::abs(err.eps) / scale_eps,
                                    std::abs(err.deps) / scale_deps);

      if (!std::isfinite(ratio)) {
        throw SolverFailure("solve_epsilon: non-finite error estimate");
      }
      if (ratio <= 1.0) {
        t = last ? t1 : t + h;
        y = y5;
      }
      const double factor =
          ratio == 0.0 ? 5.0
                       : std::clamp(0.9 * std::pow(ratio, -0.25), 0.2, 5.0);
      // Keep the controller's estimate when the step was shortened only to
      // land on the output sample.
      if (!(last && ratio <= 1.0)) h_ = h * factor;
      const double h_min =
          16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (h_ < h_min) {
        std::ostringstream msg;
        msg << "solve_epsilon: step size underflow at t=" << t
            << " (h=" << h_ << ", tol=" << tol_
            << "); the requested tolerance is unreachable";
        throw SolverFailure(msg.str());
      }
    }
    return y;
  }

 private:
  const OscillatorParams& params_;
  double tol_;
  double span_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  double h_ = 0.0;
};

}  // namespace

EpsilonTrajectory::EpsilonTrajectory(OscillatorParams params,
                                     std::vector<double> times,
                                     std::vector<cplx> eps,
                                     std::vector<cplx> deps)
    : params_(params),
      times_(std::move(times)),
      eps_(std::move(eps)),
      deps_(std::move(deps)) {
  if (times_.size() < 2 || eps_.size() != times_.size() ||
      deps_.size() != times_.size()) {
    throw std::invalid_argument("EpsilonTrajectory: inconsistent sample sizes");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("EpsilonTrajectory: times must increase");
    }
  }
}

double EpsilonTrajectory::step() const {
  return (times_.back() - times_.front()) /
         static_cast<double>(times_.size() - 1);
}

double EpsilonTrajectory::max_wronskian_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    worst = std::max(worst, std::abs(at(i).wronskian() - 1.0));
  }
  return worst;
}

ModePoint EpsilonTrajectory::interpolate(double t) const {
  if (t <= times_.front()) return at(0);
  if (t >= times_.back()) return at(size() - 1);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return {(1.0 - w) * eps_[lo] + w * eps_[hi],
          (1.0 - w) * deps_[lo] + w * deps_[hi]};
}

ModePoint EpsilonTrajectory::propagate_to(double t) const {
  if (t < times_.front() || t > times_.back()) {
    throw std::out_of_range("EpsilonTrajectory::propagate_to: t outside grid");
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  if (k == size()) k = size() - 1;
  if (k > 0 && std::abs(times_[k - 1] - t) < std::abs(times_[k] - t)) --k;
  const double dt = t - times_[k];
  if (dt == 0.0) return at(k);
  const int substeps =
      std::max(1, static_cast<int>(std::ceil(std::abs(dt) / 2e-3)));
  return rk4_propagate(params_, times_[k], at(k), dt, substeps);
}

EpsilonTrajectory solve_epsilon(const OscillatorParams& params, double t_end,
                                std::size_t n_steps,
                                const SolverOptions& options) {
  params.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("solve_epsilon: t_end must be > 0");
  }
  if (n_steps < 2) {
    throw std::invalid_argument("solve_epsilon: n_steps must be >= 2");
  }
  if (!(options.tol > 0.0)) {
    throw std::invalid_argument("solve_epsilon: tol must be > 0");
  }

  std::vector<double> times(n_steps + 1);
  std::vector<cplx> eps(n_steps + 1);
  std::vector<cplx> deps(n_steps + 1);
  const double h = t_end / static_cast<double>(n_steps);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    times[i] = (i == n_steps) ? t_end : static_cast<double>(i) * h;
  }

  State y{cplx{1.0, 0.0}, cplx{0.0, 1.0}};
  eps[0] = y.eps;
  deps[0] = y.deps;

  if (options.method == Integrator::kFixedRK4) {
    for (std::size_t i = 1; i <= n_steps; ++i) {
      y = rk4_step(times[i - 1], y, times[i] - times[i - 1], params);
      eps[i] = y.eps;
      deps[i] = y.deps;
    }
  } else {
    AdaptiveStepper stepper(params, options.tol, t_end, options.max_steps);
    for (std::size_t i = 1; i <= n_steps; ++i) {
      y = stepper.advance(times[i - 1], times[i], y);
      eps[i] = y.eps;
      deps[i] = y.deps;
    }
  }
  return EpsilonTrajectory(params, std::move(times), std::move(eps),
                           std::move(deps));
}

ModePoint solve_epsilon_at(const OscillatorParams& params, double t,
                           double tol) {
  params.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("solve_epsilon_at: t < 0");
  if (t == 0.0) return {};
  AdaptiveStepper stepper(params, tol, t, SolverOptions{}.max_steps);
  const State y = stepper.advance(0.0, t, State{cplx{1.0, 0.0}, cplx{0.0, 1.0}});
  return {y.eps, y.deps};
}

ModePoint rk4_propagate(const OscillatorParams& params, double t0,
                        ModePoint start, double dt, int substeps) {
  State y{start.eps, start.deps};
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    y = rk4_step(t0 + i * h, y, h, params);
  }
  return {y.eps, y.deps};
}

void require_valid(const ModePoint& point) {
  const double w = point.wronskian();
  if (!(std::abs(w - 1.0) < kWronskianTolerance)) {
    std::ostringstream msg;
    msg << "invalid trajectory point: Im(conj(eps) deps) = " << w
        << " (expected 1)";
    throw InvalidTrajectory(msg.str());
  }
}

SymplecticMap symplectic_map(const ModePoint& point) {
  require_valid(point);
  const cplx e = point.eps;
  const cplx de = point.deps;
  SymplecticMap m;
  m.pp = e.real();
  m.pq = -de.real();
  m.qp = -e.imag();
  m.qq = de.imag();
  return m;
}

}  // namespace iontomo
