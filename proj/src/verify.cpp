#include "iontomo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "iontomo/error.hpp"

namespace iontomo {

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["grid"] = grid;
  j["probes"] = probes;
  j["h_t"] = h_t;
  j["h_mu"] = h_mu;
  j["h_nu"] = h_nu;
  j["max_abs_residual"] = max_abs_residual;
  j["rms_residual"] = rms_residual;
  j["refined_max_abs_residual"] = refined_max_abs_residual;
  j["order"] = order ? nlohmann::json(*order) : nlohmann::json(nullptr);
  j["thresholds"] = {{"max_residual", thresholds.max_residual},
                     {"order_min", thresholds.order_min},
                     {"order_max", thresholds.order_max}};
  j["passed"] = passed;
  return j;
}

namespace {

struct Residuals {
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
};

Residuals pde_pass(const TomogramEvolutionFn& fn, const OscillatorParams& params,
                   const ProbeGrid& probe, double h) {
  Residuals r;
  double sq = 0.0;
  for (std::size_t it = 0; it < probe.t.count; ++it) {
    const double t = probe.t.at(it);
    const double w2 = omega_squared(t, params);
    for (std::size_t ix = 0; ix < probe.X.count; ++ix) {
      const double X = probe.X.at(ix);
      for (std::size_t im = 0; im < probe.mu.count; ++im) {
        const double mu = probe.mu.at(im);
        for (std::size_t in = 0; in < probe.nu.count; ++in) {
          const double nu = probe.nu.at(in);
          for (double delta : probe.deltas) {
            const double wt =
                (fn(X, mu, nu, delta, t + h) - fn(X, mu, nu, delta, t - h)) /
                (2.0 * h);
            const double wnu =
                (fn(X, mu, nu + h, delta, t) - fn(X, mu, nu - h, delta, t)) /
                (2.0 * h);
            const double wmu =
                (fn(X, mu + h, nu, delta, t) - fn(X, mu - h, nu, delta, t)) /
                (2.0 * h);
            const double res = wt - mu * wnu + w2 * nu * wmu;
            if (!std::isfinite(res)) {
              throw NumericalError("pde_residual: non-finite evaluator output");
            }
            r.max_abs = std::max(r.max_abs, std::abs(res));
            sq += res * res;
            ++r.count;
          }
        }
      }
    }
  }
  r.rms = std::sqrt(sq / static_cast<double>(r.count));
  return r;
}

std::string describe(const ProbeGrid& p) {
  std::ostringstream s;
  auto axis = [&](const char* name, const Axis& a) {
    s << name << "[" << a.min << "," << a.max << "]x" << a.count << " ";
  };
  axis("X", p.X);
  axis("mu", p.mu);
  axis("nu", p.nu);
  axis("t", p.t);
  s << "delta{";
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    s << (i ? "," : "") << p.deltas[i];
  }
  s << "}";
  return s.str();
}

void finish(ResidualReport& rep, double coarse, double refined) {
  const auto& th = rep.thresholds;
  if (coarse > th.noise_floor && refined > 0.0) {
    rep.order = std::log2(coarse / refined);
  }
  const bool order_ok =
      !rep.order || (*rep.order >= th.order_min && *rep.order <= th.order_max);
  rep.passed = std::isfinite(rep.max_abs_residual) &&
               rep.max_abs_residual < th.max_residual && order_ok;
}

}  // namespace

ResidualReport pde_residual(const TomogramEvolutionFn& fn,
                            const OscillatorParams& params,
                            const ProbeGrid& probe, double h,
                            const ResidualThresholds& thresholds) {
  params.validate();
  if (!(h > 0.0)) throw std::invalid_argument("pde_residual: h must be > 0");
  if (probe.t.min - h < 0.0) {
    throw std::invalid_argument("pde_residual: probe times must exceed h");
  }
  const Residuals coarse = pde_pass(fn, params, probe, h);
  const Residuals fine = pde_pass(fn, params, probe, 0.5 * h);
  ResidualReport rep;
  rep.name = "evolution_equation";
  rep.grid = describe(probe);
  rep.probes = coarse.count;
  rep.h_t = rep.h_mu = rep.h_nu = h;
  rep.max_abs_residual = coarse.max_abs;
  rep.rms_residual = coarse.rms;
  rep.refined_max_abs_residual = fine.max_abs;
  rep.thresholds = thresholds;
  finish(rep, coarse.max_abs, fine.max_abs);
  return rep;
}

TomogramEvolutionFn replacement_evolution(TomogramFn initial,
                                          EpsilonTrajectory trajectory) {
  return [fn = std::move(initial), traj = std::move(trajectory)](
             double X, double mu, double nu, double delta, double t) {
    return evolve_tomogram(fn, traj.propagate_to(t), {X, mu, nu, delta});
  };
}

TomogramEvolutionFn frozen_mu_evolution(TomogramFn initial,
                                        EpsilonTrajectory trajectory) {
  return [fn = std::move(initial), traj = std::move(trajectory)](
             double X, double mu, double nu, double delta, double t) {
    const SymplecticMap map = symplectic_map(traj.propagate_to(t));
    const auto f = map.evolve_frame(mu, nu);
    return fn(X - delta, mu, f.nu);
  };
}

namespace {

Residuals moment_pass(const std::vector<GaussianState>& m,
                      const EpsilonTrajectory& traj, std::size_t stride,
                      std::size_t first, std::size_t last) {
  Residuals r;
  double sq = 0.0;
  const double h = traj.step() * static_cast<double>(stride);
  for (std::size_t i = first; i <= last; ++i) {
    const auto& a = m[i - stride];
    const auto& b = m[i + stride];
    const auto& c = m[i];
    const double w2 = omega_squared(traj.times()[i], traj.params());
    const double res[5] = {
        (b.mean_q - a.mean_q) / (2 * h) - c.mean_p,
        (b.mean_p - a.mean_p) / (2 * h) + w2 * c.mean_q,
        (b.sigma_qq - a.sigma_qq) / (2 * h) - 2.0 * c.sigma_pq,
        (b.sigma_pq - a.sigma_pq) / (2 * h) - (c.sigma_pp - w2 * c.sigma_qq),
        (b.sigma_pp - a.sigma_pp) / (2 * h) + 2.0 * w2 * c.sigma_pq,
    };
    for (double x : res) {
      r.max_abs = std::max(r.max_abs, std::abs(x));
      sq += x * x;
      ++r.count;
    }
  }
  r.rms = std::sqrt(sq / static_cast<double>(r.count));
  return r;
}

}  // namespace

ResidualReport moment_odes_check(const EpsilonTrajectory& traj, cplx alpha,
                                 const ResidualThresholds& thresholds) {
  if (traj.size() < 5) {
    throw std::invalid_argument("moment_odes_check: need at least 5 samples");
  }
  std::vector<GaussianState> moments(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    moments[i] = gaussian_from_epsilon(traj.at(i), alpha);
  }
  const std::size_t first = 2;
  const std::size_t last = traj.size() - 3;
  const Residuals fine = moment_pass(moments, traj, 1, first, last);
  const Residuals coarse = moment_pass(moments, traj, 2, first, last);

  ResidualReport rep;
  rep.name = "moment_odes";
  std::ostringstream g;
  g << "t[0," << traj.t_end() << "]x" << traj.size() << " kappa="
    << traj.params().kappa << " Omega=" << traj.params().omega_drive
    << " alpha=(" << alpha.real() << "," << alpha.imag() << ")";
  rep.grid = g.str();
  rep.probes = fine.count;
  rep.h_t = traj.step();
  rep.max_abs_residual = fine.max_abs;
  rep.rms_residual = fine.rms;
  rep.refined_max_abs_residual = fine.max_abs;
  rep.thresholds = thresholds;
  finish(rep, coarse.max_abs, fine.max_abs);
  return rep;
}

namespace {

struct RawMoments {
  double norm, q, qq, p, pp, qp;
};

RawMoments integrate_moments(const GaussianPacket& psi, double lo, double hi,
                             std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n - 1);
  RawMoments m{0, 0, 0, 0, 0, 0};
  const cplx minus_i{0.0, -1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double x = lo + static_cast<double>(k) * h;
    const double w = (k == 0 || k + 1 == n) ? 0.5 * h : h;
    const cplx f = psi(x);
    const cplx pf = minus_i * psi.derivative(x);  // p Psi
    const double dens = std::norm(f);
    m.norm += w * dens;
    m.q += w * x * dens;
    m.qq += w * x * x * dens;
    m.p += w * (std::conj(f) * pf).real();
    m.pp += w * std::norm(pf);
    m.qp += w * (std::conj(f) * x * pf).real();
  }
  return m;
}

GaussianState to_state(const RawMoments& m) {
  GaussianState s;
  s.mean_q = m.q / m.norm;
  s.mean_p = m.p / m.norm;
  s.sigma_qq = m.qq / m.norm - s.mean_q * s.mean_q;
  s.sigma_pp = m.pp / m.norm - s.mean_p * s.mean_p;
  s.sigma_pq = m.qp / m.norm - s.mean_q * s.mean_p;
  return s;
}

}  // namespace

GaussianState wavefunction_moment_oracle(const WavefunctionKind& kind,
                                         const ModePoint& point) {
  cplx alpha{0.0, 0.0};
  if (const auto* c = std::get_if<wavefunction::Coherent>(&kind)) {
    alpha = c->alpha;
  } else if (!std::holds_alternative<wavefunction::Ground>(kind)) {
    throw std::invalid_argument(
        "wavefunction_moment_oracle: ground and coherent states only");
  }
  const GaussianPacket psi = gaussian_packet(point, alpha);
  const double width = std::abs(point.eps);
  const double half = (std::sqrt(2.0) * std::abs(alpha) + 12.0) * width;
  const GaussianState a = to_state(integrate_moments(psi, -half, half, 4001));
  const GaussianState b = to_state(integrate_moments(psi, -half, half, 8001));
  const double diff = std::max(
      {std::abs(a.mean_q - b.mean_q), std::abs(a.mean_p - b.mean_p),
       std::abs(a.sigma_qq - b.sigma_qq), std::abs(a.sigma_pp - b.sigma_pp),
       std::abs(a.sigma_pq - b.sigma_pq)});
  if (!(diff < 1e-10)) {
    std::ostringstream msg;
    msg << "wavefunction_moment_oracle: quadrature not converged (diff " << diff
        << ")";
    throw NumericalError(msg.str());
  }
  return b;
}

}  // namespace iontomo
