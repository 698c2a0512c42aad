#include "iontomo/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "iontomo/error.hpp"

namespace iontomo {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

double largest_singular_value(const SymplecticMap& m) {
  // Eigenvalues of M^T M.
  const double a = m.pp * m.pp + m.qp * m.qp;
  const double b = m.pp * m.pq + m.qp * m.qq;
  const double c = m.pq * m.pq + m.qq * m.qq;
  const double half_tr = 0.5 * (a + c);
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - (a * c - b * b)));
  return std::sqrt(half_tr + disc);
}

}  // namespace

bool GaussianState::is_pure() const { return std::abs(det() - 0.25) < 1e-10; }

void GaussianState::validate() const {
  if (!(sigma_pp > 0.0) || !(sigma_qq > 0.0)) {
    throw std::invalid_argument("GaussianState: variances must be positive");
  }
  if (!(det() > 0.0)) {
    throw std::invalid_argument(
        "GaussianState: dispersion matrix must have positive determinant");
  }
  if (!std::isfinite(mean_p) || !std::isfinite(mean_q) ||
      !std::isfinite(sigma_pq)) {
    throw std::invalid_argument("GaussianState: non-finite entry");
  }
}

GaussianState gaussian_from_epsilon(const ModePoint& point, cplx alpha) {
  require_valid(point);
  const cplx e = point.eps;
  const cplx de = point.deps;
  GaussianState s;
  s.sigma_qq = 0.5 * std::norm(e);
  s.sigma_pp = 0.5 * std::norm(de);
  s.sigma_pq = 0.5 * (std::conj(e) * de).real();
  s.mean_q = kSqrt2 * (alpha * std::conj(e)).real();
  s.mean_p = kSqrt2 * (alpha * std::conj(de)).real();
  return s;
}

SchroedingerCheck schroedinger_relation_check(const GaussianState& state) {
  state.validate();
  const double prod = state.sigma_qq * state.sigma_pp;
  const double r = state.sigma_pq / std::sqrt(prod);
  return {r, std::abs(prod - 0.25 / (1.0 - r * r))};
}

void CatSpec::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("CatSpec: non-finite alpha");
  }
  if (parity == Parity::kOdd && std::norm(alpha) == 0.0) {
    throw NormalizationDivergence("odd cat state requires alpha != 0");
  }
}

double MultimodeCatSpec::norm_squared() const {
  double s = 0.0;
  for (const cplx& a : alphas) s += std::norm(a);
  return s;
}

void MultimodeCatSpec::validate() const {
  if (alphas.empty()) {
    throw std::invalid_argument("MultimodeCatSpec: at least one mode required");
  }
  if (parity == Parity::kOdd && norm_squared() == 0.0) {
    throw NormalizationDivergence("odd cat state requires |A| != 0");
  }
}

double cat_normalization(double norm_squared, Parity parity) {
  // exp(a/2) / (2 sqrt(cosh a)) = 1 / sqrt(2 (1 + exp(-2a))), likewise sinh.
  if (parity == Parity::kEven) {
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * norm_squared)));
  }
  if (!(norm_squared > 0.0)) {
    throw NormalizationDivergence("N^(-) diverges at |alpha| = 0");
  }
  return 1.0 / std::sqrt(-2.0 * std::expm1(-2.0 * norm_squared));
}

GaussianPacket gaussian_packet(const ModePoint& point, cplx alpha) {
  require_valid(point);
  const cplx e = point.eps;
  const cplx de = point.deps;
  const cplx i{0.0, 1.0};
  GaussianPacket g;
  g.quad = i * de / (2.0 * e);
  g.lin = kSqrt2 * alpha / e;
  g.constant = -0.25 * std::log(kPi) - 0.5 * std::log(e) -
               0.5 * std::norm(alpha) - alpha * alpha * std::conj(e) / (2.0 * e);
  return g;
}

double hermite_function(int m, double y) {
  if (m < 0) throw std::invalid_argument("hermite_function: m must be >= 0");
  // Unnormalized recurrence on h_k = H_k / sqrt(2^k k!); the Gaussian factor
  // is applied in log space at the end.
  double prev = 0.0;
  double cur = 1.0;
  double log_scale = 0.0;
  for (int k = 0; k < m; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * y * cur -
                        std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e150) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  return cur * std::exp(log_scale - 0.5 * y * y - 0.25 * std::log(kPi));
}

cplx eval_wavefunction(const WavefunctionKind& kind, const ModePoint& point,
                       double x) {
  require_valid(point);
  return std::visit(
      [&](const auto& k) -> cplx {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, wavefunction::Ground>) {
          return gaussian_packet(point, 0.0)(x);
        } else if constexpr (std::is_same_v<K, wavefunction::Coherent>) {
          return gaussian_packet(point, k.alpha)(x);
        } else if constexpr (std::is_same_v<K, wavefunction::Number>) {
          if (k.m < 0 || k.m > kMaxNumberState) {
            throw std::invalid_argument("number state index out of range");
          }
          const cplx e = point.eps;
          const double abs_e = std::abs(e);
          const double y = x / abs_e;
          // Psi_0 with its Gaussian envelope e^{-y^2/2} divided out; the
          // envelope lives inside hermite_function.
          const cplx i{0.0, 1.0};
          const cplx exponent =
              i * point.deps * x * x / (2.0 * e) + 0.5 * y * y;
          const cplx phase = std::polar(1.0, -k.m * std::arg(e));
          return phase * hermite_function(k.m, y) * std::exp(exponent) /
                 std::sqrt(e);
        } else {
          k.spec.validate();
          const double n = cat_normalization(std::norm(k.spec.alpha), k.spec.parity);
          const cplx plus = gaussian_packet(point, k.spec.alpha)(x);
          const cplx minus = gaussian_packet(point, -k.spec.alpha)(x);
          return k.spec.parity == Parity::kEven ? n * (plus + minus)
                                                : n * (plus - minus);
        }
      },
      kind);
}

double wigner_gaussian(const GaussianState& s, double q, double p) {
  const double d = s.det();
  const double dp = p - s.mean_p;
  const double dq = q - s.mean_q;
  const double form =
      s.sigma_qq * dp * dp + s.sigma_pp * dq * dq - 2.0 * s.sigma_pq * dp * dq;
  return std::exp(-form / (2.0 * d)) / std::sqrt(d);
}

std::array<cplx, 4> wigner_cat_terms(std::span<const cplx> alphas,
                                     std::span<const PhasePoint> z) {
  if (alphas.size() != z.size()) {
    throw std::invalid_argument("wigner_cat: one phase-space point per mode");
  }
  // W_{A,B} = 2^n exp(-2 ZZ* + 2 AZ* + 2 B*Z - AB* - |A|^2/2 - |B|^2/2).
  double zz = 0.0;
  double aa = 0.0;
  cplx az{0.0, 0.0};  // A . conj(Z)
  cplx za{0.0, 0.0};  // conj(A) . Z
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const cplx zk{z[k].q / kSqrt2, z[k].p / kSqrt2};
    zz += std::norm(zk);
    aa += std::norm(alphas[k]);
    az += alphas[k] * std::conj(zk);
    za += std::conj(alphas[k]) * zk;
  }
  const double pref = std::ldexp(1.0, static_cast<int>(alphas.size()));
  auto term = [&](double sa, double sb) {
    // A -> sa A, B -> sb A; A B* = sa sb |A|^2.
    return pref * std::exp(-2.0 * zz + 2.0 * sa * az + 2.0 * sb * za -
                           sa * sb * aa - aa);
  };
  return {term(1, 1), term(1, -1), term(-1, 1), term(-1, -1)};
}

double wigner_cat(const MultimodeCatSpec& spec, std::span<const PhasePoint> z) {
  spec.validate();
  const double n = cat_normalization(spec.norm_squared(), spec.parity);
  const auto w = wigner_cat_terms(spec.alphas, z);
  const double sign = spec.parity == Parity::kEven ? 1.0 : -1.0;
  // The cross terms are complex conjugates; their sum is 2 Re.
  const cplx sum = w[0] + sign * (w[1] + w[2]) + w[3];
  return n * n * sum.real();
}

double wigner_cat(const CatSpec& spec, double q, double p) {
  const MultimodeCatSpec mm{{spec.alpha}, spec.parity};
  const PhasePoint z{q, p};
  return wigner_cat(mm, std::span<const PhasePoint>(&z, 1));
}

WignerFunction wigner_function(const GaussianState& state) {
  state.validate();
  const double half_tr = 0.5 * state.trace();
  const double lmax =
      half_tr + std::sqrt(std::max(0.0, half_tr * half_tr - state.det()));
  return {[state](double q, double p) { return wigner_gaussian(state, q, p); },
          state.mean_q, state.mean_p, 10.0 * std::sqrt(lmax)};
}

WignerFunction wigner_function(const CatSpec& spec) {
  spec.validate();
  return {[spec](double q, double p) { return wigner_cat(spec, q, p); }, 0.0,
          0.0, kSqrt2 * std::abs(spec.alpha) + 10.0 / kSqrt2};
}

double evolve_wigner(const WignerFunction& initial, const SymplecticMap& map,
                     double q, double p) {
  const auto x0 = map.initial_point(p, q);
  return initial(x0.q, x0.p);
}

WignerFunction evolved(WignerFunction initial, const SymplecticMap& map) {
  // Forward flow of the support center: (p, q) = M^{-1}(p0, q0).
  const double p0 = initial.center_p;
  const double q0 = initial.center_q;
  const double p = map.qq * p0 - map.pq * q0;
  const double q = -map.qp * p0 + map.pp * q0;
  const double radius = initial.radius * largest_singular_value(map);
  auto eval = [f = std::move(initial.eval), map](double qq, double pp) {
    const auto x0 = map.initial_point(pp, qq);
    return f(x0.q, x0.p);
  };
  return {std::move(eval), q, p, radius};
}

}  // namespace iontomo
