#pragma once

// Gaussian (squeezed and correlated) and even/odd coherent states of the ion.
//
// Wigner functions use the convention that the phase-space integral is 2 pi
// per mode, e.g. the vacuum is W(q, p) = 2 exp(-q^2 - p^2).

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "iontomo/oscillator.hpp"

namespace iontomo {

/// Quadrature means and dispersion matrix of a Gaussian state.
struct GaussianState {
  double mean_p = 0.0;
  double mean_q = 0.0;
  double sigma_pp = 0.5;
  double sigma_qq = 0.5;
  double sigma_pq = 0.0;

  double trace() const { return sigma_pp + sigma_qq; }
  double det() const { return sigma_pp * sigma_qq - sigma_pq * sigma_pq; }
  bool is_pure() const;
  /// Throws std::invalid_argument unless sigma_pp, sigma_qq > 0 and det > 0.
  void validate() const;

  static GaussianState vacuum() { return {}; }
};

/// Pure state generated by eps(t) from the coherent state with A-eigenvalue
/// alpha (alpha = 0 gives the squeezed and correlated ground state):
///
///   sigma_qq = |eps|^2 / 2,  sigma_pp = |eps'|^2 / 2,
///   sigma_pq = Re(conj(eps) eps') / 2,
///   <q> = sqrt2 Re(alpha conj(eps)),  <p> = sqrt2 Re(alpha conj(eps')).
GaussianState gaussian_from_epsilon(const ModePoint& point, cplx alpha);

struct SchroedingerCheck {
  double r;         // sigma_pq / sqrt(sigma_qq sigma_pp)
  double residual;  // |sigma_qq sigma_pp - (1/4) / (1 - r^2)|
};

SchroedingerCheck schroedinger_relation_check(const GaussianState& state);

enum class Parity { kEven, kOdd };

struct CatSpec {
  cplx alpha{0.0, 0.0};
  Parity parity = Parity::kEven;

  void validate() const;
};

struct MultimodeCatSpec {
  std::vector<cplx> alphas;
  Parity parity = Parity::kEven;

  double norm_squared() const;
  void validate() const;
};

/// N^(+-) = exp(|A|^2/2) / (2 sqrt(cosh|A|^2 or sinh|A|^2)), evaluated
/// without overflow. Throws NormalizationDivergence for odd parity at A = 0.
double cat_normalization(double norm_squared, Parity parity);

// ---------------------------------------------------------------------------
// Wavefunctions

namespace wavefunction {
struct Ground {};
struct Coherent {
  cplx alpha;
};
struct Number {
  int m;
};
struct Cat {
  CatSpec spec;
};
}  // namespace wavefunction

using WavefunctionKind =
    std::variant<wavefunction::Ground, wavefunction::Coherent,
                 wavefunction::Number, wavefunction::Cat>;

/// Largest supported number-state index.
inline constexpr int kMaxNumberState = 200;

/// Psi(x, t) of the selected state for the mode point (eps, eps') at time t.
cplx eval_wavefunction(const WavefunctionKind& kind, const ModePoint& point,
                       double x);

/// Psi(x) = exp(quad x^2 + lin x + constant) for ground and coherent states.
struct GaussianPacket {
  cplx quad;
  cplx lin;
  cplx constant;

  cplx operator()(double x) const {
    return std::exp(quad * x * x + lin * x + constant);
  }
  /// dPsi/dx, from the closed-form exponent.
  cplx derivative(double x) const { return (2.0 * quad * x + lin) * (*this)(x); }
};

/// Closed-form exponent of a ground or coherent wavefunction.
GaussianPacket gaussian_packet(const ModePoint& point, cplx alpha);

/// Normalized oscillator eigenfunction pi^(-1/4) H_m(y) e^(-y^2/2) /
/// sqrt(2^m m!), via the three-term recurrence with running rescaling.
double hermite_function(int m, double y);

// ---------------------------------------------------------------------------
// Wigner functions

double wigner_gaussian(const GaussianState& state, double q, double p);

struct PhasePoint {
  double q;
  double p;
};

/// Four building blocks W_{A,A}, W_{A,-A}, W_{-A,A}, W_{-A,-A} at one point.
std::array<cplx, 4> wigner_cat_terms(std::span<const cplx> alphas,
                                     std::span<const PhasePoint> z);

/// Multimode even/odd coherent-state Wigner function at z (one (q, p) pair per
/// mode). Real; negative values signal nonclassicality.
double wigner_cat(const MultimodeCatSpec& spec, std::span<const PhasePoint> z);
double wigner_cat(const CatSpec& spec, double q, double p);

/// A single-mode Wigner function with a disc that contains its support.
struct WignerFunction {
  std::function<double(double q, double p)> eval;
  double center_q = 0.0;
  double center_p = 0.0;
  double radius = 10.0;

  double operator()(double q, double p) const { return eval(q, p); }
};

WignerFunction wigner_function(const GaussianState& state);
WignerFunction wigner_function(const CatSpec& spec);

/// W(p, q, t) = W0(p0(p, q), q0(p, q)) for the quadratic trap Hamiltonian
/// (no linear term, so the shift vector is zero).
double evolve_wigner(const WignerFunction& initial, const SymplecticMap& map,
                     double q, double p);

/// Time-t Wigner function as a new evaluator; the support disc is carried
/// along by the classical flow.
WignerFunction evolved(WignerFunction initial, const SymplecticMap& map);

}  // namespace iontomo
