#pragma once

// JSON run configuration. Every command validates its whole configuration
// (unknown keys, types, ranges) before any computation starts.

#include <complex>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "iontomo/grid.hpp"
#include "iontomo/io.hpp"
#include "iontomo/oscillator.hpp"
#include "iontomo/states.hpp"
#include "iontomo/tomography.hpp"
#include "iontomo/verify.hpp"

namespace iontomo::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Options shared by every subcommand.
struct CommonOptions {
  std::filesystem::path out;
  io::Format format = io::Format::kCsv;
  bool plot = false;
  bool serial = false;
  std::optional<long long> seed;  // reserved, validated only
};

struct StateSpec {
  enum class Kind { kGaussian, kCat, kNumber } kind = Kind::kGaussian;
  cplx alpha{0.0, 0.0};
  Parity parity = Parity::kEven;
  int m = 0;

  /// Tomogram of the state at t = 0.
  TomogramFn initial_tomogram() const;
  /// Wigner function at t = 0 (not available for number states).
  WignerFunction initial_wigner() const;
};

/// State of the ion at time t under the trap (kappa, Omega).
struct Evolution {
  std::optional<OscillatorParams> params;
  double t = 0.0;

  /// eps(t), eps'(t); nullopt at t = 0.
  std::optional<ModePoint> mode_point() const;
};

struct EpsilonConfig {
  CommonOptions common;
  OscillatorParams params;
  double t_end = 0.0;
  std::size_t n_steps = 1000;
  double tol = 1e-10;
};

struct TomogramConfig {
  CommonOptions common;
  StateSpec state;
  Evolution evolution;
  enum class Mode { kSinogram, kSamples } mode = Mode::kSinogram;
  std::size_t phi_count = 180;
  Axis x_axis{-8.0, 8.0, 257};
  std::vector<TomogramQuery> samples;
};

struct ReconstructConfig {
  CommonOptions common;
  std::filesystem::path input;
  enum class Method { kFbp, kFourier } method = Method::kFbp;
  GridSpec grid;
  InversionOptions inversion;
  std::size_t min_angles = 16;
  std::optional<StateSpec> reference;
  Evolution reference_evolution;
  std::optional<double> max_l2_error;
  double normalization_tolerance = 5e-2;
  std::filesystem::path report;
};

struct VerifyConfig {
  CommonOptions common;
  enum class Suite { kDefault, kNegativeControl } suite = Suite::kDefault;
  OscillatorParams params;
  double h = 1e-3;
  double moment_h = 1e-4;
  double moment_t_end = 2.0;
  ProbeGrid probe;
  cplx gaussian_alpha{1.0, 0.5};
  cplx cat_alpha{1.0, 0.0};
};

/// Command-line overrides applied on top of the JSON document.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool plot = false;
  bool serial = false;
  std::optional<long long> seed;
};

nlohmann::json load_json(const std::filesystem::path& path);

EpsilonConfig parse_epsilon(const nlohmann::json& j, const Overrides& o);
TomogramConfig parse_tomogram(const nlohmann::json& j, const Overrides& o);
ReconstructConfig parse_reconstruct(const nlohmann::json& j, const Overrides& o);
VerifyConfig parse_verify(const nlohmann::json& j, const Overrides& o);

}  // namespace iontomo::cli
