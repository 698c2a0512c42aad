#include "config.hpp"

#include <fstream>
#include <sstream>

namespace iontomo::cli {

namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed so leftovers can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail("'" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  cplx complex(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    fail("'" + key + "' must be a number or [re, im]");
  }
  cplx complex(const std::string& key, cplx fallback) {
    return has(key) ? complex(key) : fallback;
  }

  Reader object(const std::string& key) { return Reader(raw(key), where_ + "." + key); }

  Axis axis(const std::string& key) {
    Reader r = object(key);
    Axis a{r.number("min"), r.number("max"), r.count("count")};
    r.finish();
    try {
      a.validate();
    } catch (const std::invalid_argument& e) {
      fail(key + ": " + e.what());
    }
    return a;
  }
  Axis axis(const std::string& key, const Axis& fallback) {
    return has(key) ? axis(key) : fallback;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) fail("unknown key '" + item.key() + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(where_ + ": " + what);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

CommonOptions read_common(Reader& r, const Overrides& o, bool out_required) {
  CommonOptions c;
  std::string out = r.string("out", "");
  if (o.out) out = *o.out;
  if (out.empty() && out_required) r.fail("an output path is required (out or --out)");
  c.out = out;
  std::string fmt = r.string("format", "csv");
  if (o.format) fmt = *o.format;
  try {
    c.format = io::parse_format(fmt);
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  c.plot = r.boolean("plot", false) || o.plot;
  c.serial = r.boolean("serial", false) || o.serial;
  if (r.has("seed")) {
    const json& s = r.raw("seed");
    if (!s.is_number_integer()) r.fail("'seed' must be an integer");
    c.seed = s.get<long long>();
  }
  if (o.seed) c.seed = o.seed;
  return c;
}

OscillatorParams read_params(Reader& r) {
  OscillatorParams p{r.number("kappa"), r.number("omega")};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return p;
}

StateSpec read_state(Reader r) {
  StateSpec s;
  const std::string type = r.string("type");
  if (type == "gaussian") {
    s.kind = StateSpec::Kind::kGaussian;
    s.alpha = r.complex("alpha", {0.0, 0.0});
  } else if (type == "cat") {
    s.kind = StateSpec::Kind::kCat;
    s.alpha = r.complex("alpha");
    const std::string parity = r.string("parity", "even");
    if (parity == "even") {
      s.parity = Parity::kEven;
    } else if (parity == "odd") {
      s.parity = Parity::kOdd;
    } else {
      r.fail("parity must be 'even' or 'odd'");
    }
    if (s.parity == Parity::kOdd && std::norm(s.alpha) == 0.0) {
      r.fail("odd cat state requires alpha != 0");
    }
  } else if (type == "number") {
    s.kind = StateSpec::Kind::kNumber;
    const std::size_t m = r.count("m");
    if (m > static_cast<std::size_t>(kMaxNumberState)) {
      r.fail("number state index m must be <= 200");
    }
    s.m = static_cast<int>(m);
  } else {
    r.fail("state type must be 'gaussian', 'cat' or 'number'");
  }
  r.finish();
  return s;
}

Evolution read_evolution(Reader& r) {
  Evolution e;
  e.t = r.number("t", 0.0);
  if (!(e.t >= 0.0)) r.fail("'t' must be >= 0");
  if (r.has("kappa") || r.has("omega") || e.t > 0.0) e.params = read_params(r);
  return e;
}

}  // namespace

TomogramFn StateSpec::initial_tomogram() const {
  switch (kind) {
    case Kind::kGaussian:
      return tomogram_function(gaussian_from_epsilon({}, alpha));
    case Kind::kCat:
      return tomogram_function(CatSpec{alpha, parity});
    case Kind::kNumber:
      return tomogram_number_function(m);
  }
  throw std::logic_error("unreachable");
}

WignerFunction StateSpec::initial_wigner() const {
  switch (kind) {
    case Kind::kGaussian:
      return wigner_function(gaussian_from_epsilon({}, alpha));
    case Kind::kCat:
      return wigner_function(CatSpec{alpha, parity});
    case Kind::kNumber:
      throw ConfigError("no Wigner function is available for number states");
  }
  throw std::logic_error("unreachable");
}

std::optional<ModePoint> Evolution::mode_point() const {
  if (t == 0.0 || !params) return std::nullopt;
  return solve_epsilon_at(*params, t, 1e-12);
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

EpsilonConfig parse_epsilon(const json& j, const Overrides& o) {
  Reader r(j, "epsilon");
  EpsilonConfig c;
  c.common = read_common(r, o, true);
  c.params = read_params(r);
  c.t_end = r.number("t_end");
  if (!(c.t_end > 0.0)) r.fail("'t_end' must be > 0");
  c.n_steps = r.count("n_steps", 1000);
  if (c.n_steps < 2) r.fail("'n_steps' must be >= 2");
  c.tol = r.number("tol", 1e-10);
  if (!(c.tol > 0.0)) r.fail("'tol' must be > 0");
  if (c.common.format != io::Format::kCsv) r.fail("epsilon output is CSV only");
  r.finish();
  return c;
}

TomogramConfig parse_tomogram(const json& j, const Overrides& o) {
  Reader r(j, "tomogram");
  TomogramConfig c;
  c.common = read_common(r, o, true);
  c.state = read_state(r.object("state"));
  c.evolution = read_evolution(r);
  const std::string mode = r.string("mode", "sinogram");
  if (mode == "sinogram") {
    c.mode = TomogramConfig::Mode::kSinogram;
    if (r.has("sinogram")) {
      Reader s = r.object("sinogram");
      c.phi_count = s.count("phi_count", c.phi_count);
      if (c.phi_count == 0) s.fail("'phi_count' must be > 0");
      c.x_axis = s.axis("x", c.x_axis);
      s.finish();
    }
  } else if (mode == "samples") {
    c.mode = TomogramConfig::Mode::kSamples;
    if (c.common.format != io::Format::kCsv) r.fail("samples output is CSV only");
    const json& arr = r.raw("samples");
    if (!arr.is_array() || arr.empty()) r.fail("'samples' must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader s(arr[i], "tomogram.samples[" + std::to_string(i) + "]");
      TomogramQuery q{s.number("X"), s.number("mu"), s.number("nu"),
                      s.number("delta", 0.0)};
      if (q.mu == 0.0 && q.nu == 0.0) s.fail("degenerate frame (mu, nu) = (0, 0)");
      s.finish();
      c.samples.push_back(q);
    }
  } else {
    r.fail("mode must be 'sinogram' or 'samples'");
  }
  r.finish();
  return c;
}

ReconstructConfig parse_reconstruct(const json& j, const Overrides& o) {
  Reader r(j, "reconstruct");
  ReconstructConfig c;
  c.common = read_common(r, o, true);
  c.input = r.string("input");
  if (!std::filesystem::exists(c.input)) {
    r.fail("input file " + c.input.string() + " does not exist");
  }
  const std::string method = r.string("method", "fbp");
  if (method == "fbp") {
    c.method = ReconstructConfig::Method::kFbp;
  } else if (method == "fourier") {
    c.method = ReconstructConfig::Method::kFourier;
  } else {
    r.fail("method must be 'fbp' or 'fourier'");
  }
  if (r.has("grid")) {
    Reader g = r.object("grid");
    c.grid.q = g.axis("q", c.grid.q);
    c.grid.p = g.axis("p", c.grid.p);
    g.finish();
  }
  if (r.has("inversion")) {
    Reader v = r.object("inversion");
    c.inversion.frame_cutoff = v.number("frame_cutoff", c.inversion.frame_cutoff);
    c.inversion.frame_points = v.count("frame_points", c.inversion.frame_points);
    c.inversion.y_cutoff = v.number("y_cutoff", c.inversion.y_cutoff);
    c.inversion.y_points = v.count("y_points", c.inversion.y_points);
    if (!(c.inversion.frame_cutoff > 0) || !(c.inversion.y_cutoff > 0) ||
        c.inversion.frame_points < 3 || c.inversion.y_points < 3) {
      v.fail("invalid discretization");
    }
    v.finish();
  }
  c.min_angles = r.count("min_angles", c.min_angles);
  c.normalization_tolerance =
      r.number("normalization_tolerance", c.normalization_tolerance);
  c.inversion.normalization_tolerance = c.normalization_tolerance;
  if (r.has("reference")) {
    Reader ref = r.object("reference");
    c.reference = read_state(ref.object("state"));
    c.reference_evolution = read_evolution(ref);
    ref.finish();
    if (c.reference->kind == StateSpec::Kind::kNumber) {
      r.fail("reference: number states have no analytic Wigner function");
    }
  }
  if (r.has("max_l2_error")) {
    c.max_l2_error = r.number("max_l2_error");
    if (!c.reference) r.fail("'max_l2_error' requires a reference");
  }
  const std::string report = r.string("report", "");
  c.report = report.empty() ? std::filesystem::path(c.common.out.string() + ".report.json")
                            : std::filesystem::path(report);
  r.finish();
  return c;
}

VerifyConfig parse_verify(const json& j, const Overrides& o) {
  Reader r(j, "verify");
  VerifyConfig c;
  c.common = read_common(r, o, false);
  const std::string suite = r.string("suite", "default");
  if (suite == "default") {
    c.suite = VerifyConfig::Suite::kDefault;
  } else if (suite == "negative-control") {
    c.suite = VerifyConfig::Suite::kNegativeControl;
  } else {
    r.fail("suite must be 'default' or 'negative-control'");
  }
  c.params = read_params(r);
  c.h = r.number("h", c.h);
  c.moment_h = r.number("moment_h", c.moment_h);
  c.moment_t_end = r.number("moment_t_end", c.moment_t_end);
  if (!(c.h > 0) || !(c.moment_h > 0) || !(c.moment_t_end > 4 * c.moment_h)) {
    r.fail("step sizes must be positive and moment_t_end > 4 moment_h");
  }
  c.gaussian_alpha = r.complex("gaussian_alpha", c.gaussian_alpha);
  c.cat_alpha = r.complex("cat_alpha", c.cat_alpha);
  if (r.has("probe")) {
    Reader p = r.object("probe");
    c.probe.X = p.axis("X", c.probe.X);
    c.probe.mu = p.axis("mu", c.probe.mu);
    c.probe.nu = p.axis("nu", c.probe.nu);
    c.probe.t = p.axis("t", c.probe.t);
    if (p.has("deltas")) {
      const json& d = p.raw("deltas");
      if (!d.is_array() || d.empty()) p.fail("'deltas' must be a non-empty array");
      c.probe.deltas.clear();
      for (const auto& v : d) {
        if (!v.is_number()) p.fail("'deltas' entries must be numbers");
        c.probe.deltas.push_back(v.get<double>());
      }
    }
    p.finish();
  }
  if (c.probe.t.min - c.h <= 0.0) r.fail("probe times must exceed h");
  r.finish();
  return c;
}

}  // namespace iontomo::cli
