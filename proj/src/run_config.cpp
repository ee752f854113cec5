#include "ropesway/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ropesway/errors.hpp"

namespace ropesway {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      v + "'");
  }
}

long parse_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_number(key, trim(item)));
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::vector<double> xs(v.data(), v.data() + v.size());
  return fmt_list(xs);
}

Eigen::VectorXd to_vec(const std::vector<double>& xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

const char* mode_name(ControllerMode m) {
  switch (m) {
    case ControllerMode::none: return "none";
    case ControllerMode::passive: return "passive";
    case ControllerMode::thm1: return "thm1";
    case ControllerMode::thm2: return "thm2";
  }
  return "none";
}

ControllerMode mode_from(const std::string& key, const std::string& v) {
  if (v == "none") return ControllerMode::none;
  if (v == "passive") return ControllerMode::passive;
  if (v == "thm1") return ControllerMode::thm1;
  if (v == "thm2") return ControllerMode::thm2;
  throw ConfigError("config key '" + key +
                    "': expected none|passive|thm1|thm2, got '" + v + "'");
}

// Applies one key. Returns false when the key is unknown.
bool apply_key(RunConfig& cfg, const std::string& key, const std::string& v) {
  ScenarioSpec& s = cfg.spec;
  RopeParams& p = s.params;
  if (key == "scenario") return true;  // handled by the caller re-basing
  if (key == "out.dir") { cfg.out_dir = v; return true; }

  if (key == "rope.rho") { p.rho = parse_number(key, v); return true; }
  if (key == "rope.l") { p.l = parse_number(key, v); return true; }
  if (key == "rope.H") { p.H = parse_number(key, v); return true; }
  if (key == "rope.c_p") { p.c_p = parse_number(key, v); return true; }
  if (key == "rope.m_e") { p.m_e = parse_number(key, v); return true; }
  if (key == "rope.M_cs") { p.M_cs = parse_number(key, v); return true; }
  if (key == "rope.g") { p.g = parse_number(key, v); return true; }
  if (key == "rope.n_ropes") {
    p.n_ropes = static_cast<int>(parse_integer(key, v));
    return true;
  }
  if (key == "rope.l_dp") { p.l_dp = parse_number(key, v); return true; }
  if (key == "rope.car_mass_share") {
    if (v == "full") p.car_mass_share = CarMassShare::full;
    else if (v == "divided_by_n") p.car_mass_share = CarMassShare::divided_by_n;
    else
      throw ConfigError("config key '" + key +
                        "': expected full|divided_by_n, got '" + v + "'");
    return true;
  }

  if (key == "modes.count") {
    const long n = parse_integer(key, v);
    if (n < 1) throw ConfigError("config key 'modes.count': must be >= 1");
    const int old = s.modes;
    s.modes = static_cast<int>(n);
    // keep initial conditions consistent under resizing
    if (s.options.q0.size() == old) {
      Eigen::VectorXd q0 = Eigen::VectorXd::Zero(s.modes);
      Eigen::VectorXd qd0 = Eigen::VectorXd::Zero(s.modes);
      for (int i = 0; i < std::min(old, s.modes); ++i) {
        q0(i) = s.options.q0(i);
        qd0(i) = s.options.qd0(i);
      }
      s.options.q0 = q0;
      s.options.qd0 = qd0;
    }
    return true;
  }

  if (key == "controller.mode") {
    s.controller.mode = mode_from(key, v);
    return true;
  }
  if (key == "controller.u_max") { s.controller.u_max = parse_number(key, v); return true; }
  if (key == "controller.k_const") { s.controller.k_const = parse_number(key, v); return true; }
  if (key == "controller.u_max_p") { s.controller.u_max_p = parse_number(key, v); return true; }
  if (key == "controller.v1_max") { s.controller.v1_max = parse_number(key, v); return true; }
  if (key == "controller.v2_max") { s.controller.v2_max = parse_number(key, v); return true; }
  if (key == "controller.F_max") { s.controller.F_max = parse_number(key, v); return true; }
  if (key == "controller.F_tilde_max") { s.controller.F_tilde_max = parse_number(key, v); return true; }

  if (key == "sensors.noise_amplitude") { s.sensors.noise_amplitude = parse_number(key, v); return true; }
  if (key == "sensors.noise") {
    if (v == "uniform") s.sensors.noise = NoiseKind::uniform;
    else if (v == "gaussian") s.sensors.noise = NoiseKind::gaussian;
    else
      throw ConfigError("config key '" + key +
                        "': expected uniform|gaussian, got '" + v + "'");
    return true;
  }
  if (key == "sensors.seed") {
    s.sensors.seed = static_cast<std::uint64_t>(parse_integer(key, v));
    return true;
  }
  if (key == "sensors.positions") {
    s.sensors.positions = parse_list(key, v);
    return true;
  }

  if (key == "actuator.cutoff_hz") { s.actuator.cutoff_hz = parse_number(key, v); return true; }
  if (key == "actuator.delay_steps") {
    s.actuator.delay_steps = static_cast<int>(parse_integer(key, v));
    return true;
  }
  if (key == "actuator.enabled") { s.actuator.enabled = parse_bool(key, v); return true; }

  if (key == "sim.dt") { s.options.dt = parse_number(key, v); return true; }
  if (key == "sim.dt_control") { s.options.dt_control = parse_number(key, v); return true; }
  if (key == "sim.duration") { s.options.duration = parse_number(key, v); return true; }
  if (key == "sim.probe_y") { s.options.probe_y = parse_number(key, v); return true; }
  if (key == "sim.record_stride") {
    s.options.record_stride = static_cast<int>(parse_integer(key, v));
    return true;
  }
  if (key == "sim.q0") { s.options.q0 = to_vec(parse_list(key, v)); return true; }
  if (key == "sim.qd0") { s.options.qd0 = to_vec(parse_list(key, v)); return true; }

  return false;
}

// Disturbance keys are collected and rebuilt once after the main pass so a
// file may list kind/amplitude/frequency in any order.
struct DistOverride {
  bool has_kind = false, has_ampl = false, has_freq = false;
  std::string kind;
  double ampl = 0.0, freq = 0.0;

  bool take(const std::string& key, const std::string& v) {
    if (key == "disturbance.kind") {
      if (v != "zero" && v != "sinusoid")
        throw ConfigError("config key '" + key +
                          "': expected zero|sinusoid, got '" + v + "'");
      kind = v;
      has_kind = true;
      return true;
    }
    if (key == "disturbance.amplitude") {
      ampl = parse_number(key, v);
      has_ampl = true;
      return true;
    }
    if (key == "disturbance.frequency_hz") {
      freq = parse_number(key, v);
      has_freq = true;
      return true;
    }
    return false;
  }

  void apply(ScenarioSpec& s) const {
    if (!has_kind && !has_ampl && !has_freq) return;
    const bool zero =
        has_kind ? kind == "zero"
                 : s.disturbance.kind() == DisturbanceKind::zero;
    const double a = has_ampl ? ampl : s.disturbance.amplitude();
    const double f = has_freq ? freq : s.disturbance.frequency_hz();
    s.disturbance =
        zero ? DisturbanceProfile::zero() : DisturbanceProfile::sinusoid(a, f);
  }
};

}  // namespace

RunConfig RunConfig::preset(const std::string& scenario) {
  RunConfig cfg;
  cfg.scenario = scenario;
  if (scenario == "impulse") {
    cfg.spec = impulse_scenario();
  } else if (scenario == "sustained") {
    cfg.spec = sustained_scenario();
  } else if (scenario == "custom") {
    cfg.spec = ScenarioSpec{};
    cfg.spec.options.q0 = Eigen::VectorXd::Zero(cfg.spec.modes);
    cfg.spec.options.qd0 = Eigen::VectorXd::Zero(cfg.spec.modes);
  } else {
    throw ConfigError("config key 'scenario': expected impulse|sustained|custom, got '" +
                      scenario + "'");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const RunConfig& base) {
  // First pass: a scenario line re-bases everything onto that preset.
  RunConfig cfg = base;
  std::istringstream scan(text);
  std::string line;
  int lineno = 0;
  while (std::getline(scan, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value, got '" + t + "'");
    if (trim(t.substr(0, eq)) == "scenario")
      cfg = RunConfig::preset(trim(t.substr(eq + 1)));
  }

  std::istringstream in(text);
  DistOverride dist;
  lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (dist.take(key, value)) continue;
    if (!apply_key(cfg, key, value))
      throw ConfigError("unknown config key '" + key + "'");
  }
  dist.apply(cfg.spec);
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), base);
}

std::string emit_config(const RunConfig& cfg) {
  const ScenarioSpec& s = cfg.spec;
  const RopeParams& p = s.params;
  std::ostringstream out;
  out << "scenario=" << cfg.scenario << "\n";
  out << "out.dir=" << cfg.out_dir << "\n";
  out << "rope.rho=" << fmt(p.rho) << "\n";
  out << "rope.l=" << fmt(p.l) << "\n";
  out << "rope.H=" << fmt(p.H) << "\n";
  out << "rope.c_p=" << fmt(p.c_p) << "\n";
  out << "rope.m_e=" << fmt(p.m_e) << "\n";
  out << "rope.M_cs=" << fmt(p.M_cs) << "\n";
  out << "rope.g=" << fmt(p.g) << "\n";
  out << "rope.n_ropes=" << p.n_ropes << "\n";
  out << "rope.l_dp=" << fmt(p.l_dp) << "\n";
  out << "rope.car_mass_share="
      << (p.car_mass_share == CarMassShare::full ? "full" : "divided_by_n")
      << "\n";
  out << "modes.count=" << s.modes << "\n";
  out << "controller.mode=" << mode_name(s.controller.mode) << "\n";
  out << "controller.u_max=" << fmt(s.controller.u_max) << "\n";
  out << "controller.k_const=" << fmt(s.controller.k_const) << "\n";
  out << "controller.u_max_p=" << fmt(s.controller.u_max_p) << "\n";
  out << "controller.v1_max=" << fmt(s.controller.v1_max) << "\n";
  out << "controller.v2_max=" << fmt(s.controller.v2_max) << "\n";
  out << "controller.F_max=" << fmt(s.controller.F_max) << "\n";
  out << "controller.F_tilde_max=" << fmt(s.controller.F_tilde_max) << "\n";
  out << "sensors.noise_amplitude=" << fmt(s.sensors.noise_amplitude) << "\n";
  out << "sensors.noise="
      << (s.sensors.noise == NoiseKind::uniform ? "uniform" : "gaussian")
      << "\n";
  out << "sensors.seed=" << s.sensors.seed << "\n";
  out << "sensors.positions=" << fmt_list(s.sensors.positions) << "\n";
  out << "actuator.cutoff_hz=" << fmt(s.actuator.cutoff_hz) << "\n";
  out << "actuator.delay_steps=" << s.actuator.delay_steps << "\n";
  out << "actuator.enabled=" << (s.actuator.enabled ? "true" : "false") << "\n";
  out << "sim.dt=" << fmt(s.options.dt) << "\n";
  out << "sim.dt_control=" << fmt(s.options.dt_control) << "\n";
  out << "sim.duration=" << fmt(s.options.duration) << "\n";
  out << "sim.probe_y=" << fmt(s.options.probe_y) << "\n";
  out << "sim.record_stride=" << s.options.record_stride << "\n";
  out << "sim.q0=" << fmt_vec(s.options.q0) << "\n";
  out << "sim.qd0=" << fmt_vec(s.options.qd0) << "\n";
  out << "disturbance.kind="
      << (s.disturbance.kind() == DisturbanceKind::zero ? "zero" : "sinusoid")
      << "\n";
  out << "disturbance.amplitude=" << fmt(s.disturbance.amplitude()) << "\n";
  out << "disturbance.frequency_hz=" << fmt(s.disturbance.frequency_hz())
      << "\n";
  return out.str();
}

void validate_config(const RunConfig& cfg) {
  const ScenarioSpec& s = cfg.spec;
  s.params.validate();
  s.kin.validate();
  s.controller.validate();
  s.actuator.validate();
  s.options.validate();
  if (s.modes < 1) throw ConfigError("modes.count must be >= 1");
  if (!(s.options.probe_y >= 0.0 && s.options.probe_y <= s.params.l))
    throw ConfigError("sim.probe_y must lie within [0, rope.l]");
  if (!s.sensors.positions.empty()) s.sensors.validate(s.params, s.modes);
  if (!(s.sensors.noise_amplitude >= 0.0))
    throw ConfigError("sensors.noise_amplitude must be >= 0");
  if (s.options.q0.size() > 0 && s.options.q0.size() != s.modes)
    throw ConfigError("sim.q0 must have modes.count entries");
  if (s.options.qd0.size() > 0 && s.options.qd0.size() != s.modes)
    throw ConfigError("sim.qd0 must have modes.count entries");
}

}  // namespace ropesway
