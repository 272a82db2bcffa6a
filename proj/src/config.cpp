#include "spme/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "spme/dst.hpp"
#include "spme/spectral.hpp"

namespace spme {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("config: '" + where + "' is not a number: '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& raw, const std::string& where) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("config: '" + where + "' is not a nonnegative integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

IniDoc IniDoc::parse(const std::string& text) {
  IniDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
      doc.sections.emplace_back(section, Section{});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    doc.sections.back().second.emplace_back(key, value);
  }
  return doc;
}

bool IniDoc::has(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections)
    if (name == section)
      for (const auto& [k, v] : entries)
        if (k == key) return true;
  return false;
}

std::string IniDoc::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  const std::string* found = nullptr;
  for (const auto& [name, entries] : sections)
    if (name == section)
      for (const auto& [k, v] : entries)
        if (k == key) found = &v;  // last occurrence wins
  return found ? *found : fallback;
}

double IniDoc::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(get(section, key, ""), section + "." + key);
}

std::uint64_t IniDoc::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  return parse_u64(get(section, key, ""), section + "." + key);
}

bool IniDoc::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key, "");
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + section + "." + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> IniDoc::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  for (const std::string& item : split(get(section, key, ""), ','))
    if (!item.empty()) out.push_back(parse_double(item, section + "." + key));
  if (out.empty()) throw ConfigError("config: '" + section + "." + key + "' is an empty list");
  return out;
}

SpectralCoeffs InitialSpec::build(std::size_t J, double m) const {
  switch (kind) {
    case Kind::mode:
      return SpectralCoeffs::mode(std::min<std::size_t>(k, J), J);
    case Kind::constant:
      return constant_initial(level, J);
    case Kind::barenblatt:
      return grid_initial(barenblatt(m, 0.0, t0, x0, C, J));
    case Kind::bump: {
      std::vector<double> vals(J);
      for (std::size_t j = 1; j <= J; ++j)
        vals[j - 1] = mass * bump_density(static_cast<double>(j) / static_cast<double>(J + 1),
                                          center, width);
      return dst_forward(GridFunction::unchecked(std::move(vals)));
    }
  }
  throw ConfigError("initial: unknown kind");
}

double InitialSpec::density(double x) const { return mass * bump_density(x, center, width); }

EnsembleConfig LabConfig::ensemble() const {
  EnsembleConfig cfg;
  cfg.paths = ensemble_paths;
  cfg.solver = solver;
  cfg.master_seed = seed;
  cfg.tracked_gammas = tracked_gammas;
  cfg.p_moments = p_moments;
  return cfg;
}

namespace {

SigmaSpec sigma_from_ini(const IniDoc& ini, double m) {
  const std::string kind = ini.get("sigma", "kind", "zero");
  SigmaSpec s;
  if (kind == "zero") {
    s = SigmaSpec::zero();
  } else if (kind == "constant") {
    s = SigmaSpec::constant(ini.get_double("sigma", "K", 1.0));
  } else if (kind == "power") {
    s = SigmaSpec::power(ini.get_double("sigma", "lambda", 0.25),
                         ini.get_double("sigma", "mprime", 0.5 * (m + 1.0)), m);
  } else if (kind == "sqrt_positive_part") {
    s = SigmaSpec::sqrt_pp(ini.get_double("sigma", "lambda", 1.0), m);
  } else if (kind == "table") {
    std::vector<std::pair<double, double>> knots;
    for (const std::string& item : split(ini.get("sigma", "table", ""), ',')) {
      if (item.empty()) continue;
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw ConfigError("sigma.table: expected r:value pairs");
      knots.emplace_back(parse_double(parts[0], "sigma.table"),
                         parse_double(parts[1], "sigma.table"));
    }
    s = SigmaSpec::from_table(std::move(knots), ini.get_double("sigma", "K", 0.0),
                              ini.get_double("sigma", "delta", 0.0));
  } else {
    throw ConfigError("sigma.kind: unknown kind '" + kind + "'");
  }
  // Declared constants may be overridden explicitly.
  if (ini.has("sigma", "K")) s.K = ini.get_double("sigma", "K", s.K);
  if (ini.has("sigma", "delta")) s.delta = ini.get_double("sigma", "delta", s.delta);
  if (ini.has("sigma", "delta_bar")) s.delta_bar = ini.get_double("sigma", "delta_bar", 0.0);
  return s;
}

InitialSpec initial_from_ini(const IniDoc& ini, const std::string& section) {
  InitialSpec spec;
  const std::string kind = ini.get(section, "kind", "mode");
  if (kind == "mode")
    spec.kind = InitialSpec::Kind::mode;
  else if (kind == "constant")
    spec.kind = InitialSpec::Kind::constant;
  else if (kind == "barenblatt")
    spec.kind = InitialSpec::Kind::barenblatt;
  else if (kind == "bump")
    spec.kind = InitialSpec::Kind::bump;
  else
    throw ConfigError(section + ".kind: unknown kind '" + kind + "'");
  spec.k = static_cast<std::size_t>(ini.get_u64(section, "k", 1));
  spec.level = ini.get_double(section, "level", spec.level);
  spec.t0 = ini.get_double(section, "t0", spec.t0);
  spec.C = ini.get_double(section, "C", spec.C);
  spec.x0 = ini.get_double(section, "x0", spec.x0);
  spec.center = ini.get_double(section, "center", spec.center);
  spec.width = ini.get_double(section, "width", spec.width);
  spec.mass = ini.get_double(section, "mass", spec.mass);
  return spec;
}

}  // namespace

LabConfig LabConfig::from_ini(const IniDoc& ini) {
  LabConfig cfg;
  cfg.seed = ini.get_u64("run", "seed", cfg.seed);
  cfg.workers = static_cast<unsigned>(ini.get_u64("run", "workers", cfg.workers));
  cfg.out_dir = ini.get("run", "out", cfg.out_dir);

  SolverConfig& s = cfg.solver;
  s.m = ini.get_double("solver", "m", 2.0);
  s.nu = ini.get_double("solver", "nu", 1.0 / 32.0);
  s.n_modes = static_cast<std::size_t>(ini.get_u64("solver", "n_modes", 32));
  s.J = static_cast<std::size_t>(ini.get_u64("solver", "J", 127));
  s.T = ini.get_double("solver", "T", 0.2);
  const std::string dt = ini.get("solver", "dt", "adaptive");
  if (dt == "adaptive")
    s.dt_policy = DtPolicy::adaptive(ini.get_double("solver", "safety", 0.18),
                                     ini.get_double("solver", "dt_max", 1e-2),
                                     ini.get_double("solver", "dt_min", 1e-12));
  else
    s.dt_policy = DtPolicy::fixed_step(parse_double(dt, "solver.dt"));
  s.nonlinear_gain = ini.get_double("solver", "nonlinear_gain", 1.0);
  s.gamma_track = ini.get_double("solver", "gamma_track", -0.75);
  const auto records = ini.get_u64("solver", "records", 128);
  if (records == 0) throw ConfigError("solver.records must be positive");
  s.record_times = SolverConfig::uniform_times(s.T, static_cast<std::size_t>(records));
  s.blowup_guard = ini.get_double("solver", "guard", 1e8);
  s.oversample = static_cast<int>(ini.get_u64("solver", "oversample", 2));
  s.track_budget = ini.get_bool("solver", "track_budget", false);
  s.track_power_norm = ini.get_bool("solver", "track_power_norm", true);
  s.sigma = sigma_from_ini(ini, s.m);
  cfg.write_fields = ini.get_bool("solver", "write_fields", false);

  cfg.initial = initial_from_ini(ini, "initial");

  cfg.ensemble_paths = static_cast<std::size_t>(ini.get_u64("ensemble", "paths", 64));
  cfg.tracked_gammas = ini.get_list("ensemble", "tracked_gammas", {-0.75});
  cfg.p_moments = ini.get_list("ensemble", "p_moments", {1.0, 2.0, 3.0});

  cfg.fit.enabled = ini.get_bool("fit", "enabled", false);
  cfg.fit.functional = ini.get("fit", "functional", cfg.fit.functional);
  cfg.fit.t_lo = ini.get_double("fit", "t_lo", cfg.fit.t_lo);
  cfg.fit.t_hi = ini.get_double("fit", "t_hi", cfg.fit.t_hi);
  cfg.fit.target_slope = ini.get_double("fit", "target_slope", cfg.fit.target_slope);

  ParticleSection& p = cfg.particles;
  p.cfg.N = static_cast<std::size_t>(ini.get_u64("particles", "N", 10000));
  p.cfg.epsilon = ini.get_double("particles", "epsilon", 0.05);
  const std::string kernel = ini.get("particles", "kernel", "epanechnikov");
  if (kernel == "epanechnikov")
    p.cfg.kernel = Kernel::epanechnikov();
  else if (kernel == "triangle")
    p.cfg.kernel = Kernel::triangle();
  else
    throw ConfigError("particles.kernel: unknown kernel '" + kernel + "'");
  p.cfg.branch_rate = ini.get_double("particles", "rate", 1.0);
  if (ini.has("particles", "offspring")) {
    std::vector<double> probs;
    for (const std::string& item : split(ini.get("particles", "offspring", ""), ',')) {
      if (item.empty()) continue;
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw ConfigError("particles.offspring: expected k:prob pairs");
      const auto k = static_cast<std::size_t>(parse_u64(parts[0], "particles.offspring"));
      const double prob = parse_double(parts[1], "particles.offspring");
      if (probs.size() <= k) probs.resize(k + 1, 0.0);
      probs[k] = prob;
    }
    p.cfg.offspring = OffspringLaw{probs};
  }
  p.cfg.dt = ini.get_double("particles", "dt", 0.005);
  p.cfg.T = ini.get_double("particles", "T", 1.0);
  p.cfg.drift_enabled = ini.get_bool("particles", "drift", true);
  p.cfg.branching_enabled = ini.get_bool("particles", "branching", true);
  p.runs = static_cast<std::size_t>(ini.get_u64("particles", "runs", 8));
  p.bins = static_cast<std::size_t>(ini.get_u64("particles", "bins", 64));
  p.initial.kind = InitialSpec::Kind::bump;
  p.initial.center = ini.get_double("particles", "center", 0.5);
  p.initial.width = ini.get_double("particles", "width", 0.25);
  p.initial.mass = ini.get_double("particles", "mass", 0.02);

  VerifySection& v = cfg.verify;
  v.J = static_cast<std::size_t>(ini.get_u64("verify", "J", v.J));
  v.oversample = static_cast<int>(ini.get_u64("verify", "oversample", 4));
  v.modes = static_cast<std::size_t>(ini.get_u64("verify", "modes", v.J));
  v.trials = static_cast<std::size_t>(ini.get_u64("verify", "trials", v.trials));
  v.krylov_gammas = ini.get_list("verify", "krylov_gammas", v.krylov_gammas);
  v.sv_m = ini.get_list("verify", "sv_m", v.sv_m);
  v.sv_beta = ini.get_list("verify", "sv_beta", v.sv_beta);
  v.mono_m = ini.get_list("verify", "mono_m", v.mono_m);
  v.mono_pairs = static_cast<std::size_t>(ini.get_u64("verify", "mono_pairs", v.mono_pairs));
  v.power_m = ini.get_list("verify", "power_m", v.power_m);
  v.krylov_terms = static_cast<std::size_t>(ini.get_u64("verify", "krylov_terms", v.krylov_terms));
  v.scan_rmax = ini.get_double("verify", "sigma_scan_rmax", v.scan_rmax);

  ConvergenceSection& c = cfg.convergence;
  c.Js = ini.get_list("convergence", "Js", c.Js);
  c.m = ini.get_double("convergence", "m", c.m);
  c.nu = ini.get_double("convergence", "nu", c.nu);
  c.t0 = ini.get_double("convergence", "t0", c.t0);
  c.C = ini.get_double("convergence", "C", c.C);
  c.x0 = ini.get_double("convergence", "x0", c.x0);
  c.T = ini.get_double("convergence", "T", c.T);
  return cfg;
}

std::string default_config_text() {
  return R"(# spmelab configuration (sectioned key = value; '#' and ';' start comments)

[run]
seed = 2024
workers = 1
out = out

[solver]
m = 2
nu = 0.03125            ; coupled to the mode count: nu = 1/n_modes
n_modes = 32
J = 127
T = 0.2
dt = adaptive           ; 'adaptive' or a fixed step size
safety = 0.18           ; adaptive rule dt <= safety dx^2/(nu + m max|v|^{m-1})
dt_max = 0.01
dt_min = 1e-12
nonlinear_gain = 1
gamma_track = -0.75
records = 128           ; number of uniform record intervals on [0, T]
guard = 1e8
oversample = 2
track_budget = false
track_power_norm = true
write_fields = false    ; binary field snapshots alongside the CSV

[sigma]
kind = power            ; zero | constant | power | sqrt_positive_part | table
lambda = 0.26
mprime = 1.5            ; matched exponent (m+1)/2 for m = 2
; K = 0                 ; declared growth constants (defaults per kind)
; delta = 0.26
; delta_bar = 0.26
; table = -1:0, 0:1, 1:0

[initial]
kind = mode             ; mode | constant | barenblatt | bump
k = 1
level = 1
t0 = 0.01
C = 0.1
x0 = 0.5
center = 0.5
width = 0.25
mass = 0.1

[ensemble]
paths = 64
tracked_gammas = -0.75
p_moments = 1, 2, 3

[fit]
enabled = false
functional = hgamma_sq[-0.75]
t_lo = 0.01
t_hi = 0.1
target_slope = -2

[particles]
N = 10000
epsilon = 0.05
kernel = epanechnikov   ; epanechnikov | triangle
rate = 1
offspring = 0:0.5, 2:0.5
dt = 0.005              ; resolves the drift (displacement << epsilon/4)
T = 1
runs = 8
bins = 64
drift = true
branching = true
center = 0.5            ; initial bump density
width = 0.25
mass = 0.02             ; densities where the mollified drift stays stable

[verify]
J = 63
oversample = 4
modes = 63
trials = 100
krylov_gammas = -0.6, -0.75, -1
krylov_terms = 10000
sv_m = 1.5, 2, 3, 5
sv_beta = 0.05, 0.25, 0.45
mono_m = 1.5, 2, 3
mono_pairs = 100000
power_m = 1.5, 2, 3
sigma_scan_rmax = 100

[convergence]
Js = 127, 255, 511
m = 2
nu = 1e-6
t0 = 0.01
C = 0.1
x0 = 0.5
T = 0.05
)";
}

}  // namespace spme
