#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spme/estimators.hpp"
#include "spme/particles.hpp"
#include "spme/solver.hpp"

namespace spme {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sectioned key=value text ('#' and ';' start comments). Order-preserving,
// so a config can be echoed into the run manifest as written.
struct IniDoc {
  using Section = std::vector<std::pair<std::string, std::string>>;
  std::vector<std::pair<std::string, Section>> sections;

  static IniDoc parse(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;
};

struct InitialSpec {
  enum class Kind { mode, constant, barenblatt, bump };
  Kind kind = Kind::mode;
  std::size_t k = 1;       // mode
  double level = 1.0;      // constant
  double t0 = 0.01;        // barenblatt
  double C = 0.1;
  double x0 = 0.5;
  double center = 0.5;     // bump
  double width = 0.25;
  double mass = 0.1;

  SpectralCoeffs build(std::size_t J, double m) const;
  double density(double x) const;  // bump kind (particle initial data)
};

struct FitSpec {
  bool enabled = false;
  std::string functional = "hgamma_sq[-0.75]";
  double t_lo = 0.01;
  double t_hi = 0.1;
  double target_slope = -2.0;
};

struct ParticleSection {
  ParticleConfig cfg;
  std::size_t runs = 8;
  std::size_t bins = 64;
  InitialSpec initial;  // bump parameters
};

struct VerifySection {
  std::size_t J = 63;
  int oversample = 4;
  std::size_t modes = 63;
  std::size_t trials = 100;
  std::vector<double> krylov_gammas = {-0.6, -0.75, -1.0};
  std::vector<double> sv_m = {1.5, 2.0, 3.0, 5.0};
  std::vector<double> sv_beta = {0.05, 0.25, 0.45};
  std::vector<double> mono_m = {1.5, 2.0, 3.0};
  std::size_t mono_pairs = 100000;
  std::vector<double> power_m = {1.5, 2.0, 3.0};
  std::size_t krylov_terms = 10000;
  double scan_rmax = 100.0;
};

struct ConvergenceSection {
  std::vector<double> Js = {127, 255, 511};
  double m = 2.0;
  double nu = 1e-6;
  double t0 = 0.01;
  double C = 0.1;
  double x0 = 0.5;
  double T = 0.05;
};

// Full resolved configuration of one CLI invocation.
struct LabConfig {
  std::uint64_t seed = 2024;
  unsigned workers = 1;
  std::string out_dir = "out";
  SolverConfig solver;
  bool write_fields = false;
  InitialSpec initial;
  std::size_t ensemble_paths = 64;
  std::vector<double> tracked_gammas = {-0.75};
  std::vector<double> p_moments = {1.0, 2.0, 3.0};
  FitSpec fit;
  ParticleSection particles;
  VerifySection verify;
  ConvergenceSection convergence;

  EnsembleConfig ensemble() const;
  static LabConfig from_ini(const IniDoc& ini);
};

std::string default_config_text();

}  // namespace spme
