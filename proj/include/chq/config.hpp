#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chq/field.hpp"

namespace chq {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Plain "key = value" text, dotted section names, '#' comments. Every key
// has a default and unknown keys are errors.
struct ExperimentConfig {
  int grid_n = 64;
  double grid_half_length = 3.0;

  std::string vector_potential = "standard";  // zero | standard
  std::string scalar_potential = "ring_well";  // constant | ring_well | expression
  double lambda = 1.0;
  double ring_v0 = 1.0;
  double ring_a = 1.0;
  double ring_b = 1.0;
  double ring_r0 = 1.0;
  std::string expression = "1";

  int sym_m = 2;
  int sym_j = 0;

  std::vector<double> epsilon_sweep{0.4};

  double tol_grad = 1e-8;
  int max_iter = 2000;
  std::string step_rule = "bb";  // bb | fixed
  double fixed_step = 1.0;
  int check_every = 50;

  double cutoff_exponent = 0.5;
  double cutoff_scale = 1.0;

  // Empty: one representative per component of M_tau plus perturbations.
  std::vector<Point3> seeds;
  int seed_perturbations = 3;
  double delta_rel = 0.1;
  double dedup_tol = 1e-2;
  // Truncation of V for localization; 0 selects the boundary percentile.
  double truncation = 0.0;

  std::string output_dir = "results";
  std::uint64_t rng_seed = 12345;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Every key with its effective value; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& c);

std::vector<double> parse_list(const std::string& text);
Point3 parse_point(const std::string& text);

}  // namespace chq
