#pragma once

#include <cstdint>
#include <string>

#include "sgspec/monodromy.hpp"
#include "sgspec/potential.hpp"

namespace sgspec {

// Run configuration shared by the CLI pipelines; parsed from a JSON file.
struct RunConfig {
  // integrator
  OdeOptions ode;
  // truncation
  int K = 16;
  int K_align = 8;
  // sampling
  int samples_per_annulus = 24;
  int count_samples = 0;
  bool verify_counts = false;
  // finite type
  int N = 4;
  double ft_tol = 1e-10;
  int ft_max_iter = 30;
  // flows
  int n_gaps = 1;
  int x_samples = 33;
  int y_samples = 9;
  double y_max = 0.05;
  // decay
  double y0_hint = 0.0;
  int n_min = 4;
  // symplectic
  double fd_step = 5e-3;
  std::uint64_t variation_seed = 7;
  // execution
  int threads = 0;
  bool deterministic = false;
  std::string out_dir = ".";

  // potential source: inline JSON object, file path, or random spec
  std::string potential_json;   // serialized potential object, may be empty
  std::string potential_file;   // path, may be empty
  bool has_random = false;
  std::uint64_t random_seed = 1;
  int random_J = 6;
  double random_amplitude = 0.25;
  double random_decay = 0.35;

  // test grid for reconstruct/roundtrip (serialized [[re,im],...]); optional
  std::string test_grid_json;
};

// Parses the JSON text; unknown keys are rejected to catch typos.
RunConfig parse_config(const std::string& json_text);

// Materializes the configured potential (inline beats file beats random;
// defaults to the vacuum when no source is given).
PeriodicPotential load_potential(const RunConfig& cfg);

}  // namespace sgspec
