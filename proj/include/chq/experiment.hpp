#pragma once

#include <random>
#include <string>
#include <vector>

#include "chq/config.hpp"
#include "chq/magnetic.hpp"
#include "chq/solver.hpp"
#include "chq/symmetry.hpp"

namespace chq {

Grid3 build_grid(const ExperimentConfig& c);
VectorFunction build_vector_potential(const ExperimentConfig& c);
ScalarFunction build_scalar_potential(const ExperimentConfig& c);
Potentials build_potentials(const ExperimentConfig& c, const Grid3& grid,
                            double epsilon);
SolveOptions build_solve_options(const ExperimentConfig& c);
CutoffScale build_cutoff(const ExperimentConfig& c);

// One representative per connected component of M_tau (nodes closer than
// four grid steps are linked), each followed by the configured number of
// random perturbations of at most one grid step per axis.
std::vector<Point3> default_seeds(const ExperimentConfig& c, const ScalarField& v,
                                  const SymmetrySector& s);

// Sum of a few Gaussians with random centers, widths and phases, well
// inside the box and wide enough to be resolved.
ScalarField random_smooth_field(const Grid3& grid, std::mt19937_64& rng,
                                bool complex_valued, double min_width);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Quick invariant suite on the configured problem at the first epsilon.
std::vector<CheckResult> verify_suite(const ExperimentConfig& c);

}  // namespace chq
