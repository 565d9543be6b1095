#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chq/ansatz.hpp"
#include "chq/coulomb.hpp"
#include "chq/groundstate.hpp"
#include "chq/magnetic.hpp"
#include "chq/symmetry.hpp"

namespace chq {

enum class StepRule { kFixed, kAdaptiveBB };

struct SolveOptions {
  // Stop when eps^-3 ||grad_N J||^2 < tol_grad in the norm of L.
  double tol_grad = 1e-8;
  int max_iter = 2000;
  StepRule step_rule = StepRule::kAdaptiveBB;
  // Initial step of each line search under StepRule::kFixed.
  double fixed_step = 1.0;
  std::vector<double> sweep;
  // Equivariance is checked every check_every iterations. The exact
  // gradient norm needs an operator solve, so it is only evaluated once a
  // preconditioned proxy is small.
  int check_every = 50;
  double operator_tol = 1e-11;
};

void validate(const SolveOptions& opts);

struct SolveResult {
  ScalarField u;
  double energy_scaled = 0.0;
  double nehari_residual = 0.0;
  double grad_norm_scaled = 0.0;
  // D(u) / 4
  double hartree_window = 0.0;
  SymmetrySector sector{};
  double epsilon = 0.0;
  std::optional<OrbitInfo> orbit;
  int iterations = 0;
  bool converged = false;
  std::string status;
  // eps^-3 J after every accepted step, starting with the projected start.
  std::vector<double> energy_history;
};

// Projected descent on the Nehari manifold inside the sector: preconditioned
// gradient steps with Barzilai-Borwein lengths and Armijo backtracking,
// retraction = symmetrize then nehari_project.
SolveResult minimize(const ScalarField& start, const Potentials& p,
                     const SymmetrySector& s, const CoulombKernel& kernel,
                     const SolveOptions& opts = {});

struct TangentGradient {
  ScalarField grad;
  // eps^-3 ||grad||^2 in the norm of L.
  double norm2_scaled = 0.0;
  // |<grad, grad G>| / (||grad|| ||grad G||) in the same norm.
  double orthogonality = 0.0;
};

// Gradient of J in the inner product of L minus its component along the
// gradient of the constraint G(u) = eps^2 ||u||^2 - D(u).
TangentGradient tangent_gradient(const ScalarField& u, const Potentials& p,
                                 const CoulombKernel& kernel,
                                 double operator_tol = 1e-11);

// eps^-3 (J'(u) w)^2 / ||w||^2, the weak-form residual along one direction.
double weak_residual(const ScalarField& u, const ScalarField& w,
                     const Potentials& p, const CoulombKernel& kernel);

// True iff no global phase brings u within tol of v in relative L2.
bool geometrically_distinct(const ScalarField& u, const ScalarField& v,
                            double tol = 1e-2);

struct MultistartOptions {
  // ell_{G,V} E_1, compared with eps^-5 hartree_window.
  double target = kGroundEnergy;
  double delta = 0.1 * kGroundEnergy;
  double dedup_tol = 1e-2;
  CutoffScale cutoff{};
  LimitOptions limit{};
};

struct SeedOutcome {
  Point3 seed{};
  bool ok = false;
  std::string error;
  SolveResult result;
  bool in_window = false;
  // Energy below the box estimate of the compactness threshold.
  bool ps_safe = false;
  // Index of an earlier retained outcome this one duplicates, or -1.
  int duplicate_of = -1;
};

// Minimizes from the entrance map of every seed, in seed order.
std::vector<SeedOutcome> multistart(const Potentials& p,
                                    const SymmetrySector& s,
                                    const CoulombKernel& kernel,
                                    const SolveOptions& opts,
                                    const std::vector<Point3>& seeds,
                                    const MultistartOptions& mopts = {});

// min of V over the faces of the box, a stand-in for the limit at infinity.
double boundary_minimum(const ScalarField& v);

}  // namespace chq
