#pragma once

#include <vector>

#include "chq/coulomb.hpp"
#include "chq/groundstate.hpp"
#include "chq/magnetic.hpp"
#include "chq/symmetry.hpp"

namespace chq {

// W = min(V, cap)
ScalarFunction truncated_potential(const ScalarFunction& v, double cap);
ScalarField truncated_potential(const ScalarField& v, double cap);
// 90th percentile of V over the faces of the box.
double default_truncation(const ScalarField& v);

// Sum over the orbit of xi of omega(|x - g xi| / eps). Requires eps >= 4h.
ScalarField theta_template(const Point3& xi, double epsilon,
                           const SymmetrySector& s, const RadialProfile& profile,
                           const Grid3& grid);

struct ConcentrationReport {
  OrbitInfo orbit{};
  Point3 xi{};
  // eps^-3 || |u| - theta ||^2 in the plain eps-norm, profile at V(xi).
  double residual_scaled = 0.0;
  // eps^-3 || |u| - theta ||^2 in the W-weighted norm that selects xi.
  double objective_scaled = 0.0;
  int candidates_considered = 0;
  // Objective gap to the runner-up orbit, or to the empty template when
  // only one orbit was found.
  double margin = 0.0;
};

struct LocalizeOptions {
  // Peaks of |u| below this fraction of the maximum are ignored.
  double peak_fraction = 1e-2;
  int max_sweeps = 50;
};

// Templates use omega_lambda(r) = lambda omega_1(sqrt(lambda) r) with
// lambda = V(xi), so profile1 must be the lambda = 1 profile. w is the
// truncated potential on the grid of u.
ConcentrationReport localize(const ScalarField& u, double epsilon,
                             const SymmetrySector& s,
                             const RadialProfile& profile1,
                             const ScalarFunction& v, const ScalarField& w,
                             const std::vector<Point3>& candidates = {},
                             const LocalizeOptions& opts = {});

// eps^-3 || |u| - theta_{eps,xi} ||^2_eps with ||f||^2_eps = int eps^2
// |grad f|^2 + f^2. The profile must be solved at lambda_xi = V(xi).
double concentration_residual(const ScalarField& u, double epsilon,
                              const Point3& xi, const SymmetrySector& s,
                              const RadialProfile& profile, double lambda_xi);

struct InequalityChain {
  // J_{eps,W}(pi_W |u|), J_{eps,V}(pi_V |u|), J_{eps,A,V}(u)
  double truncated = 0.0;
  double modulus = 0.0;
  double full = 0.0;
  bool holds = false;
};
InequalityChain inequality_chain(const ScalarField& u, const Potentials& p,
                                 const CoulombKernel& kernel, double cap,
                                 double slack = 1e-8);

}  // namespace chq
