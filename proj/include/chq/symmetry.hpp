#pragma once

#include <vector>

#include "chq/field.hpp"

namespace chq {

struct Potentials;

// Cyclic group of order m generated by the rotation through 2 pi / m about
// the x3 axis, twisted by tau_j(g^k) = exp(2 pi i j k / m).
struct SymmetrySector {
  int m = 1;
  int j = 0;

  cplx tau(int k) const;
  double angle(int k) const;
};

SymmetrySector make_sector(int m, int j);

struct OrbitInfo {
  Point3 representative{};
  int cardinality = 1;
  bool isotropy_in_kernel = true;
};

// Rotation of a point about the x3 axis by 2 pi k / m.
Point3 rotate_point(const Point3& x, int k, const SymmetrySector& s);

// (g^k u)(x) = tau(g^k) u(g^-k x). Quarter turns are index permutations,
// other angles use a three-shear spectral rotation.
ScalarField act(int k, const ScalarField& u, const SymmetrySector& s);
// Returns u(R(-angle) x). The intermediate shears move content by up to
// |x| tan(angle / 2) on the periodic box, so u must be negligible beyond
// radius L / (1 + |tan(angle / 2)|) for other than quarter turns.
ScalarField rotate_field(const ScalarField& u, double angle);

ScalarField symmetrize(const ScalarField& u, const SymmetrySector& s);
// max_k ||act(k, u) - u|| / ||u|| <= tol; the zero field counts as
// equivariant.
bool is_equivariant(const ScalarField& u, const SymmetrySector& s, double tol);
double equivariance_defect(const ScalarField& u, const SymmetrySector& s);

// Axis points are those with planar radius below tol_axis; a negative value
// selects h/2 of the caller's grid and falls back to 1e-12 when unknown.
OrbitInfo orbit_info(const Point3& x, const SymmetrySector& s,
                     double tol_axis = -1.0);
std::vector<Point3> orbit_points(const Point3& x, const SymmetrySector& s,
                                 double tol_axis = -1.0);

struct MinimizingSet {
  double ell = 0.0;
  std::vector<Point3> points;
  std::vector<int> cardinalities;
  std::vector<double> values;
};

// ell = min over candidates of (#Gx) V(x)^{3/2}; points within the relative
// band of ell whose isotropy lies in ker tau, closed under the action.
// Empty candidates mean every grid node of V.
MinimizingSet ell_and_mtau(const ScalarField& v, const SymmetrySector& s,
                           const std::vector<Point3>& candidates = {},
                           double band = 1e-3);

struct PotentialSymmetryReport {
  double v_defect = 0.0;
  double a_defect = 0.0;
  bool ok = false;
};
// Checks V(gx) = V(x) and A(gx) = g A(x) at every node using the analytic
// potentials, relative to the largest value.
PotentialSymmetryReport check_potential_symmetry(const Potentials& p,
                                                 const SymmetrySector& s,
                                                 double tol = 1e-10);

}  // namespace chq
