#pragma once

#include "chq/coulomb.hpp"
#include "chq/groundstate.hpp"
#include "chq/magnetic.hpp"
#include "chq/symmetry.hpp"

namespace chq {

// Smooth radial cutoff: 1 for s <= 1/2, 0 for s >= 1, C-infinity in between
// through e^{-1/t} transitions.
double smooth_cutoff(double s);

// Support radius of a bump in rescaled variables, scale * eps^{-exponent}.
// The default gives 1/sqrt(eps).
struct CutoffScale {
  double exponent = 0.5;
  double scale = 1.0;

  double radius(double epsilon) const;
};

// upsilon(r) = scale * cutoff(r / radius) * omega(r), normalized onto the
// lambda-Nehari manifold of the radial problem.
struct CutoffBump {
  RadialProfile profile;
  double radius = 0.0;
  double scale = 1.0;
  // J_lambda(upsilon) on the radial mesh.
  double energy = 0.0;

  double operator()(double r) const;
};

CutoffBump make_cutoff_bump(const RadialProfile& p, double epsilon,
                            const CutoffScale& cutoff = {});

// The bump sampled at |x| on a 3D grid and rescaled onto the 3D Nehari
// manifold of -lap + lambda. Throws when the support leaves the box.
ScalarField cutoff_bump(const RadialProfile& p, double epsilon,
                        const Grid3& grid, const CoulombKernel& kernel,
                        const CutoffScale& cutoff = {});

struct EntranceSpec {
  Point3 xi{};
  double epsilon = 1.0;
  SymmetrySector sector{};
  double lambda = 1.0;
};

// psi(x) = sum over g xi of tau(g) upsilon(|x - g xi| / eps)
//          * exp(-i A(g xi) . (x - g xi) / eps)
// The bump must be built from a profile at spec.lambda. Orbit supports must
// be pairwise disjoint with a 10% margin and lie inside the box.
ScalarField entrance(const EntranceSpec& spec, const CutoffBump& bump,
                     const VectorFunction& a, const Grid3& grid);
// Same sum evaluated at an arbitrary point.
cplx entrance_value(const EntranceSpec& spec, const CutoffBump& bump,
                    const VectorFunction& a, const Point3& x);

// eps^-3 J(pi(psi)) with p evaluated at spec.epsilon.
double entrance_energy(const EntranceSpec& spec, const CutoffBump& bump,
                       const Potentials& p, const CoulombKernel& kernel);

}  // namespace chq
