#pragma once

#include <cstddef>

#include "chq/coulomb.hpp"
#include "chq/field.hpp"
#include "chq/potentials.hpp"

namespace chq {

// Magnetic potential A, electric potential V and the semiclassical
// parameter. The analytic forms are kept next to the samples so that
// off-grid evaluations (orbit points, rescaled fields) stay exact.
struct Potentials {
  double epsilon = 1.0;
  VectorField a;
  ScalarField v;
  VectorFunction a_func;
  ScalarFunction v_func;
  bool magnetic = false;

  const Grid3& grid() const { return v.grid(); }
};

// Samples A and V on the grid. V must be finite and strictly positive.
Potentials make_potentials(const Grid3& grid, double epsilon,
                           VectorFunction a, ScalarFunction v);
Potentials with_epsilon(const Potentials& p, double epsilon);

struct EnergyBreakdown {
  double kinetic_magnetic = 0.0;
  double potential = 0.0;
  double hartree = 0.0;
  double total = 0.0;
};

// eps * grad u + i A u
VectorField covariant_gradient(const ScalarField& u, const Potentials& p);
// ||u||^2 = int |eps grad u + i A u|^2 + int V |u|^2
double magnetic_norm2(const ScalarField& u, const Potentials& p);
// Real part of the inner product belonging to magnetic_norm2.
double magnetic_inner(const ScalarField& u, const ScalarField& w,
                      const Potentials& p);

EnergyBreakdown energy(const ScalarField& u, const Potentials& p,
                       const CoulombKernel& kernel);

// L u = sum_a (-eps D_a - i A_a)(eps D_a + i A_a) u + V u, the exact adjoint
// of the discrete covariant gradient. Optionally reports the two parts of
// the quadratic form evaluated on u.
ScalarField magnetic_operator(const ScalarField& u, const Potentials& p,
                              double* kinetic = nullptr,
                              double* potential = nullptr);
// -eps^2 lap u - 2 eps i A.grad u - eps i (div A) u + |A|^2 u + V u.
ScalarField expanded_operator(const ScalarField& u, const Potentials& p);

// L u - eps^-2 (1/|x| * |u|^2) u. Its real L2 pairing with v is J'(u) v.
ScalarField euler_lagrange_residual(const ScalarField& u, const Potentials& p,
                                    const CoulombKernel& kernel);

// Rescales u onto eps^2 ||u||^2 = D(u).
ScalarField nehari_project(const ScalarField& u, const Potentials& p,
                           const CoulombKernel& kernel);
// |eps^2 ||u||^2 - D(u)| / D(u)
double nehari_residual(const ScalarField& u, const Potentials& p,
                       const CoulombKernel& kernel);
// J(pi(u)) = eps^2 ||u||^4 / (4 D(u)).
double projected_energy(const ScalarField& u, const Potentials& p,
                        const CoulombKernel& kernel);

struct DiamagneticReport {
  std::size_t violations = 0;
  double max_gap = 0.0;
  double tolerance = 0.0;
};
// Compares eps |grad |u|| with |eps grad u + i A u| node by node. The
// tolerance is 4 h max|A| max|u| plus a round-off floor.
DiamagneticReport diamagnetic_check(const ScalarField& u, const Potentials& p);

struct RescaleReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double boundary_ratio = 0.0;
};
// lhs = eps^-3 J(u); rhs = J at eps = 1 of u(eps x) with A(eps x), V(eps x).
// u(eps x) is sampled on the same grid by trigonometric interpolation, so u
// must be negligible outside [-eps L, eps L)^3.
RescaleReport rescale_identity_check(const ScalarField& u, const Potentials& p,
                                     const CoulombKernel& kernel,
                                     double decay_threshold = 1e-6);

struct OperatorSolve {
  ScalarField x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};
// Preconditioned conjugate gradients for L x = rhs, preconditioner
// (eps^2 |k|^2 + shift)^-1. A shift <= 0 selects the mean of V.
OperatorSolve solve_operator(const ScalarField& rhs, const Potentials& p,
                             double tol = 1e-10, int max_iter = 500,
                             double shift = 0.0,
                             const ScalarField* guess = nullptr);

// Applies (eps^2 |k|^2 + shift)^-1 in Fourier space, in place.
void apply_shifted_inverse(ScalarField& r, double epsilon, double shift);

// Samples u(eps x) on the grid of u by separable trigonometric interpolation.
ScalarField resample_scaled(const ScalarField& u, double scale);

}  // namespace chq
