#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "chq/field.hpp"

namespace chq {

// Ground-state energy E_1 of -lap u + u = (1/|x| * u^2) u, produced by the
// shooting oracle under tests/oracle and frozen here with 8 digits.
inline constexpr double kGroundEnergy = 1.1684432;

// omega_lambda on the uniform mesh r_i = i * r_max / (nr - 1).
struct RadialProfile {
  double lambda = 1.0;
  double r_max = 0.0;
  int nr = 0;
  std::vector<double> values;
  double energy = 0.0;

  // Diagnostics of the solve that produced the profile.
  int iterations = 0;
  double residual = 0.0;
  double nehari_gap = 0.0;
  bool monotone = true;

  double spacing() const { return r_max / (nr - 1); }
  // Cubic Lagrange interpolation with even reflection at r = 0. Returns 0
  // beyond r_max.
  double operator()(double r) const;
  double derivative(double r) const;
};

struct LimitOptions {
  double tol = 1e-10;
  int max_iter = 5000;
  int nr = 4096;
  // r_max = r_max_scaled / sqrt(lambda)
  double r_max_scaled = 40.0;
  // Width of the Gaussian start e^{-lambda r^2 / 2} in units of 1/sqrt(lambda).
  double initial_width = 1.0;
  // Optional explicit start on the mesh (size nr); overrides the Gaussian.
  std::vector<double> initial;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// Nehari-normalized self-consistent iteration on v = r omega with a fourth
// order finite-difference Laplacian and a Numerov solve for the potential.
// Throws NonConvergence after max_iter.
RadialProfile solve_limit(double lambda, const LimitOptions& opts = {});

// Radial quadratic forms on the profile mesh for a radial function given by
// its samples f_i = f(r_i): ||f||^2_lambda and D(f).
struct RadialForms {
  double norm2 = 0.0;
  double hartree = 0.0;
  double mass = 0.0;
};
RadialForms radial_forms(const std::vector<double>& f, double r_max,
                         double lambda);

enum class OutOfRange { kThrow, kZero };

// Samples omega(|x - center| * inv_length) on the grid.
ScalarField embed_3d(const RadialProfile& p, const Grid3& grid,
                     const Point3& center, double inv_length = 1.0,
                     OutOfRange policy = OutOfRange::kThrow);

struct ScalingReport {
  double energy_ratio = 0.0;
  double profile_gap = 0.0;
  RadialProfile direct;
};
// Solves at lambda and compares with lambda omega_1(sqrt(lambda) r).
ScalingReport scaling_check(const RadialProfile& p1, double lambda,
                            const LimitOptions& opts = {});

void write_profile_csv(std::ostream& out, const RadialProfile& p);
void write_profile_csv(const std::filesystem::path& path,
                       const RadialProfile& p);
RadialProfile read_profile_csv(const std::filesystem::path& path);

}  // namespace chq
