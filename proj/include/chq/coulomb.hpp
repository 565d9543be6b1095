#pragma once

#include <span>
#include <utility>

#include "chq/field.hpp"

namespace chq {

// How the singular origin cell of 1/|x| is weighted.
enum class OriginRule {
  // Lattice-corrected trapezoid weight -zeta_Z3(1/2)/h. Removes the leading
  // singular error of the plain lattice sum; default.
  kLatticeCorrected,
  // Mean of 1/|x| over the cube of side h, (3 ln(2 + sqrt 3) - pi/2)/h.
  kCellAverage,
};

inline constexpr double kOriginLatticeCorrected = 2.8372974794806;
inline constexpr double kOriginCellAverage = 2.38007736397955;

// Upper bound for D(u) <= C ||u||^4 in L^{12/5}, the sharp constant for the
// exponent pair p = q = 6/5 in three dimensions.
inline constexpr double kHlsSharpConstant = 2.2940107035416;

// Free-space convolution with 1/|x| on a zero-padded (2n)^3 box. The
// multiplier table already carries h^3 and the FFT round-trip scale.
class CoulombKernel {
 public:
  explicit CoulombKernel(const Grid3& grid,
                         OriginRule rule = OriginRule::kLatticeCorrected);

  const Grid3& grid() const { return grid_; }
  OriginRule rule() const { return rule_; }
  int padded_size() const { return m_; }
  std::span<const double> multiplier() const { return multiplier_; }
  double min_multiplier() const { return min_multiplier_; }

  // U = 1/|x| * rho for a real density.
  ScalarField convolve(const ScalarField& rho) const;

 private:
  Grid3 grid_;
  OriginRule rule_;
  int m_;
  AlignedVector<double> multiplier_;
  double min_multiplier_ = 0.0;
};

ScalarField hartree_potential(const ScalarField& rho,
                              const CoulombKernel& kernel);
// D(u) = integral of |u|^2 (1/|x| * |u|^2).
double hartree_energy(const ScalarField& u, const CoulombKernel& kernel);

struct HlsBound {
  double lhs = 0.0;
  double rhs = 0.0;
};
HlsBound hls_check(const ScalarField& u, const CoulombKernel& kernel,
                   double constant = kHlsSharpConstant);

}  // namespace chq
