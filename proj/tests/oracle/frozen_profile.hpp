#pragma once

#include <array>
#include <utility>

// omega_1(r) sampled by the shooting oracle, frozen. Regenerate with
// shooting_oracle and compare with the live values in the oracle test.
namespace oracle {

inline constexpr double kFrozenEnergy = 1.1684432342187;

inline constexpr std::array<std::pair<double, double>, 25> kFrozenProfile{{
    {0.0, 2.881578653766e-01},
    {0.5, 2.771744080470e-01},
    {1.0, 2.473417322741e-01},
    {1.5, 2.062793832100e-01},
    {2.0, 1.624112055983e-01},
    {2.5, 1.220273622061e-01},
    {3.0, 8.836609932095e-02},
    {3.5, 6.218772771940e-02},
    {4.0, 4.281054315121e-02},
    {4.5, 2.897187593989e-02},
    {5.0, 1.934579762941e-02},
    {5.5, 1.278117049274e-02},
    {6.0, 8.371727132916e-03},
    {6.5, 5.444870530865e-03},
    {7.0, 3.520449157077e-03},
    {7.5, 2.264865143087e-03},
    {8.0, 1.450882896777e-03},
    {8.5, 9.260146507941e-04},
    {9.0, 5.891170509359e-04},
    {9.5, 3.737234124499e-04},
    {10.0, 2.364845213789e-04},
    {10.5, 1.493053818286e-04},
    {11.0, 9.407354443082e-05},
    {11.5, 5.916482210923e-05},
    {12.0, 3.714810677518e-05}
}};

}  // namespace oracle
