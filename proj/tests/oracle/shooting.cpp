#include "shooting.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace oracle {
namespace {

namespace ode = boost::numeric::odeint;

// w, w', W, W', Q = 4 pi int w^2 r^2, I = 4 pi int W w^2 r^2
using State = std::array<double, 6>;

// Unit-height solution of lap w = -W w, lap W = -4 pi w^2.
void rhs(const State& y, State& dy, double r) {
  const double w = y[0], W = y[2];
  dy[0] = y[1];
  dy[1] = -2.0 * y[1] / r - W * w;
  dy[2] = y[3];
  dy[3] = -2.0 * y[3] / r - 4.0 * M_PI * w * w;
  dy[4] = 4.0 * M_PI * w * w * r * r;
  dy[5] = 4.0 * M_PI * W * w * w * r * r;
}

constexpr double kStart = 1e-5;
constexpr double kTol = 1e-14;

State initial(double w0) {
  const double r = kStart;
  const double r2 = r * r;
  return {1.0 - w0 * r2 / 6.0,
          -w0 * r / 3.0,
          w0 - 4.0 * M_PI * r2 / 6.0,
          -4.0 * M_PI * r / 3.0,
          4.0 * M_PI * r2 * r / 3.0,
          4.0 * M_PI * w0 * r2 * r / 3.0};
}

auto make_stepper() {
  return ode::make_dense_output(kTol, kTol, ode::runge_kutta_dopri5<State>());
}

// +1: w crosses zero (W(0) too large); -1: w turns upward (too small).
int classify(double w0) {
  auto st = make_stepper();
  st.initialize(initial(w0), kStart, 1e-4);
  while (st.current_time() < 40.0) {
    st.do_step(rhs);
    const State& y = st.current_state();
    if (y[0] < 0.0) return +1;
    if (y[1] > 0.0) return -1;
  }
  return 0;
}

}  // namespace

ShootingResult solve_ground_state(double dr, double r_max) {
  double lo = 2.0, hi = 5.0;
  if (classify(lo) != -1 || classify(hi) != +1)
    throw std::runtime_error("shooting bracket is wrong");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int c = classify(mid);
    if (c == 0) {
      lo = hi = mid;
      break;
    }
    (c > 0 ? hi : lo) = mid;
  }
  const double w0 = 0.5 * (lo + hi);

  // Integrate the best shot up to the point where w is smallest before the
  // growing mode takes over. Beyond that the charge is negligible.
  auto st = make_stepper();
  st.initialize(initial(w0), kStart, 1e-4);
  State best = st.current_state();
  double r_best = kStart;
  while (st.current_time() < 40.0) {
    st.do_step(rhs);
    const State& y = st.current_state();
    if (y[0] <= 0.0 || y[1] >= 0.0) break;
    best = y;
    r_best = st.current_time();
  }
  const double q = best[4];
  const double mu = q / r_best - best[2];
  const double d = best[5] + mu * q;

  ShootingResult out;
  out.mu = mu;
  out.energy = 0.25 * d / std::pow(mu, 1.5);
  out.center = 1.0 / mu;
  out.mass = q / std::sqrt(mu);

  // omega_1(y) = w(y / sqrt(mu)) / mu, sampled with the dense output.
  const double s = std::sqrt(mu);
  if (r_max / s >= r_best) throw std::runtime_error("sampling range too long");
  auto sampler = make_stepper();
  sampler.initialize(initial(w0), kStart, 1e-4);
  for (int i = 0; i * dr <= r_max + 1e-12; ++i) {
    const double y = i * dr;
    const double rw = y / s;
    out.r.push_back(y);
    if (rw <= kStart) {
      out.value.push_back(1.0 / mu);
      continue;
    }
    while (sampler.current_time() < rw) sampler.do_step(rhs);
    State at;
    sampler.calc_state(rw, at);
    out.value.push_back(at[0] / mu);
  }
  return out;
}

}  // namespace oracle
