#pragma once

// Numerical ground truth used to check the closed forms: fixed-step RK4 on
// the rotating-frame and lab-frame Schroedinger equations, and eigenvalues
// from the characteristic polynomial.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "lambda_pt/errors.hpp"
#include "lambda_pt/evolve.hpp"
#include "lambda_pt/linalg3.hpp"
#include "lambda_pt/model.hpp"
#include "lambda_pt/spectral.hpp"

namespace lambda_pt {

inline constexpr double kOverflowGuard = 1e12;

struct IntegratorConfig {
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t record_stride = 1;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParams("IntegratorConfig: dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParams("IntegratorConfig: t_end must be positive");
    if (dt > t_end) throw InvalidParams("IntegratorConfig: dt must not exceed t_end");
    if (record_stride == 0) throw InvalidParams("IntegratorConfig: record_stride must be positive");
  }
};

// dt with (dt * rate / hbar) = 0.01 at the fastest rate of the problem.
inline double recommended_dt(const PtParams& q) {
  const double rate = std::max({std::abs(pt_energy(q.gamma_pt(), q.v())), std::abs(q.gamma_pt()), q.v()});
  return 0.01 * q.hbar() / rate;
}

inline double recommended_dt(const SystemParams& p) {
  const double rate = std::max({p.gamma1, p.gamma2, p.gamma3, std::abs(p.hbar * p.omega1),
                                std::abs(p.hbar * p.omega2), std::abs(p.hbar * p.omega3),
                                std::abs(p.hbar * p.omega_p), std::abs(p.hbar * p.omega_c),
                                std::abs(p.v_p), std::abs(p.v_c), 1e-300});
  return 0.01 * p.hbar / rate;
}

namespace detail {
using Rhs = std::function<CVec3(double, const CVec3&)>;

inline Trajectory integrate_rk4(const Rhs& f, const CVec3& y0, const IntegratorConfig& cfg, Frame frame) {
  cfg.validate();
  Trajectory traj;
  traj.frame = frame;
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  traj.times.reserve(steps / cfg.record_stride + 2);
  traj.amplitudes.reserve(steps / cfg.record_stride + 2);
  traj.times.push_back(0.0);
  traj.amplitudes.push_back(y0);

  CVec3 y = y0;
  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? cfg.t_end : static_cast<double>(k) * cfg.dt;
    const double h = t_next - t;
    const CVec3 k1 = f(t, y);
    const CVec3 k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
    const CVec3 k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
    const CVec3 k4 = f(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t_next;
    if (!y.finite() || y.max_abs() > kOverflowGuard) {
      throw StepOverflow("RK4 amplitude exceeded " + std::to_string(kOverflowGuard) + " at t = " +
                         std::to_string(t));
    }
    if (k % cfg.record_stride == 0 || k == steps) {
      traj.times.push_back(t);
      traj.amplitudes.push_back(y);
    }
  }
  return traj;
}
}  // namespace detail

/// RK4 on i hbar db/dt = H_pt b.
inline Trajectory rk4_effective(const PtParams& q, const CVec3& b0, const IntegratorConfig& cfg) {
  const CMat3 gen = Complex{0.0, -1.0 / q.hbar()} * build_pt_hamiltonian(q);
  auto traj = detail::integrate_rk4([&](double, const CVec3& b) { return gen * b; }, b0, cfg,
                                    Frame::EffectiveB);
  traj.params_snapshot = q;
  return traj;
}

/// RK4 on i hbar dC/dt = H_lab(t) C, sampling H_lab at the substage times.
inline Trajectory rk4_lab(const SystemParams& p, const CVec3& c0, const IntegratorConfig& cfg) {
  p.validate();
  const Complex scale{0.0, -1.0 / p.hbar};
  auto traj = detail::integrate_rk4(
      [&](double t, const CVec3& c) { return scale * (build_lab_hamiltonian(p, t) * c); }, c0, cfg,
      Frame::LabC);
  traj.params_snapshot = p;
  return traj;
}

/// Roots of det(lambda I - H) from its invariants (trace, sum of principal
/// 2x2 minors, determinant).
inline std::array<Complex, 3> char_poly_eigen_oracle(const CMat3& h) {
  const Complex tr = h.trace();
  const Complex minors = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) +
                         (h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0)) +
                         (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1));
  return cubic_roots(-tr, minors, -determinant(h));
}

}  // namespace lambda_pt
