#pragma once

// Analytic time evolution under the PT Hamiltonian and the map back to
// lab-frame amplitudes.
//
// Since H^3 = E^2 H, exp(-i H t / hbar) = I + beta H + kappa H^2 with
//   beta  = -i sin(E t/hbar) / E,
//   kappa = (cos(E t/hbar) - 1) / E^2 = -(t/hbar)^2 / 2 * sinc^2(E t / (2 hbar)).
// The sinc form is regular at E = 0 and turns into sinh/cosh for imaginary E.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lambda_pt/errors.hpp"
#include "lambda_pt/linalg3.hpp"
#include "lambda_pt/model.hpp"
#include "lambda_pt/spectral.hpp"

namespace lambda_pt {

enum class Frame { EffectiveB, LabC };

inline const char* to_string(Frame f) { return f == Frame::EffectiveB ? "effective" : "lab"; }

struct Trajectory {
  std::vector<double> times;
  std::vector<CVec3> amplitudes;
  Frame frame = Frame::EffectiveB;
  std::variant<std::monostate, SystemParams, PtParams> params_snapshot;

  std::size_t size() const { return times.size(); }
};

inline void check_time_grid(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw InvalidGrid("time grid contains a non-finite value");
    if (k > 0 && !(times[k] > times[k - 1])) throw InvalidGrid("time grid must be strictly increasing");
  }
}

// n evenly spaced points over [t0, t1], endpoints included.
inline std::vector<double> linspace(double t0, double t1, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = t0;
    return out;
  }
  const double step = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = t0 + step * static_cast<double>(k);
  out[n - 1] = t1;
  return out;
}

namespace detail {
// sin(x)/x, even in x.
inline Complex sinc(Complex x) {
  if (std::abs(x) < 1e-3) {
    const Complex x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}
}  // namespace detail

inline CMat3 propagator(const PtParams& q, double t) {
  if (t == 0.0) return CMat3::identity();
  const CMat3 h = build_pt_hamiltonian(q);
  const double tau = t / q.hbar();
  const Complex e = pt_energy(q.gamma_pt(), q.v());
  const Complex half = detail::sinc(e * tau / 2.0);
  const Complex beta = Complex{0.0, -tau} * detail::sinc(e * tau);
  const Complex kappa = -0.5 * tau * tau * half * half;
  return CMat3::identity() + beta * h + kappa * (h * h);
}

inline Trajectory evolve_b(const PtParams& q, const CVec3& b0, std::span<const double> times) {
  check_time_grid(times);
  Trajectory traj;
  traj.frame = Frame::EffectiveB;
  traj.params_snapshot = q;
  traj.times.assign(times.begin(), times.end());
  traj.amplitudes.reserve(times.size());
  for (double t : times) traj.amplitudes.push_back(propagator(q, t) * b0);
  return traj;
}

/// Coefficients of b(0) in the eigenbasis (columns of D).
struct ModalCoefficients {
  Complex c1pp;
  Complex c2pp;
  Complex c3pp;
};

inline ModalCoefficients modal_coefficients(const PtParams& q, const CVec3& b0) {
  const CVec3 c = inverse(similarity_matrix(q)) * b0;
  return {c[0], c[1], c[2]};
}

/// D (c1'' e^{-iEt/hbar}, c2'' e^{+iEt/hbar}, c3'').
inline CVec3 reconstruct(const PtParams& q, const ModalCoefficients& m, double t) {
  const Complex e = pt_energy(q.gamma_pt(), q.v());
  const Complex phase = std::exp(Complex{0.0, -1.0} * e * (t / q.hbar()));
  return similarity_matrix(q) * CVec3{m.c1pp * phase, m.c2pp / phase, m.c3pp};
}

/// b(t) for b(0) = (1, 0, 0):
///   b1 = v^2/E^2 + (v^2 - g^2)/E^2 cos(Et) - (g/E) sin(Et)
///   b2 = -i (v/E) sin(Et) - i (g v/E^2)(cos(Et) - 1)
///   b3 = (v^2/E^2)(cos(Et) - 1)
/// with t in units of hbar. Complex E covers the broken phase; at the
/// exceptional point the E -> 0 limits are used.
inline CVec3 closed_form_b_ground(const PtParams& q, double t) {
  const double g = q.gamma_pt();
  const double v = q.v();
  const double tau = t / q.hbar();
  if (classify_regime(q).tag == RegimeTag::ExceptionalPoint) {
    // sin(Et)/E -> t, (cos(Et) - 1)/E^2 -> -t^2/2.
    const double c = -0.5 * tau * tau;
    return {1.0 + (v * v - g * g) * c - g * tau, Complex{0.0, -v * tau - g * v * c}, v * v * c};
  }
  const Complex e = pt_energy(g, v);
  const Complex e2 = e * e;
  const Complex cs = std::cos(e * tau);
  const Complex sn = std::sin(e * tau);
  const Complex b1 = v * v / e2 + (v * v - g * g) / e2 * cs - g / e * sn;
  const Complex b2 = -kI * (v / e) * sn - kI * (g * v / e2) * (cs - 1.0);
  const Complex b3 = v * v / e2 * (cs - 1.0);
  return {b1, b2, b3};
}

namespace detail {
// Phases of the lab amplitudes relative to b: C_k = b_k e^{-gamma2 t/hbar} e^{-i phi_k t}.
inline std::array<double, 3> lab_phase_rates(const SystemParams& p) {
  return {p.omega1, p.omega1 + p.omega_p, p.omega1 + p.omega_p - p.omega_c};
}

inline void check_frame_params(const SystemParams& p) {
  p.validate_lambda();
  if (!p.coupling_resonant()) throw InvalidParams("frame map requires omega_23 == omega_c");
}
}  // namespace detail

inline Trajectory to_lab_frame(const Trajectory& traj, const SystemParams& p) {
  if (traj.frame != Frame::EffectiveB) throw FrameMismatch("to_lab_frame: trajectory is already lab-frame");
  detail::check_frame_params(p);
  const auto rates = detail::lab_phase_rates(p);
  Trajectory out;
  out.frame = Frame::LabC;
  out.params_snapshot = p;
  out.times = traj.times;
  out.amplitudes.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const double envelope = std::exp(-p.gamma2 * t / p.hbar);
    CVec3 c;
    for (std::size_t i = 0; i < 3; ++i) c[i] = traj.amplitudes[k][i] * std::polar(envelope, -rates[i] * t);
    out.amplitudes.push_back(c);
  }
  return out;
}

inline Trajectory to_effective_frame(const Trajectory& traj, const SystemParams& p) {
  if (traj.frame != Frame::LabC) throw FrameMismatch("to_effective_frame: trajectory is already effective-frame");
  detail::check_frame_params(p);
  const auto rates = detail::lab_phase_rates(p);
  Trajectory out;
  out.frame = Frame::EffectiveB;
  out.params_snapshot = p;
  out.times = traj.times;
  out.amplitudes.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const double growth = std::exp(p.gamma2 * t / p.hbar);
    CVec3 b;
    for (std::size_t i = 0; i < 3; ++i) b[i] = traj.amplitudes[k][i] * std::polar(growth, rates[i] * t);
    out.amplitudes.push_back(b);
  }
  return out;
}

/// |amplitude_i(t)|^2 per level.
inline std::array<std::vector<double>, 3> populations(const Trajectory& traj) {
  std::array<std::vector<double>, 3> pops;
  for (auto& p : pops) p.reserve(traj.size());
  for (const auto& a : traj.amplitudes) {
    for (std::size_t i = 0; i < 3; ++i) pops[i].push_back(std::norm(a[i]));
  }
  return pops;
}

}  // namespace lambda_pt
