#pragma once

// Physical parameters and the three Hamiltonians of the damped Lambda atom:
// the time-dependent lab-frame matrix, the time-independent rotating-frame
// matrix and its PT-symmetric specialisation. Energies carry hbar; decay
// rates gamma_k enter the diagonal as -i*gamma_k.

#include <algorithm>
#include <cmath>
#include <string>

#include "lambda_pt/errors.hpp"
#include "lambda_pt/linalg3.hpp"

namespace lambda_pt {

// Relative tolerance for the equalities assumed by the rotating-frame
// reduction (gamma2 average, resonance, equal couplings).
inline constexpr double kReductionTol = 1e-12;

struct SystemParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double omega_p = 0.0;
  double omega_c = 0.0;
  double v_p = 0.0;
  double v_c = 0.0;
  double hbar = 1.0;

  // Basic physical validity: finite, non-negative decays, hbar > 0.
  void validate() const {
    const double all[] = {gamma1, gamma2, gamma3, omega1, omega2, omega3,
                          omega_p, omega_c, v_p, v_c, hbar};
    for (double x : all) {
      if (!std::isfinite(x)) throw InvalidParams("SystemParams: non-finite value");
    }
    if (gamma1 < 0.0 || gamma2 < 0.0 || gamma3 < 0.0) {
      throw InvalidParams("SystemParams: decay rates must be non-negative");
    }
    if (!(hbar > 0.0)) throw InvalidParams("SystemParams: hbar must be positive");
  }

  bool satisfies_lambda_reduction() const {
    return std::abs(gamma2 - 0.5 * (gamma1 + gamma3)) <=
           kReductionTol * std::max({gamma1, gamma3, 1.0});
  }

  // omega_23 == omega_c, the resonance of the coupling field.
  bool coupling_resonant() const {
    return std::abs((omega2 - omega3) - omega_c) <=
           kReductionTol * std::max({std::abs(omega2), std::abs(omega3), std::abs(omega_c), 1.0});
  }

  // Pump detuning omega_21 - omega_p.
  double detuning() const { return (omega2 - omega1) - omega_p; }

  // Everything required before building the rotating-frame Hamiltonian.
  void validate_lambda() const {
    validate();
    if (!satisfies_lambda_reduction()) {
      throw InvalidParams("SystemParams: gamma2 must equal (gamma1 + gamma3)/2, got gamma2 = " +
                          std::to_string(gamma2));
    }
  }
};

/// Rotating-frame parameters. Only obtainable from a SystemParams so that
/// gamma_pt always agrees with the decay rates it came from.
class EffectiveParams {
 public:
  static EffectiveParams from(const SystemParams& p) {
    p.validate_lambda();
    EffectiveParams e;
    e.gamma_pt_ = 0.5 * (p.gamma1 - p.gamma3);
    e.delta_ = p.detuning();
    e.v_p_ = p.v_p;
    e.v_c_ = p.v_c;
    e.hbar_ = p.hbar;
    e.resonance_exact_ = p.coupling_resonant();
    return e;
  }

  double gamma_pt() const { return gamma_pt_; }
  double delta() const { return delta_; }             // rad/time
  double hbar_delta() const { return hbar_ * delta_; }  // energy
  double v_p() const { return v_p_; }
  double v_c() const { return v_c_; }
  double hbar() const { return hbar_; }
  // False when omega_23 != omega_c and the resonance was imposed anyway.
  bool resonance_exact() const { return resonance_exact_; }

 private:
  EffectiveParams() = default;
  double gamma_pt_ = 0.0;
  double delta_ = 0.0;
  double v_p_ = 0.0;
  double v_c_ = 0.0;
  double hbar_ = 1.0;
  bool resonance_exact_ = true;
};

/// The two free parameters of the PT-symmetric Hamiltonian: gain/loss
/// gamma_pt and the common coupling v.
class PtParams {
 public:
  PtParams(double gamma_pt, double v, double hbar = 1.0)
      : gamma_pt_(gamma_pt), v_(v), hbar_(hbar) {
    if (!std::isfinite(gamma_pt) || !std::isfinite(v) || !std::isfinite(hbar)) {
      throw InvalidParams("PtParams: non-finite value");
    }
    if (v == 0.0) throw DegenerateCoupling("PtParams: coupling v must be non-zero");
    if (v < 0.0) throw InvalidParams("PtParams: coupling v must be positive");
    if (!(hbar > 0.0)) throw InvalidParams("PtParams: hbar must be positive");
  }

  // Requires the PT conditions: zero detuning and v_p == v_c.
  static PtParams from(const SystemParams& p) {
    const EffectiveParams e = EffectiveParams::from(p);
    const double energy_scale =
        std::max({std::abs(p.hbar * p.omega1), std::abs(p.hbar * p.omega2),
                  std::abs(p.hbar * p.omega_p), 1.0});
    if (std::abs(e.hbar_delta()) > kReductionTol * energy_scale) {
      throw InvalidParams("PT form requires zero pump detuning");
    }
    if (!e.resonance_exact()) throw InvalidParams("PT form requires omega_23 == omega_c");
    if (std::abs(p.v_p - p.v_c) > kReductionTol * std::max(std::abs(p.v_p), std::abs(p.v_c))) {
      throw InvalidParams("PT form requires v_p == v_c");
    }
    return PtParams(e.gamma_pt(), p.v_p, p.hbar);
  }

  double gamma_pt() const { return gamma_pt_; }
  double v() const { return v_; }
  double hbar() const { return hbar_; }

 private:
  double gamma_pt_;
  double v_;
  double hbar_;
};

/// Lab-frame Hamiltonian at time t with rotating-wave couplings:
/// V12 = v_p e^{+i w_p t}, V21 = v_p e^{-i w_p t}, V23 = v_c e^{-i w_c t},
/// V32 = v_c e^{+i w_c t}. The |1>-|3> slots stay zero.
inline CMat3 build_lab_hamiltonian(const SystemParams& p, double t) {
  p.validate();
  if (!std::isfinite(t)) throw InvalidParams("build_lab_hamiltonian: non-finite time");
  const Complex pump = std::polar(1.0, p.omega_p * t);
  const Complex coupling = std::polar(1.0, p.omega_c * t);
  CMat3 h;
  h(0, 0) = Complex{p.hbar * p.omega1, -p.gamma1};
  h(1, 1) = Complex{p.hbar * p.omega2, -p.gamma2};
  h(2, 2) = Complex{p.hbar * p.omega3, -p.gamma3};
  h(0, 1) = p.v_p * pump;
  h(1, 0) = p.v_p * std::conj(pump);
  h(1, 2) = p.v_c * std::conj(coupling);
  h(2, 1) = p.v_c * coupling;
  return h;
}

inline CMat3 build_effective_hamiltonian(const EffectiveParams& e) {
  const double g = e.gamma_pt();
  const double hd = e.hbar_delta();
  return CMat3{{Complex{0.0, -g}, e.v_p(), 0.0},
               {e.v_p(), hd, e.v_c()},
               {0.0, e.v_c(), Complex{hd, g}}};
}

inline CMat3 build_pt_hamiltonian(const PtParams& q) {
  const double g = q.gamma_pt();
  const double v = q.v();
  return CMat3{{Complex{0.0, -g}, v, 0.0}, {v, 0.0, v}, {0.0, v, Complex{0.0, g}}};
}

// Level exchange |1> <-> |3>.
inline CMat3 parity_operator() {
  return CMat3{{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
}

/// max-entry |H P - P conj(H)|: the commutator of H with PT, where T is
/// complex conjugation.
inline double pt_commutator_norm(const CMat3& h) {
  const CMat3 p = parity_operator();
  return max_abs_diff(h * p, p * conjugate(h));
}

/// max-entry |eta H eta^{-1} - H^dagger| for a known inverse of eta.
inline double pseudo_hermiticity_residual(const CMat3& h, const CMat3& eta, const CMat3& eta_inv) {
  return max_abs_diff(eta * h * eta_inv, adjoint(h));
}

/// eta H eta^{-1} == H^dagger, relative to max-entry |H|.
inline bool is_pseudo_hermitian(const CMat3& h, const CMat3& eta, double tol) {
  return pseudo_hermiticity_residual(h, eta, inverse(eta)) <= tol * h.max_abs();
}

// Same check when eta^{-1} is available in closed form; avoids the
// cond(eta) loss of inverting an ill-conditioned metric.
inline bool is_pseudo_hermitian(const CMat3& h, const CMat3& eta, const CMat3& eta_inv, double tol) {
  return pseudo_hermiticity_residual(h, eta, eta_inv) <= tol * h.max_abs();
}

}  // namespace lambda_pt
