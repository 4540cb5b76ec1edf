#pragma once

// Closed-form eigensystem of the PT Hamiltonian
//
//   H = [[-i g, v, 0], [v, 0, v], [0, v, +i g]],
//
// whose spectrum is {0, +E, -E} with E^2 = 2 v^2 - g^2. The similarity
// matrix D has the eigenvectors as columns in the order (E, -E, 0) and the
// metric is eta = (D D^dagger)^{-1}.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "lambda_pt/errors.hpp"
#include "lambda_pt/linalg3.hpp"
#include "lambda_pt/model.hpp"

namespace lambda_pt {

enum class RegimeTag { Unbroken, Broken, ExceptionalPoint };

inline std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Unbroken:
      return "Unbroken";
    case RegimeTag::Broken:
      return "Broken";
    case RegimeTag::ExceptionalPoint:
      return "ExceptionalPoint";
  }
  return "Unknown";
}

struct Regime {
  RegimeTag tag;
  double discriminant;  // 2 v^2 - gamma_pt^2, energy^2
};

inline double pt_discriminant(double gamma_pt, double v) { return 2.0 * v * v - gamma_pt * gamma_pt; }

/// E = sqrt(2 v^2 - g^2), or i*sqrt(g^2 - 2 v^2) past the threshold. Takes raw
/// numbers so that parameter sweeps may include v = 0.
inline Complex pt_energy(double gamma_pt, double v) {
  const double d = pt_discriminant(gamma_pt, v);
  return d >= 0.0 ? Complex{std::sqrt(d), 0.0} : Complex{0.0, std::sqrt(-d)};
}

// Scale-invariant exceptional-point band on the discriminant.
inline double default_ep_tolerance(const PtParams& q) {
  return 1e-10 * std::max(q.v() * q.v(), q.gamma_pt() * q.gamma_pt());
}

inline Regime classify_regime(double gamma_pt, double v, double ep_tol) {
  if (!(ep_tol > 0.0)) throw InvalidParams("classify_regime: ep_tol must be positive");
  const double d = pt_discriminant(gamma_pt, v);
  if (d > ep_tol) return {RegimeTag::Unbroken, d};
  if (d < -ep_tol) return {RegimeTag::Broken, d};
  return {RegimeTag::ExceptionalPoint, d};
}

inline Regime classify_regime(const PtParams& q, double ep_tol) {
  return classify_regime(q.gamma_pt(), q.v(), ep_tol);
}

inline Regime classify_regime(const PtParams& q) { return classify_regime(q, default_ep_tolerance(q)); }

/// (E0, E+, E-) = (0, E, -E); E+ has non-negative imaginary part.
inline std::array<Complex, 3> eigenvalues(const PtParams& q) {
  const Complex e = pt_energy(q.gamma_pt(), q.v());
  return {Complex{0.0, 0.0}, e, -e};
}

namespace detail {
inline Complex checked_energy(const PtParams& q) {
  if (classify_regime(q).tag == RegimeTag::ExceptionalPoint) {
    throw ExceptionalPointError("eigenvectors coalesce at the exceptional point 2v^2 = gamma_pt^2");
  }
  return pt_energy(q.gamma_pt(), q.v());
}
}  // namespace detail

/// Eigenvectors for E, -E and 0, carrying the explicit 1/E normalisation
/// (not unit norm).
inline std::array<CVec3, 3> eigenvectors(const PtParams& q) {
  const Complex e = detail::checked_energy(q);
  const Complex ig{0.0, q.gamma_pt()};
  const double v = q.v();
  const Complex em = e - ig;
  const Complex ep = e + ig;
  return {CVec3{em * em / (2.0 * v), em, v} / e,
          CVec3{ep * ep / (2.0 * v), -ep, v} / e,
          CVec3{-v, -ig, v} / e};
}

inline CMat3 similarity_matrix(const PtParams& q) {
  const auto phi = eigenvectors(q);
  return CMat3::from_columns(phi[0], phi[1], phi[2]);
}

/// (D D^dagger)^{-1}, evaluated as D^{-dagger} D^{-1} so that the error grows
/// with cond(D) rather than cond(D)^2 near the exceptional point.
inline CMat3 metric(const CMat3& d) {
  const CMat3 d_inv = inverse(d);
  return adjoint(d_inv) * d_inv;
}

/// max-entry |D^dagger eta D - I|.
inline double verify_metric_orthonormality(const CMat3& eta, const CMat3& d) {
  return max_abs_diff(adjoint(d) * eta * d, CMat3::identity());
}

struct SpectralData {
  Complex e0;
  Complex e_plus;
  Complex e_minus;
  std::array<CVec3, 3> eigvecs;
  CMat3 d_matrix;
  CMat3 eta;
  CMat3 eta_inv;  // D D^dagger, exact without inverting eta
  Regime regime;
};

/// Full pipeline; throws ExceptionalPointError at the EP.
inline SpectralData spectral_data(const PtParams& q) {
  SpectralData s;
  const auto ev = eigenvalues(q);
  s.e0 = ev[0];
  s.e_plus = ev[1];
  s.e_minus = ev[2];
  s.regime = classify_regime(q);
  s.eigvecs = eigenvectors(q);
  s.d_matrix = CMat3::from_columns(s.eigvecs[0], s.eigvecs[1], s.eigvecs[2]);
  s.eta = metric(s.d_matrix);
  s.eta_inv = s.d_matrix * adjoint(s.d_matrix);
  return s;
}

}  // namespace lambda_pt
