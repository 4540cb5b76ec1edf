#pragma once

// Fixed-size complex linear algebra for the three-level problem. Everything
// here is 3x3 or 3-vector; no general-n support.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>

#include "lambda_pt/errors.hpp"

namespace lambda_pt {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Three complex components, indexed 0..2 for levels |1>, |2>, |3>.
struct CVec3 {
  std::array<Complex, 3> v{};

  constexpr CVec3() = default;
  constexpr CVec3(Complex a, Complex b, Complex c) : v{a, b, c} {}

  constexpr Complex& operator[](std::size_t i) { return v[i]; }
  constexpr const Complex& operator[](std::size_t i) const { return v[i]; }

  static constexpr CVec3 unit(std::size_t i) {
    CVec3 e;
    e.v[i] = 1.0;
    return e;
  }

  double norm2() const { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }
  double norm() const { return std::sqrt(norm2()); }
  double max_abs() const { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }
  bool finite() const { return is_finite(v[0]) && is_finite(v[1]) && is_finite(v[2]); }

  CVec3& operator+=(const CVec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  CVec3& operator-=(const CVec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  CVec3& operator*=(Complex s) {
    for (auto& x : v) x *= s;
    return *this;
  }
};

inline CVec3 operator+(CVec3 a, const CVec3& b) { return a += b; }
inline CVec3 operator-(CVec3 a, const CVec3& b) { return a -= b; }
inline CVec3 operator*(Complex s, CVec3 a) { return a *= s; }
inline CVec3 operator*(CVec3 a, Complex s) { return a *= s; }
inline CVec3 operator/(CVec3 a, Complex s) { return a *= (1.0 / s); }

inline Complex dot(const CVec3& a, const CVec3& b) {  // <a|b>, conjugating a
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

/// Dense 3x3 complex matrix, row-major, (row, col) in level order.
struct CMat3 {
  std::array<Complex, 9> e{};

  constexpr CMat3() = default;
  CMat3(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = 0;
    for (const auto& row : rows) {
      std::size_t c = 0;
      for (const auto& x : row) {
        if (r < 3 && c < 3) e[3 * r + c] = x;
        ++c;
      }
      ++r;
    }
  }

  constexpr Complex& operator()(std::size_t r, std::size_t c) { return e[3 * r + c]; }
  constexpr const Complex& operator()(std::size_t r, std::size_t c) const { return e[3 * r + c]; }

  static CMat3 identity() { return diag(1.0, 1.0, 1.0); }
  static CMat3 zero() { return CMat3{}; }
  static CMat3 diag(Complex a, Complex b, Complex c) {
    CMat3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  }
  // Columns given as vectors.
  static CMat3 from_columns(const CVec3& c0, const CVec3& c1, const CVec3& c2) {
    CMat3 m;
    for (std::size_t r = 0; r < 3; ++r) {
      m(r, 0) = c0[r];
      m(r, 1) = c1[r];
      m(r, 2) = c2[r];
    }
    return m;
  }

  CVec3 column(std::size_t c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : e) m = std::max(m, std::abs(x));
    return m;
  }
  bool finite() const {
    return std::all_of(e.begin(), e.end(), [](Complex z) { return is_finite(z); });
  }
  Complex trace() const { return e[0] + e[4] + e[8]; }

  CMat3& operator+=(const CMat3& o) {
    for (std::size_t i = 0; i < 9; ++i) e[i] += o.e[i];
    return *this;
  }
  CMat3& operator-=(const CMat3& o) {
    for (std::size_t i = 0; i < 9; ++i) e[i] -= o.e[i];
    return *this;
  }
  CMat3& operator*=(Complex s) {
    for (auto& x : e) x *= s;
    return *this;
  }
};

inline CMat3 operator+(CMat3 a, const CMat3& b) { return a += b; }
inline CMat3 operator-(CMat3 a, const CMat3& b) { return a -= b; }
inline CMat3 operator*(Complex s, CMat3 a) { return a *= s; }
inline CMat3 operator*(CMat3 a, Complex s) { return a *= s; }

inline CMat3 mat_mul(const CMat3& a, const CMat3& b) {
  CMat3 out;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
    }
  }
  return out;
}
inline CMat3 operator*(const CMat3& a, const CMat3& b) { return mat_mul(a, b); }

inline CVec3 operator*(const CMat3& a, const CVec3& x) {
  CVec3 out;
  for (std::size_t r = 0; r < 3; ++r) out[r] = a(r, 0) * x[0] + a(r, 1) * x[1] + a(r, 2) * x[2];
  return out;
}

inline CMat3 adjoint(const CMat3& a) {
  CMat3 out;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) out(r, c) = std::conj(a(c, r));
  return out;
}

// Entry-wise complex conjugate (no transpose).
inline CMat3 conjugate(const CMat3& a) {
  CMat3 out;
  for (std::size_t i = 0; i < 9; ++i) out.e[i] = std::conj(a.e[i]);
  return out;
}

inline double max_abs_diff(const CMat3& a, const CMat3& b) { return (a - b).max_abs(); }
inline double max_abs_diff(const CVec3& a, const CVec3& b) { return (a - b).max_abs(); }

inline Complex determinant(const CMat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// |det| at or below this times (max entry)^3 is treated as singular.
inline constexpr double kSingularityTol = 1e-12;

/// Adjugate over determinant. Throws SingularMatrix when the scaled
/// determinant falls under kSingularityTol.
inline CMat3 inverse(const CMat3& a) {
  const double scale = a.max_abs();
  const Complex det = determinant(a);
  if (!(std::abs(det) > kSingularityTol * scale * scale * scale)) {
    throw SingularMatrix("matrix is singular to working tolerance (|det| = " +
                         std::to_string(std::abs(det)) + ")");
  }
  CMat3 adj;
  adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return adj * (1.0 / det);
}

inline bool is_hermitian(const CMat3& a, double tol) { return max_abs_diff(a, adjoint(a)) <= tol; }

/// Sylvester's criterion on the leading principal minors. The input has to
/// be Hermitian first; otherwise NotHermitian is thrown.
inline bool is_positive_definite(const CMat3& a, double tol) {
  if (!is_hermitian(a, tol)) throw NotHermitian("positive-definiteness requires a Hermitian matrix");
  const Complex m1 = a(0, 0);
  const Complex m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex m3 = determinant(a);
  return m1.real() > tol && m2.real() > tol && m3.real() > tol;
}

/// All three roots, with multiplicity, of x^3 + c2 x^2 + c1 x + c0.
///
/// Cardano on the depressed cubic, then two guarded Newton steps per root.
/// Throws NoConvergence when the polished residual still exceeds both the
/// coefficient-scaled and the backward-error tolerance.
inline std::array<Complex, 3> cubic_roots(Complex c2, Complex c1, Complex c0) {
  if (!is_finite(c2) || !is_finite(c1) || !is_finite(c0)) {
    throw InvalidParams("cubic_roots: non-finite coefficient");
  }
  auto poly = [&](Complex x) { return ((x + c2) * x + c1) * x + c0; };
  auto dpoly = [&](Complex x) { return (3.0 * x + 2.0 * c2) * x + c1; };

  const Complex shift = c2 / 3.0;
  const Complex p = c1 - c2 * c2 / 3.0;
  const Complex q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const Complex s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  const Complex w1 = -q / 2.0 + s;
  const Complex w2 = -q / 2.0 - s;
  const Complex w = std::abs(w1) >= std::abs(w2) ? w1 : w2;

  std::array<Complex, 3> roots;
  if (std::abs(w) == 0.0) {
    roots.fill(-shift);
  } else {
    const Complex u = std::pow(w, 1.0 / 3.0);
    const Complex omega{-0.5, std::sqrt(3.0) / 2.0};
    Complex rot = 1.0;
    for (auto& r : roots) {
      const Complex uk = u * rot;
      r = uk - p / (3.0 * uk) - shift;
      rot *= omega;
    }
  }

  const double coeff_scale = std::max({1.0, std::abs(c0), std::abs(c1), std::abs(c2)});
  for (auto& r : roots) {
    for (int step = 0; step < 2; ++step) {
      const Complex f = poly(r);
      const Complex df = dpoly(r);
      if (f == 0.0 || df == 0.0) break;
      const Complex cand = r - f / df;
      if (is_finite(cand) && std::abs(poly(cand)) < std::abs(f)) r = cand;
    }
    const double ax = std::abs(r);
    const double backward =
        ax * ax * ax + std::abs(c2) * ax * ax + std::abs(c1) * ax + std::abs(c0);
    const double res = std::abs(poly(r));
    if (!is_finite(r) || (res > 1e-10 * coeff_scale && res > 1e-12 * backward)) {
      throw NoConvergence("cubic_roots: residual " + std::to_string(res) + " after polishing");
    }
  }
  return roots;
}

}  // namespace lambda_pt
