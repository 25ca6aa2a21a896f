#pragma once

/// The Horodecki criterion M(rho), Bell-CHSH operators built from measurement
/// directions, and the translation of Bell operators into witnesses.

#include <array>
#include <cmath>
#include <optional>

#include "qbell/matrix.hpp"
#include "qbell/states.hpp"

namespace qbell {

inline constexpr double kLocalTol = 1e-9;

/// Verdict of the Horodecki criterion. m_value is the sum of the two largest
/// eigenvalues of T^t T; the state admits a Bell-CHSH violation iff
/// m_value > 1, with maximal expectation 2 sqrt(m_value).
struct ChshAnalysis {
  double m_value;
  double max_chsh;
  bool local;
  std::array<double, 2> top_eigenvalues;
};

namespace detail {

inline std::array<double, 2> top_two_gram_eigenvalues(const Mat3& t) {
  const auto spec = sym_eigen3(RealSymMatrix3::gram(t));
  return {spec.values[0], spec.values[1]};
}

}  // namespace detail

/// M of a raw density matrix; fast path shared with the orbit search.
inline double chsh_m_value(const Mat4& rho) {
  const auto top = detail::top_two_gram_eigenvalues(correlation_matrix(rho));
  return top[0] + top[1];
}

inline ChshAnalysis analyze_chsh(const DensityMatrix& rho) {
  const auto top = detail::top_two_gram_eigenvalues(correlation_matrix(rho.matrix()));
  ChshAnalysis a;
  a.top_eigenvalues = top;
  a.m_value = top[0] + top[1];
  a.max_chsh = 2.0 * std::sqrt(std::max(0.0, a.m_value));
  a.local = a.m_value <= 1.0 + kLocalTol;
  return a;
}

/// B = (a.s) (x) ((b+b').s) + (a'.s) (x) ((b-b').s) for unit directions.
struct BellOperator {
  Mat4 op;
  std::array<Vec3, 4> directions;  // a, a', b, b'
};

inline BellOperator build_bell_operator(const Vec3& a, const Vec3& a_prime, const Vec3& b,
                                        const Vec3& b_prime) {
  for (const Vec3* vp : {&a, &a_prime, &b, &b_prime}) {
    const double n = norm(*vp);
    if (!(std::abs(n - 1.0) <= 1e-9)) throw NotUnitVector(n);
  }
  BellOperator bell;
  bell.directions = {a, a_prime, b, b_prime};
  bell.op = kron(pauli_dot(a), pauli_dot(b + b_prime)) +
            kron(pauli_dot(a_prime), pauli_dot(b - b_prime));
  return bell;
}

enum class WitnessKind { BellChshWitness, ConjugatedWitness, GenericLinear };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::BellChshWitness: return "bell-chsh";
    case WitnessKind::ConjugatedWitness: return "conjugated";
    case WitnessKind::GenericLinear: return "generic-linear";
  }
  return "unknown";
}

/// Hermitian operator whose negative expectation values flag detected states.
/// bound is the classical constant c in W = c I - B (2 for CHSH).
struct WitnessOperator {
  Mat4 op;
  WitnessKind kind;
  double bound;
  std::optional<Mat4> certifying_unitary;
};

/// W = 2 I - B; Tr(W rho) >= 0 iff Tr(B rho) <= 2.
inline WitnessOperator chsh_operator_to_witness(const BellOperator& bell) {
  WitnessOperator w;
  w.op = Mat4::identity() * cdouble(2.0) - bell.op;
  w.kind = WitnessKind::BellChshWitness;
  w.bound = 2.0;
  return w;
}

/// c I - B for any Hermitian Bell-type operator with classical bound c.
inline WitnessOperator generic_linear_witness(const Mat4& bell_op, double c) {
  const double herm_residual = frobenius_norm(bell_op - adjoint(bell_op));
  if (!(herm_residual <= 1e-9)) throw NotHermitian(herm_residual);
  WitnessOperator w;
  w.op = Mat4::identity() * cdouble(c) - bell_op;
  w.kind = WitnessKind::GenericLinear;
  w.bound = c;
  return w;
}

inline double evaluate_witness(const WitnessOperator& w, const DensityMatrix& rho) {
  return detail::re_trace_product(w.op, rho.matrix());
}

/// Measurement directions attaining 2 sqrt(M) on a given correlation matrix:
/// c, c' are unit eigenvectors of T^t T for its two largest eigenvalues;
/// a, a' align with T c, T c'; b, b' mix c, c' by the angle that weighs the
/// two singular values.
struct ChshDirections {
  Vec3 a, a_prime, b, b_prime;
};

inline ChshDirections optimal_directions(const Mat3& t) {
  const auto eig = sym_eigen3_full(RealSymMatrix3::gram(t));
  const Vec3 c1{eig.vectors(0, 0), eig.vectors(1, 0), eig.vectors(2, 0)};
  const Vec3 c2{eig.vectors(0, 1), eig.vectors(1, 1), eig.vectors(2, 1)};
  const double s1 = std::sqrt(std::max(0.0, eig.spectrum.values[0]));
  const double s2 = std::sqrt(std::max(0.0, eig.spectrum.values[1]));

  const auto image_direction = [&](const Vec3& c, const Vec3& other) {
    const Vec3 tc = apply(t, c);
    const double n = norm(tc);
    if (n > 1e-12) return normalized(tc);
    // degenerate image; any unit vector orthogonal to the other works
    const Vec3 tother = apply(t, other);
    if (norm(tother) > 1e-12) {
      const Vec3 base = normalized(tother);
      Vec3 probe{1.0, 0.0, 0.0};
      if (std::abs(dot(base, probe)) > 0.9) probe = Vec3{0.0, 1.0, 0.0};
      return normalized(cross(base, probe));
    }
    return Vec3{0.0, 0.0, 1.0};
  };

  const double theta = std::atan2(s2, s1);
  const double ct = std::cos(theta), st = std::sin(theta);
  ChshDirections d;
  d.a = image_direction(c1, c2);
  d.a_prime = image_direction(c2, c1);
  d.b = normalized(ct * c1 + st * c2);
  d.b_prime = normalized(ct * c1 - st * c2);
  return d;
}

}  // namespace qbell
