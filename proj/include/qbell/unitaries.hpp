#pragma once

/// Global unitary generation: Z-Y-Z local unitaries, the nonlocal Cartan core
/// exp(-i/2 sum_k c_k s_k (x) s_k) in closed form, full Cartan composition
/// U = (U_A (x) U_B) U_d (V_A (x) V_B), named gates, and seeded Haar sampling.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qbell/matrix.hpp"
#include "qbell/random.hpp"
#include "qbell/states.hpp"

namespace qbell {

/// Z-Y-Z Euler angles (phi, theta, psi).
using EulerAngles = std::array<double, 3>;

/// Parameters generating a global unitary via the Cartan decomposition.
/// The core triple (c1, c2, c3) drives the nonlocal factor; the four Euler
/// triples drive the local factors before and after it.
struct CartanParams {
  std::array<double, 3> core{};
  EulerAngles pre_a{};
  EulerAngles pre_b{};
  EulerAngles post_a{};
  EulerAngles post_b{};
};

/// exp(-i phi s3/2) exp(-i theta s2/2) exp(-i psi s3/2); an element of SU(2).
inline Mat2 local_unitary(const EulerAngles& euler) {
  const double phi = euler[0], theta = euler[1], psi = euler[2];
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cdouble ep = std::polar(1.0, -(phi + psi) / 2.0);
  const cdouble em = std::polar(1.0, -(phi - psi) / 2.0);
  Mat2 u;
  u(0, 0) = ep * c;
  u(0, 1) = -em * s;
  u(1, 0) = std::conj(em) * s;
  u(1, 1) = std::conj(ep) * c;
  return u;
}

/// The SO(3) rotation induced on Bloch vectors: D_ik = 1/2 Tr[u^dag s_i u s_k].
/// Conjugating a state by u_A (x) u_B maps T to D(u_A) T D(u_B)^t.
inline Mat3 bloch_rotation(const Mat2& u) {
  const auto& p = pauli();
  const std::array<const Mat2*, 3> s{&p.s1, &p.s2, &p.s3};
  const Mat2 ud = adjoint(u);
  Mat3 d;
  for (std::size_t i = 0; i < 3; ++i) {
    const Mat2 m = ud * (*s[i] * u);
    for (std::size_t k = 0; k < 3; ++k) d(i, k) = 0.5 * trace(m * (*s[k])).real();
  }
  return d;
}

/// Columns phi+, phi-, psi+, psi- in the computational basis.
inline const Mat4& bell_basis() {
  static const Mat4 q = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    Mat4 m;
    m(0, 0) = r;  m(3, 0) = r;   // phi+
    m(0, 1) = r;  m(3, 1) = -r;  // phi-
    m(1, 2) = r;  m(2, 2) = r;   // psi+
    m(1, 3) = r;  m(2, 3) = -r;  // psi-
    return m;
  }();
  return q;
}

/// Magic basis: maximally entangled columns such that a pure state is
/// maximally entangled iff its coordinates form a real vector up to phase.
inline const Mat4& magic_basis() {
  static const Mat4 q = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    const cdouble ir(0.0, 1.0 / std::numbers::sqrt2);
    Mat4 m;
    m(0, 0) = r;   m(3, 0) = r;    // (|00> + |11>)/sqrt2
    m(0, 1) = ir;  m(3, 1) = -ir;  // i(|00> - |11>)/sqrt2
    m(1, 2) = ir;  m(2, 2) = ir;   // i(|01> + |10>)/sqrt2
    m(1, 3) = r;   m(2, 3) = -r;   // (|01> - |10>)/sqrt2
    return m;
  }();
  return q;
}

/// Nonlocal core U_d = exp(-(i/2)(c1 s1(x)s1 + c2 s2(x)s2 + c3 s3(x)s3)).
/// The exponent is diagonal in the Bell basis, so the matrix is assembled in
/// closed form with phases
///   mu = (c1-c2+c3, -c1+c2+c3, c1+c2-c3, -c1-c2-c3)
/// on (phi+, phi-, psi+, psi-).
inline Mat4 nonlocal_core(const std::array<double, 3>& c) {
  const std::array<double, 4> mu{c[0] - c[1] + c[2], -c[0] + c[1] + c[2],
                                 c[0] + c[1] - c[2], -c[0] - c[1] - c[2]};
  const Mat4& q = bell_basis();
  Mat4 u;
  for (std::size_t j = 0; j < 4; ++j) {
    const cdouble phase = std::polar(1.0, -mu[j] / 2.0);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t col = 0; col < 4; ++col)
        u(r, col) += phase * q(r, j) * std::conj(q(col, j));
  }
  return u;
}

inline Mat4 compose_cartan(const CartanParams& p) {
  const Mat4 pre = kron(local_unitary(p.pre_a), local_unitary(p.pre_b));
  const Mat4 post = kron(local_unitary(p.post_a), local_unitary(p.post_b));
  return post * (nonlocal_core(p.core) * pre);
}

/// First qubit controls: |10> <-> |11>, |00> and |01> fixed.
inline const Mat4& cnot() {
  static const Mat4 m = mat_from<4>({1, 0, 0, 0,
                                     0, 1, 0, 0,
                                     0, 0, 0, 1,
                                     0, 0, 1, 0});
  return m;
}

inline const Mat4& swap_gate() {
  static const Mat4 m = mat_from<4>({1, 0, 0, 0,
                                     0, 0, 1, 0,
                                     0, 1, 0, 0,
                                     0, 0, 0, 1});
  return m;
}

template <std::size_t N>
bool is_unitary(const Mat<N>& u, double tol = 1e-9) {
  return frobenius_norm(adjoint(u) * u - Mat<N>::identity()) <= tol;
}

/// Haar-distributed unitary: Gram-Schmidt orthonormalization of an iid complex
/// Gaussian matrix. Normalizing each pivot to a positive real diagonal fixes
/// the phase ambiguity of the QR factorization, which makes the induced
/// distribution left-invariant. One re-orthogonalization pass keeps
/// ||U^dag U - I|| near machine precision.
inline Mat4 haar_random_unitary(Rng& rng) {
  Mat4 g;
  for (auto& x : g.e) x = rng.complex_gaussian();
  Mat4 u = g;
  for (std::size_t col = 0; col < 4; ++col) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t prev = 0; prev < col; ++prev) {
        cdouble proj{};
        for (std::size_t r = 0; r < 4; ++r) proj += std::conj(u(r, prev)) * u(r, col);
        for (std::size_t r = 0; r < 4; ++r) u(r, col) -= proj * u(r, prev);
      }
    }
    double n2 = 0.0;
    for (std::size_t r = 0; r < 4; ++r) n2 += std::norm(u(r, col));
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t r = 0; r < 4; ++r) u(r, col) *= inv;
  }
  return u;
}

/// U rho U^dag as a raw matrix; used by the orbit search where the result is
/// valid by construction.
inline Mat4 conjugate_raw(const Mat4& u, const Mat4& rho) {
  return u * (rho * adjoint(u));
}

/// U rho U^dag, re-validated.
inline DensityMatrix conjugate(const Mat4& u, const DensityMatrix& rho) {
  Mat4 m = conjugate_raw(u, rho.matrix());
  // symmetrize roundoff before validation
  Mat4 h;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return validate_state(h);
}

/// min over phases of ||a - e^{i phi} b||_F.
template <std::size_t N>
double phase_aligned_distance(const Mat<N>& a, const Mat<N>& b) {
  cdouble overlap{};
  for (std::size_t i = 0; i < N * N; ++i) overlap += std::conj(a.e[i]) * b.e[i];
  const double d2 = frobenius_norm(a) * frobenius_norm(a) +
                    frobenius_norm(b) * frobenius_norm(b) - 2.0 * std::abs(overlap);
  return std::sqrt(std::max(0.0, d2));
}

/// Reduces a core triple to the chamber c1 >= c2 >= |c3| with c1, c2 in
/// [0, pi/2], using the equivalences that leave the nonlocal content of U_d
/// unchanged: shifts by pi (a local factor times a phase), simultaneous sign
/// flips of two coefficients (conjugation by s_l (x) I), and coordinate
/// permutations (conjugation by local Cliffords).
inline std::array<double, 3> canonicalize_core(const std::array<double, 3>& core) {
  std::array<double, 3> c = core;
  for (auto& x : c) {
    x = std::remainder(x, std::numbers::pi);  // (-pi/2, pi/2]
  }
  // flip pairs of negative signs; park a leftover sign on the smallest entry
  int negatives = 0;
  for (double x : c) negatives += (x < 0.0);
  if (negatives >= 2) {
    int flipped = 0;
    for (auto& x : c) {
      if (x < 0.0 && flipped < 2) {
        x = -x;
        ++flipped;
      }
    }
    negatives -= 2;
  }
  if (negatives == 1) {
    auto neg = std::find_if(c.begin(), c.end(), [](double x) { return x < 0.0; });
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (std::abs(c[i]) < std::abs(c[smallest])) smallest = i;
    if (static_cast<std::size_t>(neg - c.begin()) != smallest) {
      *neg = -*neg;
      c[smallest] = -c[smallest];
    }
  }
  std::sort(c.begin(), c.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  return c;
}

}  // namespace qbell
