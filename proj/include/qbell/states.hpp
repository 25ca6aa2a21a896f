#pragma once

/// Two-qubit density matrices: validation, the Hilbert-Schmidt decomposition
/// into Bloch vectors and the correlation matrix, the partial-transpose
/// entanglement test, and the spectral test for absolute separability.

#include <array>
#include <cmath>
#include <utility>

#include "qbell/errors.hpp"
#include "qbell/matrix.hpp"
#include "qbell/random.hpp"

namespace qbell {

inline constexpr double kHermTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kPptTol = 1e-9;
inline constexpr double kAbsSepTol = 1e-9;

struct PauliBasis {
  Mat2 s1, s2, s3, id2;
};

inline const PauliBasis& pauli() {
  static const PauliBasis basis = [] {
    PauliBasis b;
    b.s1 = mat_from<2>({0, 1, 1, 0});
    b.s2 = mat_from<2>({0, cdouble(0, -1), cdouble(0, 1), 0});
    b.s3 = mat_from<2>({1, 0, 0, -1});
    b.id2 = Mat2::identity();
    return b;
  }();
  return basis;
}

/// n . s for a real direction vector n.
inline Mat2 pauli_dot(const Vec3& n) {
  const auto& p = pauli();
  Mat2 m = p.s1 * cdouble(n[0]);
  m += p.s2 * cdouble(n[1]);
  m += p.s3 * cdouble(n[2]);
  return m;
}

namespace detail {

struct PauliKronTable {
  std::array<std::array<Mat4, 3>, 3> ss;  // s_i (x) s_j
  std::array<Mat4, 3> si;                 // s_i (x) I
  std::array<Mat4, 3> is;                 // I (x) s_j
};

inline const PauliKronTable& pauli_kron() {
  static const PauliKronTable table = [] {
    PauliKronTable t;
    const auto& p = pauli();
    const std::array<const Mat2*, 3> s{&p.s1, &p.s2, &p.s3};
    for (std::size_t i = 0; i < 3; ++i) {
      t.si[i] = kron(*s[i], p.id2);
      t.is[i] = kron(p.id2, *s[i]);
      for (std::size_t j = 0; j < 3; ++j) t.ss[i][j] = kron(*s[i], *s[j]);
    }
    return t;
  }();
  return table;
}

inline double re_trace_product(const Mat4& a, const Mat4& b) {
  // Re Tr(a b)
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const cdouble& x = a(i, k);
      const cdouble& y = b(k, i);
      s += x.real() * y.real() - x.imag() * y.imag();
    }
  return s;
}

}  // namespace detail

/// Validated two-qubit state: Hermitian, unit trace, positive semidefinite.
/// Construction is only possible through validate_state, so every instance
/// carries its (descending) spectrum.
class DensityMatrix {
 public:
  const Mat4& matrix() const { return m_; }
  const Spectrum<4>& spectrum() const { return spectrum_; }

  friend DensityMatrix validate_state(const Mat4& m);

 private:
  DensityMatrix(const Mat4& m, const Spectrum<4>& s) : m_(m), spectrum_(s) {}
  Mat4 m_;
  Spectrum<4> spectrum_;
};

/// Checks the three density-matrix invariants and returns the validated state.
/// Each failure names the violated invariant and the measured residual.
inline DensityMatrix validate_state(const Mat4& m) {
  if (!is_finite(m)) throw NotFinite("matrix entry is NaN or infinite");
  const double herm_residual = frobenius_norm(m - adjoint(m));
  if (!(herm_residual <= kHermTol)) throw NotHermitian(herm_residual);
  const double trace_residual = std::abs(trace(m) - cdouble(1.0));
  if (!(trace_residual <= kTraceTol)) throw TraceNotOne(trace_residual);
  const auto eig = hermitian_eigen(m, kHermTol);
  if (!(eig.spectrum.min() >= -kPsdTol)) throw NotPositive(eig.spectrum.min());
  return DensityMatrix(m, eig.spectrum);
}

struct HilbertSchmidtForm {
  Vec3 u{};  // Bloch vector of party A
  Vec3 v{};  // Bloch vector of party B
  Mat3 T{};  // correlation matrix t_ij
};

/// Correlation matrix t_ij = Tr[rho (s_i (x) s_j)] of a raw matrix. Fast path
/// shared with the orbit search; imaginary residues are dropped (they vanish
/// for Hermitian input).
inline Mat3 correlation_matrix(const Mat4& rho) {
  const auto& table = detail::pauli_kron();
  Mat3 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      t(i, j) = detail::re_trace_product(rho, table.ss[i][j]);
  return t;
}

inline HilbertSchmidtForm to_hilbert_schmidt(const DensityMatrix& rho) {
  const auto& table = detail::pauli_kron();
  HilbertSchmidtForm hs;
  for (std::size_t i = 0; i < 3; ++i) {
    hs.u[i] = detail::re_trace_product(rho.matrix(), table.si[i]);
    hs.v[i] = detail::re_trace_product(rho.matrix(), table.is[i]);
  }
  hs.T = correlation_matrix(rho.matrix());
  return hs;
}

/// Rebuilds the state 1/4 [I + u.s (x) I + I (x) v.s + sum t_ij s_i (x) s_j].
/// Throws NotPositive when (u, v, T) does not describe a physical state.
inline DensityMatrix from_hilbert_schmidt(const HilbertSchmidtForm& hs) {
  const auto& table = detail::pauli_kron();
  Mat4 m = Mat4::identity();
  for (std::size_t i = 0; i < 3; ++i) {
    m += table.si[i] * cdouble(hs.u[i]);
    m += table.is[i] * cdouble(hs.v[i]);
    for (std::size_t j = 0; j < 3; ++j) m += table.ss[i][j] * cdouble(hs.T(i, j));
  }
  m *= cdouble(0.25);
  return validate_state(m);
}

/// Partial transpose over the second subsystem; an exact entry permutation.
inline Mat4 partial_transpose(const Mat4& m) {
  Mat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + l, 2 * j + k) = m(2 * i + k, 2 * j + l);
  return r;
}

struct PptResult {
  bool entangled;
  double min_eigenvalue;  // of the partial transpose
};

/// Peres-Horodecki test; necessary and sufficient in 2x2.
inline PptResult is_entangled_ppt(const DensityMatrix& rho) {
  const auto eig = hermitian_eigen(partial_transpose(rho.matrix()), kHermTol);
  const double min_eig = eig.spectrum.min();
  return {min_eig < -kPptTol, min_eig};
}

struct AbsSepResult {
  bool verdict;
  double margin;  // lambda3 + 2 sqrt(lambda2 lambda4) - lambda1
};

/// Spectral test: with eigenvalues in descending order, the state is
/// absolutely separable iff lambda1 <= lambda3 + 2 sqrt(lambda2 lambda4).
inline AbsSepResult is_absolutely_separable(const DensityMatrix& rho) {
  const auto& l = rho.spectrum().values;
  const double margin = l[2] + 2.0 * std::sqrt(std::max(0.0, l[1] * l[3])) - l[0];
  return {margin >= -kAbsSepTol, margin};
}

// ---------------------------------------------------------------------------
// Samplers used by property tests and verification sweeps.

/// Full-support random mixed state G G^dag / Tr(G G^dag) with iid complex
/// Gaussian G.
inline DensityMatrix random_density_matrix(Rng& rng) {
  Mat4 g;
  for (auto& x : g.e) x = rng.complex_gaussian();
  Mat4 m = g * adjoint(g);
  m *= cdouble(1.0 / trace(m).real());
  // enforce exact Hermiticity against roundoff
  Mat4 h;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return validate_state(h);
}

/// Haar-random pure state projector.
inline DensityMatrix random_pure_state(Rng& rng) {
  std::array<cdouble, 4> psi;
  double n2 = 0.0;
  for (auto& a : psi) {
    a = rng.complex_gaussian();
    n2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(n2);
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]) * (inv * inv);
  return validate_state(m);
}

}  // namespace qbell
