#pragma once

/// Dense complex matrix kernel for the fixed sizes used by the rest of the
/// library (2x2, 3x3, 4x4), together with a cyclic-Jacobi eigensolver for
/// Hermitian input and a real symmetric 3x3 variant. All operations are pure
/// functions on value types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>

#include "qbell/errors.hpp"

namespace qbell {

using cdouble = std::complex<double>;

template <std::size_t N>
struct Mat {
  static constexpr std::size_t dim = N;
  std::array<cdouble, N * N> e{};

  cdouble& operator()(std::size_t r, std::size_t c) { return e[r * N + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const { return e[r * N + c]; }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diagonal(const std::array<double, N>& d) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t i = 0; i < N * N; ++i) e[i] += o.e[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t i = 0; i < N * N; ++i) e[i] -= o.e[i];
    return *this;
  }
  Mat& operator*=(cdouble s) {
    for (auto& x : e) x *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, cdouble s) { return a *= s; }
  friend Mat operator*(cdouble s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cdouble aik = a(i, k);
        if (aik == cdouble{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

/// Builds a matrix from a row-major entry list; the length must be N*N.
template <std::size_t N>
Mat<N> mat_from(std::initializer_list<cdouble> entries) {
  if (entries.size() != N * N)
    throw InvalidDimension("expected " + std::to_string(N * N) + " entries, got " +
                           std::to_string(entries.size()));
  Mat<N> m;
  std::copy(entries.begin(), entries.end(), m.e.begin());
  return m;
}

template <std::size_t N>
Mat<N> adjoint(const Mat<N>& m) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(m(j, i));
  return r;
}

template <std::size_t N>
Mat<N> transpose(const Mat<N>& m) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = m(j, i);
  return r;
}

template <std::size_t N>
cdouble trace(const Mat<N>& m) {
  cdouble t{};
  for (std::size_t i = 0; i < N; ++i) t += m(i, i);
  return t;
}

template <std::size_t N>
double frobenius_norm(const Mat<N>& m) {
  double s = 0.0;
  for (const auto& x : m.e) s += std::norm(x);
  return std::sqrt(s);
}

/// Kronecker product; the first factor owns the slow (block) index:
/// (a (x) b)[2i+k][2j+l] = a[i][j] * b[k][l].
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

template <std::size_t N>
bool is_finite(const Mat<N>& m) {
  for (const auto& x : m.e)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Real 3-vectors and 3x3 matrices (Bloch vectors, correlation matrices,
// induced rotations).

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (n == 0.0) throw NotUnitVector(0.0);
  return {a[0] / n, a[1] / n, a[2] / n};
}

struct Mat3 {
  std::array<double, 9> e{};

  double& operator()(std::size_t r, std::size_t c) { return e[r * 3 + c]; }
  const double& operator()(std::size_t r, std::size_t c) const { return e[r * 3 + c]; }

  static Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  static Mat3 diagonal(double a, double b, double c) {
    Mat3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) += a(i, k) * b(k, j);
    return r;
  }
};

inline Mat3 transpose(const Mat3& m) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

inline double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Vec3 apply(const Mat3& m, const Vec3& x) {
  Vec3 r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i] += m(i, j) * x[j];
  return r;
}

inline double frobenius_norm(const Mat3& m) {
  double s = 0.0;
  for (double x : m.e) s += x * x;
  return std::sqrt(s);
}

/// Real symmetric 3x3 matrix; only the upper triangle is stored, so symmetry
/// holds by construction.
class RealSymMatrix3 {
 public:
  RealSymMatrix3() = default;

  double operator()(std::size_t r, std::size_t c) const { return a_[index(r, c)]; }
  void set(std::size_t r, std::size_t c, double v) { a_[index(r, c)] = v; }

  /// The Gram matrix T^t T of a general real 3x3 matrix.
  static RealSymMatrix3 gram(const Mat3& t) {
    RealSymMatrix3 g;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += t(k, i) * t(k, j);
        g.set(i, j, s);
      }
    return g;
  }

  static RealSymMatrix3 from_upper_triangle(const Mat3& m) {
    RealSymMatrix3 g;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) g.set(i, j, m(i, j));
    return g;
  }

  Mat3 full() const {
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

 private:
  static std::size_t index(std::size_t r, std::size_t c) {
    if (r > c) std::swap(r, c);
    // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    static constexpr std::size_t base[3] = {0, 3, 5};
    return base[r] + (c - r);
  }
  std::array<double, 6> a_{};
};

// ---------------------------------------------------------------------------
// Eigensolver: cyclic Jacobi rotations on Hermitian matrices.

/// Real eigenvalues sorted in descending order.
template <std::size_t N>
struct Spectrum {
  std::array<double, N> values{};
  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
  double min() const { return values[N - 1]; }
  double max() const { return values[0]; }
};

template <std::size_t N>
struct EigenDecomposition {
  Spectrum<N> spectrum;
  Mat<N> vectors;  // orthonormal eigenvector columns, matching spectrum order
};

namespace detail {

template <std::size_t N>
double offdiag_norm(const Mat<N>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

/// Cyclic Jacobi on a Hermitian matrix. The caller must pass (numerically)
/// Hermitian input; only the upper triangle drives the rotations.
template <std::size_t N>
EigenDecomposition<N> jacobi_hermitian(Mat<N> a) {
  Mat<N> v = Mat<N>::identity();
  const double scale = std::max(1.0, frobenius_norm(a));
  const double stop = 1e-15 * scale;
  constexpr int kMaxSweeps = 60;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const cdouble g = a(p, q);
        const double r = std::abs(g);
        if (r <= stop / (N * N)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cdouble ephi = g / r;  // e^{i arg g}
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double tau = (beta - alpha) / (2.0 * r);
        const double sgn = tau >= 0.0 ? 1.0 : -1.0;
        // smaller-magnitude root of t^2 - 2 tau t - 1 = 0 for this rotation
        // convention; keeps the rotation angle below pi/4
        const double t = -sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- V^dag A V with V = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
        for (std::size_t k = 0; k < N; ++k) {
          const cdouble akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(ephi) * akq;
          a(k, q) = -s * ephi * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const cdouble apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + s * ephi * aqk;
          a(q, k) = -s * std::conj(ephi) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < N; ++k) {
          const cdouble vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + s * std::conj(ephi) * vkq;
          v(k, q) = -s * ephi * vkp + c * vkq;
        }
      }
    }
  }
  if (offdiag_norm(a) > 1e-10 * scale)
    throw EigenFailure("Jacobi sweeps did not converge; off-diagonal norm " +
                       num(offdiag_norm(a)));

  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out.spectrum.values[i] = a(order[i], order[i]).real();
    for (std::size_t k = 0; k < N; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when the
/// anti-Hermitian residual exceeds hermTol; the decomposition itself runs on
/// the Hermitian part.
template <std::size_t N>
EigenDecomposition<N> hermitian_eigen(const Mat<N>& m, double herm_tol = 1e-9) {
  const double residual = frobenius_norm(m - adjoint(m));
  if (!(residual <= herm_tol)) throw NotHermitian(residual);
  Mat<N> h = m;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return detail::jacobi_hermitian(h);
}

struct SymEigen3Result {
  Spectrum<3> spectrum;
  Mat3 vectors;  // orthonormal columns
};

/// Full decomposition of a real symmetric 3x3 matrix. The Jacobi path stays
/// real for real input, so the eigenvector columns are exactly real.
inline SymEigen3Result sym_eigen3_full(const RealSymMatrix3& m) {
  Mat<3> c;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) c(i, j) = m(i, j);
  const auto eig = detail::jacobi_hermitian(c);
  SymEigen3Result out;
  out.spectrum = eig.spectrum;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out.vectors(i, j) = eig.vectors(i, j).real();
  return out;
}

inline Spectrum<3> sym_eigen3(const RealSymMatrix3& m) { return sym_eigen3_full(m).spectrum; }

}  // namespace qbell
