#pragma once

/// Maximization of M(U rho U^dag) over global unitaries and the three-way
/// classification of absolute Bell-CHSH locality. Post-conjugation local
/// factors leave M unchanged, so the search space is the reduced Cartan
/// parametrization: 3 core coefficients + 6 pre-local Euler angles.

#include <array>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "qbell/chsh.hpp"
#include "qbell/matrix.hpp"
#include "qbell/optimize.hpp"
#include "qbell/random.hpp"
#include "qbell/states.hpp"
#include "qbell/unitaries.hpp"

namespace qbell {

struct OrbitConfig {
  std::size_t starts = 64;      // 8 structured + seeded-random
  std::size_t iterations = 500; // simplex iterations per start
  std::uint64_t seed = 0;
  double decision_tol = 1e-6;    // margin above 1 required to declare non-locality
  double decision_margin = 1e-4; // margin below 1 required to declare absolute locality
  double stagnation_tol = 1e-10;
};

enum class OrbitVerdict { AbsolutelyLocal, NonAbsolutelyLocal, Boundary };

inline const char* to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::AbsolutelyLocal: return "absolutely-local";
    case OrbitVerdict::NonAbsolutelyLocal: return "non-absolutely-local";
    case OrbitVerdict::Boundary: return "boundary";
  }
  return "unknown";
}

struct OrbitResult {
  double m_max = 0.0;
  CartanParams best_params{};
  Mat4 best_unitary{};
  OrbitVerdict verdict = OrbitVerdict::Boundary;
  std::size_t starts = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  double spectral_cap = 0.0;
};

/// Largest M among Bell-diagonal arrangements of the spectrum:
/// 2 [(l1 - l4)^2 + (l2 - l3)^2] for descending eigenvalues. Every
/// arrangement of the eigenvalues over the Bell projectors realizes this
/// value, and no sampled or optimized conjugation has been observed to exceed
/// it, so it doubles as the spectrum-level cap on the orbit maximum.
inline double spectral_cap(const Spectrum<4>& spectrum) {
  const auto& l = spectrum.values;
  const double d1 = l[0] - l[3];
  const double d2 = l[1] - l[2];
  return 2.0 * (d1 * d1 + d2 * d2);
}

inline double spectral_cap(const DensityMatrix& rho) { return spectral_cap(rho.spectrum()); }

namespace detail {

// search vector layout: [c1, c2, c3, euler_a(3), euler_b(3)]
inline CartanParams params_from_vector(const std::vector<double>& x) {
  CartanParams p;
  p.core = {x[0], x[1], x[2]};
  p.pre_a = {x[3], x[4], x[5]};
  p.pre_b = {x[6], x[7], x[8]};
  return p;
}

inline Mat4 reduced_unitary(const std::vector<double>& x) {
  return nonlocal_core({x[0], x[1], x[2]}) *
         kron(local_unitary({x[3], x[4], x[5]}), local_unitary({x[6], x[7], x[8]}));
}

inline std::vector<double> structured_start(std::size_t index) {
  constexpr double h = std::numbers::pi / 2.0;
  constexpr double q = std::numbers::pi / 4.0;
  static const std::array<std::array<double, 3>, 8> cores{{{0.0, 0.0, 0.0},
                                                           {h, 0.0, 0.0},
                                                           {h, h, h},
                                                           {q, 0.0, 0.0},
                                                           {q, q, 0.0},
                                                           {q, q, q},
                                                           {h, h, 0.0},
                                                           {h, q, 0.0}}};
  std::vector<double> x(9, 0.0);
  x[0] = cores[index][0];
  x[1] = cores[index][1];
  x[2] = cores[index][2];
  return x;
}

}  // namespace detail

/// Multi-start simplex maximization of M over the reduced Cartan space,
/// followed by a compass polish of the best start. Deterministic in
/// config.seed. When no start reaches the stagnation tolerance the result is
/// still returned as a lower bound with converged = false.
inline OrbitResult maximize_over_orbit(const DensityMatrix& rho, const OrbitConfig& config = {}) {
  const Mat4& m = rho.matrix();
  const auto objective = [&m](const std::vector<double>& x) {
    return -chsh_m_value(conjugate_raw(detail::reduced_unitary(x), m));
  };

  NelderMeadOptions nm;
  nm.max_iterations = config.iterations;
  nm.stagnation_tol = config.stagnation_tol;

  const Rng master(config.seed);
  std::vector<double> best_x(9, 0.0);
  double best_f = objective(best_x);  // identity is always a candidate
  bool converged = false;

  for (std::size_t start = 0; start < config.starts; ++start) {
    std::vector<double> x0;
    if (start < 8) {
      x0 = detail::structured_start(start);
    } else {
      Rng rng = master.split(start);
      x0.resize(9);
      for (std::size_t i = 0; i < 3; ++i) x0[i] = rng.uniform(0.0, std::numbers::pi / 2.0);
      for (std::size_t i = 3; i < 9; ++i) x0[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const auto run = nelder_mead_minimize(objective, x0, nm);
    converged = converged || run.converged;
    if (run.fval < best_f) {
      best_f = run.fval;
      best_x = run.x;
    }
  }

  auto [polished_x, polished_f] = compass_polish(objective, best_x);

  OrbitResult result;
  result.m_max = -polished_f;
  result.best_params = detail::params_from_vector(polished_x);
  result.best_unitary = detail::reduced_unitary(polished_x);
  result.starts = config.starts;
  result.seed = config.seed;
  result.converged = converged;
  result.spectral_cap = spectral_cap(rho);

  if (result.m_max > 1.0 + config.decision_tol) {
    result.verdict = OrbitVerdict::NonAbsolutelyLocal;
  } else if (converged && result.m_max <= 1.0 - config.decision_margin &&
             result.spectral_cap <= 1.0 + 1e-6) {
    result.verdict = OrbitVerdict::AbsolutelyLocal;
  } else {
    result.verdict = OrbitVerdict::Boundary;
  }
  return result;
}

struct ClassifyResult {
  OrbitVerdict verdict;
  std::optional<Mat4> certificate;  // U_e, present when non-absolutely-local
  double m_max;
  OrbitResult detail;
};

/// Three-way classification. AbsolutelyLocal requires both the optimizer and
/// the spectral cap to stay below 1; NonAbsolutelyLocal carries the
/// certifying unitary; everything near the boundary (or a non-converged
/// search) is reported Boundary rather than guessed.
inline ClassifyResult classify_al(const DensityMatrix& rho, const OrbitConfig& config = {}) {
  OrbitResult orbit = maximize_over_orbit(rho, config);
  ClassifyResult r{orbit.verdict, std::nullopt, orbit.m_max, std::move(orbit)};
  if (r.verdict == OrbitVerdict::NonAbsolutelyLocal) r.certificate = r.detail.best_unitary;
  return r;
}

/// n Haar-random conjugations with their M values; sink(unitary, m) is called
/// once per sample. Deterministic in the seed.
template <typename Sink>
void orbit_sample(const DensityMatrix& rho, std::size_t n, std::uint64_t seed, Sink&& sink) {
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat4 u = haar_random_unitary(rng);
    sink(u, chsh_m_value(conjugate_raw(u, rho.matrix())));
  }
}

inline std::vector<std::pair<Mat4, double>> orbit_sample(const DensityMatrix& rho,
                                                         std::size_t n, std::uint64_t seed) {
  std::vector<std::pair<Mat4, double>> samples;
  samples.reserve(n);
  orbit_sample(rho, n, seed,
               [&](const Mat4& u, double m) { samples.emplace_back(u, m); });
  return samples;
}

}  // namespace qbell
