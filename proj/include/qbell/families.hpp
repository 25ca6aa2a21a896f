#pragma once

/// Parameterized state families and threshold sweeps: Werner states,
/// Bell-diagonal mixtures, the generalized Werner family, the computational-
/// basis diagonal relative of the Werner family, and CNOT-prepared product
/// states. A bisection locator pins classification boundaries in parameter
/// space.

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qbell/chsh.hpp"
#include "qbell/orbit.hpp"
#include "qbell/states.hpp"
#include "qbell/unitaries.hpp"

namespace qbell {

namespace detail {

inline Mat4 pure_projector(const std::array<cdouble, 4>& psi) {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

inline const std::array<std::array<cdouble, 4>, 4>& bell_vectors() {
  // phi+, phi-, psi+, psi-
  static const std::array<std::array<cdouble, 4>, 4> v = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    return std::array<std::array<cdouble, 4>, 4>{{{r, 0, 0, r},
                                                  {r, 0, 0, -r},
                                                  {0, r, r, 0},
                                                  {0, r, -r, 0}}};
  }();
  return v;
}

}  // namespace detail

/// p |psi-><psi-| + (1-p)/4 I.
inline DensityMatrix make_werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("werner p = " + detail::num(p));
  Mat4 m = detail::pure_projector(detail::bell_vectors()[3]) * cdouble(p);
  m += Mat4::identity() * cdouble((1.0 - p) / 4.0);
  return validate_state(m);
}

/// Mixture of the four Bell projectors with the given simplex weights.
inline DensityMatrix make_bell_diagonal(const std::array<double, 4>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= -1e-12)) throw OutOfRange("bell-diagonal weight " + detail::num(w));
    sum += w;
  }
  if (!(std::abs(sum - 1.0) <= 1e-12))
    throw OutOfRange("bell-diagonal weights sum to " + detail::num(sum));
  Mat4 m;
  for (std::size_t k = 0; k < 4; ++k)
    m += detail::pure_projector(detail::bell_vectors()[k]) * cdouble(weights[k]);
  return validate_state(m);
}

/// p |psi><psi| + (1-p)/4 I with |psi> = a|00> + b|11>, b = sqrt(1 - a^2).
inline DensityMatrix make_generalized_werner(double p, double a) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("generalized-werner p = " + detail::num(p));
  if (!(a > 0.0 && a < 1.0)) throw OutOfRange("generalized-werner a = " + detail::num(a));
  const double b = std::sqrt(1.0 - a * a);
  Mat4 m = detail::pure_projector({a, 0, 0, b}) * cdouble(p);
  m += Mat4::identity() * cdouble((1.0 - p) / 4.0);
  return validate_state(m);
}

/// Weights {(1-p)/4, (1+3p)/4, (1-p)/4, (1-p)/4} diagonal in the
/// computational basis; separable for every p, same spectrum as the Werner
/// state with the same p.
inline DensityMatrix make_diagonal_separable(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("diagonal-separable p = " + detail::num(p));
  const double lo = (1.0 - p) / 4.0;
  const double hi = (1.0 + 3.0 * p) / 4.0;
  return validate_state(Mat4::diagonal({lo, hi, lo, lo}));
}

/// u applied to the product state (alpha|0> + beta|1>) (x) |0>, with
/// beta = sqrt(1 - |alpha|^2) real nonnegative.
inline DensityMatrix make_product_plus_unitary(cdouble alpha, const Mat4& u) {
  const double a2 = std::norm(alpha);
  if (!(a2 <= 1.0 + 1e-12)) throw OutOfRange("amplitude |alpha| = " + detail::num(std::sqrt(a2)));
  const double beta = std::sqrt(std::max(0.0, 1.0 - a2));
  const Mat4 proj = detail::pure_projector({alpha, 0, beta, 0});
  return validate_state(conjugate_raw(u, proj));
}

// ---------------------------------------------------------------------------
// Threshold location and sweeps.

/// Bisection on a monotone boolean predicate over [lo, hi]; requires the
/// predicate to differ at the endpoints. Returns the flip location within tol.
inline double find_threshold(const std::function<bool(double)>& predicate, double lo,
                             double hi, double tol = 1e-6, int max_iterations = 60) {
  bool flo = predicate(lo);
  if (predicate(hi) == flo)
    throw OutOfRange("predicate does not flip on [" + detail::num(lo) + ", " +
                     detail::num(hi) + "]");
  for (int i = 0; i < max_iterations && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (predicate(mid) == flo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

enum class FamilyKind { Werner, BellDiagonal, GeneralizedWerner, DiagonalSeparable, ProductPlusUnitary };

/// A family plus its fixed parameters; the swept parameter is implicit in the
/// kind (p for the mixtures, the first Bell weight for BellDiagonal, alpha for
/// the CNOT-prepared states).
struct FamilySpec {
  FamilyKind kind = FamilyKind::Werner;
  std::map<std::string, double> params;  // a; remainder ratios p2, p3, p4
};

inline DensityMatrix make_family_state(const FamilySpec& spec, double t) {
  switch (spec.kind) {
    case FamilyKind::Werner:
      return make_werner(t);
    case FamilyKind::GeneralizedWerner: {
      const auto it = spec.params.find("a");
      const double a = it == spec.params.end() ? 1.0 / std::sqrt(3.0) : it->second;
      return make_generalized_werner(t, a);
    }
    case FamilyKind::DiagonalSeparable:
      return make_diagonal_separable(t);
    case FamilyKind::BellDiagonal: {
      // t is the first weight; the rest of the simplex is split by the given
      // ratios (default equal)
      auto ratio = [&](const char* key) {
        const auto it = spec.params.find(key);
        return it == spec.params.end() ? 1.0 : it->second;
      };
      const double r2 = ratio("p2"), r3 = ratio("p3"), r4 = ratio("p4");
      const double rs = r2 + r3 + r4;
      if (!(rs > 0.0)) throw OutOfRange("bell-diagonal remainder ratios sum to 0");
      const double rest = 1.0 - t;
      return make_bell_diagonal({t, rest * r2 / rs, rest * r3 / rs, rest * r4 / rs});
    }
    case FamilyKind::ProductPlusUnitary:
      return make_product_plus_unitary(t, cnot());
  }
  throw OutOfRange("unknown family kind");
}

struct SweepChecks {
  bool ppt = false;
  bool chsh = false;
  bool abs_sep = false;
  bool orbit = false;
};

struct SweepRow {
  double param = 0.0;
  double m_value = 0.0;
  double max_chsh = 0.0;
  bool chsh_local = true;
  std::optional<PptResult> ppt;
  std::optional<AbsSepResult> abs_sep;
  std::optional<OrbitVerdict> orbit_verdict;
  std::optional<double> orbit_m_max;
};

struct Threshold {
  std::string check;
  double location;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<Threshold> thresholds;
};

struct ParamGrid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.01;

  std::vector<double> points() const {
    std::vector<double> p;
    if (!(step > 0.0) || stop < start) return p;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) p.push_back(start + static_cast<double>(i) * step);
    return p;
  }
};

/// One row per grid point with the requested checks, plus bisection-located
/// boundaries for every check whose verdict flips between adjacent points.
/// Deterministic under a fixed orbit seed.
inline SweepTable sweep_family(const FamilySpec& spec, const ParamGrid& grid,
                               const SweepChecks& checks, const OrbitConfig& orbit_config = {},
                               double threshold_tol = 1e-6) {
  const auto points = grid.points();
  if (points.empty()) throw EmptyGrid("param grid has no points");

  SweepTable table;
  table.rows.reserve(points.size());
  for (const double t : points) {
    const DensityMatrix rho = make_family_state(spec, t);
    const ChshAnalysis chsh = analyze_chsh(rho);
    SweepRow row;
    row.param = t;
    row.m_value = chsh.m_value;
    row.max_chsh = chsh.max_chsh;
    row.chsh_local = chsh.local;
    if (checks.ppt) row.ppt = is_entangled_ppt(rho);
    if (checks.abs_sep) row.abs_sep = is_absolutely_separable(rho);
    if (checks.orbit) {
      const ClassifyResult cls = classify_al(rho, orbit_config);
      row.orbit_verdict = cls.verdict;
      row.orbit_m_max = cls.m_max;
    }
    table.rows.push_back(row);
  }

  const auto locate = [&](const char* name, const std::function<bool(double)>& pred,
                          const std::function<bool(const SweepRow&)>& row_pred) {
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
      if (row_pred(table.rows[i]) != row_pred(table.rows[i + 1])) {
        table.thresholds.push_back(
            {name, find_threshold(pred, table.rows[i].param, table.rows[i + 1].param,
                                  threshold_tol)});
      }
    }
  };

  if (checks.chsh)
    locate("chsh", [&](double t) { return analyze_chsh(make_family_state(spec, t)).local; },
           [](const SweepRow& r) { return r.chsh_local; });
  if (checks.ppt)
    locate("ppt",
           [&](double t) { return is_entangled_ppt(make_family_state(spec, t)).entangled; },
           [](const SweepRow& r) { return r.ppt->entangled; });
  if (checks.abs_sep)
    locate("as",
           [&](double t) { return is_absolutely_separable(make_family_state(spec, t)).verdict; },
           [](const SweepRow& r) { return r.abs_sep->verdict; });
  if (checks.orbit)
    locate("orbit",
           [&](double t) {
             return classify_al(make_family_state(spec, t), orbit_config).verdict ==
                    OrbitVerdict::NonAbsolutelyLocal;
           },
           [](const SweepRow& r) {
             return *r.orbit_verdict == OrbitVerdict::NonAbsolutelyLocal;
           });
  return table;
}

}  // namespace qbell
