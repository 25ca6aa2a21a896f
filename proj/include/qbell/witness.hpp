#pragma once

/// Conjugated witnesses W^B = U_e^dag W U_e: Hermitian operators that are
/// nonnegative on every absolutely Bell-CHSH local state and negative on the
/// state whose certificate U_e they were built from.

#include <cstddef>
#include <functional>

#include "qbell/chsh.hpp"
#include "qbell/orbit.hpp"
#include "qbell/states.hpp"
#include "qbell/unitaries.hpp"

namespace qbell {

/// Builds W^B from an explicit certifying unitary: conjugate the state, pick
/// the Horodecki-optimal CHSH directions there, form W = 2I - B, pull back.
/// Requires the conjugated state to violate CHSH, else NotDetectable.
inline WitnessOperator build_conjugated_witness(const DensityMatrix& rho, const Mat4& u_e) {
  const Mat4 moved = conjugate_raw(u_e, rho.matrix());
  const Mat3 t = correlation_matrix(moved);
  const auto dirs = optimal_directions(t);
  const BellOperator bell = build_bell_operator(dirs.a, dirs.a_prime, dirs.b, dirs.b_prime);
  const WitnessOperator base = chsh_operator_to_witness(bell);

  WitnessOperator w;
  w.op = adjoint(u_e) * (base.op * u_e);
  w.kind = WitnessKind::ConjugatedWitness;
  w.bound = base.bound;
  w.certifying_unitary = u_e;

  const double value = evaluate_witness(w, rho);
  if (!(value < 0.0))
    throw NotDetectable("witness value " + detail::num(value) +
                        " is nonnegative on the target state");
  return w;
}

/// Classifies the state first; only NonAbsolutelyLocal states are detectable.
inline WitnessOperator build_conjugated_witness(const DensityMatrix& rho,
                                                const OrbitConfig& config = {}) {
  const ClassifyResult cls = classify_al(rho, config);
  if (cls.verdict != OrbitVerdict::NonAbsolutelyLocal)
    throw NotDetectable(std::string("state classified ") + to_string(cls.verdict) +
                        " (m_max " + detail::num(cls.m_max) + ")");
  return build_conjugated_witness(rho, *cls.certificate);
}

struct WitnessVerification {
  std::size_t samples = 0;
  std::size_t violations = 0;  // values below -tol; expected zero on honest samplers
  double min_value = 0.0;
  double tol = 1e-9;
};

/// Evaluates a witness on n sampled absolutely-local states and reports the
/// minimum value plus any sign violations. Violations indicate either a bug
/// or a misclassified sample; they are reported, not thrown.
inline WitnessVerification verify_witness_on_al(const WitnessOperator& w,
                                                const std::function<DensityMatrix()>& sampler,
                                                std::size_t n, double tol = 1e-9) {
  WitnessVerification report;
  report.tol = tol;
  for (std::size_t i = 0; i < n; ++i) {
    const double value = evaluate_witness(w, sampler());
    if (i == 0 || value < report.min_value) report.min_value = value;
    if (value < -tol) ++report.violations;
    ++report.samples;
  }
  return report;
}

}  // namespace qbell
