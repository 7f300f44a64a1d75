#ifndef FPFACTOR_FEASIBILITY_HPP
#define FPFACTOR_FEASIBILITY_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "fpfactor/exact.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/rounding.hpp"

namespace fpfactor {

/// Machine-readable reason a constant-time search cannot run. Callers decide
/// between oracle fallback (desk scale) and reporting unsupported.
enum class FailedClause {
  IrregularMode,
  XNotNormal,
  NoUsableZ,       // no endpoint of Z is finite, normal, and quotient/significand compatible
  SignificandRange // integer significand outside the required normal range
};

class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(FailedClause clause, const std::string &what)
      : std::runtime_error(what), clause_(clause) {}
  FailedClause clause() const { return clause_; }

 private:
  FailedClause clause_;
};

struct FactorResult {
  bool ok = false;
  std::optional<Float> witness;
  explicit operator bool() const { return ok; }
};

/// Is x a floating-point factor of z, i.e. x (x) y = z for some float y?
/// Decided with the two-candidate test on RD(z/x) and RU(z/x) when x is
/// finite nonzero and z finite; special values by case analysis of (x).
inline FactorResult is_factor(const FloatFormat &fmt, RoundingMode mode, const Float &x,
                              const Float &z) {
  if (x.is_zero()) {
    if (z.is_zero()) return {true, fmt.zero()};
    return {false, std::nullopt};
  }
  if (x.is_inf()) {
    // products of an infinity are the two infinities, one per sign of y
    if (z.is_pos_inf()) return {true, x.sign() > 0 ? fmt.min_positive_float() : -fmt.min_positive_float()};
    if (z.is_neg_inf()) return {true, x.sign() > 0 ? -fmt.min_positive_float() : fmt.min_positive_float()};
    return {false, std::nullopt};
  }
  if (z.is_zero()) return {true, fmt.zero()};
  if (z.is_inf()) {
    const Float y = z.sign() * x.sign() > 0 ? Float::pos_inf() : Float::neg_inf();
    return {true, y};
  }
  const ExtReal q = fmt.value(z) / fmt.value(x);
  for (const Float &y : {round_value(fmt, RoundingMode::Down, q),
                        round_value(fmt, RoundingMode::Up, q)}) {
    if (fp_multiply(fmt, mode, x, y) == z) return {true, y};
  }
  return {false, std::nullopt};
}

/// Is x feasible for Z, i.e. a factor of some member of Z? Special members
/// of Z (0, infinities) short-circuit; otherwise one endpoint of Z decides
/// via the two-candidate quotient test. Both endpoints are tried.
inline FactorResult is_feasible(const FloatFormat &fmt, RoundingMode mode, const Float &x,
                                const FloatInterval &Z) {
  if (Z.is_empty()) throw std::domain_error("is_feasible: empty Z");
  if (x.is_zero()) {
    if (Z.contains(fmt, fmt.zero())) return {true, fmt.zero()};
    return {false, std::nullopt};
  }
  if (x.is_inf()) {
    if (Z.contains(fmt, Float::pos_inf())) return is_factor(fmt, mode, x, Float::pos_inf());
    if (Z.contains(fmt, Float::neg_inf())) return is_factor(fmt, mode, x, Float::neg_inf());
    return {false, std::nullopt};
  }
  if (Z.contains(fmt, fmt.zero())) return {true, fmt.zero()};
  if (Z.contains(fmt, Float::pos_inf()))
    return {true, x.sign() > 0 ? Float::pos_inf() : Float::neg_inf()};
  if (Z.contains(fmt, Float::neg_inf()))
    return {true, x.sign() > 0 ? Float::neg_inf() : Float::pos_inf()};
  // Z is now all finite nonzero; any z in Z decides feasibility for all of Z.
  for (const Float &z : {Z.lo(), Z.hi()}) {
    const ExtReal q = fmt.value(z) / fmt.value(x);
    for (const Float &y : {round_value(fmt, RoundingMode::Down, q),
                          round_value(fmt, RoundingMode::Up, q)}) {
      if (Z.contains(fmt, fp_multiply(fmt, mode, x, y))) return {true, y};
    }
  }
  return {false, std::nullopt};
}

enum class InfeasibilityCase { SubnormalQuotient, PowerNumerator, NarrowZ, NotApplicable };

/// Classifies why a regular mode left x infeasible for Z, given z in Z:
/// a subnormal quotient, a power-of-beta numerator with a narrow preimage,
/// or a significand-dominated z with a preimage narrower than beta^(Q(z)+1).
inline InfeasibilityCase classify_infeasibility(const FloatFormat &fmt, RoundingMode mode,
                                                const Float &x, const Float &z,
                                                const FloatInterval &Z) {
  if (Z.is_empty() || !Z.contains(fmt, z))
    throw PreconditionError(FailedClause::NoUsableZ, "classify_infeasibility: z not in Z");
  if (!x.is_finite() || x.is_zero())
    throw PreconditionError(FailedClause::XNotNormal, "classify_infeasibility: x not finite nonzero");
  if (!is_regular(mode))
    throw PreconditionError(FailedClause::IrregularMode, "classify_infeasibility: irregular mode");
  if (is_feasible(fmt, mode, x, Z)) return InfeasibilityCase::NotApplicable;
  if (!z.is_finite()) return InfeasibilityCase::NotApplicable;
  const ExtReal q = fmt.value(z) / fmt.value(x);
  if (q.abs() > fmt.max_finite()) return InfeasibilityCase::NotApplicable;
  if (q.abs() < fmt.pow(fmt.emin())) return InfeasibilityCase::SubnormalQuotient;
  const ExtReal mx = (fmt.value(x) * fmt.pow(-fmt.float_exponent(x))).abs();
  const ExtReal mz = (fmt.value(z) * fmt.pow(-fmt.float_exponent(z))).abs();
  const ExtReal diam = preimage_interval(fmt, mode, Z).diameter();
  const int qz = quantum_of(fmt, fmt.value(z));
  if (mz == ExtReal(1) && mz < mx && diam < fmt.pow(qz)) return InfeasibilityCase::PowerNumerator;
  if (mx < mz && diam < fmt.pow(qz + 1)) return InfeasibilityCase::NarrowZ;
  return InfeasibilityCase::NotApplicable;
}

/// Is the nonzero integer M z-plausible for Z? With M_z = z*beta^(-Q(z)),
/// k = log_beta ufp(M_z/M) and I = (fl^-1[Z] - z)*beta^(p-1-Q(z)), tests
/// whether -(M_z*beta^(p-1) mod M*beta^k) or (-M_z*beta^(p-1) mod M*beta^k)
/// lands in I.
inline bool is_plausible(const FloatFormat &fmt, RoundingMode mode, const Integer &M,
                         const Float &z, const FloatInterval &Z) {
  if (M == 0) throw std::domain_error("is_plausible: M must be nonzero");
  if (Z.is_empty() || !Z.contains(fmt, z) || !z.is_finite() || z.is_zero())
    throw std::domain_error("is_plausible: need finite nonzero z in Z");
  const int qz = quantum_of(fmt, fmt.value(z));
  const ExtReal Mz = fmt.value(z) * fmt.pow(-qz);
  const int k = ufp_exponent(fmt, Mz / ExtReal(M));
  const ExtReal scale = fmt.pow(fmt.precision() - 1 - qz);
  const RealInterval I =
      interval_scale_shift(preimage_interval(fmt, mode, Z), scale, -(fmt.value(z) * scale));
  const ExtReal modulus = ExtReal(M) * fmt.pow(k);
  const ExtReal num = Mz * fmt.pow(fmt.precision() - 1);
  return I.contains(-rat_mod(num, modulus)) || I.contains(rat_mod(-num, modulus));
}

}  // namespace fpfactor

#endif
