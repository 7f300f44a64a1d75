#ifndef FPFACTOR_SOLVER_HPP
#define FPFACTOR_SOLVER_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fpfactor/exact.hpp"
#include "fpfactor/feasibility.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/rounding.hpp"

namespace fpfactor {

/// Floors of the real roots of a*x^2 + b*x + c, a != 0 (at most two).
inline std::vector<Integer> quadratic_roots_floor(Integer a, Integer b, Integer c) {
  if (a == 0) throw std::domain_error("quadratic_roots_floor: a must be nonzero");
  if (a < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  ops::bump(2);
  const Integer delta = b * b - 4 * a * c;
  if (delta < 0) return {};
  const IsqrtResult s = isqrt_floor(delta);
  Integer neg_sqrt_floor = -s.root;  // floor(-sqrt(delta))
  if (!s.perfect) --neg_sqrt_floor;
  Integer r1 = floor_div(Integer(-b + neg_sqrt_floor), Integer(2 * a));
  Integer r2 = floor_div(Integer(-b + s.root), Integer(2 * a));
  if (r1 == r2) return {r1};
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

/// inf{m in Z | m >= n and a*m^2 + b*m + c in I}; nullopt for +inf.
/// Entry points into I are ceilings of roots of f = min I' and f = max I',
/// where I' = I restricted to the integers.
inline std::optional<Integer> next_quadratic_point_within_bounds(const Integer &a,
                                                                 const Integer &b,
                                                                 const Integer &c,
                                                                 const Integer &n,
                                                                 const RealInterval &I) {
  if (a == 0) throw std::domain_error("next_quadratic_point_within_bounds: a must be nonzero");
  const auto f = [&](const Integer &m) {
    ops::bump(2);
    return Integer(a * m * m + b * m + c);
  };
  if (I.contains(ExtReal(f(n)))) return n;
  const IntegerRange ir = integers_in(I);
  if (ir.empty) return std::nullopt;
  if (!ir.lo && !ir.hi) return n;  // I covers every integer (unreachable past the first test)
  std::vector<Integer> cands;
  for (const auto &bound : {ir.hi, ir.lo}) {
    if (!bound) continue;
    for (const Integer &r : quadratic_roots_floor(a, b, c - *bound)) {
      cands.push_back(r);
      cands.push_back(r + 1);
    }
  }
  std::optional<Integer> best;
  for (const Integer &m : cands) {
    if (m < n || (best && m >= *best)) continue;
    if (I.contains(ExtReal(f(m)))) best = m;
  }
  return best;
}

/// min{floor(x) | x in [n, +inf) and (a*x^2 + c mod x) = 0}: the quotient
/// (a*n^2 + c)/n at the first qualifying point is the floor or ceiling of
/// its value at n, so two quadratic solves suffice.
inline std::optional<Integer> next_quadratic_mod_linear_root_floor(const Integer &a,
                                                                   const Integer &c,
                                                                   const Integer &n) {
  if (a == 0 || c == 0 || n == 0)
    throw std::domain_error("next_quadratic_mod_linear_root_floor: arguments must be nonzero");
  const ExtReal q = ExtReal(Integer(a * n * n + c)) / ExtReal(n);
  ops::bump(2);
  std::optional<Integer> best;
  for (const Integer &qr : {q.floor(), q.ceil()}) {
    for (const Integer &r : quadratic_roots_floor(a, -qr, c)) {
      if (r >= n && (!best || r < *best)) best = r;
    }
  }
  return best;
}

/// min{m in Z | m >= n and ((-a*b mod m) in I or -(a*b mod m) in I)}.
/// Requires 0 < |a| <= |n| <= |b| <= |2a|, 0 in I and diam I >= |a|; under
/// those bounds the quadratic extension of the remainder graph pins the
/// answer to one segment.
inline Integer next_divisor_in_bounds(const Integer &a, const Integer &b, const Integer &n,
                                      const RealInterval &I) {
  const Integer aa = boost::multiprecision::abs(a);
  const Integer ab = boost::multiprecision::abs(b);
  const Integer an = boost::multiprecision::abs(n);
  // |b| <= |2a| is deliberately not enforced: the segment argument needs it
  // for the minimality guarantee, but the search itself stays sound without
  // it and callers probe such inputs
  if (a == 0 || !(aa <= an && an <= ab))
    throw std::domain_error("next_divisor_in_bounds: need 0 < |a| <= |n| <= |b|");
  if (!I.contains(ExtReal(0)) || I.diameter() < ExtReal(aa))
    throw std::domain_error("next_divisor_in_bounds: need 0 in I and diam I >= |a|");

  const Integer prod = a * b;
  ops::bump();
  const auto hits = [&](const Integer &m) {
    const Integer g = int_mod(-prod, m);
    const Integer h = -int_mod(prod, m);
    return I.contains(ExtReal(g)) || I.contains(ExtReal(h));
  };
  if (hits(n)) return n;

  // The answer lies in [n, *r + 1]: both remainder branches restrict to
  // quadratics on the root-free segment [n, *r], and when neither endpoint of
  // the segment works, the ceiling of the root does. The branch searches run
  // unconditionally: with one-sided I a remainder parabola can dip into
  // bounds strictly inside the segment even though *r itself misses.
  const Integer abs_prod = boost::multiprecision::abs(prod);
  const auto r = next_quadratic_mod_linear_root_floor(Integer(-1), -abs_prod, n);
  if (!r) throw std::logic_error("next_divisor_in_bounds: no quadratic-extension root");
  const ExtReal q = ExtReal(Integer(-n * n - abs_prod)) / ExtReal(n);
  ops::bump(2);
  std::optional<Integer> c, d;
  if (prod > 0) {
    c = next_quadratic_point_within_bounds(Integer(-1), Integer(-q.floor()), Integer(-prod), n, I);
    d = next_quadratic_point_within_bounds(Integer(-1), Integer(-q.ceil()), Integer(-prod), n, I);
  } else {
    c = next_quadratic_point_within_bounds(Integer(1), q.ceil(), Integer(-prod), n, I);
    d = next_quadratic_point_within_bounds(Integer(1), q.floor(), Integer(-prod), n, I);
  }
  std::optional<Integer> best;
  for (const std::optional<Integer> &cand : {c, d, std::optional<Integer>(*r),
                                             std::optional<Integer>(*r + 1)}) {
    if (!cand || (best && *cand >= *best)) continue;
    if (hits(*cand)) best = *cand;
  }
  if (!best) throw std::logic_error("next_divisor_in_bounds: lost the in-segment solution");
  return *best;
}

/// min{M in Plaus_Z(z) | M >= M_x} for a normal-range significand M_x.
/// Scales the plausibility condition to a fixed k and delegates to the
/// divisor search.
inline Integer next_plausible(const FloatFormat &fmt, RoundingMode mode, const Integer &M_x,
                              const Float &z, const FloatInterval &Z) {
  if (!is_regular(mode))
    throw PreconditionError(FailedClause::IrregularMode, "next_plausible: irregular mode");
  if (Z.is_empty() || !Z.contains(fmt, z) || !z.is_finite() || z.is_zero())
    throw PreconditionError(FailedClause::NoUsableZ, "next_plausible: need finite nonzero z in Z");
  const Integer bot = fmt.ipow(fmt.precision() - 1);
  const Integer top = fmt.ipow(fmt.precision());
  const Integer ax = boost::multiprecision::abs(M_x);
  if (!(bot <= ax && ax < top))
    throw PreconditionError(FailedClause::SignificandRange,
                            "next_plausible: |M_x| outside [beta^(p-1), beta^p)");
  const int qz = quantum_of(fmt, fmt.value(z));
  const ExtReal Mz_ext = fmt.value(z) * fmt.pow(-qz);
  const Integer Mz = Mz_ext.numerator();
  const Integer az = boost::multiprecision::abs(Mz);
  if (!fmt.is_normal(z))
    throw PreconditionError(FailedClause::NoUsableZ, "next_plausible: z must be normal");
  // equal magnitudes leave a zero remainder, and 0 is always in the scaled
  // preimage; this also covers the one case where that preimage can be
  // narrower than beta^(p-1)
  if (ax == az) return M_x;
  const int k = ufp_exponent(fmt, Mz_ext / ExtReal(M_x));
  const ExtReal scale = fmt.pow(fmt.precision() - 1 - qz - k);
  const RealInterval I =
      interval_scale_shift(preimage_interval(fmt, mode, Z), scale, -(fmt.value(z) * scale));
  const Integer denom_b = Mz * fmt.ipow(-k);  // k in {-1, 0} under the checks above
  return next_divisor_in_bounds(bot, denom_b, M_x, I);
}

namespace detail {

// z qualifies for the search when it is finite, normal, gives a quotient in
// the normal range, and (base 2 aside) has significand magnitude in (1, 2].
inline bool usable_z(const FloatFormat &fmt, const Float &x, const Float &z) {
  if (!z.is_finite() || !fmt.is_normal(z)) return false;
  const ExtReal q = (fmt.value(z) / fmt.value(x)).abs();
  if (q < fmt.pow(fmt.emin()) || q > fmt.max_finite()) return false;
  if (fmt.beta() == 2) return true;
  const ExtReal mz = (fmt.value(z) * fmt.pow(-fmt.float_exponent(z))).abs();
  return ExtReal(1) < mz && mz <= ExtReal(2);
}

}  // namespace detail

/// inf Feas(Z) over [x, +inf]: x itself when feasible, else the first of the
/// two candidate significands produced by the plausibility search that is
/// feasible; nullopt when no feasible float >= x exists.
inline std::optional<Float> next_feasible(const FloatFormat &fmt, RoundingMode mode,
                                          const Float &x, const FloatInterval &Z) {
  if (Z.is_empty()) throw std::domain_error("next_feasible: empty Z");
  if (!is_regular(mode))
    throw PreconditionError(FailedClause::IrregularMode, "next_feasible: irregular mode");
  if (is_feasible(fmt, mode, x, Z)) return x;
  if (!fmt.is_normal(x))
    throw PreconditionError(FailedClause::XNotNormal, "next_feasible: x not normal");
  std::optional<Float> z;
  for (const Float &cand : {Z.lo(), Z.hi()}) {
    if (detail::usable_z(fmt, x, cand)) {
      z = cand;
      break;
    }
  }
  if (!z)
    throw PreconditionError(FailedClause::NoUsableZ,
                            "next_feasible: no usable endpoint z in Z");
  const Integer &M_x = x.mantissa();
  const int q = x.quantum();
  const Integer M_b = next_plausible(fmt, mode, M_x, *z, Z);
  if (auto cand = fmt.try_make_float(M_b, q); cand && is_feasible(fmt, mode, *cand, Z))
    return *cand;
  // for positive x the second candidate coincides with the first
  const Integer M_c = M_x < 0 ? next_plausible(fmt, mode, Integer(-M_x), *z, Z) : M_b;
  if (M_c != M_b) {
    if (auto cand = fmt.try_make_float(M_c, q); cand && is_feasible(fmt, mode, *cand, Z))
      return *cand;
  }
  return std::nullopt;
}

/// max Feas(Z) over [-inf, x], by negation symmetry of the factor sets.
inline std::optional<Float> prev_feasible(const FloatFormat &fmt, RoundingMode mode,
                                          const Float &x, const FloatInterval &Z) {
  auto r = next_feasible(fmt, mode, -x, Z);
  if (!r) return std::nullopt;
  return -*r;
}

}  // namespace fpfactor

#endif
