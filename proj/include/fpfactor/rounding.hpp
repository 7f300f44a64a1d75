#ifndef FPFACTOR_ROUNDING_HPP
#define FPFACTOR_ROUNDING_HPP

#include <stdexcept>
#include <string>

#include "fpfactor/exact.hpp"
#include "fpfactor/format.hpp"

namespace fpfactor {

/// Down, Up and NearestEven are regular; ClampedDown is faithful and
/// monotonic but deliberately irregular (it rounds everything above the
/// largest finite value to +inf, so the preimage of max F is {max F}).
/// It exists for negative tests only and is rejected by the solver.
enum class RoundingMode { Down, Up, NearestEven, ClampedDown };

inline bool is_regular(RoundingMode mode) { return mode != RoundingMode::ClampedDown; }

inline const char *mode_name(RoundingMode mode) {
  switch (mode) {
    case RoundingMode::Down: return "rd";
    case RoundingMode::Up: return "ru";
    case RoundingMode::NearestEven: return "rne";
    default: return "clamped-rd";
  }
}

/// IEEE-style overflow threshold for rounding to nearest:
/// beta^emax * (beta - beta^(1-p)/2), the midpoint of max F and beta^(emax+1).
inline ExtReal nearest_overflow_threshold(const FloatFormat &fmt) {
  return fmt.pow(fmt.emax()) *
         (ExtReal(fmt.beta()) - fmt.pow(1 - fmt.precision()) / ExtReal(2));
}

namespace detail {

// RD(x) for finite x: the greatest float <= x. Uses the identity
// RD(x) = x - (x mod beta^Q(x)) when |x| <= max F.
inline Float round_down_finite(const FloatFormat &fmt, const ExtReal &x) {
  const ExtReal mf = fmt.max_finite();
  if (x > mf) return fmt.max_finite_float();
  if (x < -mf) return Float::neg_inf();
  const int q = quantum_of(fmt, x);
  const ExtReal v = x - rat_mod(x, fmt.pow(q));
  const ExtReal m = v * fmt.pow(-q);
  return fmt.make_float(m.numerator(), q);
}

}  // namespace detail

/// Total rounding over the extended reals. Exact floats are fixed points.
inline Float round_value(const FloatFormat &fmt, RoundingMode mode, const ExtReal &x) {
  if (x.is_pos_inf()) return Float::pos_inf();
  if (x.is_neg_inf()) return Float::neg_inf();
  switch (mode) {
    case RoundingMode::Down:
      return detail::round_down_finite(fmt, x);
    case RoundingMode::Up:
      return -detail::round_down_finite(fmt, -x);
    case RoundingMode::ClampedDown:
      if (x > fmt.max_finite()) return Float::pos_inf();
      return detail::round_down_finite(fmt, x);
    case RoundingMode::NearestEven:
    default: {
      const ExtReal threshold = nearest_overflow_threshold(fmt);
      if (x.abs() >= threshold) return x.sign() > 0 ? Float::pos_inf() : Float::neg_inf();
      const Float d = detail::round_down_finite(fmt, x);
      const Float u = -detail::round_down_finite(fmt, -x);
      if (d == u) return d;
      const ExtReal down_err = x - fmt.value(d);
      const ExtReal up_err = fmt.value(u) - x;
      if (down_err < up_err) return d;
      if (up_err < down_err) return u;
      // exact tie between adjacent floats: prefer the even significand
      const bool d_even = (d.mantissa() % 2) == 0;
      const bool u_even = (u.mantissa() % 2) == 0;
      if (d_even != u_even) return d_even ? d : u;
      return x.sign() >= 0 ? u : d;  // degenerate bases: away from zero
    }
  }
}

namespace detail {

// Midpoint rule for rounding to nearest: closed at the midpoint exactly when
// the tie resolves back into z.
inline bool nearest_midpoint_closed(const FloatFormat &fmt, const ExtReal &mid, const Float &z) {
  return round_value(fmt, RoundingMode::NearestEven, mid) == z;
}

}  // namespace detail

/// Exact preimage fl^-1[Z] of a nonempty float interval, with correct
/// endpoint openness.
inline RealInterval preimage_interval(const FloatFormat &fmt, RoundingMode mode,
                                      const FloatInterval &Z) {
  if (Z.is_empty()) throw std::domain_error("preimage_interval: empty interval");
  const Float &zmin = Z.lo();
  const Float &zmax = Z.hi();
  ExtReal lo, hi;
  bool lc = false, hc = false;

  switch (mode) {
    case RoundingMode::Down:
    case RoundingMode::ClampedDown: {
      lo = fmt.value(zmin);
      lc = true;
      if (mode == RoundingMode::ClampedDown && zmin.is_pos_inf()) {
        lo = fmt.max_finite();  // f^-1[{+inf}] = (max F, +inf]
        lc = false;
      }
      if (zmax.is_pos_inf()) {
        hi = ExtReal::pos_inf();
        hc = true;
      } else if (mode == RoundingMode::ClampedDown && zmax == fmt.max_finite_float()) {
        hi = fmt.max_finite();
        hc = true;
      } else {
        hi = fmt.value(successor(fmt, zmax));
        hc = false;
      }
      break;
    }
    case RoundingMode::Up: {
      hi = fmt.value(zmax);
      hc = true;
      if (zmin.is_neg_inf()) {
        lo = ExtReal::neg_inf();
        lc = true;
      } else {
        lo = fmt.value(predecessor(fmt, zmin));
        lc = false;
      }
      break;
    }
    case RoundingMode::NearestEven:
    default: {
      const ExtReal threshold = nearest_overflow_threshold(fmt);
      if (zmin.is_neg_inf()) {
        lo = ExtReal::neg_inf();
        lc = true;
      } else if (zmin.is_pos_inf()) {
        lo = threshold;
        lc = true;
      } else if (zmin == fmt.min_finite_float()) {
        lo = -threshold;
        lc = false;
      } else {
        lo = (fmt.value(predecessor(fmt, zmin)) + fmt.value(zmin)) / ExtReal(2);
        lc = detail::nearest_midpoint_closed(fmt, lo, zmin);
      }
      if (zmax.is_pos_inf()) {
        hi = ExtReal::pos_inf();
        hc = true;
      } else if (zmax.is_neg_inf()) {
        hi = -threshold;
        hc = true;
      } else if (zmax == fmt.max_finite_float()) {
        hi = threshold;
        hc = false;
      } else {
        hi = (fmt.value(zmax) + fmt.value(successor(fmt, zmax))) / ExtReal(2);
        hc = detail::nearest_midpoint_closed(fmt, hi, zmax);
      }
      break;
    }
  }
  RealInterval r = RealInterval::make(lo, lc, hi, hc);
  if (r.is_empty()) throw std::logic_error("preimage_interval: empty preimage of nonempty set");
  return r;
}

/// Thrown by fp_multiply when the extended-real product is undefined (0 * inf).
class UndefinedProductError : public std::domain_error {
 public:
  UndefinedProductError() : std::domain_error("fp_multiply: product 0 * inf is undefined") {}
};

/// x (x) y = fl(x*y); the exact product must be defined.
inline Float fp_multiply(const FloatFormat &fmt, RoundingMode mode, const Float &x,
                         const Float &y) {
  if ((x.is_zero() && y.is_inf()) || (y.is_zero() && x.is_inf())) throw UndefinedProductError();
  return round_value(fmt, mode, fmt.value(x) * fmt.value(y));
}

struct RegularityReport {
  bool regular = true;
  ExtReal min_ratio;  // min over finite nonzero x of diam f^-1[{x}] / beta^(Q(x)-k)
  Float witness;
};

/// Exhaustive regularity check: a mode is regular iff every finite nonzero x
/// has diam f^-1[{x}] >= beta^(Q(x)-k), k = 1 at powers of beta.
inline RegularityReport regularity_margin(const FloatFormat &fmt, RoundingMode mode,
                                          long long cap = kDefaultEnumerationCap) {
  RegularityReport rep;
  bool first = true;
  for (const Float &x : enumerate_floats(fmt, cap)) {
    if (!x.is_finite() || x.is_zero()) continue;
    const ExtReal d = preimage_interval(fmt, mode, FloatInterval::singleton(x)).diameter();
    const bool power = fmt.is_normal(x) &&
                       (x.mantissa() == fmt.ipow(fmt.precision() - 1) ||
                        x.mantissa() == -fmt.ipow(fmt.precision() - 1));
    const int k = power ? 1 : 0;
    const ExtReal ratio = d * fmt.pow(-(x.quantum() - k));
    if (first || ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.witness = x;
      first = false;
    }
  }
  rep.regular = rep.min_ratio >= ExtReal(1);
  return rep;
}

}  // namespace fpfactor

#endif
