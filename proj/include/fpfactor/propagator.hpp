#ifndef FPFACTOR_PROPAGATOR_HPP
#define FPFACTOR_PROPAGATOR_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fpfactor/exact.hpp"
#include "fpfactor/feasibility.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/rounding.hpp"
#include "fpfactor/solver.hpp"

namespace fpfactor {

/// The set {y | fl(x*y) in Z} for some denominator range: at most two
/// disjoint ordered real intervals.
class QuotientSet {
 public:
  static QuotientSet empty() { return QuotientSet(); }
  static QuotientSet of(const RealInterval &I) {
    QuotientSet s;
    s.add(I);
    return s;
  }
  static QuotientSet all_reals() {
    return of(RealInterval::open(ExtReal::neg_inf(), ExtReal::pos_inf()));
  }
  static QuotientSet positive_half() {
    return of(RealInterval::make(ExtReal(0), false, ExtReal::pos_inf(), true));
  }
  static QuotientSet negative_half() {
    return of(RealInterval::make(ExtReal::neg_inf(), true, ExtReal(0), false));
  }
  static QuotientSet nonzero_extended() {
    QuotientSet s = negative_half();
    s.add(positive_half().pieces().front());
    return s;
  }

  void add(const RealInterval &I) {
    if (I.is_empty()) return;
    pieces_.push_back(I);
    normalize();
  }

  const std::vector<RealInterval> &pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  friend bool operator==(const QuotientSet &a, const QuotientSet &b) {
    return a.pieces_ == b.pieces_;
  }
  friend bool operator!=(const QuotientSet &a, const QuotientSet &b) { return !(a == b); }

 private:
  static bool mergeable(const RealInterval &a, const RealInterval &b) {
    // overlap, or touching endpoints with at least one side closed
    if (a.hi() < b.lo()) return false;
    if (a.hi() == b.lo()) return a.hi_closed() || b.lo_closed();
    return true;
  }

  void normalize() {
    std::sort(pieces_.begin(), pieces_.end(), [](const RealInterval &a, const RealInterval &b) {
      if (a.lo() != b.lo()) return a.lo() < b.lo();
      return a.lo_closed() && !b.lo_closed();
    });
    std::vector<RealInterval> merged;
    for (const RealInterval &p : pieces_) {
      if (!merged.empty() && mergeable(merged.back(), p)) {
        const RealInterval &m = merged.back();
        ExtReal hi = m.hi();
        bool hc = m.hi_closed();
        if (p.hi() > hi || (p.hi() == hi && p.hi_closed())) {
          hi = p.hi();
          hc = p.hi() == m.hi() ? (m.hi_closed() || p.hi_closed()) : p.hi_closed();
        }
        merged.back() = RealInterval::make(m.lo(), m.lo_closed(), hi, hc);
      } else {
        merged.push_back(p);
      }
    }
    if (merged.size() > 2)
      throw std::logic_error("QuotientSet: more than two disjoint pieces");
    pieces_ = std::move(merged);
  }

  std::vector<RealInterval> pieces_;
};

namespace detail {

struct Bound {
  ExtReal value;
  bool attained = false;
};

inline void take_min(std::optional<Bound> &acc, const Bound &b) {
  if (!acc || b.value < acc->value)
    acc = b;
  else if (b.value == acc->value)
    acc->attained = acc->attained || b.attained;
}

inline void take_max(std::optional<Bound> &acc, const Bound &b) {
  if (!acc || b.value > acc->value)
    acc = b;
  else if (b.value == acc->value)
    acc->attained = acc->attained || b.attained;
}

// {p/d | p in P, d in J} for a finite positive divisor interval J
// (0 <= dl, dl = 0 only open, dh finite or +inf only open).
inline RealInterval divide_by_positive(const RealInterval &P, const ExtReal &dl, bool dlc,
                                       const ExtReal &dh, bool dhc) {
  if (P.is_empty()) return RealInterval::empty();
  // finite slice of P: infinite endpoints become open
  const ExtReal pl = P.lo();
  const ExtReal ph = P.hi();
  const bool plc = P.lo_closed() && pl.is_finite();
  const bool phc = P.hi_closed() && ph.is_finite();
  const bool fin_nonempty = !(pl == ph && pl.is_inf());

  std::optional<Bound> lo, hi;
  if (fin_nonempty) {
    const ExtReal zero(0);
    if (ph > zero) {
      if (dl.is_zero())
        take_max(hi, {ExtReal::pos_inf(), false});
      else
        take_max(hi, {ph / dl, phc && dlc && ph.is_finite()});
    } else if (ph == zero) {
      take_max(hi, {zero, phc});
    } else {
      if (dh.is_pos_inf())
        take_max(hi, {zero, false});
      else
        take_max(hi, {ph / dh, phc && dhc});
    }
    if (pl < zero) {
      if (dl.is_zero())
        take_min(lo, {ExtReal::neg_inf(), false});
      else
        take_min(lo, {pl / dl, plc && dlc && pl.is_finite()});
    } else if (pl == zero) {
      take_min(lo, {zero, plc});
    } else {
      if (dh.is_pos_inf())
        take_min(lo, {zero, false});
      else
        take_min(lo, {pl / dh, plc && dhc});
    }
  }
  if (P.hi().is_pos_inf() && P.hi_closed()) take_max(hi, {ExtReal::pos_inf(), true});
  if (P.lo().is_neg_inf() && P.lo_closed()) take_min(lo, {ExtReal::neg_inf(), true});
  if (P.hi().is_pos_inf() && P.hi_closed()) take_min(lo, {ExtReal::pos_inf(), true});
  if (P.lo().is_neg_inf() && P.lo_closed()) take_max(hi, {ExtReal::neg_inf(), true});
  if (!lo || !hi) return RealInterval::empty();
  return RealInterval::make(lo->value, lo->attained, hi->value, hi->attained);
}

inline RealInterval negate_interval(const RealInterval &I) {
  if (I.is_empty()) return I;
  return RealInterval::make(-I.hi(), I.hi_closed(), -I.lo(), I.lo_closed());
}

}  // namespace detail

/// {y | fl(x*y) in Z} for one float x, by case analysis on x.
inline QuotientSet quotient_set(const FloatFormat &fmt, RoundingMode mode, const Float &x,
                                const FloatInterval &Z) {
  if (Z.is_empty()) throw std::domain_error("quotient_set: empty Z");
  if (x.is_finite() && !x.is_zero()) {
    const RealInterval pre = preimage_interval(fmt, mode, Z);
    return QuotientSet::of(interval_scale_shift(pre, ExtReal(1) / fmt.value(x), ExtReal(0)));
  }
  if (x.is_zero())
    return Z.contains(fmt, fmt.zero()) ? QuotientSet::all_reals() : QuotientSet::empty();
  const bool pos_in = Z.contains(fmt, Float::pos_inf());
  const bool neg_in = Z.contains(fmt, Float::neg_inf());
  if (pos_in && neg_in) return QuotientSet::nonzero_extended();
  const bool same = x.is_pos_inf() ? pos_in : neg_in;
  const bool other = x.is_pos_inf() ? neg_in : pos_in;
  if (same && !other) return QuotientSet::positive_half();
  if (!same && other) return QuotientSet::negative_half();
  return QuotientSet::empty();
}

/// The division-based relaxation fl^-1[Z] / [min Y, max Y], with the zero
/// and infinite denominators folded in per the single-denominator cases.
inline QuotientSet quotient_relaxation(const FloatFormat &fmt, RoundingMode mode,
                                       const FloatInterval &Y, const FloatInterval &Z) {
  if (Y.is_empty() || Z.is_empty())
    throw std::domain_error("quotient_relaxation: empty input");
  const RealInterval pre = preimage_interval(fmt, mode, Z);
  const ExtReal ylo = fmt.value(Y.lo());
  const ExtReal yhi = fmt.value(Y.hi());
  QuotientSet out;

  // finite positive denominators
  if (yhi > ExtReal(0)) {
    const ExtReal dl = ylo > ExtReal(0) ? ylo : ExtReal(0);
    const bool dlc = ylo > ExtReal(0) && ylo.is_finite();
    const ExtReal dh = yhi.is_finite() ? yhi : ExtReal::pos_inf();
    const bool dhc = yhi.is_finite();
    if (!(dl == dh && !(dlc && dhc)) && dl.is_finite())
      out.add(detail::divide_by_positive(pre, dl, dlc, dh, dhc));
  }
  // finite negative denominators, by reflection
  if (ylo < ExtReal(0)) {
    const ExtReal dl = yhi < ExtReal(0) ? -yhi : ExtReal(0);
    const bool dlc = yhi < ExtReal(0) && yhi.is_finite();
    const ExtReal dh = ylo.is_finite() ? -ylo : ExtReal::pos_inf();
    const bool dhc = ylo.is_finite();
    if (!(dl == dh && !(dlc && dhc)) && dl.is_finite())
      out.add(detail::negate_interval(detail::divide_by_positive(pre, dl, dlc, dh, dhc)));
  }
  // y = 0 and infinite y contribute their single-denominator sets
  if (ylo <= ExtReal(0) && ExtReal(0) <= yhi && Z.contains(fmt, fmt.zero()))
    out.add(RealInterval::open(ExtReal::neg_inf(), ExtReal::pos_inf()));
  const bool pos_in = Z.contains(fmt, Float::pos_inf());
  const bool neg_in = Z.contains(fmt, Float::neg_inf());
  if (yhi.is_pos_inf()) {
    if (pos_in) out.add(QuotientSet::positive_half().pieces().front());
    if (neg_in) out.add(QuotientSet::negative_half().pieces().front());
  }
  if (ylo.is_neg_inf()) {
    if (neg_in) out.add(QuotientSet::positive_half().pieces().front());
    if (pos_in) out.add(QuotientSet::negative_half().pieces().front());
  }
  return out;
}

struct PropagatorConfig {
  // formats with cardinality above the cap report sound-but-unfiltered
  // factor bounds instead of scanning
  Integer oracle_fallback_cap = Integer(1) << 20;
  bool confirm_product_with_oracle = false;
};

struct TightenResult {
  FloatInterval bounds;
  bool optimal = false;
};

namespace detail {

// nearest float >= the real bound, honoring openness
inline std::optional<Float> inward_lo(const FloatFormat &fmt, const ExtReal &v, bool closed) {
  Float f = round_value(fmt, RoundingMode::Up, v);
  if (!closed && fmt.value(f) == v) {
    if (f.is_pos_inf()) return std::nullopt;
    f = successor(fmt, f);
  }
  return f;
}

inline std::optional<Float> inward_hi(const FloatFormat &fmt, const ExtReal &v, bool closed) {
  Float f = round_value(fmt, RoundingMode::Down, v);
  if (!closed && fmt.value(f) == v) {
    if (f.is_neg_inf()) return std::nullopt;
    f = predecessor(fmt, f);
  }
  return f;
}

// Desk-scale fallback when the constant-time search declines: walk the floats
// of [lo, hi] with the exact per-float feasibility test.
inline std::optional<Float> scan_next_feasible(const FloatFormat &fmt, RoundingMode mode,
                                               const Float &lo, const Float &hi,
                                               const FloatInterval &Z) {
  Float f = lo;
  for (;;) {
    if (is_feasible(fmt, mode, f, Z)) return f;
    if (!fmt.less(f, hi)) return std::nullopt;
    f = successor(fmt, f);
  }
}

inline std::optional<Float> scan_prev_feasible(const FloatFormat &fmt, RoundingMode mode,
                                               const Float &lo, const Float &hi,
                                               const FloatInterval &Z) {
  Float f = hi;
  for (;;) {
    if (is_feasible(fmt, mode, f, Z)) return f;
    if (!fmt.less(lo, f)) return std::nullopt;
    f = predecessor(fmt, f);
  }
}

}  // namespace detail

/// Optimal bounds on {x in X | exists y in Y, x (x) y in Z}: the relaxation
/// pieces intersected with [min X, max X], each tightened to its nearest
/// feasible floats. Falls back to a desk-scale scan when the constant-time
/// search preconditions fail; beyond the cap the unfiltered sound bound is
/// returned with optimal = false.
inline TightenResult tighten_factor_bounds(const FloatFormat &fmt, RoundingMode mode,
                                           const FloatInterval &X, const FloatInterval &Y,
                                           const FloatInterval &Z,
                                           const PropagatorConfig &config = {}) {
  if (X.is_empty() || Y.is_empty() || Z.is_empty())
    throw std::domain_error("tighten_factor_bounds: empty input");
  const QuotientSet qs = quotient_relaxation(fmt, mode, Y, Z);
  const RealInterval box =
      RealInterval::closed(fmt.value(X.lo()), fmt.value(X.hi()));
  const bool desk_scale = fmt.cardinality() <= config.oracle_fallback_cap;

  std::optional<Float> best_lo, best_hi;
  bool optimal = true;
  for (const RealInterval &piece : qs.pieces()) {
    const RealInterval b = piece.intersect(box);
    if (b.is_empty()) continue;
    const auto lo_f = detail::inward_lo(fmt, b.lo(), b.lo_closed());
    const auto hi_f = detail::inward_hi(fmt, b.hi(), b.hi_closed());
    if (!lo_f || !hi_f || fmt.less(*hi_f, *lo_f)) continue;

    std::optional<Float> lo_feas, hi_feas;
    bool piece_exact = true;
    try {
      lo_feas = next_feasible(fmt, mode, *lo_f, Z);
      if (lo_feas && fmt.less(*hi_f, *lo_feas)) lo_feas = std::nullopt;
      if (lo_feas) {
        hi_feas = prev_feasible(fmt, mode, *hi_f, Z);
        if (hi_feas && fmt.less(*hi_feas, *lo_f)) hi_feas = std::nullopt;
      }
    } catch (const PreconditionError &) {
      if (desk_scale) {
        lo_feas = detail::scan_next_feasible(fmt, mode, *lo_f, *hi_f, Z);
        if (lo_feas) hi_feas = detail::scan_prev_feasible(fmt, mode, *lo_f, *hi_f, Z);
      } else {
        lo_feas = *lo_f;  // sound, unfiltered
        hi_feas = *hi_f;
        piece_exact = false;
      }
    }
    if (!lo_feas || !hi_feas) continue;
    if (!piece_exact) optimal = false;
    if (!best_lo || fmt.less(*lo_feas, *best_lo)) best_lo = lo_feas;
    if (!best_hi || fmt.less(*best_hi, *hi_feas)) best_hi = hi_feas;
  }
  if (!best_lo || !best_hi) return {FloatInterval::empty(), true};
  return {FloatInterval::make(fmt, *best_lo, *best_hi), optimal};
}

/// Sound bounds on the products: Z clipped to the hull of the defined corner
/// products. The hull need not be optimal; the flag is set only when a
/// configured desk-scale product scan confirms the bounds exactly.
inline TightenResult tighten_product_bounds(const FloatFormat &fmt, RoundingMode mode,
                                            const FloatInterval &X, const FloatInterval &Y,
                                            const FloatInterval &Z,
                                            const PropagatorConfig &config = {}) {
  if (X.is_empty() || Y.is_empty() || Z.is_empty())
    throw std::domain_error("tighten_product_bounds: empty input");
  std::optional<Float> cmin, cmax;
  for (const Float &xe : {X.lo(), X.hi()}) {
    for (const Float &ye : {Y.lo(), Y.hi()}) {
      try {
        const Float p = fp_multiply(fmt, mode, xe, ye);
        if (!cmin || fmt.less(p, *cmin)) cmin = p;
        if (!cmax || fmt.less(*cmax, p)) cmax = p;
      } catch (const UndefinedProductError &) {
      }
    }
  }
  if (!cmin) throw std::domain_error("tighten_product_bounds: every corner product undefined");
  const FloatInterval bounds = Z.intersect(fmt, FloatInterval::make(fmt, *cmin, *cmax));
  bool optimal = false;
  if (config.confirm_product_with_oracle && fmt.cardinality() <= config.oracle_fallback_cap) {
    std::optional<Float> zmin, zmax;
    for (Float x = X.lo();; x = successor(fmt, x)) {
      for (Float y = Y.lo();; y = successor(fmt, y)) {
        try {
          const Float p = fp_multiply(fmt, mode, x, y);
          if (Z.contains(fmt, p)) {
            if (!zmin || fmt.less(p, *zmin)) zmin = p;
            if (!zmax || fmt.less(*zmax, p)) zmax = p;
          }
        } catch (const UndefinedProductError &) {
        }
        if (y == Y.hi()) break;
      }
      if (x == X.hi()) break;
    }
    const FloatInterval exact =
        zmin ? FloatInterval::make(fmt, *zmin, *zmax) : FloatInterval::empty();
    optimal = bounds == exact;
  }
  return {bounds, optimal};
}

struct PropagationResult {
  FloatInterval x_bounds;
  FloatInterval y_bounds;
  FloatInterval z_bounds;
  bool x_optimal = false;
  bool y_optimal = false;
  bool z_optimal = false;

  friend bool operator==(const PropagationResult &a, const PropagationResult &b) {
    return a.x_bounds == b.x_bounds && a.y_bounds == b.y_bounds && a.z_bounds == b.z_bounds;
  }
};

/// The full constraint solve for x (x) y = z over boxes: factor bounds on
/// each side, then product bounds from the tightened factors. Any empty
/// result empties all three.
inline PropagationResult solve_mul_constraint(const FloatFormat &fmt, RoundingMode mode,
                                              const FloatInterval &X, const FloatInterval &Y,
                                              const FloatInterval &Z,
                                              const PropagatorConfig &config = {}) {
  if (X.is_empty() || Y.is_empty() || Z.is_empty())
    throw std::domain_error("solve_mul_constraint: empty input");
  const TightenResult rx = tighten_factor_bounds(fmt, mode, X, Y, Z, config);
  const TightenResult ry = tighten_factor_bounds(fmt, mode, Y, X, Z, config);
  PropagationResult out;
  if (rx.bounds.is_empty() || ry.bounds.is_empty()) {
    out.x_optimal = out.y_optimal = out.z_optimal = true;
    return out;
  }
  const TightenResult rz = tighten_product_bounds(fmt, mode, rx.bounds, ry.bounds, Z, config);
  if (rz.bounds.is_empty()) {
    out.x_optimal = out.y_optimal = out.z_optimal = true;
    return out;
  }
  out.x_bounds = rx.bounds;
  out.y_bounds = ry.bounds;
  out.z_bounds = rz.bounds;
  out.x_optimal = rx.optimal;
  out.y_optimal = ry.optimal;
  out.z_optimal = rz.optimal;
  return out;
}

}  // namespace fpfactor

#endif
