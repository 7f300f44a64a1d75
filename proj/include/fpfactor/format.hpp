#ifndef FPFACTOR_FORMAT_HPP
#define FPFACTOR_FORMAT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fpfactor/exact.hpp"

namespace fpfactor {

class FloatFormat;

/// One member of the extended float set: -inf, +inf, or a finite value held
/// as (integral significand M, quantum exponent q) with value M*beta^q.
/// Finite values are canonical: |M| >= beta^(p-1) unless q = qmin, and zero
/// is (0, qmin). Canonical encodings are unique, so equality is structural.
class Float {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  Float() : kind_(Kind::Finite), m_(0), q_(0) {}

  static Float pos_inf() { return Float(Kind::PosInf); }
  static Float neg_inf() { return Float(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_inf() const { return kind_ != Kind::Finite; }
  bool is_zero() const { return kind_ == Kind::Finite && m_ == 0; }

  const Integer &mantissa() const {
    require_finite();
    return m_;
  }
  int quantum() const {
    require_finite();
    return q_;
  }

  int sign() const {
    if (kind_ == Kind::PosInf) return 1;
    if (kind_ == Kind::NegInf) return -1;
    return m_ == 0 ? 0 : (m_ < 0 ? -1 : 1);
  }

  friend Float operator-(const Float &x) {
    switch (x.kind_) {
      case Kind::PosInf: return neg_inf();
      case Kind::NegInf: return pos_inf();
      default: {
        Float r = x;
        r.m_ = -r.m_;
        return r;
      }
    }
  }

  friend bool operator==(const Float &a, const Float &b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || (a.m_ == b.m_ && a.q_ == b.q_));
  }
  friend bool operator!=(const Float &a, const Float &b) { return !(a == b); }

  friend std::ostream &operator<<(std::ostream &os, const Float &x) {
    if (x.is_pos_inf()) return os << "inf";
    if (x.is_neg_inf()) return os << "-inf";
    return os << x.m_ << "*b^" << x.q_;
  }

 private:
  friend class FloatFormat;
  explicit Float(Kind k) : kind_(k), m_(0), q_(0) {}
  Float(Integer m, int q) : kind_(Kind::Finite), m_(std::move(m)), q_(q) {}
  void require_finite() const {
    if (kind_ != Kind::Finite) throw std::domain_error("Float: infinite value has no significand");
  }

  Kind kind_;
  Integer m_;
  int q_;
};

/// The parametric format (beta, p, emin, emax) together with the exact
/// arithmetic helpers that depend on it.
class FloatFormat {
 public:
  FloatFormat(int beta, int p, int emin, int emax)
      : beta_(beta), p_(p), emin_(emin), emax_(emax) {
    if (beta < 2 || p < 1 || emin > emax)
      throw std::invalid_argument("FloatFormat: need beta >= 2, p >= 1, emin <= emax");
    const int span = 2 * (std::max(std::abs(emin), std::abs(emax)) + p + 4);
    powers_.reserve(static_cast<std::size_t>(span) + 1);
    powers_.push_back(Integer(1));
    for (int k = 1; k <= span; ++k) powers_.push_back(powers_.back() * beta_);
  }

  int beta() const { return beta_; }
  int precision() const { return p_; }
  int emin() const { return emin_; }
  int emax() const { return emax_; }
  int qmin() const { return emin_ - p_ + 1; }
  int qmax() const { return emax_ - p_ + 1; }

  /// beta^k as an integer, k >= 0.
  Integer ipow(int k) const {
    if (k < 0) throw std::domain_error("FloatFormat::ipow: negative exponent");
    if (static_cast<std::size_t>(k) < powers_.size()) return powers_[static_cast<std::size_t>(k)];
    return boost::multiprecision::pow(Integer(beta_), static_cast<unsigned>(k));
  }

  /// beta^k as an exact rational, any integer k.
  ExtReal pow(int k) const {
    if (k >= 0) return ExtReal(ipow(k));
    return ExtReal(Integer(1), ipow(-k));
  }

  ExtReal max_finite() const { return ExtReal((ipow(p_) - 1)) * pow(qmax()); }
  ExtReal min_positive() const { return pow(qmin()); }

  Integer cardinality() const {
    const Integer per_sign = (ipow(p_) - ipow(p_ - 1)) * (emax_ - emin_ + 1) + (ipow(p_ - 1) - 1);
    return 2 * per_sign + 3;  // zero and both infinities
  }

  // -- construction -------------------------------------------------------

  Float zero() const { return Float(Integer(0), qmin()); }
  Float max_finite_float() const { return Float(ipow(p_) - 1, qmax()); }
  Float min_finite_float() const { return Float(-(ipow(p_) - 1), qmax()); }
  Float min_positive_float() const { return Float(Integer(1), qmin()); }

  /// Canonicalizes (M, q) with value M*beta^q; nullopt when the value is not
  /// a member of the format.
  std::optional<Float> try_make_float(Integer M, int q) const {
    if (M == 0) return zero();
    Integer a = M < 0 ? Integer(-M) : M;
    const Integer top = ipow(p_);
    const Integer bot = ipow(p_ - 1);
    while (a >= top) {
      if (a % beta_ != 0) return std::nullopt;
      a /= beta_;
      ++q;
    }
    while (a < bot && q > qmin()) {
      a *= beta_;
      --q;
    }
    if (q < qmin() || q > qmax()) return std::nullopt;
    return Float(M < 0 ? Integer(-a) : a, q);
  }

  Float make_float(const Integer &M, int q) const {
    auto f = try_make_float(M, q);
    if (!f) throw std::domain_error("make_float: value not representable");
    return *f;
  }

  /// Exact conversion from a value; nullopt when v is not in the format.
  std::optional<Float> try_from_value(const ExtReal &v) const;
  Float from_value(const ExtReal &v) const {
    auto f = try_from_value(v);
    if (!f) throw std::domain_error("from_value: value not representable");
    return *f;
  }

  // -- queries -------------------------------------------------------------

  ExtReal value(const Float &x) const {
    if (x.is_pos_inf()) return ExtReal::pos_inf();
    if (x.is_neg_inf()) return ExtReal::neg_inf();
    return ExtReal(x.mantissa()) * pow(x.quantum());
  }

  bool is_normal(const Float &x) const {
    if (!x.is_finite() || x.is_zero()) return false;
    Integer a = x.mantissa() < 0 ? Integer(-x.mantissa()) : x.mantissa();
    return a >= ipow(p_ - 1);
  }
  bool is_subnormal(const Float &x) const {
    return x.is_finite() && !x.is_zero() && !is_normal(x);
  }

  /// E(x) for a finite float, straight off the canonical encoding.
  int float_exponent(const Float &x) const {
    if (!x.is_finite()) throw std::domain_error("float_exponent: infinite argument");
    if (is_normal(x)) return x.quantum() + p_ - 1;
    return emin_;
  }

  int compare(const Float &a, const Float &b) const {
    if (a.kind() == b.kind()) {
      if (!a.is_finite()) return 0;
      if (a.quantum() == b.quantum())
        return a.mantissa() < b.mantissa() ? -1 : (a.mantissa() == b.mantissa() ? 0 : 1);
      ExtReal d = value(a) - value(b);
      return d.sign();
    }
    auto rank = [](Float::Kind k) {
      return k == Float::Kind::NegInf ? 0 : (k == Float::Kind::Finite ? 1 : 2);
    };
    return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
  }
  bool less(const Float &a, const Float &b) const { return compare(a, b) < 0; }
  bool less_equal(const Float &a, const Float &b) const { return compare(a, b) <= 0; }

 private:
  int beta_;
  int p_;
  int emin_;
  int emax_;
  std::vector<Integer> powers_;
};

/// floor(log_beta r) for a finite rational r > 0, by exact comparison against
/// powers of beta. Counts as a single arithmetic operation.
inline int floor_log_beta(const FloatFormat &fmt, const ExtReal &r) {
  if (!r.is_finite() || r.sign() <= 0) throw std::domain_error("floor_log_beta: need finite r > 0");
  ops::bump();
  const Integer num = r.numerator();
  const Integer den = r.denominator();
  // r >= beta^k, exactly
  auto at_least = [&](int k) {
    if (k >= 0) return num >= den * fmt.ipow(k);
    return num * fmt.ipow(-k) >= den;
  };
  const int bn = num == 1 ? 0 : static_cast<int>(boost::multiprecision::msb(num));
  const int bd = den == 1 ? 0 : static_cast<int>(boost::multiprecision::msb(den));
  if (fmt.beta() == 2) {
    int k = bn - bd;
    if (!at_least(k)) --k;
    else if (at_least(k + 1)) ++k;
    return k;
  }
  int lo = -(bd + 2), hi = bn + 2;
  // invariant: beta^lo <= r < beta^(hi+1)
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (at_least(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

/// The exponent E(x): floor(log_beta |x|), clamped to emin from below.
inline int exponent_of(const FloatFormat &fmt, const ExtReal &x) {
  if (!x.is_finite()) throw std::domain_error("exponent_of: infinite argument");
  ExtReal a = x.abs();
  if (a < fmt.pow(fmt.emin())) return fmt.emin();
  return floor_log_beta(fmt, a);
}

/// The quantum exponent Q(x) = E(x) - p + 1.
inline int quantum_of(const FloatFormat &fmt, const ExtReal &x) {
  return exponent_of(fmt, x) - fmt.precision() + 1;
}

/// floor(log_beta |x|) without exponent clamping; x must be finite nonzero.
inline int ufp_exponent(const FloatFormat &fmt, const ExtReal &x) {
  if (x.is_zero()) throw std::domain_error("ufp_exponent: zero argument");
  return floor_log_beta(fmt, x.abs());
}

/// Unit in first place: 0 for 0, otherwise the power beta^k with
/// beta^k <= |x| < beta^(k+1).
inline ExtReal ufp(const FloatFormat &fmt, const ExtReal &x) {
  if (!x.is_finite()) throw std::domain_error("ufp: infinite argument");
  if (x.is_zero()) return ExtReal(0);
  return fmt.pow(ufp_exponent(fmt, x));
}

inline std::optional<Float> FloatFormat::try_from_value(const ExtReal &v) const {
  if (v.is_pos_inf()) return Float::pos_inf();
  if (v.is_neg_inf()) return Float::neg_inf();
  if (v.is_zero()) return zero();
  if (v.abs() > max_finite()) return std::nullopt;
  const int q = quantum_of(*this, v);
  ExtReal m = v * pow(-q);
  if (!m.is_integer()) return std::nullopt;
  return try_make_float(m.numerator(), q);
}

/// Successor per the quantum expression: the least float greater than x.
inline Float successor(const FloatFormat &fmt, const Float &x) {
  if (x.is_neg_inf()) return fmt.min_finite_float();
  if (x.is_pos_inf() || x == fmt.max_finite_float()) return Float::pos_inf();
  const Integer &M = x.mantissa();
  const int q = x.quantum();
  if (M == -fmt.ipow(fmt.precision() - 1) && q > fmt.qmin())
    return fmt.make_float(M * fmt.beta() + 1, q - 1);  // x = -beta^E(x), shrink the step
  return fmt.make_float(M + 1, q);
}

/// Predecessor, via duality with the successor.
inline Float predecessor(const FloatFormat &fmt, const Float &x) {
  return -successor(fmt, -x);
}

inline constexpr long long kDefaultEnumerationCap = 1 << 20;

/// All of the format's floats in increasing order, -inf first, +inf last.
inline std::vector<Float> enumerate_floats(const FloatFormat &fmt,
                                           long long cap = kDefaultEnumerationCap) {
  if (fmt.cardinality() > cap)
    throw ResourceError("enumerate_floats: format cardinality exceeds cap");
  std::vector<Float> out;
  out.reserve(static_cast<std::size_t>(fmt.cardinality()));
  out.push_back(Float::neg_inf());
  const Integer top = fmt.ipow(fmt.precision()) - 1;
  const Integer bot = fmt.ipow(fmt.precision() - 1);
  for (int q = fmt.qmax(); q >= fmt.qmin(); --q) {
    const Integer lo = q == fmt.qmin() ? Integer(1) : bot;
    for (Integer m = -top; m <= -lo; ++m) out.push_back(fmt.make_float(m, q));
  }
  out.push_back(fmt.zero());
  for (int q = fmt.qmin(); q <= fmt.qmax(); ++q) {
    const Integer lo = q == fmt.qmin() ? Integer(1) : bot;
    for (Integer m = lo; m <= top; ++m) out.push_back(fmt.make_float(m, q));
  }
  out.push_back(Float::pos_inf());
  return out;
}

/// A contiguous set of floats [lo, hi], or Empty.
class FloatInterval {
 public:
  FloatInterval() = default;  // the empty interval
  static FloatInterval empty() { return FloatInterval(); }
  static FloatInterval make(const FloatFormat &fmt, const Float &lo, const Float &hi) {
    if (fmt.less(hi, lo)) throw std::invalid_argument("FloatInterval: lo > hi");
    FloatInterval r;
    r.empty_ = false;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }
  static FloatInterval singleton(const Float &x) {
    FloatInterval r;
    r.empty_ = false;
    r.lo_ = x;
    r.hi_ = x;
    return r;
  }
  static FloatInterval all(const FloatFormat &) {
    return singleton_pair(Float::neg_inf(), Float::pos_inf());
  }
  static FloatInterval all_finite(const FloatFormat &fmt) {
    return singleton_pair(fmt.min_finite_float(), fmt.max_finite_float());
  }

  bool is_empty() const { return empty_; }
  const Float &lo() const { return require(), lo_; }
  const Float &hi() const { return require(), hi_; }

  bool contains(const FloatFormat &fmt, const Float &x) const {
    return !empty_ && fmt.less_equal(lo_, x) && fmt.less_equal(x, hi_);
  }

  FloatInterval intersect(const FloatFormat &fmt, const FloatInterval &o) const {
    if (empty_ || o.empty_) return empty();
    const Float &lo = fmt.less(lo_, o.lo_) ? o.lo_ : lo_;
    const Float &hi = fmt.less(o.hi_, hi_) ? o.hi_ : hi_;
    if (fmt.less(hi, lo)) return empty();
    return singleton_pair(lo, hi);
  }

  friend bool operator==(const FloatInterval &a, const FloatInterval &b) {
    if (a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const FloatInterval &a, const FloatInterval &b) { return !(a == b); }

 private:
  static FloatInterval singleton_pair(const Float &lo, const Float &hi) {
    FloatInterval r;
    r.empty_ = false;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }
  void require() const {
    if (empty_) throw std::domain_error("FloatInterval: empty interval has no endpoints");
  }

  bool empty_ = true;
  Float lo_;
  Float hi_;
};

}  // namespace fpfactor

#endif
