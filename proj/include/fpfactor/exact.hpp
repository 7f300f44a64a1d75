#ifndef FPFACTOR_EXACT_HPP
#define FPFACTOR_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace fpfactor {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an enumeration or scan would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace ops {

// Arithmetic-operation counter. Each exact-arithmetic operation counts as 1
// regardless of operand size. Inactive unless a CountScope is live on the
// current thread; never shared across threads.
inline thread_local std::uint64_t *active = nullptr;

inline void bump(std::uint64_t n = 1) {
  if (active != nullptr) *active += n;
}

class CountScope {
 public:
  explicit CountScope(std::uint64_t &counter) : prev_(active) { active = &counter; }
  ~CountScope() { active = prev_; }
  CountScope(const CountScope &) = delete;
  CountScope &operator=(const CountScope &) = delete;

 private:
  std::uint64_t *prev_;
};

}  // namespace ops

/// Floor division of integers (quotient rounded toward -inf).
inline Integer floor_div(const Integer &a, const Integer &b) {
  if (b == 0) throw std::domain_error("floor_div: division by zero");
  ops::bump();
  Integer q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Remainder of floored integer division: a - b*floor(a/b).
inline Integer int_mod(const Integer &a, const Integer &b) {
  return a - b * floor_div(a, b);
}

struct IsqrtResult {
  Integer root;  // floor(sqrt(n))
  bool perfect;  // n == root*root
};

/// Integer square root by Newton iteration, decreasing from an overestimate.
inline IsqrtResult isqrt_floor(const Integer &n) {
  if (n < 0) throw std::domain_error("isqrt_floor: negative argument");
  ops::bump();
  if (n == 0) return {Integer(0), true};
  Integer x = Integer(1) << (boost::multiprecision::msb(n) / 2 + 1);
  for (;;) {
    Integer y = (x + n / x) / 2;
    if (y >= x) break;
    x = y;
  }
  return {x, x * x == n};
}

/// An exact extended real: an arbitrary-precision rational or +/-infinity.
/// Finite values are kept in lowest terms with a positive denominator, so
/// structural equality is value equality.
class ExtReal {
 public:
  ExtReal() : kind_(Kind::Finite), r_(0) {}
  ExtReal(int v) : kind_(Kind::Finite), r_(v) {}            // NOLINT(google-explicit-constructor)
  ExtReal(long long v) : kind_(Kind::Finite), r_(v) {}      // NOLINT(google-explicit-constructor)
  ExtReal(const Integer &v) : kind_(Kind::Finite), r_(v) {} // NOLINT(google-explicit-constructor)
  ExtReal(const Rational &v) : kind_(Kind::Finite), r_(v) {} // NOLINT(google-explicit-constructor)
  ExtReal(Integer num, Integer den) : kind_(Kind::Finite) {
    if (den == 0) throw std::domain_error("ExtReal: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    r_ = Rational(num, den);
  }

  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_inf() const { return kind_ != Kind::Finite; }
  bool is_zero() const { return kind_ == Kind::Finite && r_ == 0; }

  int sign() const {
    if (kind_ == Kind::PosInf) return 1;
    if (kind_ == Kind::NegInf) return -1;
    if (r_ == 0) return 0;
    return r_ < 0 ? -1 : 1;
  }

  const Rational &rational() const {
    require_finite("rational");
    return r_;
  }
  Integer numerator() const { return boost::multiprecision::numerator(rational()); }
  Integer denominator() const { return boost::multiprecision::denominator(rational()); }

  bool is_integer() const { return is_finite() && denominator() == 1; }

  Integer floor() const {
    require_finite("floor");
    return floor_div(boost::multiprecision::numerator(r_), boost::multiprecision::denominator(r_));
  }
  Integer ceil() const {
    require_finite("ceil");
    return -ExtReal(-r_).floor();
  }

  ExtReal abs() const {
    if (kind_ == Kind::Finite) return ExtReal(r_ < 0 ? Rational(-r_) : r_);
    return pos_inf();
  }

  friend ExtReal operator-(const ExtReal &a) {
    switch (a.kind_) {
      case Kind::PosInf: return neg_inf();
      case Kind::NegInf: return pos_inf();
      default: return ExtReal(Rational(-a.r_));
    }
  }

  friend ExtReal operator+(const ExtReal &a, const ExtReal &b) {
    ops::bump();
    if (a.is_finite() && b.is_finite()) return ExtReal(Rational(a.r_ + b.r_));
    if (a.is_inf() && b.is_inf()) {
      if (a.kind_ != b.kind_) throw std::domain_error("ExtReal: inf - inf");
      return a;
    }
    return a.is_inf() ? a : b;
  }

  friend ExtReal operator-(const ExtReal &a, const ExtReal &b) { return a + (-b); }

  friend ExtReal operator*(const ExtReal &a, const ExtReal &b) {
    ops::bump();
    if (a.is_finite() && b.is_finite()) return ExtReal(Rational(a.r_ * b.r_));
    const int s = a.sign() * b.sign();
    if (s == 0) throw std::domain_error("ExtReal: 0 * inf");
    return s > 0 ? pos_inf() : neg_inf();
  }

  friend ExtReal operator/(const ExtReal &a, const ExtReal &b) {
    ops::bump();
    if (b.is_zero()) throw std::domain_error("ExtReal: division by zero");
    if (a.is_inf() && b.is_inf()) throw std::domain_error("ExtReal: inf / inf");
    if (b.is_inf()) return ExtReal(0);
    if (a.is_inf()) return a.sign() * b.sign() > 0 ? pos_inf() : neg_inf();
    return ExtReal(Rational(a.r_ / b.r_));
  }

  friend bool operator==(const ExtReal &a, const ExtReal &b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.r_ == b.r_);
  }
  friend bool operator!=(const ExtReal &a, const ExtReal &b) { return !(a == b); }
  friend bool operator<(const ExtReal &a, const ExtReal &b) {
    ops::bump();
    if (a.kind_ == b.kind_) return a.kind_ == Kind::Finite && a.r_ < b.r_;
    if (a.kind_ == Kind::NegInf || b.kind_ == Kind::PosInf) return true;
    return false;
  }
  friend bool operator>(const ExtReal &a, const ExtReal &b) { return b < a; }
  friend bool operator<=(const ExtReal &a, const ExtReal &b) { return !(b < a); }
  friend bool operator>=(const ExtReal &a, const ExtReal &b) { return !(a < b); }

  friend std::ostream &operator<<(std::ostream &os, const ExtReal &a) {
    if (a.is_pos_inf()) return os << "inf";
    if (a.is_neg_inf()) return os << "-inf";
    if (a.denominator() == 1) return os << a.numerator();
    return os << a.numerator() << "/" << a.denominator();
  }

 private:
  enum class Kind { Finite, PosInf, NegInf };
  explicit ExtReal(Kind k) : kind_(k), r_(0) {}
  void require_finite(const char *what) const {
    if (!is_finite()) throw std::domain_error(std::string("ExtReal: infinite argument to ") + what);
  }

  Kind kind_;
  Rational r_;
};

/// Remainder of floored division, x - y*floor(x/y). The result has the sign
/// of y (or is zero) and |result| < |y|.
inline ExtReal rat_mod(const ExtReal &x, const ExtReal &y) {
  if (!x.is_finite() || !y.is_finite()) throw std::domain_error("rat_mod: infinite argument");
  if (y.is_zero()) throw std::domain_error("rat_mod: zero divisor");
  return x - y * ExtReal((x / y).floor());
}

struct IntegerRange {
  bool empty = true;
  std::optional<Integer> lo;  // absent when unbounded below (and empty=false)
  std::optional<Integer> hi;  // absent when unbounded above
};

/// An extended-real interval with independent endpoint openness, plus a
/// distinguished Empty value.
class RealInterval {
 public:
  static RealInterval empty() { return RealInterval(); }

  static RealInterval make(ExtReal lo, bool lo_closed, ExtReal hi, bool hi_closed) {
    if (lo > hi) return empty();
    if (lo == hi && !(lo_closed && hi_closed)) return empty();
    RealInterval r;
    r.empty_ = false;
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    r.lo_closed_ = lo_closed;
    r.hi_closed_ = hi_closed;
    return r;
  }

  static RealInterval closed(const ExtReal &lo, const ExtReal &hi) { return make(lo, true, hi, true); }
  static RealInterval open(const ExtReal &lo, const ExtReal &hi) { return make(lo, false, hi, false); }
  static RealInterval singleton(const ExtReal &x) { return make(x, true, x, true); }
  static RealInterval all_extended() { return closed(ExtReal::neg_inf(), ExtReal::pos_inf()); }

  bool is_empty() const { return empty_; }
  const ExtReal &lo() const { return require(), lo_; }
  const ExtReal &hi() const { return require(), hi_; }
  bool lo_closed() const { return require(), lo_closed_; }
  bool hi_closed() const { return require(), hi_closed_; }

  bool contains(const ExtReal &x) const {
    if (empty_) return false;
    if (x < lo_ || (x == lo_ && !lo_closed_)) return false;
    if (x > hi_ || (x == hi_ && !hi_closed_)) return false;
    return true;
  }

  ExtReal diameter() const {
    if (empty_ || lo_ == hi_) return ExtReal(0);
    return hi_ - lo_;
  }

  RealInterval intersect(const RealInterval &o) const {
    if (empty_ || o.empty_) return empty();
    // the tighter bound wins; on ties closedness is the AND
    ExtReal lo = lo_ > o.lo_ ? lo_ : o.lo_;
    bool lc = (lo_ == o.lo_) ? (lo_closed_ && o.lo_closed_) : (lo == lo_ ? lo_closed_ : o.lo_closed_);
    ExtReal hi = hi_ < o.hi_ ? hi_ : o.hi_;
    bool hc = (hi_ == o.hi_) ? (hi_closed_ && o.hi_closed_) : (hi == hi_ ? hi_closed_ : o.hi_closed_);
    return make(lo, lc, hi, hc);
  }

  friend bool operator==(const RealInterval &a, const RealInterval &b) {
    if (a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.lo_closed_ == b.lo_closed_ &&
           a.hi_closed_ == b.hi_closed_;
  }
  friend bool operator!=(const RealInterval &a, const RealInterval &b) { return !(a == b); }

  friend std::ostream &operator<<(std::ostream &os, const RealInterval &I) {
    if (I.empty_) return os << "{}";
    return os << (I.lo_closed_ ? '[' : '(') << I.lo_ << ", " << I.hi_
              << (I.hi_closed_ ? ']' : ')');
  }

 private:
  RealInterval() = default;
  void require() const {
    if (empty_) throw std::domain_error("RealInterval: empty interval has no endpoints");
  }

  bool empty_ = true;
  ExtReal lo_;
  ExtReal hi_;
  bool lo_closed_ = false;
  bool hi_closed_ = false;
};

/// Least and greatest integers contained in I, respecting openness.
inline IntegerRange integers_in(const RealInterval &I) {
  IntegerRange r;
  if (I.is_empty()) return r;
  std::optional<Integer> lo, hi;
  if (I.lo().is_pos_inf() || I.hi().is_neg_inf()) return r;  // only an infinity inside
  if (I.lo().is_finite()) {
    Integer c = I.lo().ceil();
    if (!I.lo_closed() && ExtReal(c) == I.lo()) ++c;
    lo = c;
  }
  if (I.hi().is_finite()) {
    Integer f = I.hi().floor();
    if (!I.hi_closed() && ExtReal(f) == I.hi()) --f;
    hi = f;
  }
  if (lo && hi && *lo > *hi) return r;
  r.empty = false;
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  return r;
}

/// Pointwise image of I under t -> mul*t + add. Endpoints swap when mul < 0.
inline RealInterval interval_scale_shift(const RealInterval &I, const ExtReal &mul,
                                         const ExtReal &add) {
  if (!mul.is_finite() || mul.is_zero() || !add.is_finite())
    throw std::domain_error("interval_scale_shift: mul must be finite nonzero, add finite");
  if (I.is_empty()) return RealInterval::empty();
  ExtReal a = mul * I.lo() + add;
  ExtReal b = mul * I.hi() + add;
  if (mul.sign() > 0) return RealInterval::make(a, I.lo_closed(), b, I.hi_closed());
  return RealInterval::make(b, I.hi_closed(), a, I.lo_closed());
}

}  // namespace fpfactor

#endif
