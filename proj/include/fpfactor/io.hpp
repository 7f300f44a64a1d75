#ifndef FPFACTOR_IO_HPP
#define FPFACTOR_IO_HPP

#include <cctype>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fpfactor/exact.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/rounding.hpp"

namespace fpfactor {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool parse_int(const std::string &s, long long &out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(s, &pos);
  } catch (const std::exception &) {
    return false;
  }
  return pos == s.size();
}

inline bool is_digits(const std::string &s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

/// "b=10,p=3,emin=-1,emax=2"
inline FloatFormat parse_format(const std::string &spec) {
  long long b = 0, p = 0, emin = 0, emax = 0;
  bool have_b = false, have_p = false, have_emin = false, have_emax = false;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string part =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("bad format component: " + part);
    const std::string key = part.substr(0, eq);
    long long val = 0;
    if (!detail::parse_int(part.substr(eq + 1), val))
      throw UsageError("bad format value: " + part);
    if (key == "b") b = val, have_b = true;
    else if (key == "p") p = val, have_p = true;
    else if (key == "emin") emin = val, have_emin = true;
    else if (key == "emax") emax = val, have_emax = true;
    else throw UsageError("unknown format key: " + key);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!(have_b && have_p && have_emin && have_emax))
    throw UsageError("format needs b=,p=,emin=,emax=");
  try {
    return FloatFormat(static_cast<int>(b), static_cast<int>(p), static_cast<int>(emin),
                       static_cast<int>(emax));
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

inline RoundingMode parse_mode(const std::string &s) {
  if (s == "rd") return RoundingMode::Down;
  if (s == "ru") return RoundingMode::Up;
  if (s == "rne") return RoundingMode::NearestEven;
  throw UsageError("unknown rounding mode: " + s + " (expected rd|ru|rne)");
}

/// Value grammar: `M*b^q`, an exactly representable decimal literal,
/// `inf` / `-inf`, or `0`.
inline Float parse_value(const FloatFormat &fmt, const std::string &tok) {
  if (tok == "inf" || tok == "+inf") return Float::pos_inf();
  if (tok == "-inf") return Float::neg_inf();
  const std::size_t star = tok.find('*');
  if (star != std::string::npos) {
    const std::size_t caret = tok.find('^', star);
    if (caret == std::string::npos) throw UsageError("bad value token: " + tok);
    long long m = 0, b = 0, q = 0;
    if (!detail::parse_int(tok.substr(0, star), m) ||
        !detail::parse_int(tok.substr(star + 1, caret - star - 1), b) ||
        !detail::parse_int(tok.substr(caret + 1), q) || b < 2)
      throw UsageError("bad value token: " + tok);
    ExtReal v = ExtReal(Integer(m));
    const ExtReal base = ExtReal(Integer(b));
    for (long long i = 0; i < (q < 0 ? -q : q); ++i) v = q < 0 ? v / base : v * base;
    auto f = fmt.try_from_value(v);
    if (!f) throw UsageError("value not representable in format: " + tok);
    return *f;
  }
  std::string s = tok;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  const std::size_t dot = s.find('.');
  std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
  std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (ip.empty()) ip = "0";
  if (!detail::is_digits(ip) || (!fp.empty() && !detail::is_digits(fp)))
    throw UsageError("bad value token: " + tok);
  std::string digits = ip + fp;
  const std::size_t nz = digits.find_first_not_of('0');  // a leading 0 would read as octal
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  Integer num(digits);
  Integer den = 1;
  for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
  ExtReal v(neg ? Integer(-num) : num, den);
  auto f = fmt.try_from_value(v);
  if (!f) throw UsageError("value not representable in format: " + tok);
  return *f;
}

/// "lo:hi", or a single value for a singleton.
inline FloatInterval parse_interval(const FloatFormat &fmt, const std::string &tok) {
  const std::size_t colon = tok.find(':');
  if (colon == std::string::npos) return FloatInterval::singleton(parse_value(fmt, tok));
  const Float lo = parse_value(fmt, tok.substr(0, colon));
  const Float hi = parse_value(fmt, tok.substr(colon + 1));
  if (fmt.less(hi, lo)) throw UsageError("empty interval: " + tok);
  return FloatInterval::make(fmt, lo, hi);
}

/// Exact decimal when the denominator is 2^a 5^b, else "num/den".
inline std::string format_rational(const ExtReal &v, int min_frac_digits = 0) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  Integer num = v.numerator();
  Integer den = v.denominator();
  int twos = 0, fives = 0;
  Integer d = den;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  if (d != 1) return num.str() + "/" + den.str();
  int k = std::max(twos, fives);
  if (k < min_frac_digits) k = min_frac_digits;
  Integer scaled = num;
  for (int i = 0; i < k - twos; ++i) scaled *= 2;
  for (int i = 0; i < k - fives; ++i) scaled *= 5;
  const bool neg = scaled < 0;
  std::string digits = (neg ? Integer(-scaled) : scaled).str();
  if (static_cast<int>(digits.size()) <= k)
    digits.insert(0, static_cast<std::size_t>(k) + 1 - digits.size(), '0');
  std::string out = neg ? "-" : "";
  if (k == 0) return out + digits;
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(k));
  out += ".";
  out += digits.substr(digits.size() - static_cast<std::size_t>(k));
  return out;
}

/// Canonical exact form `M*b^q`; always parses back to the same float.
inline std::string format_float_mbq(const FloatFormat &fmt, const Float &x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  if (x.is_zero()) return "0";
  return x.mantissa().str() + "*" + std::to_string(fmt.beta()) + "^" +
         std::to_string(x.quantum());
}

/// Decimal with quantum-aligned digits for decimal formats, exact decimal
/// when it terminates, canonical `M*b^q` otherwise.
inline std::string format_float_pretty(const FloatFormat &fmt, const Float &x) {
  if (x.is_inf() || x.is_zero()) return format_float_mbq(fmt, x);
  const int pad = fmt.beta() == 10 && x.quantum() < 0 ? -x.quantum() : 0;
  const ExtReal v = fmt.value(x);
  Integer d = v.denominator();
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d != 1) return format_float_mbq(fmt, x);
  return format_rational(v, pad);
}

/// One row per positive finite x: x, x*RD(z/x), x*RU(z/x) as exact values.
/// Cells whose product is infinite are marked "overflow".
inline void emit_error_profile(const FloatFormat &fmt, const Float &z, std::ostream &os,
                               long long cap = kDefaultEnumerationCap) {
  if (!z.is_finite() || z.is_zero())
    throw std::domain_error("emit_error_profile: z must be finite nonzero");
  os << "x\tx_rd_quotient_product\tx_ru_quotient_product\n";
  const ExtReal zv = fmt.value(z);
  for (const Float &x : enumerate_floats(fmt, cap)) {
    if (!x.is_finite() || x.sign() <= 0) continue;
    const ExtReal xv = fmt.value(x);
    const ExtReal q = zv / xv;
    std::string cells[2];
    int i = 0;
    for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up}) {
      const Float r = round_value(fmt, m, q);
      cells[i++] = r.is_inf() ? "overflow" : format_rational(xv * fmt.value(r));
    }
    os << format_float_pretty(fmt, x) << "\t" << cells[0] << "\t" << cells[1] << "\n";
  }
}

/// Rows n = 1..n_max of (-a mod n) and floor(-a/n).
inline void emit_mod_profile(const Integer &a, long long n_max, std::ostream &os) {
  if (n_max < 1) throw std::domain_error("emit_mod_profile: n_max must be >= 1");
  os << "n\tneg_a_mod_n\tfloor_neg_a_div_n\n";
  for (long long n = 1; n <= n_max; ++n) {
    os << n << "\t" << int_mod(-a, Integer(n)) << "\t" << floor_div(-a, Integer(n)) << "\n";
  }
}

}  // namespace fpfactor

#endif
