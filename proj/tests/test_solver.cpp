#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <set>
#include <vector>

#include "fpfactor/oracle.hpp"
#include "fpfactor/solver.hpp"
#include "test_util.hpp"

using namespace fpfactor;
using testutil::Rng;

namespace {

ExtReal dec(long long n, long long d = 1) { return ExtReal(Integer(n), Integer(d)); }

// Does a*t^2 + b*t + c = 0 have a real root in [m, m+1)? Exact, via sign
// evaluation only (no square roots).
bool root_in_half_open(Integer a, Integer b, Integer c, const Integer &m) {
  if (a < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  const auto g = [&](const Integer &t) { return Integer(a * t * t + b * t + c); };
  const Integer gm = g(m);
  const Integer gm1 = g(m + 1);
  if (gm == 0) return true;
  if (gm1 == 0) {
    const ExtReal other = ExtReal(Integer(-b)) / ExtReal(a) - ExtReal(Integer(m + 1));
    return ExtReal(m) <= other && other < ExtReal(Integer(m + 1));
  }
  if ((gm < 0) != (gm1 < 0)) return true;
  // a > 0: endpoints below zero sit strictly between the two roots
  if (gm < 0) return false;
  // endpoints above zero: both roots inside iff the vertex dips in between
  const Integer delta = b * b - 4 * a * c;
  if (delta < 0) return false;
  return 2 * a * m < -b && -b < 2 * a * (m + 1);
}

// all segments [m, m+1), |m| <= bound, that contain a root
std::set<Integer> root_segments(const Integer &a, const Integer &b, const Integer &c,
                                const Integer &bound) {
  std::set<Integer> out;
  for (Integer m = -bound; m <= bound; ++m)
    if (root_in_half_open(a, b, c, m)) out.insert(m);
  return out;
}

// Does (a*t^2 + c mod t) = 0 for some t in [m, m+1)? Enumerates candidate
// integer quotients from the exact range of q(t) = (a*t^2 + c)/t over the
// segment and sign-checks each resulting quadratic.
bool quotient_integer_in_segment(Integer a, Integer c, const Integer &m) {
  if (m == 0) throw std::logic_error("segment at zero");
  if (a < 0) {
    a = -a;
    c = -c;
  }
  if (m == -1) return true;  // q(t) is unbounded as t -> 0-
  const auto q = [&](const Integer &t) { return ExtReal(Integer(a * t * t + c)) / ExtReal(t); };
  const ExtReal qm = q(m);
  const ExtReal qm1 = q(m + 1);
  Integer jlo = (qm < qm1 ? qm : qm1).floor();
  Integer jhi = (qm < qm1 ? qm1 : qm).ceil();
  if (c > 0) {
    // interior extremum +-2*sqrt(ac) may widen the range
    const Integer s = isqrt_floor(a * c).root;
    if (m > 0)
      jlo = std::min(jlo, Integer(2 * s));
    else
      jhi = std::max(jhi, Integer(-2 * s));
  }
  REQUIRE(jhi - jlo < 2000000);
  for (Integer j = jlo; j <= jhi; ++j)
    if (root_in_half_open(a, -j, c, m)) return true;
  return false;
}

}  // namespace

TEST_CASE("quadratic_roots_floor examples") {
  CHECK(quadratic_roots_floor(Integer(1), Integer(-13), Integer(40)) ==
        std::vector<Integer>{Integer(5), Integer(8)});
  CHECK(quadratic_roots_floor(Integer(1), Integer(0), Integer(-2)) ==
        std::vector<Integer>{Integer(-2), Integer(1)});
  CHECK(quadratic_roots_floor(Integer(1), Integer(0), Integer(1)).empty());
  CHECK(quadratic_roots_floor(Integer(-1), Integer(0), Integer(2)) ==
        std::vector<Integer>{Integer(-2), Integer(1)});
  CHECK(quadratic_roots_floor(Integer(1), Integer(-4), Integer(4)) ==
        std::vector<Integer>{Integer(2)});
  CHECK_THROWS_AS(quadratic_roots_floor(Integer(0), Integer(1), Integer(1)), std::domain_error);
}

TEST_CASE("quadratic_roots_floor vs exact sign scan") {
  Rng rng(51);
  for (int i = 0; i < 20000; ++i) {
    const Integer a = rng.nonzero_int(9);
    const Integer b(rng.int_in(-60, 60));
    const Integer c(rng.int_in(-60, 60));
    const auto rs = quadratic_roots_floor(a, b, c);
    const Integer bound = boost::multiprecision::abs(b) + boost::multiprecision::abs(c) + 3;
    const auto expected = root_segments(a, b, c, bound);
    CHECK(std::set<Integer>(rs.begin(), rs.end()) == expected);
  }
}

TEST_CASE("next_quadratic_point_within_bounds examples") {
  const RealInterval half_open = RealInterval::make(dec(-4), false, dec(0), true);
  CHECK(next_quadratic_point_within_bounds(Integer(-1), Integer(11), Integer(-28), Integer(6),
                                           half_open) == Integer(7));
  CHECK_FALSE(next_quadratic_point_within_bounds(Integer(-1), Integer(10), Integer(-28), Integer(6),
                                                 half_open)
                  .has_value());
  CHECK(next_quadratic_point_within_bounds(Integer(-1), Integer(13), Integer(-40), Integer(5),
                                           RealInterval::make(dec(0), true, dec(4), false)) ==
        Integer(5));
}

TEST_CASE("next_quadratic_point_within_bounds vs linear scan") {
  Rng rng(52);
  for (int i = 0; i < 8000; ++i) {
    const Integer a = rng.nonzero_int(6);
    const Integer b(rng.int_in(-40, 40));
    const Integer c(rng.int_in(-80, 80));
    const Integer n(rng.int_in(-25, 25));
    const RealInterval I = testutil::random_interval(rng, 120);
    if (I.is_empty()) continue;
    const auto got = next_quadratic_point_within_bounds(a, b, c, n, I);
    const auto f = [&](const Integer &m) { return ExtReal(Integer(a * m * m + b * m + c)); };
    if (got) {
      CHECK(*got >= n);
      CHECK(I.contains(f(*got)));
      for (Integer m = n; m < *got; ++m) CHECK_FALSE(I.contains(f(m)));
    } else if (I.lo().is_finite() && I.hi().is_finite()) {
      // |f| outgrows any bounded interval; past B there is nothing to find
      const Integer mag = I.lo().abs().ceil() + I.hi().abs().ceil();
      const Integer B = boost::multiprecision::abs(b) + boost::multiprecision::abs(c) + mag + 3;
      for (Integer m = n; m <= B; ++m) CHECK_FALSE(I.contains(f(m)));
    }
  }
}

TEST_CASE("next_quadratic_mod_linear_root_floor examples") {
  CHECK(next_quadratic_mod_linear_root_floor(Integer(-1), Integer(-28), Integer(6)) == Integer(7));
  CHECK(next_quadratic_mod_linear_root_floor(Integer(-1), Integer(-40), Integer(5)) == Integer(5));
  CHECK(next_quadratic_mod_linear_root_floor(Integer(-1), Integer(-40), Integer(6)) == Integer(8));
  CHECK_THROWS_AS(next_quadratic_mod_linear_root_floor(Integer(0), Integer(1), Integer(1)),
                  std::domain_error);
}

TEST_CASE("next_quadratic_mod_linear_root_floor vs segment scan") {
  Rng rng(53);
  for (int i = 0; i < 4000; ++i) {
    const Integer a = rng.nonzero_int(4);
    const Integer c = rng.nonzero_int(300);
    const Integer n = rng.nonzero_int(40);
    const auto got = next_quadratic_mod_linear_root_floor(a, c, n);
    REQUIRE(got.has_value());
    CHECK(*got >= n);
    CHECK(quotient_integer_in_segment(a, c, *got));
    for (Integer m = n; m < *got; ++m) {
      if (m == 0) continue;
      CHECK_FALSE(quotient_integer_in_segment(a, c, m));
    }
  }
}

TEST_CASE("next_divisor_in_bounds examples") {
  CHECK(next_divisor_in_bounds(Integer(4), Integer(7), Integer(6),
                               RealInterval::make(dec(-4), false, dec(0), true)) == Integer(7));
  CHECK(next_divisor_in_bounds(Integer(4), Integer(5), Integer(5),
                               RealInterval::make(dec(0), true, dec(4), false)) == Integer(5));
  CHECK(next_divisor_in_bounds(Integer(4), Integer(10), Integer(6),
                               RealInterval::make(dec(-4), false, dec(0), true)) == Integer(8));
  CHECK_THROWS_AS(next_divisor_in_bounds(Integer(4), Integer(3), Integer(6),
                                         RealInterval::make(dec(-4), false, dec(0), true)),
                  std::domain_error);  // |n| > |b|
  CHECK_THROWS_AS(next_divisor_in_bounds(Integer(4), Integer(7), Integer(6),
                                         RealInterval::closed(dec(1), dec(9))),
                  std::domain_error);  // 0 not in I
}

TEST_CASE("next_divisor_in_bounds vs linear scan") {
  Rng rng(54);
  for (int i = 0; i < 6000; ++i) {
    const long long am = rng.int_in(1, 60);
    const long long bm = rng.int_in(am, 2 * am);
    const long long nm = rng.int_in(am, bm);
    const Integer a = Integer(am) * (rng.flip() ? 1 : -1);
    const Integer b = Integer(bm) * (rng.flip() ? 1 : -1);
    const Integer n = Integer(nm) * (rng.flip() ? 1 : -1);
    // interval containing zero with diameter >= |a|
    ExtReal lo = -rng.rational(am, 7).abs();
    ExtReal hi = lo + dec(am) + rng.rational(2 * am, 5).abs();
    bool lc = rng.flip(), hc = rng.flip();
    if (lo.is_zero()) lc = true;
    if (hi.is_zero()) hc = true;
    const RealInterval I = RealInterval::make(lo, lc, hi, hc);
    REQUIRE(I.contains(dec(0)));

    const Integer got = next_divisor_in_bounds(a, b, n, I);
    const Integer prod = a * b;
    const auto hits = [&](const Integer &m) {
      if (m == 0) return false;
      return I.contains(ExtReal(int_mod(-prod, m))) || I.contains(ExtReal(-int_mod(prod, m)));
    };
    CHECK(got >= n);
    CHECK(hits(got));
    for (Integer m = n; m < got; ++m) {
      if (m == 0) continue;
      CHECK_FALSE(hits(m));
    }
  }
}

TEST_CASE("next_plausible worked examples") {
  const FloatFormat f(2, 3, -2, 1);
  const Float z175 = f.from_value(dec(7, 4));
  CHECK(next_plausible(f, RoundingMode::Up, Integer(6), z175, FloatInterval::singleton(z175)) ==
        Integer(7));
  const Float z125 = f.from_value(dec(5, 4));
  CHECK(next_plausible(f, RoundingMode::Down, Integer(6), z125, FloatInterval::singleton(z125)) ==
        Integer(6));
  CHECK(next_plausible(f, RoundingMode::Down, Integer(5), z125, FloatInterval::singleton(z125)) ==
        Integer(5));
  CHECK_THROWS_AS(next_plausible(f, RoundingMode::ClampedDown, Integer(5), z125,
                                 FloatInterval::singleton(z125)),
                  PreconditionError);
  CHECK_THROWS_AS(next_plausible(f, RoundingMode::Down, Integer(3), z125,
                                 FloatInterval::singleton(z125)),
                  PreconditionError);
}

TEST_CASE("next_plausible equals the first plausible integer") {
  for (const FloatFormat f : {FloatFormat(2, 3, -2, 1), FloatFormat(2, 4, -3, 3)}) {
    const auto all = enumerate_floats(f);
    const Integer bot = f.ipow(f.precision() - 1);
    const Integer top = f.ipow(f.precision());
    for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
      for (std::size_t zi = 0; zi < all.size(); ++zi) {
        const Float &z = all[zi];
        if (!z.is_finite() || !f.is_normal(z)) continue;
        const Integer Mz = (f.value(z) * f.pow(-z.quantum())).numerator();
        const Integer az = boost::multiprecision::abs(Mz);
        for (const FloatInterval &Z :
             {FloatInterval::singleton(z),
              zi + 1 < all.size() ? FloatInterval::make(f, z, all[zi + 1])
                                  : FloatInterval::singleton(z)}) {
          for (Integer Mx = -top + 1; Mx < top; ++Mx) {
            const Integer ax = boost::multiprecision::abs(Mx);
            if (ax < bot || ax >= top) continue;
            if (!((ax <= az && az <= 2 * bot) || (az * f.beta() == top && top <= 2 * bot)))
              continue;
            const Integer got = next_plausible(f, m, Mx, z, Z);
            Integer expect = Mx;
            while (expect == 0 || !is_plausible(f, m, expect, z, Z)) ++expect;
            CHECK(got == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("next_feasible worked examples") {
  const FloatFormat f(2, 3, -2, 1);
  const Float z175 = f.from_value(dec(7, 4));
  const FloatInterval Z = FloatInterval::singleton(z175);
  const auto r = next_feasible(f, RoundingMode::Up, f.from_value(dec(3, 2)), Z);
  REQUIRE(r.has_value());
  CHECK(f.value(*r) == dec(7, 4));
  // feasible inputs return themselves
  const auto self = next_feasible(f, RoundingMode::Up, z175, Z);
  CHECK(self == z175);
  const auto neg = next_feasible(f, RoundingMode::Up, f.from_value(dec(-7, 4)), Z);
  REQUIRE(neg.has_value());
  CHECK(f.value(*neg) == dec(-7, 4));
}

TEST_CASE("prev_feasible worked examples") {
  const FloatFormat f(2, 3, -2, 1);
  const Float z175 = f.from_value(dec(7, 4));
  const FloatInterval Z = FloatInterval::singleton(z175);
  const auto a = prev_feasible(f, RoundingMode::Up, f.from_value(dec(2)), Z);
  REQUIRE(a.has_value());
  CHECK(f.value(*a) == dec(2));
  // confirmed against the oracle: the greatest feasible float below 1.5 is 1.25
  const auto b = prev_feasible(f, RoundingMode::Up, f.from_value(dec(3, 2)), Z);
  REQUIRE(b.has_value());
  CHECK(f.value(*b) == dec(5, 4));
  CHECK(oracle::oracle_prev_feasible(f, RoundingMode::Up, f.from_value(dec(3, 2)), Z) == b);
}

TEST_CASE("next_feasible precondition reporting") {
  const FloatFormat f(2, 3, -2, 1);
  const Float z = f.from_value(dec(7, 4));
  const FloatInterval Z = FloatInterval::singleton(z);
  try {
    next_feasible(f, RoundingMode::ClampedDown, f.from_value(dec(3, 2)), Z);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError &e) {
    CHECK(e.clause() == FailedClause::IrregularMode);
  }
  // subnormal start point
  const Float sub = f.min_positive_float();
  const FloatInterval Zsub = FloatInterval::singleton(f.from_value(dec(5, 4)));
  if (!is_feasible(f, RoundingMode::Down, sub, Zsub).ok) {
    try {
      next_feasible(f, RoundingMode::Down, sub, Zsub);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError &e) {
      CHECK(e.clause() == FailedClause::XNotNormal);
    }
  }
  // no usable z: every member of Z subnormal
  const FloatInterval Ztiny = FloatInterval::singleton(f.min_positive_float());
  const Float start = f.from_value(dec(5, 4));
  if (!is_feasible(f, RoundingMode::Down, start, Ztiny).ok) {
    try {
      next_feasible(f, RoundingMode::Down, start, Ztiny);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError &e) {
      CHECK(e.clause() == FailedClause::NoUsableZ);
    }
  }
}

TEST_CASE("next_feasible equals oracle scan on a tiny format") {
  const FloatFormat f(2, 3, -2, 1);
  const auto all = enumerate_floats(f);
  for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
    const oracle::FactorTable table(f, m);
    for (const Float &x : all) {
      if (!f.is_normal(x)) continue;
      for (std::size_t zi = 0; zi < all.size(); ++zi) {
        for (int width = 0; width < 2; ++width) {
          if (zi + static_cast<std::size_t>(width) >= all.size()) continue;
          const FloatInterval Z = FloatInterval::make(f, all[zi], all[zi + width]);
          std::optional<Float> got;
          try {
            got = next_feasible(f, m, x, Z);
          } catch (const PreconditionError &) {
            continue;  // outside the guaranteed regime
          }
          CHECK(got == table.next_feasible(x, Z));
        }
      }
    }
  }
}

TEST_CASE("next_feasible agrees with the oracle in base 3") {
  // outside base 2 the search only guarantees results for significands of z
  // in (1, 2]; inputs passing that gate must still be exact
  const FloatFormat f(3, 3, -2, 2);
  const auto all = enumerate_floats(f);
  long long compared = 0;
  for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
    const oracle::FactorTable table(f, m, 4096);
    for (const Float &x : all) {
      if (!f.is_normal(x)) continue;
      for (std::size_t zi = 0; zi < all.size(); ++zi) {
        for (std::size_t w = 0; w < 2 && zi + w < all.size(); ++w) {
          const FloatInterval Z = FloatInterval::make(f, all[zi], all[zi + w]);
          std::optional<Float> got;
          try {
            got = next_feasible(f, m, x, Z);
          } catch (const PreconditionError &) {
            continue;
          }
          ++compared;
          CHECK(got == table.next_feasible(x, Z));
        }
      }
    }
  }
  CHECK(compared > 100000);
}

TEST_CASE("next_feasible agrees with the oracle at p = 6, randomized") {
  Rng rng(56);
  const FloatFormat f(2, 6, -4, 4);
  const auto all = enumerate_floats(f);
  for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
    const oracle::FactorTable table(f, m, 4096);
    for (int i = 0; i < 4000; ++i) {
      const Float x = testutil::random_float(rng, all);
      if (!f.is_normal(x)) continue;
      const FloatInterval Z = testutil::random_float_interval(rng, f, all);
      std::optional<Float> got;
      try {
        got = next_feasible(f, m, x, Z);
      } catch (const PreconditionError &) {
        continue;
      }
      CHECK(got == table.next_feasible(x, Z));
    }
  }
}

TEST_CASE("prev_feasible mirrors next_feasible") {
  Rng rng(55);
  const FloatFormat f(2, 4, -3, 3);
  const auto all = enumerate_floats(f);
  for (int i = 0; i < 4000; ++i) {
    const Float x = testutil::random_float(rng, all);
    const FloatInterval Z = testutil::random_float_interval(rng, f, all);
    for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
      std::optional<Float> a, b;
      bool a_threw = false, b_threw = false;
      try {
        a = prev_feasible(f, m, x, Z);
      } catch (const PreconditionError &) {
        a_threw = true;
      }
      try {
        const auto r = next_feasible(f, m, -x, Z);
        b = r ? std::optional<Float>(-*r) : std::nullopt;
      } catch (const PreconditionError &) {
        b_threw = true;
      }
      CHECK(a_threw == b_threw);
      if (!a_threw) CHECK(a == b);
    }
  }
}
