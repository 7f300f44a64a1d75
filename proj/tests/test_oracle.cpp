#include <catch2/catch_amalgamated.hpp>

#include "fpfactor/oracle.hpp"
#include "test_util.hpp"

using namespace fpfactor;
using testutil::Rng;

namespace {

ExtReal dec(long long n, long long d = 1) { return ExtReal(Integer(n), Integer(d)); }

}  // namespace

TEST_CASE("oracle_feasible examples") {
  const FloatFormat f(2, 3, -2, 1);
  CHECK_FALSE(oracle::oracle_feasible(f, RoundingMode::Up, f.from_value(dec(3, 2)),
                                      FloatInterval::singleton(f.from_value(dec(7, 4)))));
  const FloatFormat g(10, 3, -1, 2);
  CHECK(oracle::oracle_feasible(g, RoundingMode::Down, g.from_value(dec(215, 100)),
                                FloatInterval::singleton(g.from_value(dec(5)))));
  CHECK(oracle::oracle_feasible(g, RoundingMode::Down, g.from_value(dec(7, 10)),
                                FloatInterval::make(g, g.from_value(dec(-1)), g.from_value(dec(1)))));
}

TEST_CASE("oracle_next_feasible examples") {
  const FloatFormat f(2, 3, -2, 1);
  const auto r = oracle::oracle_next_feasible(f, RoundingMode::Up, f.from_value(dec(3, 2)),
                                              FloatInterval::singleton(f.from_value(dec(7, 4))));
  REQUIRE(r.has_value());
  CHECK(f.value(*r) == dec(7, 4));
  // feasible start points return themselves
  const auto self = oracle::oracle_next_feasible(f, RoundingMode::Up, f.from_value(dec(7, 4)),
                                                 FloatInterval::singleton(f.from_value(dec(7, 4))));
  CHECK(self == f.from_value(dec(7, 4)));
  // Z = {+inf}: positive x reaches it with y = +inf
  const auto inf = oracle::oracle_next_feasible(f, RoundingMode::Down, f.from_value(dec(1)),
                                                FloatInterval::singleton(Float::pos_inf()));
  CHECK(inf == f.from_value(dec(1)));
}

TEST_CASE("oracle_solve examples") {
  const FloatFormat g(10, 3, -1, 2);
  const auto res = oracle::oracle_solve(
      g, RoundingMode::Down,
      FloatInterval::make(g, g.from_value(dec(220, 100)), g.from_value(dec(250, 100))),
      FloatInterval::make(g, g.from_value(dec(1)), g.from_value(dec(250, 100))),
      FloatInterval::singleton(g.from_value(dec(5))));
  CHECK(g.value(res.x_bounds.lo()) == dec(233, 100));
  CHECK(g.value(res.x_bounds.hi()) == dec(250, 100));
  CHECK(g.value(res.y_bounds.lo()) == dec(2));
  CHECK(g.value(res.y_bounds.hi()) == dec(215, 100));
  CHECK_FALSE(res.z_bounds.is_empty());
  CHECK(g.value(res.z_bounds.lo()) == dec(5));

  const FloatFormat f(2, 3, -2, 1);
  const auto empty = oracle::oracle_solve(f, RoundingMode::Down,
                                          FloatInterval::singleton(f.from_value(dec(1))),
                                          FloatInterval::singleton(f.from_value(dec(1))),
                                          FloatInterval::singleton(f.from_value(dec(2))));
  CHECK(empty.x_bounds.is_empty());

  // every finite x has a witness when Z is everything finite
  const auto full = oracle::oracle_solve(f, RoundingMode::Down, FloatInterval::all_finite(f),
                                         FloatInterval::all_finite(f), FloatInterval::all_finite(f));
  CHECK(full.x_bounds == FloatInterval::all_finite(f));
}

TEST_CASE("oracle caps are enforced") {
  const FloatFormat g(10, 3, -1, 2);
  oracle::OracleLimits tight;
  tight.enumeration_cap = 100;
  CHECK_THROWS_AS(oracle::oracle_feasible(g, RoundingMode::Down, g.zero(),
                                          FloatInterval::singleton(g.zero()), tight),
                  ResourceError);
  oracle::OracleLimits pairs;
  pairs.pair_cap = 10;
  CHECK_THROWS_AS(oracle::oracle_solve(g, RoundingMode::Down, FloatInterval::all_finite(g),
                                       FloatInterval::all_finite(g), FloatInterval::all_finite(g),
                                       pairs),
                  ResourceError);
}

TEST_CASE("factor table agrees with the direct scans") {
  const FloatFormat f(2, 3, -2, 1);
  const auto all = enumerate_floats(f);
  Rng rng(71);
  for (const RoundingMode m : {RoundingMode::Down, RoundingMode::Up, RoundingMode::NearestEven}) {
    const oracle::FactorTable table(f, m);
    for (int i = 0; i < 1200; ++i) {
      const Float x = testutil::random_float(rng, all);
      const FloatInterval Z = testutil::random_float_interval(rng, f, all);
      CHECK(table.feasible(x, Z) == oracle::oracle_feasible(f, m, x, Z));
      CHECK(table.next_feasible(x, Z) == oracle::oracle_next_feasible(f, m, x, Z));
      CHECK(table.prev_feasible(x, Z) == oracle::oracle_prev_feasible(f, m, x, Z));
    }
    // negation closure holds at the oracle level
    for (const Float &x : all) {
      const FloatInterval Z = testutil::random_float_interval(rng, f, all);
      CHECK(oracle::oracle_feasible(f, m, x, Z) == oracle::oracle_feasible(f, m, -x, Z));
    }
  }
}
