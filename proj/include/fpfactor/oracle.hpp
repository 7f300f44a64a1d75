#ifndef FPFACTOR_ORACLE_HPP
#define FPFACTOR_ORACLE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fpfactor/exact.hpp"
#include "fpfactor/format.hpp"
#include "fpfactor/propagator.hpp"
#include "fpfactor/rounding.hpp"

namespace fpfactor {
namespace oracle {

struct OracleLimits {
  long long enumeration_cap = kDefaultEnumerationCap;
  long long pair_cap = 100'000'000;  // bound on |X| * |Y| in the triple scan
};

/// Direct evaluation of the defining quantifier: is there a y with
/// x (x) y in Z?
inline bool oracle_feasible(const FloatFormat &fmt, RoundingMode mode, const Float &x,
                            const FloatInterval &Z, const OracleLimits &limits = {}) {
  if (Z.is_empty()) throw std::domain_error("oracle_feasible: empty Z");
  for (const Float &y : enumerate_floats(fmt, limits.enumeration_cap)) {
    try {
      if (Z.contains(fmt, fp_multiply(fmt, mode, x, y))) return true;
    } catch (const UndefinedProductError &) {
    }
  }
  return false;
}

/// Linear scan upward from x for the first feasible float.
inline std::optional<Float> oracle_next_feasible(const FloatFormat &fmt, RoundingMode mode,
                                                 const Float &x, const FloatInterval &Z,
                                                 const OracleLimits &limits = {}) {
  for (const Float &f : enumerate_floats(fmt, limits.enumeration_cap)) {
    if (fmt.less(f, x)) continue;
    if (oracle_feasible(fmt, mode, f, Z, limits)) return f;
  }
  return std::nullopt;
}

inline std::optional<Float> oracle_prev_feasible(const FloatFormat &fmt, RoundingMode mode,
                                                 const Float &x, const FloatInterval &Z,
                                                 const OracleLimits &limits = {}) {
  auto r = oracle_next_feasible(fmt, mode, -x, Z, limits);
  if (!r) return std::nullopt;
  return -*r;
}

/// Exhaustive evaluation of the constraint sets: extrema of
/// X' = {x | exists y, z}, Y', and Z' by a full pair scan.
inline PropagationResult oracle_solve(const FloatFormat &fmt, RoundingMode mode,
                                      const FloatInterval &X, const FloatInterval &Y,
                                      const FloatInterval &Z, const OracleLimits &limits = {}) {
  if (X.is_empty() || Y.is_empty() || Z.is_empty())
    throw std::domain_error("oracle_solve: empty input");
  const std::vector<Float> all = enumerate_floats(fmt, limits.enumeration_cap);
  std::vector<Float> xs, ys;
  for (const Float &f : all) {
    if (X.contains(fmt, f)) xs.push_back(f);
    if (Y.contains(fmt, f)) ys.push_back(f);
  }
  if (static_cast<long long>(xs.size()) * static_cast<long long>(ys.size()) > limits.pair_cap)
    throw ResourceError("oracle_solve: |X| * |Y| exceeds the pair cap");

  std::optional<Float> xmin, xmax, ymin, ymax, zmin, zmax;
  auto widen = [&fmt](std::optional<Float> &mn, std::optional<Float> &mx, const Float &v) {
    if (!mn || fmt.less(v, *mn)) mn = v;
    if (!mx || fmt.less(*mx, v)) mx = v;
  };
  for (const Float &x : xs) {
    for (const Float &y : ys) {
      try {
        const Float p = fp_multiply(fmt, mode, x, y);
        if (!Z.contains(fmt, p)) continue;
        widen(xmin, xmax, x);
        widen(ymin, ymax, y);
        widen(zmin, zmax, p);
      } catch (const UndefinedProductError &) {
      }
    }
  }
  PropagationResult out;
  out.x_optimal = out.y_optimal = out.z_optimal = true;
  if (xmin) out.x_bounds = FloatInterval::make(fmt, *xmin, *xmax);
  if (ymin) out.y_bounds = FloatInterval::make(fmt, *ymin, *ymax);
  if (zmin) out.z_bounds = FloatInterval::make(fmt, *zmin, *zmax);
  return out;
}

/// Brute-force factor table for one (format, mode): feas[i][j] says whether
/// the i-th float is a factor of the j-th, computed by enumerating every
/// defined product. Row prefix sums make interval feasibility O(1).
class FactorTable {
 public:
  FactorTable(const FloatFormat &fmt, RoundingMode mode, long long cap = 4096)
      : fmt_(fmt), floats_(enumerate_floats(fmt, cap)) {
    const std::size_t n = floats_.size();
    std::vector<std::vector<bool>> feas(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        try {
          const Float p = fp_multiply(fmt_, mode, floats_[i], floats_[k]);
          feas[i][index_of(p)] = true;
        } catch (const UndefinedProductError &) {
        }
      }
    }
    prefix_.assign(n, std::vector<std::uint32_t>(n + 1, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        prefix_[i][j + 1] = prefix_[i][j] + (feas[i][j] ? 1 : 0);
  }

  const std::vector<Float> &floats() const { return floats_; }

  std::size_t index_of(const Float &f) const {
    auto it = std::lower_bound(floats_.begin(), floats_.end(), f,
                               [this](const Float &a, const Float &b) { return fmt_.less(a, b); });
    if (it == floats_.end() || *it != f) throw std::logic_error("FactorTable: unknown float");
    return static_cast<std::size_t>(it - floats_.begin());
  }

  bool feasible(const Float &x, const FloatInterval &Z) const {
    if (Z.is_empty()) throw std::domain_error("FactorTable::feasible: empty Z");
    const std::size_t i = index_of(x);
    const std::size_t a = index_of(Z.lo());
    const std::size_t b = index_of(Z.hi());
    return prefix_[i][b + 1] > prefix_[i][a];
  }

  std::optional<Float> next_feasible(const Float &x, const FloatInterval &Z) const {
    for (std::size_t i = index_of(x); i < floats_.size(); ++i)
      if (feasible(floats_[i], Z)) return floats_[i];
    return std::nullopt;
  }

  std::optional<Float> prev_feasible(const Float &x, const FloatInterval &Z) const {
    for (std::size_t i = index_of(x) + 1; i-- > 0;)
      if (feasible(floats_[i], Z)) return floats_[i];
    return std::nullopt;
  }

 private:
  FloatFormat fmt_;
  std::vector<Float> floats_;
  std::vector<std::vector<std::uint32_t>> prefix_;
};

}  // namespace oracle
}  // namespace fpfactor

#endif
