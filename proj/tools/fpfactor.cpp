#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpfactor/fpfactor.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitResource = 4;

long long enumeration_cap() {
  if (const char *env = std::getenv("FPFACTOR_ORACLE_CAP")) {
    char *end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw fpfactor::UsageError("FPFACTOR_ORACLE_CAP must be a positive integer");
  }
  return fpfactor::kDefaultEnumerationCap;
}

struct CommonArgs {
  std::string format;
  std::string round = "rd";
};

void add_common(CLI::App *cmd, CommonArgs &args, bool with_round = true) {
  cmd->add_option("--format", args.format, "format as b=<beta>,p=<prec>,emin=<e>,emax=<e>")
      ->required();
  if (with_round) cmd->add_option("--round", args.round, "rounding mode: rd|ru|rne");
}

std::string interval_str(const fpfactor::FloatFormat &fmt, const fpfactor::FloatInterval &I) {
  if (I.is_empty()) return "empty";
  return "[" + fpfactor::format_float_pretty(fmt, I.lo()) + ", " +
         fpfactor::format_float_pretty(fmt, I.hi()) + "]";
}

int run(int argc, char **argv) {
  using namespace fpfactor;
  CLI::App app{"exact parametric floating-point factor and interval-bound queries"};
  app.require_subcommand(1);

  CommonArgs info_args, feas_args, next_args, prop_args, err_args;
  std::string feas_x, feas_z, next_from, next_z, next_dir = "up";
  std::string prop_x, prop_y, prop_z, err_z;
  bool feas_oracle = false, next_oracle = false, prop_oracle = false;
  long long mod_a = 1000, mod_nmax = 100;

  auto *info = app.add_subcommand("info", "print format parameters");
  add_common(info, info_args, false);

  auto *feas = app.add_subcommand("feasible", "is x feasible for Z?");
  add_common(feas, feas_args);
  feas->add_option("--x", feas_x)->required();
  feas->add_option("--z", feas_z, "interval lo:hi")->required();
  feas->add_flag("--oracle", feas_oracle, "answer by brute-force scan");

  auto *next = app.add_subcommand("next-factor", "nearest feasible float from a start point");
  add_common(next, next_args);
  next->add_option("--from", next_from)->required();
  next->add_option("--z", next_z, "interval lo:hi")->required();
  next->add_option("--direction", next_dir, "up|down");
  next->add_flag("--oracle", next_oracle, "answer by brute-force scan");

  auto *prop = app.add_subcommand("propagate", "tighten bounds for x*y = z");
  add_common(prop, prop_args);
  prop->add_option("--x", prop_x, "interval lo:hi")->required();
  prop->add_option("--y", prop_y, "interval lo:hi")->required();
  prop->add_option("--z", prop_z, "interval lo:hi")->required();
  prop->add_flag("--oracle", prop_oracle, "solve by exhaustive scan");

  auto *errp = app.add_subcommand("error-profile", "TSV of x*RD(z/x) and x*RU(z/x)");
  add_common(errp, err_args, false);
  errp->add_option("--z", err_z)->required();

  auto *modp = app.add_subcommand("mod-profile", "TSV of (-a mod n) and floor(-a/n)");
  modp->add_option("--a", mod_a, "numerator magnitude");
  modp->add_option("--n-max", mod_nmax, "largest divisor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  if (info->parsed()) {
    const FloatFormat fmt = parse_format(info_args.format);
    std::cout << "beta\t" << fmt.beta() << "\n"
              << "p\t" << fmt.precision() << "\n"
              << "emin\t" << fmt.emin() << "\n"
              << "emax\t" << fmt.emax() << "\n"
              << "qmin\t" << fmt.qmin() << "\n"
              << "qmax\t" << fmt.qmax() << "\n"
              << "max_finite\t" << format_rational(fmt.max_finite()) << "\n"
              << "min_positive\t" << format_rational(fmt.min_positive()) << "\n"
              << "min_normal\t" << format_rational(fmt.pow(fmt.emin())) << "\n"
              << "cardinality\t" << fmt.cardinality() << "\n";
    return kExitOk;
  }

  if (feas->parsed()) {
    const FloatFormat fmt = parse_format(feas_args.format);
    const RoundingMode mode = parse_mode(feas_args.round);
    const Float x = parse_value(fmt, feas_x);
    const FloatInterval Z = parse_interval(fmt, feas_z);
    bool ok;
    if (feas_oracle) {
      oracle::OracleLimits limits;
      limits.enumeration_cap = enumeration_cap();
      ok = oracle::oracle_feasible(fmt, mode, x, Z, limits);
    } else {
      const FactorResult r = is_feasible(fmt, mode, x, Z);
      ok = r.ok;
      if (r.witness) std::cerr << "witness: " << format_float_mbq(fmt, *r.witness) << "\n";
    }
    std::cout << (ok ? "yes" : "no") << "\n";
    return ok ? kExitOk : kExitEmpty;
  }

  if (next->parsed()) {
    const FloatFormat fmt = parse_format(next_args.format);
    const RoundingMode mode = parse_mode(next_args.round);
    const Float from = parse_value(fmt, next_from);
    const FloatInterval Z = parse_interval(fmt, next_z);
    if (next_dir != "up" && next_dir != "down") throw UsageError("--direction must be up|down");
    std::optional<Float> r;
    if (next_oracle) {
      oracle::OracleLimits limits;
      limits.enumeration_cap = enumeration_cap();
      r = next_dir == "up" ? oracle::oracle_next_feasible(fmt, mode, from, Z, limits)
                           : oracle::oracle_prev_feasible(fmt, mode, from, Z, limits);
    } else {
      r = next_dir == "up" ? next_feasible(fmt, mode, from, Z)
                           : prev_feasible(fmt, mode, from, Z);
    }
    if (!r) {
      std::cout << "none\n";
      return kExitEmpty;
    }
    std::cout << format_float_mbq(fmt, *r) << "\n";
    return kExitOk;
  }

  if (prop->parsed()) {
    const FloatFormat fmt = parse_format(prop_args.format);
    const RoundingMode mode = parse_mode(prop_args.round);
    const FloatInterval X = parse_interval(fmt, prop_x);
    const FloatInterval Y = parse_interval(fmt, prop_y);
    const FloatInterval Z = parse_interval(fmt, prop_z);
    PropagationResult res;
    if (prop_oracle) {
      oracle::OracleLimits limits;
      limits.enumeration_cap = enumeration_cap();
      res = oracle::oracle_solve(fmt, mode, X, Y, Z, limits);
    } else {
      PropagatorConfig config;
      config.oracle_fallback_cap = Integer(enumeration_cap());
      res = solve_mul_constraint(fmt, mode, X, Y, Z, config);
    }
    std::cout << "x\t" << interval_str(fmt, res.x_bounds) << "\t"
              << (res.x_optimal ? "optimal" : "sound") << "\n"
              << "y\t" << interval_str(fmt, res.y_bounds) << "\t"
              << (res.y_optimal ? "optimal" : "sound") << "\n"
              << "z\t" << interval_str(fmt, res.z_bounds) << "\t"
              << (res.z_optimal ? "optimal" : "sound") << "\n";
    return res.x_bounds.is_empty() ? kExitEmpty : kExitOk;
  }

  if (errp->parsed()) {
    const FloatFormat fmt = parse_format(err_args.format);
    const Float z = parse_value(fmt, err_z);
    emit_error_profile(fmt, z, std::cout, enumeration_cap());
    return kExitOk;
  }

  if (modp->parsed()) {
    emit_mod_profile(fpfactor::Integer(mod_a), mod_nmax, std::cout);
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const fpfactor::UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fpfactor::PreconditionError &e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const fpfactor::ResourceError &e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
