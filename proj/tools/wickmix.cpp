// Command-line front end: exact moments, Monte Carlo verification, the
// property self-test and direct Bessel evaluation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "wickmix/errors.hpp"
#include "wickmix/problem_spec.hpp"
#include "wickmix/selftest.hpp"
#include "wickmix/special.hpp"

namespace {

using namespace wickmix;
using namespace wickmix::cli;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void report_error(const std::string& source, const std::string& kind, const std::string& field,
                  const std::string& message) {
  nlohmann::json doc = {{"error", kind}, {"message", message}};
  if (!source.empty()) doc["source"] = source;
  if (!field.empty()) doc["field"] = field;
  std::cerr << doc.dump() << '\n';
}

struct RunSettings {
  std::vector<std::string> specs;
  OptionOverrides overrides;
  bool csv = false;
};

// Runs every spec; returns the process exit code. Input problems stop the
// batch immediately so nothing is silently skipped.
int run_specs(const RunSettings& settings, bool verify) {
  if (settings.specs.empty()) {
    report_error("", "missing_field", "--spec", "at least one --spec is required");
    return kExitInputError;
  }
  if (settings.csv) std::cout << csv_header() << '\n';
  int exit_code = kExitSuccess;
  for (const auto& path : settings.specs) {
    try {
      const ProblemSpec spec = parse_spec(read_source(path), settings.overrides);
      const ResultRecord record = verify ? run_verify(spec) : run_moment(spec);
      for (const auto& w : record.warnings) std::cerr << "warning: " << w << '\n';
      if (settings.csv) {
        std::cout << csv_row(record) << '\n';
      } else {
        std::cout << to_json(record).dump(2) << '\n';
      }
      if (record.agreement && record.agreement->status == Agreement::Status::fail) {
        exit_code = kExitVerificationFailed;
      }
    } catch (const SpecError& e) {
      report_error(path, to_string(e.kind()), e.field(), e.what());
      return kExitInputError;
    } catch (const SizeGuardError& e) {
      report_error(path, "size_guard", "index_set", e.what());
      return kExitSizeGuard;
    } catch (const InputError& e) {
      report_error(path, "io", "", e.what());
      return kExitInputError;
    } catch (const UnsupportedSampling& e) {
      report_error(path, "unsupported_sampling", "params.mixing", e.what());
      return kExitInputError;
    } catch (const ContractViolation& e) {
      report_error(path, "invalid_value", "", e.what());
      return kExitInputError;
    } catch (const DomainError& e) {
      report_error(path, "invalid_value", "", e.what());
      return kExitInputError;
    }
  }
  return exit_code;
}

int run_bessel(double nu, double x, bool csv) {
  try {
    const double log_k = log_bessel_k(nu, x);
    double value = 0.0;
    bool overflow = false;
    try {
      value = bessel_k(nu, x);
    } catch (const OverflowError&) {
      overflow = true;
    }
    if (csv) {
      char buffer[120];
      std::snprintf(buffer, sizeof buffer, "%.17g,%.17g,%.17g,%.17g", nu, x,
                    overflow ? INFINITY : value, log_k);
      std::cout << "nu,x,K,logK\n" << buffer << '\n';
    } else {
      nlohmann::json doc = {{"nu", nu}, {"x", x}, {"log_K", log_k}};
      doc["K"] = overflow ? nlohmann::json(nullptr) : nlohmann::json(value);
      if (overflow) doc["warnings"] = {"K overflows double; only log_K is finite"};
      std::cout << doc.dump(2) << '\n';
    }
    return kExitSuccess;
  } catch (const DomainError& e) {
    report_error("", "invalid_value", "--x", e.what());
  } catch (const ContractViolation& e) {
    report_error("", "invalid_value", "", e.what());
  } catch (const QuadratureError& e) {
    report_error("", "quadrature", "", e.what());
  }
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact mixed moments of Gaussian, Gaussian location-mixture and generalized "
               "hyperbolic vectors"};
  app.require_subcommand(1);

  RunSettings settings;
  auto add_run_options = [&](CLI::App* sub, bool with_mc) {
    sub->add_option("--spec", settings.specs, "Problem file; '-' reads standard input; repeatable")
        ->required();
    sub->add_flag("--csv", settings.csv, "Emit CSV rows instead of JSON documents");
    sub->add_flag("--strict-det,!--no-strict-det", settings.overrides.strict_det,
                  "Reject Delta with det != 1 (default unless the file says otherwise)");
    sub->add_option("--max-index-size", settings.overrides.max_index_size,
                    "Refuse index sets larger than this (default 20)");
    if (with_mc) {
      sub->add_option("--samples", settings.overrides.samples, "Monte Carlo sample count");
      sub->add_option("--seed", settings.overrides.seed, "Random seed");
      sub->add_option("--threads", settings.overrides.threads, "Worker threads")
          ->check(CLI::Range(1u, 1024u));
    }
  };

  CLI::App* moment = app.add_subcommand("moment", "Exact moment E[X_A]");
  add_run_options(moment, false);
  CLI::App* verify = app.add_subcommand("verify", "Exact moment plus a Monte Carlo check");
  add_run_options(verify, true);

  SelftestOptions selftest_options;
  CLI::App* selftest = app.add_subcommand("selftest", "Run the property suites");
  selftest->add_option("--seed", selftest_options.seed, "Random seed");
  selftest->add_option("--threads", selftest_options.threads, "Worker threads")
      ->check(CLI::Range(1u, 1024u));
  selftest->add_flag("--debug-corrupt-covariance", selftest_options.corrupt_covariance_symmetry)
      ->group("");

  double nu = 0.0;
  double x = 1.0;
  bool bessel_csv = false;
  CLI::App* bessel = app.add_subcommand("bessel", "Evaluate K_nu(x) directly");
  bessel->add_option("--nu", nu, "Order (any real)")->required();
  bessel->add_option("--x", x, "Argument (> 0)")->required();
  bessel->add_flag("--csv", bessel_csv, "Emit a CSV row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInputError;
  }

  if (moment->parsed()) return run_specs(settings, false);
  if (verify->parsed()) return run_specs(settings, true);
  if (selftest->parsed()) {
    return run_selftest(std::cout, selftest_options) ? kExitSuccess : kExitVerificationFailed;
  }
  if (bessel->parsed()) return run_bessel(nu, x, bessel_csv);
  return kExitInputError;
}
