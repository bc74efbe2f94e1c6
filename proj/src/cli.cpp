#include "tfloc/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "tfloc/errors.hpp"
#include "tfloc/harness.hpp"
#include "tfloc/regimes.hpp"
#include "tfloc/solver.hpp"
#include "tfloc/types.hpp"

namespace tfloc {

namespace {

// every float in every document goes through this, so output is byte-stable
std::string num12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

const char* json_bool(bool b) { return b ? "true" : "false"; }

struct CommonFlags {
  ProblemParams params;
  double tol = 1e-9;
  double rmax = 3.0;
  int n = 201;
  std::string out = "-";
};

void add_param_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--d", flags.params.d, "dimension (>= 1)");
  cmd->add_option("--p", flags.params.p, "first exponent (> 1)");
  cmd->add_option("--q", flags.params.q, "second exponent (> 1)");
  cmd->add_option("--A", flags.params.A, "L^p budget (> 0)");
  cmd->add_option("--B", flags.params.B, "L^q budget (> 0)");
}

void check_params(const ProblemParams& params) {
  if (params.d < 1) throw std::domain_error("--d must be >= 1");
  if (!(params.p > 1.0) || !std::isfinite(params.p))
    throw std::domain_error("--p must be a finite real > 1");
  if (!(params.q > 1.0) || !std::isfinite(params.q))
    throw std::domain_error("--q must be a finite real > 1");
  if (!(params.A > 0.0) || !std::isfinite(params.A))
    throw std::domain_error("--A must be a finite real > 0");
  if (!(params.B > 0.0) || !std::isfinite(params.B))
    throw std::domain_error("--B must be a finite real > 0");
}

void emit(const std::string& doc, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << doc;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::domain_error("--out path is not writable: " + path);
  file << doc;
}

std::string classify_doc(const ProblemParams& params) {
  const RegimeDecision decision = classify(params);
  std::string doc = "{";
  doc += "\"regime\":" + quoted(to_string(decision.regime));
  doc += ",\"threshold_lower\":" + num12(decision.threshold_lower);
  doc += ",\"threshold_upper\":" + num12(decision.threshold_upper);
  doc += ",\"ratio\":" + num12(decision.ratio);
  if (decision.regime != Regime::intermediate) {
    const ClosedFormBound cfb = closed_form_bound(params, decision);
    doc += ",\"bound\":" + num12(cfb.value);
  }
  doc += "}\n";
  return doc;
}

std::string solve_doc(const ProblemParams& params, double tol) {
  const RegimeDecision decision = classify(params);
  std::string doc = "{";
  doc += "\"regime\":" + quoted(to_string(decision.regime));
  if (decision.regime == Regime::intermediate) {
    const VariationalSolution sol = solve_multipliers(params, tol);
    doc += ",\"lambda1\":" + num12(sol.lambda1);
    doc += ",\"lambda2\":" + num12(sol.lambda2);
    doc += ",\"c1\":" + num12(sol.c1);
    doc += ",\"c2\":" + num12(sol.c2);
    doc += ",\"T\":" + num12(sol.T);
    doc += ",\"bound\":" + num12(sol.bound);
    doc += ",\"residual_p\":" + num12(sol.residual_p);
    doc += ",\"residual_q\":" + num12(sol.residual_q);
    doc += ",\"iterations\":" + std::to_string(sol.iterations);
  } else {
    const ClosedFormBound cfb = closed_form_bound(params, decision);
    doc += ",\"lambda1\":null,\"lambda2\":null,\"c1\":null,\"c2\":null";
    doc += ",\"T\":null";
    doc += ",\"bound\":" + num12(cfb.value);
    doc += ",\"residual_p\":null,\"residual_q\":null";
    doc += ",\"iterations\":0";
  }
  doc += "}\n";
  return doc;
}

std::string profile_doc(const ProblemParams& params, double tol, double rmax,
                        int n) {
  const RegimeDecision decision = classify(params);
  RadialWeight table;
  std::string meta;
  if (decision.regime == Regime::intermediate) {
    const VariationalSolution sol = solve_multipliers(params, tol);
    table = sample_profile(sol, rmax, n);
    meta = "# lambda1=" + num12(sol.lambda1) +
           " lambda2=" + num12(sol.lambda2) + " T=" + num12(sol.T) + "\n";
  } else {
    const ClosedFormBound cfb = closed_form_bound(params, decision);
    table = sample_profile(cfb.optimizer, rmax, n);
    meta = "# amplitude=" + num12(cfb.optimizer.amplitude) +
           " decay=" + num12(cfb.optimizer.decay) + "\n";
  }
  std::string doc = "# regime=" + std::string(to_string(decision.regime)) +
                    "\n" + meta + "r,F\n";
  for (std::size_t i = 0; i < table.radii.size(); ++i)
    doc += num12(table.radii[i]) + "," + num12(table.values[i]) + "\n";
  return doc;
}

std::string oracle_doc(const OracleSuiteReport& report,
                       std::uint64_t seed) {
  std::string doc = "{\"seed\":" + std::to_string(seed) + ",\"checks\":[";
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const SuiteCheck& check = report.checks[i];
    if (i) doc += ",";
    doc += "{\"name\":" + quoted(check.name);
    doc += ",\"pass\":" + std::string(json_bool(check.pass));
    doc += ",\"measured\":" + num12(check.measured);
    doc += ",\"limit\":" + num12(check.limit) + "}";
  }
  doc += "],\"pass\":" + std::string(json_bool(report.pass)) + "}\n";
  return doc;
}

std::string lieb_doc(const LiebSuiteReport& report) {
  std::string doc = "{\"cases\":[";
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const LiebReport& rep = report.cases[i];
    if (i) doc += ",";
    doc += "{\"signal\":" + quoted(rep.signal);
    doc += ",\"p\":" + num12(rep.p);
    doc += ",\"q\":" + num12(rep.q);
    doc += ",\"p_dual\":" + num12(rep.p_dual);
    doc += ",\"q_dual\":" + num12(rep.q_dual);
    doc += ",\"regime\":" + quoted(to_string(rep.regime));
    doc += ",\"constant\":" + num12(rep.constant);
    doc += ",\"l2sq\":" + num12(rep.l2sq);
    doc += ",\"lower\":" + num12(rep.lower);
    doc += ",\"upper\":" + num12(rep.upper);
    doc += ",\"gap\":" + num12(rep.gap);
    doc += ",\"pass\":" + std::string(json_bool(rep.pass)) + "}";
  }
  doc += "],\"pass\":" + std::string(json_bool(report.pass)) + "}\n";
  return doc;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"sharp bounds for Gaussian-window localization operators"};
  app.require_subcommand(1);

  CommonFlags classify_flags;
  CLI::App* cmd_classify =
      app.add_subcommand("classify", "regime decision and thresholds");
  add_param_flags(cmd_classify, classify_flags);
  cmd_classify->add_option("--out", classify_flags.out, "output path or -");

  CommonFlags solve_flags;
  CLI::App* cmd_solve =
      app.add_subcommand("solve", "solve the two-multiplier system");
  add_param_flags(cmd_solve, solve_flags);
  cmd_solve->add_option("--tol", solve_flags.tol,
                        "normalized residual tolerance");
  cmd_solve->add_option("--out", solve_flags.out, "output path or -");

  CommonFlags profile_flags;
  CLI::App* cmd_profile =
      app.add_subcommand("profile", "export the optimal radial profile");
  add_param_flags(cmd_profile, profile_flags);
  cmd_profile->add_option("--tol", profile_flags.tol,
                          "normalized residual tolerance");
  cmd_profile->add_option("--rmax", profile_flags.rmax, "largest radius");
  cmd_profile->add_option("--n", profile_flags.n, "number of rows (>= 2)");
  cmd_profile->add_option("--out", profile_flags.out, "output path or -");

  std::uint64_t oracle_seed = 1;
  std::string oracle_out = "-";
  CLI::App* cmd_oracle =
      app.add_subcommand("verify-oracle", "run the oracle validation suite");
  cmd_oracle->add_option("--seed", oracle_seed, "random seed");
  cmd_oracle->add_option("--out", oracle_out, "output path or -");

  LiebSuiteConfig lieb_config;
  std::string lieb_out = "-";
  CLI::App* cmd_lieb = app.add_subcommand(
      "verify-lieb", "run the spectrogram bound suite");
  // frees the short -h alias so the grid step can be spelled --h
  cmd_lieb->set_help_flag("--help", "print help");
  cmd_lieb->add_option("--R", lieb_config.R, "grid half-width");
  cmd_lieb->add_option("--h", lieb_config.h, "grid step");
  cmd_lieb->add_option("--dt", lieb_config.dt, "signal sampling step");
  cmd_lieb->add_option("--seed", lieb_config.seed, "random seed");
  cmd_lieb->add_option("--mixtures", lieb_config.mixtures,
                       "number of random mixtures");
  cmd_lieb->add_option("--tol", lieb_config.tol, "dominance tolerance");
  cmd_lieb->add_option("--out", lieb_out, "output path or -");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints help itself; anything else is an input error
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_classify->parsed()) {
      check_params(classify_flags.params);
      emit(classify_doc(classify_flags.params), classify_flags.out, out);
      return 0;
    }
    if (cmd_solve->parsed()) {
      check_params(solve_flags.params);
      emit(solve_doc(solve_flags.params, solve_flags.tol), solve_flags.out,
           out);
      return 0;
    }
    if (cmd_profile->parsed()) {
      check_params(profile_flags.params);
      if (profile_flags.n < 2) throw std::domain_error("--n must be >= 2");
      if (!(profile_flags.rmax > 0.0))
        throw std::domain_error("--rmax must be > 0");
      emit(profile_doc(profile_flags.params, profile_flags.tol,
                       profile_flags.rmax, profile_flags.n),
           profile_flags.out, out);
      return 0;
    }
    if (cmd_oracle->parsed()) {
      const OracleSuiteReport report = run_oracle_suite(oracle_seed);
      emit(oracle_doc(report, oracle_seed), oracle_out, out);
      return report.pass ? 0 : 4;
    }
    if (cmd_lieb->parsed()) {
      if (lieb_config.mixtures < 0)
        throw std::domain_error("--mixtures must be >= 0");
      const LiebSuiteReport report = run_lieb_suite(lieb_config);
      emit(lieb_doc(report), lieb_out, out);
      return report.pass ? 0 : 4;
    }
  } catch (const numerical_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace tfloc
