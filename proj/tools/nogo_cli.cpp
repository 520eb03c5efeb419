// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: constructs the measurement, verifies the
// zero-probability predictions, evaluates the overlap bounds and emits
// machine-readable reports (JSON, 17 significant digits; CSV for region
// data). Identical inputs and seeds produce byte-identical output.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nogo/json_writer.hpp"
#include "nogo/model_io.hpp"
#include "nogo/nogo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailed = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NOGO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric NOGO_SEED\n";
    }
  }
  return 0;
}

struct Output {
  std::string text;
  int exit_code = kExitOk;
};

void write_output(const Output& out, const std::string& path) {
  if (path.empty()) {
    std::cout << out.text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write output file: " + path);
  file << out.text;
}

void emit_verify_result(nogo::JsonWriter& w, const nogo::NogoReport& report) {
  w.key("alpha").value(report.alpha);
  w.key("beta").value(report.beta);
  w.key("solver_residual").value(report.solver_residual);
  w.key("bracket_lo").value(report.bracket_lo);
  w.key("bracket_hi").value(report.bracket_hi);
  w.key("max_forbidden_prob").value(report.max_forbidden_prob);
  w.key("closed_form_max_abs_diff").value(report.closed_form_max_abs_diff);
  w.key("exhaustive").value(report.exhaustive);
  w.key("passed").value(report.passed);
  w.key("per_preparation").begin_array();
  for (const auto& rec : report.per_preparation) {
    w.begin_object();
    w.key("preparation").value(nogo::format_bits(rec.preparation, report.n));
    w.key("outcome").value(nogo::format_bits(rec.outcome, report.n));
    w.key("probability").value(rec.probability);
    w.end_object();
  }
  w.end_array();
}

}  // namespace

namespace {

int run_app(int argc, char** argv) {
  CLI::App app{
      "Measurement-circuit construction and verification for product "
      "preparations, with overlap bounds for discrete ontological models"};
  app.require_subcommand(1);
  app.fallthrough(false);

  double theta = 0.0;
  int n = -1;
  double tol = nogo::kVerifyTol;
  double solver_tol = nogo::kSolverTol;
  double epsilon = 0.0;
  int n_max = 4;
  int grid_size = 512;
  std::uint64_t seed = default_seed();
  std::string output_path;
  std::string model_path;
  std::string format = "csv";
  bool degrees = false;

  Output out;

  const auto theta_value = [&]() {
    return degrees ? theta * std::numbers::pi / 180.0 : theta;
  };
  const auto add_theta = [&](CLI::App* cmd) {
    cmd->add_option("--theta", theta, "preparation angle in radians")
        ->required();
    cmd->add_flag("--degrees", degrees, "interpret --theta in degrees");
  };
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output", output_path, "write the report to a file");
    cmd->add_option("--seed", seed, "seed for any randomized step");
  };

  // min-n ------------------------------------------------------------------
  CLI::App* cmd_min_n =
      app.add_subcommand("min-n", "smallest system count for theta");
  add_theta(cmd_min_n);
  add_common(cmd_min_n);
  cmd_min_n->callback([&] {
    const double th = theta_value();
    const long long result = nogo::min_n(th);
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("min-n");
    w.key("config").begin_object();
    w.key("theta").value(th);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("min_n").value(static_cast<std::int64_t>(result));
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
  });

  // params -----------------------------------------------------------------
  CLI::App* cmd_params =
      app.add_subcommand("params", "solve the circuit parameters (alpha, beta)");
  add_theta(cmd_params);
  add_common(cmd_params);
  cmd_params->add_option("--n", n, "system count (default: min-n)");
  cmd_params->add_option("--tol", solver_tol, "solver tolerance on ||f|-1|");
  cmd_params->callback([&] {
    const double th = theta_value();
    const int systems = n > 0 ? n : static_cast<int>(nogo::min_n(th));
    const nogo::CircuitParams p = nogo::solve_params(th, systems, solver_tol);
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("params");
    w.key("config").begin_object();
    w.key("theta").value(th);
    w.key("n").value(systems);
    w.key("solver_tol").value(solver_tol);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("alpha").value(p.alpha);
    w.key("beta").value(p.beta);
    w.key("residual").value(p.residual);
    w.key("bracket_lo").value(p.bracket_lo);
    w.key("bracket_hi").value(p.bracket_hi);
    w.key("forbidden_prob_closed_form")
        .value(std::norm(nogo::forbidden_amplitude(p)));
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
  });

  // verify -----------------------------------------------------------------
  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "check the forbidden outcome for every preparation");
  add_theta(cmd_verify);
  add_common(cmd_verify);
  cmd_verify->add_option("--n", n, "system count (default: min-n)");
  cmd_verify->add_option("--tol", tol, "verification tolerance on probabilities");
  cmd_verify->add_option("--solver-tol", solver_tol, "solver tolerance");
  cmd_verify->callback([&] {
    const double th = theta_value();
    const int systems = n > 0 ? n : static_cast<int>(nogo::min_n(th));
    nogo::VerifyOptions options;
    options.solver_tol = solver_tol;
    options.seed = seed;
    const nogo::NogoReport report =
        nogo::verify_nogo(th, systems, tol, options);
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("verify");
    w.key("config").begin_object();
    w.key("theta").value(th);
    w.key("n").value(systems);
    w.key("tol").value(tol);
    w.key("solver_tol").value(solver_tol);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    emit_verify_result(w, report);
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
    out.exit_code = report.passed ? kExitOk : kExitVerificationFailed;
  });

  // twobox -----------------------------------------------------------------
  CLI::App* cmd_twobox = app.add_subcommand(
      "twobox", "explicit two-system check in the |0>, |+> frame");
  add_common(cmd_twobox);
  cmd_twobox->callback([&] {
    const nogo::TwoboxReport report = nogo::twobox_check();
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("twobox");
    w.key("config").begin_object();
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("xi_forbidden_probs").begin_array();
    for (double p : report.xi_forbidden_probs) w.value(p);
    w.end_array();
    w.key("gram_max_abs_dev").value(report.gram_max_abs_dev);
    w.key("povm_agreement_max_abs_diff")
        .value(report.povm_agreement_max_abs_diff);
    w.key("passed").value(report.passed);
    w.key("circuit").begin_object();
    w.key("theta").value(report.circuit.theta);
    w.key("n").value(report.circuit.n);
    emit_verify_result(w, report.circuit);
    w.end_object();
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
    out.exit_code = report.passed ? kExitOk : kExitVerificationFailed;
  });

  // bound ------------------------------------------------------------------
  CLI::App* cmd_bound = app.add_subcommand(
      "bound", "noise-tolerant lower bound D >= 1 - 2 eps^{1/n}");
  add_common(cmd_bound);
  cmd_bound->add_option("--epsilon", epsilon, "measured deviation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cmd_bound->add_option("--n", n, "system count")->required();
  cmd_bound->callback([&] {
    if (n < 1) throw CLI::ValidationError("--n must be positive");
    const double d_lower = 1.0 - 2.0 * std::pow(epsilon, 1.0 / n);
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("bound");
    w.key("config").begin_object();
    w.key("epsilon").value(epsilon);
    w.key("n").value(n);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("d_lower").value(d_lower);
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
  });

  // model-check --------------------------------------------------------------
  CLI::App* cmd_model = app.add_subcommand(
      "model-check", "measure a model file against the quantum predictions");
  add_theta(cmd_model);
  add_common(cmd_model);
  cmd_model->add_option("--model", model_path, "model file (JSON)")
      ->required();
  cmd_model->add_option("--n", n, "system count (default: min-n)");
  cmd_model->add_option("--solver-tol", solver_tol, "solver tolerance");
  cmd_model->callback([&] {
    const double th = theta_value();
    const int systems = n > 0 ? n : static_cast<int>(nogo::min_n(th));
    const nogo::ModelFile file = nogo::load_model(model_path);
    const nogo::CircuitParams params =
        nogo::solve_params(th, systems, solver_tol);
    const bool synthesized = !file.response.has_value();
    if (file.response && file.response->systems() != systems)
      throw std::invalid_argument(
          "model response table is for n = " +
          std::to_string(file.response->systems()) +
          ", but the check runs at n = " + std::to_string(systems));
    const nogo::ResponseTable resp =
        synthesized ? nogo::best_effort_response(file.model, params)
                    : *file.response;
    const nogo::DeviationReport report =
        nogo::max_deviation(file.model, resp, params);
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("model-check");
    w.key("config").begin_object();
    w.key("model").value(model_path);
    w.key("theta").value(th);
    w.key("n").value(systems);
    w.key("solver_tol").value(solver_tol);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("alpha").value(params.alpha);
    w.key("beta").value(params.beta);
    w.key("lambda_count")
        .value(static_cast<std::uint64_t>(file.model.lambda_count()));
    w.key("response_synthesized").value(synthesized);
    w.key("epsilon").value(report.epsilon);
    w.key("tv_distance").value(report.tv);
    w.key("overlap").value(report.omega);
    w.key("overlap_region_mass").value(report.q);
    w.key("bound_rhs").value(report.bound_rhs);
    w.key("bound_holds").value(report.bound_holds);
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
    out.exit_code =
        report.bound_holds ? kExitOk : kExitVerificationFailed;
  });

  // regions ------------------------------------------------------------------
  CLI::App* cmd_regions = app.add_subcommand(
      "regions", "overlap upper bound vs trace distance, per system count");
  add_common(cmd_regions);
  cmd_regions->add_option("--n-max", n_max, "largest system count")
      ->check(CLI::PositiveNumber);
  cmd_regions->add_option("--grid", grid_size, "number of delta grid points")
      ->check(CLI::Range(2, 1 << 20));
  cmd_regions->add_option("--format", format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_regions->callback([&] {
    const auto points = nogo::region_data(n_max, grid_size);
    if (format == "csv") {
      std::ostringstream csv;
      nogo::write_region_csv(csv, points);
      out.text = csv.str();
      return;
    }
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("regions");
    w.key("config").begin_object();
    w.key("n_max").value(n_max);
    w.key("grid_size").value(grid_size);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("points").begin_array();
    for (const auto& p : points) {
      w.begin_object();
      w.key("delta").value(p.delta);
      w.key("n").value(p.n);
      w.key("omega_upper").value(p.omega_upper);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
  });

  // sigma ------------------------------------------------------------------
  CLI::App* cmd_sigma = app.add_subcommand(
      "sigma", "minimum discrimination objective over the circuit family");
  add_theta(cmd_sigma);
  add_common(cmd_sigma);
  cmd_sigma->add_option("--n", n, "system count")->required();
  cmd_sigma->add_option("--solver-tol", solver_tol, "solver tolerance");
  cmd_sigma->callback([&] {
    const double th = theta_value();
    if (n < 1) throw CLI::ValidationError("--n must be positive");
    const bool feasible = nogo::nogo_feasible(th, n);
    const double sigma = nogo::sigma_min(th, n, solver_tol);
    double alpha = std::numbers::pi;
    double beta = 0.0;
    if (feasible) {
      const nogo::CircuitParams p = nogo::solve_params(th, n, solver_tol);
      alpha = p.alpha;
      beta = p.beta;
    }
    nogo::JsonWriter w;
    w.begin_object();
    w.key("command").value("sigma");
    w.key("config").begin_object();
    w.key("theta").value(th);
    w.key("n").value(n);
    w.key("solver_tol").value(solver_tol);
    w.key("seed").value(seed);
    w.end_object();
    w.key("result").begin_object();
    w.key("feasible").value(feasible);
    w.key("sigma_min").value(sigma);
    w.key("alpha").value(alpha);
    w.key("beta").value(beta);
    w.key("omega_upper").value(nogo::omega_upper_bound(th, n));
    w.end_object();
    w.end_object();
    out.text = w.str() + "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    write_output(out, output_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return kExitUsage;
  }
}
