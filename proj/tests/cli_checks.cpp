// SPDX-License-Identifier: Apache-2.0
//
// Behavioural checks for the CLI binary: exit codes, report fields, CSV
// schema and byte-determinism. Takes the binary path as argv[1].

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int g_failures = 0;

#define CHECK(cond)                                                      \
  do {                                                                   \
    if (!(cond)) {                                                       \
      ++g_failures;                                                      \
      std::cerr << "FAIL " << __FILE__ << ":" << __LINE__ << ": " #cond  \
                << "\n";                                                 \
    }                                                                    \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Extract the number following "key": in a JSON report.
double json_number(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return std::nan("");
  return std::strtod(text.c_str() + pos + needle.size(), nullptr);
}

bool json_bool(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return false;
  return text.compare(pos + needle.size(), 4, "true") == 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_checks <path-to-nogo-binary>\n";
    return 2;
  }
  const std::string cli = argv[1];

  // verify: the worked two-system case passes with exit 0.
  {
    const RunResult r = run(cli + " verify --theta 0.7853981634 --n 2");
    CHECK(r.exit_code == 0);
    CHECK(json_bool(r.output, "passed"));
    CHECK(json_number(r.output, "max_forbidden_prob") <= 1e-12);
    CHECK(json_number(r.output, "theta") > 0.78);
    CHECK(r.output.find("\"seed\":") != std::string::npos);
  }

  // verify: --tol 0 cannot be met, exit code 2 signals the failure.
  {
    const RunResult r = run(cli + " verify --theta 0.9 --n 2 --tol 0");
    CHECK(r.exit_code == 2);
    CHECK(!json_bool(r.output, "passed"));
  }

  // verify: infeasible n is an input error (exit 1).
  {
    const RunResult r = run(cli + " verify --theta 0.7853981634 --n 1");
    CHECK(r.exit_code == 1);
  }

  // verify: invalid theta is an input error.
  {
    const RunResult r = run(cli + " verify --theta -0.5 --n 2");
    CHECK(r.exit_code == 1);
  }

  // Unknown subcommand.
  CHECK(run(cli + " frobnicate").exit_code == 1);

  // Byte-determinism for identical config + seed.
  {
    const std::string cmd = cli + " verify --theta 0.6 --n 3 --seed 17";
    const RunResult a = run(cmd);
    const RunResult b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(!a.output.empty());
    CHECK(a.output == b.output);
  }

  // min-n, with and without --degrees.
  {
    const RunResult r = run(cli + " min-n --theta 0.3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"command\":\"min-n\"") != std::string::npos);
    CHECK(json_number(r.output, "min_n") == 5.0);
    const RunResult deg = run(cli + " min-n --theta 45 --degrees");
    CHECK(json_number(deg.output, "min_n") == 2.0);
  }

  // params reports the solved angles and residual.
  {
    const RunResult r = run(cli + " params --theta 1.0471975512 --n 2");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(json_number(r.output, "beta") - 2.1862760) < 1e-6);
    CHECK(std::abs(json_number(r.output, "alpha") - (-0.6796738)) < 1e-6);
    CHECK(json_number(r.output, "residual") <= 1e-12);
  }

  // twobox passes.
  {
    const RunResult r = run(cli + " twobox");
    CHECK(r.exit_code == 0);
    CHECK(json_bool(r.output, "passed"));
    CHECK(json_number(r.output, "gram_max_abs_dev") <= 1e-12);
  }

  // bound evaluates 1 - 2 eps^{1/n}.
  {
    const RunResult r = run(cli + " bound --epsilon 0.001 --n 3");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(json_number(r.output, "d_lower") - 0.8) < 1e-12);
    const RunResult zero = run(cli + " bound --epsilon 0 --n 5");
    CHECK(json_number(zero.output, "d_lower") == 1.0);
  }

  // sigma at an infeasible point reports the Helstrom value.
  {
    const RunResult r = run(cli + " sigma --theta 1.0471975512 --n 1");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(json_number(r.output, "sigma_min") - 0.1339746) < 1e-6);
    CHECK(!json_bool(r.output, "feasible"));
  }

  // regions: CSV schema and a JSON variant.
  {
    const RunResult r = run(cli + " regions --n-max 2 --grid 8");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.output);
    std::string line;
    CHECK(std::getline(in, line) && line == "delta,n,omega_upper");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 16);
    const RunResult j =
        run(cli + " regions --n-max 2 --grid 8 --format json");
    CHECK(j.exit_code == 0);
    CHECK(j.output.find("\"points\":[") != std::string::npos);
  }

  // model-check: response synthesized for a bare model, bound holds.
  {
    const auto model_path =
        std::filesystem::temp_directory_path() / "nogo_cli_model.json";
    {
      std::ofstream out(model_path);
      out << R"({"lambda_count": 2, "mu0": [1.0, 0.0], "mu1": [0.0, 1.0]})";
    }
    const RunResult r = run(cli + " model-check --model " +
                            model_path.string() +
                            " --theta 0.7853981634 --n 2");
    CHECK(r.exit_code == 0);
    CHECK(json_bool(r.output, "bound_holds"));
    CHECK(json_bool(r.output, "response_synthesized"));
    CHECK(std::abs(json_number(r.output, "tv_distance") - 1.0) < 1e-12);
    std::filesystem::remove(model_path);
  }

  // model-check: unreadable file is an input error with a message.
  {
    const RunResult r =
        run(cli + " model-check --model /nonexistent.json --theta 0.9");
    CHECK(r.exit_code == 1);
  }

  // NOGO_SEED provides the default seed; --seed overrides it.
  {
    const RunResult env = run("NOGO_SEED=7 " + cli + " min-n --theta 0.3");
    CHECK(json_number(env.output, "seed") == 7.0);
    const RunResult flag =
        run("NOGO_SEED=7 " + cli + " min-n --theta 0.3 --seed 9");
    CHECK(json_number(flag.output, "seed") == 9.0);
  }

  // --output writes the report to a file.
  {
    const auto out_path =
        std::filesystem::temp_directory_path() / "nogo_cli_out.json";
    const RunResult r = run(cli + " min-n --theta 0.3 --output " +
                            out_path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
    std::ifstream in(out_path);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(json_number(body.str(), "min_n") == 5.0);
    std::filesystem::remove(out_path);
  }

  if (g_failures == 0) {
    std::cout << "cli_checks: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_checks: " << g_failures << " checks failed\n";
  return 1;
}
