#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "heis/checks.hpp"
#include "heis/error.hpp"
#include "heis/fixtures.hpp"
#include "heis/parallel.hpp"
#include "heis/text.hpp"

using namespace heis;

namespace {

struct Subcommand {
  const char* name;
  const char* help;
  CheckResult (*run)(const CheckConfig&);
};

constexpr Subcommand kSubcommands[] = {
    {"laguerre-check", "Laguerre orthonormality and the frozen envelope on the validation grid", run_laguerre_check},
    {"plancherel-check", "Spectral against spatial L2 norms for a Gaussian and a box factor on H^1", run_plancherel_check},
    {"convolve-check", "Brute-force F_1 * F_2 on H^1 against the coefficient product", run_convolve_check},
    {"dilate-check", "Dilation covariance of coefficients and commutation with the sublaplacian", run_dilate_check},
    {"ingham-plan", "Sequences rho_j, tau_j, the factor envelope with frozen c_n, and Cauchy gaps", run_ingham_plan},
    {"ingham-verify", "Decay certification of the compactly supported chain", run_ingham_verify},
    {"carleman", "Sublaplacian norm growth and Carleman sums for a compact spectrum", run_carleman},
    {"gamma-bound-check", "Moment integrals against the gamma-function bound", run_gamma_bound_check},
    {"symmdiff-check", "Shifted-ball symmetric differences against the surface bound", run_symmdiff_check},
};

// Values from a JSON config, applied where the flag was not given.
void apply_config(const std::string& path, CheckConfig& cfg, const CLI::App& app, std::string& out) {
  const auto j = nlohmann::json::parse(read_text_file(path));
  const auto unset = [&](const char* flag) { return app.get_option(flag)->count() == 0; };
  if (j.contains("theta") && unset("--theta")) cfg.theta = j["theta"].get<std::string>();
  if (j.contains("n") && unset("--n")) cfg.n = j["n"].get<int>();
  if (j.contains("k_max") && unset("--kmax")) cfg.k_max = j["k_max"].get<int>();
  if (j.contains("lambda_min") && unset("--lambda-min")) cfg.lambda_min = j["lambda_min"].get<double>();
  if (j.contains("lambda_max") && unset("--lambda-max")) cfg.lambda_max = j["lambda_max"].get<double>();
  if (j.contains("lambda_nodes") && unset("--lambda-nodes")) cfg.lambda_nodes = j["lambda_nodes"].get<int>();
  if (j.contains("max_power") && unset("--max-power")) cfg.max_power = j["max_power"].get<int>();
  if (j.contains("threads") && unset("--threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("fixtures") && unset("--fixtures")) cfg.fixtures_dir = j["fixtures"].get<std::string>();
  if (j.contains("out_path") && unset("--out")) out = j["out_path"].get<std::string>();
}

int env_threads() {
  if (const char* v = std::getenv("HEIS_THREADS"); v && *v) {
    try {
      const int t = std::stoi(v);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
    throw DomainError(std::string("HEIS_THREADS must be a positive integer, got '") + v + "'");
  }
  return default_threads();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral checks on the Heisenberg group"};
  app.require_subcommand(1);
  CheckConfig cfg;
  std::string theta, fixtures_dir, config_path, out = "report.json";
  int n = 0, k_max = 0, lambda_nodes = 0, max_power = 0, threads = 0;
  double lambda_min = 0.0, lambda_max = 0.0;
  app.add_option("--theta", theta, "Decay profile: builtin name or JSON file");
  app.add_option("--n", n, "Dimension n of H^n")->check(CLI::PositiveNumber);
  app.add_option("--kmax", k_max, "Largest Laguerre index")->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-min", lambda_min, "Smallest lambda")->check(CLI::PositiveNumber);
  app.add_option("--lambda-max", lambda_max, "Largest lambda")->check(CLI::PositiveNumber);
  app.add_option("--lambda-nodes", lambda_nodes, "Number of lambda nodes")->check(CLI::PositiveNumber);
  app.add_option("--max-power", max_power, "Largest sublaplacian power")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Report path (.json; carleman also writes .csv)");
  app.add_option("--threads", threads, "Worker threads (default: $HEIS_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--fixtures", fixtures_dir, "Directory with the frozen constants");
  app.add_option("--config", config_path, "JSON config; flags take precedence")->check(CLI::ExistingFile);

  const Subcommand* chosen = nullptr;
  for (const auto& s : kSubcommands) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->callback([&chosen, &s] { chosen = &s; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (app.get_option("--theta")->count()) cfg.theta = theta;
    if (app.get_option("--n")->count()) cfg.n = n;
    if (app.get_option("--kmax")->count()) cfg.k_max = k_max;
    if (app.get_option("--lambda-min")->count()) cfg.lambda_min = lambda_min;
    if (app.get_option("--lambda-max")->count()) cfg.lambda_max = lambda_max;
    if (app.get_option("--lambda-nodes")->count()) cfg.lambda_nodes = lambda_nodes;
    if (app.get_option("--max-power")->count()) cfg.max_power = max_power;
    cfg.fixtures_dir = fixtures_dir;
    cfg.threads = 0;
    if (app.get_option("--threads")->count()) cfg.threads = threads;
    if (!config_path.empty()) apply_config(config_path, cfg, app, out);
    if (cfg.threads <= 0) cfg.threads = env_threads();
    if (cfg.lambda_min && cfg.lambda_max && !(*cfg.lambda_min < *cfg.lambda_max)) {
      throw DomainError("--lambda-min must be below --lambda-max");
    }

    const auto result = chosen->run(cfg);
    write_file_atomic(out, result.json);
    if (!result.csv.empty()) {
      std::string csv_path = out;
      const auto dot = csv_path.rfind('.');
      csv_path = (dot == std::string::npos ? csv_path : csv_path.substr(0, dot)) + ".csv";
      write_file_atomic(csv_path, result.csv);
    }
    std::cout << chosen->name << ": " << (result.pass ? "pass" : "FAIL") << " (" << out << ")\n";
    return result.pass ? 0 : 1;
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IncompatibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // numerical failures: the check could not be certified
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
}
