// Regenerates the frozen constants under fixtures/.
//   heis_calibrate [out_dir] [threads]
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "heis/fixtures.hpp"
#include "heis/ingham.hpp"
#include "heis/laguerre.hpp"
#include "heis/text.hpp"

using namespace heis;
using nlohmann::ordered_json;

namespace {

void write(const std::string& dir, const std::string& name, const ordered_json& j) {
  write_file_atomic(dir + "/" + name, j.dump(2) + "\n");
  std::printf("wrote %s/%s\n", dir.c_str(), name.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : default_fixtures_dir();
  const int threads = argc > 2 ? std::atoi(argv[2]) : 0;

  // Envelope constants: calibrated on 4x the radii of the acceptance grid.
  EnvelopeGrid dense;
  dense.radii = 1600;
  const auto env = calibrate_envelope(dense);
  ordered_json env_fit;
  env_fit["C_fit"] = env.constants.C_fit;
  env_fit["gamma_fit"] = env.constants.gamma_fit;
  env_fit["grid_hash"] = env.grid_hash;
  env_fit["grid"] = dense.describe();
  env_fit["max_ratio_inner"] = env.max_ratio_inner;
  env_fit["gamma_limit"] = env.gamma_limit;
  env_fit["safety"] = 1.1;
  write(dir, "laguerre_envelope_constants.json", env_fit);

  // c_n on mu = lambda rho^2 in [1e-9, 1e3], k <= 200.
  ordered_json box_fit;
  box_fit["c_n"] = ordered_json::object();
  box_fit["detail"] = ordered_json::object();
  const CnGrid grid;
  CnGrid fine = grid;
  fine.mu_points *= 2;
  double c1 = 0.0;
  for (int n : {1, 2}) {
    const auto c = calibrate_cn(n, grid, 1.1, threads);
    const auto r = calibrate_cn(n, fine, 1.1, threads);
    const double drift = std::abs(r.c_n / c.c_n - 1.0);
    if (drift > 0.05) {
      std::fprintf(stderr, "c_%d is not stable under refinement (%.3g)\n", n, drift);
      return 1;
    }
    if (n == 1) c1 = c.c_n;
    box_fit["c_n"][std::to_string(n)] = c.c_n;
    box_fit["detail"][std::to_string(n)] = {{"sup_ratio", c.sup_ratio},
                                        {"argmax_k", c.argmax_k},
                                        {"argmax_mu", c.argmax_mu},
                                        {"refined_c_n", r.c_n}};
  }
  box_fit["grid"] = {{"k_max", grid.k_max}, {"mu_min", grid.mu_min}, {"mu_max", grid.mu_max}, {"mu_points", grid.mu_points}};
  box_fit["safety"] = 1.1;
  write(dir, "box_decay_constants.json", box_fit);

  // Cauchy gaps of the inv-sqrt chain on H^1 with c3 = 1.
  const auto plan = plan_sequences(ThetaProfile::builtin("inv-sqrt"), 1, 20, c1);
  const auto qgrid = QuadratureGrid::log_gauss(1e-4, 1e3, 24, 16, 64);
  const auto gaps = cauchy_gaps(plan, 12, qgrid, 1.0, threads);
  double worst = 0.0;
  for (const auto& g : gaps) worst = std::max(worst, g.measured / g.bound);
  ordered_json cg;
  cg["C"] = 1.1 * worst;
  cg["c3"] = 1.0;
  cg["max_ratio"] = worst;
  cg["theta"] = "inv-sqrt";
  cg["n"] = 1;
  cg["k_last"] = 12;
  cg["grid"] = "log_gauss(1e-4, 1e3, 24 panels x 16, k_max 64)";
  write(dir, "cauchy_constants.json", cg);
  return 0;
}
