#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

enum class Command { Se, Bo, Sim, Sweep, Rates, Cstar, Plot };

const char* command_name(Command c);

// Everything a run needs; filled from preset + config file + flags (later
// sources win). Grids left empty collapse to the scalar value.
struct RunSpec {
  Command cmd = Command::Se;

  std::string model = "csbm";
  double alpha = 4.0, lambda = 1.0, mu = 0.0, rho = 0.1, rho_test = -1.0,
         d = 30.0;
  std::vector<std::string> losses = {"quadratic"};
  double r = 1.0, c = 0.0;
  bool use_c_star = false;

  std::vector<double> alpha_grid, lambda_grid, mu_grid, rho_grid, c_grid,
      r_grid, d_grid;

  long mc = 1000000;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int max_iter = 200;
  double damping = 0.0;
  int solver_threads = 1;

  int n = 10000;
  int reps = 1;
  std::string adjacency = "bernoulli";
  std::string import_dataset, export_dataset, features, labels;
  double epsilon = 0.0;

  std::string over = "se", axis;
  std::vector<double> axis_grid;

  std::string cstar_mode = "finite";

  std::string out;
  std::string format = "csv";
  int workers = 0; // 0 = hardware concurrency

  std::vector<std::string> theory_files, sim_files, bo_files;
  std::string x_col = "c", y_col = "acc_test";
  std::vector<std::string> series_cols;
  std::string title, x_label, y_label;
  bool log_x = false, log_y = false;

  void validate() const; // throws std::runtime_error on bad combinations
};

// Executes the run, writes artifacts, prints a one-line summary. Returns the
// process exit status (0 ok, 2 if any grid point failed; partial results are
// still written with a status column).
int run(const RunSpec& spec);

// Named parameter sets for the bundled experiment layouts. Returned as
// key/value pairs in long-option syntax; unknown keys are skipped for
// commands that lack them.
std::vector<std::pair<std::string, std::string>> preset_values(
    const std::string& name);
std::vector<std::string> preset_names();

} // namespace cli
