#include <CLI11.hpp>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "gcnse/gcnse.h"
#include "gridspec.hpp"
#include "runner.hpp"

namespace {

struct Options {
  cli::RunSpec spec;
  std::string preset, config_path;
  std::string loss_list, series_list;
  std::string c_grid, r_grid, lambda_grid, mu_grid, rho_grid, alpha_grid,
      d_grid, axis_grid;
};

void split_list(const std::string& s, std::vector<std::string>& out) {
  out.clear();
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      std::string tok = s.substr(start, i - start);
      if (!tok.empty()) out.push_back(tok);
      start = i + 1;
    }
  }
}

// All options take the last occurrence, so precedence is
// defaults < preset < config file < command line.
CLI::Option* last(CLI::Option* opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_model_options(CLI::App* cmd, Options& o) {
  last(cmd->add_option("--model", o.spec.model, "data model: csbm | glm-sbm"));
  last(cmd->add_option("--alpha", o.spec.alpha, "aspect ratio N/M"));
  last(cmd->add_option("--lambda", o.spec.lambda, "graph snr"));
  last(cmd->add_option("--mu", o.spec.mu, "feature snr (csbm)"));
  last(cmd->add_option("--rho", o.spec.rho, "train fraction"));
  last(cmd->add_option("--rho-test", o.spec.rho_test,
                       "test fraction (default: complement)"));
  last(cmd->add_option("--alpha-grid", o.alpha_grid, "grid over alpha"));
  last(cmd->add_option("--lambda-grid", o.lambda_grid, "grid over lambda"));
  last(cmd->add_option("--mu-grid", o.mu_grid, "grid over mu"));
  last(cmd->add_option("--rho-grid", o.rho_grid, "grid over rho"));
}

void add_learner_options(CLI::App* cmd, Options& o) {
  last(cmd->add_option("--loss", o.loss_list,
                       "loss(es): quadratic,logistic,hinge"));
  last(cmd->add_option("--r", o.spec.r, "regularization strength"));
  last(cmd->add_option("--c", o.spec.c, "self-loop strength"));
  last(cmd->add_option("--c-grid", o.c_grid, "grid over c, e.g. 0:2:0.1"));
  last(cmd->add_option("--r-grid", o.r_grid, "grid over r, e.g. 0.1,10,1000"));
  last(cmd->add_flag("--c-star", o.spec.use_c_star,
                     "use the optimal self-loop strength per grid point"));
}

void add_solver_options(CLI::App* cmd, Options& o) {
  last(cmd->add_option("--mc", o.spec.mc, "Monte-Carlo sample count"));
  last(cmd->add_option("--seed", o.spec.seed, "random seed"));
  last(cmd->add_option("--tol", o.spec.tol, "fixed-point tolerance"));
  last(cmd->add_option("--max-iter", o.spec.max_iter, "iteration cap"));
  last(cmd->add_option("--damping", o.spec.damping, "update damping in [0,1)"));
  last(cmd->add_option("--solver-threads", o.spec.solver_threads,
                       "workers inside one solve"));
}

void add_sim_options(CLI::App* cmd, Options& o) {
  last(cmd->add_option("--n", o.spec.n, "number of nodes"));
  last(cmd->add_option("--d", o.spec.d, "average degree"));
  last(cmd->add_option("--d-grid", o.d_grid, "grid over d"));
  last(cmd->add_option("--reps", o.spec.reps, "repetitions (seeds)"));
  last(cmd->add_option("--adjacency", o.spec.adjacency,
                       "bernoulli | gaussian"));
  last(cmd->add_option("--features", o.spec.features,
                       "feature CSV (one node per row)"));
  last(cmd->add_option("--labels", o.spec.labels, "label CSV (+-1 per row)"));
  last(cmd->add_option("--epsilon", o.spec.epsilon,
                       "ingestion noise scale"));
  last(cmd->add_option("--import-dataset", o.spec.import_dataset,
                       "replay a saved dataset bundle"));
  last(cmd->add_option("--export-dataset", o.spec.export_dataset,
                       "save the generated dataset bundle"));
}

void add_output_options(CLI::App* cmd, Options& o) {
  last(cmd->add_option("--out", o.spec.out,
                       "output path (default $GCNSE_OUT_DIR/<command>.<ext>)"));
  last(cmd->add_option("--format", o.spec.format, "csv | json"));
  last(cmd->add_option("--workers", o.spec.workers,
                       "worker pool size (0 = cores)"));
  last(cmd->add_option("--preset", o.preset, "named parameter set"));
  last(cmd->add_option("--config", o.config_path, "configuration file"));
}

void finalize(Options& o) {
  if (!o.loss_list.empty()) split_list(o.loss_list, o.spec.losses);
  if (!o.series_list.empty()) split_list(o.series_list, o.spec.series_cols);
  auto grid = [](const std::string& s, std::vector<double>& out) {
    if (!s.empty()) out = cli::parse_grid(s);
  };
  grid(o.c_grid, o.spec.c_grid);
  grid(o.r_grid, o.spec.r_grid);
  grid(o.lambda_grid, o.spec.lambda_grid);
  grid(o.mu_grid, o.spec.mu_grid);
  grid(o.rho_grid, o.spec.rho_grid);
  grid(o.alpha_grid, o.spec.alpha_grid);
  grid(o.d_grid, o.spec.d_grid);
  grid(o.axis_grid, o.spec.axis_grid);
}

std::vector<std::string> option_names(const CLI::App* cmd) {
  std::vector<std::string> names;
  for (const CLI::Option* opt : cmd->get_options())
    for (const auto& lname : opt->get_lnames()) names.push_back(lname);
  return names;
}

// Tokens injected before the user's own flags; unknown keys raise an error
// that points at the config line and suggests the nearest option name.
std::vector<std::string> config_tokens(const cli::Config& cfg,
                                       const CLI::App& app,
                                       const std::string& active,
                                       const std::string& path) {
  std::vector<std::string> tokens;
  for (const auto& [section, entries] : cfg.sections) {
    const CLI::App* cmd = nullptr;
    for (const CLI::App* sub : app.get_subcommands(nullptr))
      if (sub->get_name() == section) cmd = sub;
    if (!cmd) {
      std::vector<std::string> names;
      for (const CLI::App* sub : app.get_subcommands(nullptr))
        names.push_back(sub->get_name());
      std::string hint = cli::suggest(section, names);
      throw std::runtime_error(path + ": unknown section [" + section + "]" +
                               (hint.empty() ? "" : "; did you mean [" + hint + "]?"));
    }
    auto names = option_names(cmd);
    for (const auto& e : entries) {
      if (std::find(names.begin(), names.end(), e.key) == names.end()) {
        std::string hint = cli::suggest(e.key, names);
        throw std::runtime_error(
            path + ":" + std::to_string(e.line) + ": unknown key `" + e.key +
            "` in [" + section + "]" +
            (hint.empty() ? "" : "; did you mean `" + hint + "`?"));
      }
      if (section == active) tokens.push_back("--" + e.key + "=" + e.value);
    }
  }
  return tokens;
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{
      "gcnse: exact asymptotics of a single-layer graph convolutional "
      "network on attributed block models, with a finite-size simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gcnse_version()));

  CLI::App* se = app.add_subcommand(
      "se", "solve the self-consistent equations and predict metrics");
  add_model_options(se, o);
  add_learner_options(se, o);
  add_solver_options(se, o);
  add_output_options(se, o);

  CLI::App* bo = app.add_subcommand("bo", "Bayes-optimal test accuracy");
  add_model_options(bo, o);
  last(bo->add_option("--tol", o.spec.tol, "fixed-point tolerance"));
  last(bo->add_option("--max-iter", o.spec.max_iter, "iteration cap"));
  add_output_options(bo, o);

  CLI::App* sim = app.add_subcommand(
      "sim", "generate finite instances, train the GCN, measure metrics");
  add_model_options(sim, o);
  add_learner_options(sim, o);
  add_sim_options(sim, o);
  last(sim->add_option("--seed", o.spec.seed, "base seed (seed+rep per rep)"));
  add_output_options(sim, o);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep a named parameter over se, bo or sim");
  add_model_options(sweep, o);
  add_learner_options(sweep, o);
  add_solver_options(sweep, o);
  add_sim_options(sweep, o);
  last(sweep->add_option("--over", o.spec.over, "se | bo | sim"));
  last(sweep->add_option("--axis", o.spec.axis, "parameter name to sweep"));
  last(sweep->add_option("--grid", o.axis_grid, "grid for the swept axis"));
  add_output_options(sweep, o);

  CLI::App* rates = app.add_subcommand(
      "rates", "asymptotic learning rates (GCN and Bayes-optimal)");
  last(rates->add_option("--model", o.spec.model, "csbm | glm-sbm"));
  last(rates->add_option("--alpha", o.spec.alpha, "aspect ratio"));
  last(rates->add_option("--mu", o.spec.mu, "feature snr (csbm)"));
  last(rates->add_option("--alpha-grid", o.alpha_grid, "grid over alpha"));
  last(rates->add_option("--mu-grid", o.mu_grid, "grid over mu"));
  add_output_options(rates, o);

  CLI::App* cstar = app.add_subcommand(
      "cstar", "optimal self-loop strength");
  add_model_options(cstar, o);
  last(cstar->add_option("--mode", o.spec.cstar_mode,
                         "small | large | finite"));
  add_output_options(cstar, o);

  CLI::App* plot = app.add_subcommand(
      "plot", "render CSV results as a static SVG figure");
  last(plot->add_option("--theory", o.spec.theory_files,
                        "CSV with theory curves (repeatable)")
           ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll));
  last(plot->add_option("--sim", o.spec.sim_files,
                        "CSV with simulation summaries (repeatable)")
           ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll));
  last(plot->add_option("--bo", o.spec.bo_files,
                        "CSV with Bayes-optimal baselines (repeatable)")
           ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll));
  last(plot->add_option("--x", o.spec.x_col, "x column (or lambda_sq)"));
  last(plot->add_option("--y", o.spec.y_col, "y column (or misclass)"));
  last(plot->add_option("--series", o.series_list,
                        "columns that split series, e.g. loss,r"));
  last(plot->add_option("--title", o.spec.title, "figure title"));
  last(plot->add_option("--x-label", o.spec.x_label, "x axis label"));
  last(plot->add_option("--y-label", o.spec.y_label, "y axis label"));
  last(plot->add_flag("--logx", o.spec.log_x, "logarithmic x axis"));
  last(plot->add_flag("--logy", o.spec.log_y, "logarithmic y axis"));
  add_output_options(plot, o);

  const std::map<std::string, cli::Command> commands = {
      {"se", cli::Command::Se},     {"bo", cli::Command::Bo},
      {"sim", cli::Command::Sim},   {"sweep", cli::Command::Sweep},
      {"rates", cli::Command::Rates}, {"cstar", cli::Command::Cstar},
      {"plot", cli::Command::Plot}};

  // pre-scan for the subcommand, --preset and --config so their values can be
  // injected ahead of the explicit flags
  std::string sub_name, preset_name, config_path;
  std::vector<std::string> user_tokens;
  for (int i = 1; i < argc; ++i) {
    std::string tok = argv[i];
    if (sub_name.empty() && commands.count(tok)) {
      sub_name = tok;
      continue;
    }
    auto grab = [&](const char* name, std::string& dest) {
      std::string prefix = std::string(name) + "=";
      if (tok == name && i + 1 < argc) {
        dest = argv[++i];
        return true;
      }
      if (tok.rfind(prefix, 0) == 0) {
        dest = tok.substr(prefix.size());
        return true;
      }
      return false;
    };
    if (grab("--preset", preset_name) || grab("--config", config_path))
      continue;
    user_tokens.push_back(tok);
  }

  try {
    std::vector<std::string> full = {argv[0]};
    if (!sub_name.empty()) {
      full.push_back(sub_name);
      CLI::App* sub = app.get_subcommand(sub_name);
      auto names = option_names(sub);
      if (!preset_name.empty()) {
        full.push_back("--preset=" + preset_name);
        for (const auto& [key, value] : cli::preset_values(preset_name)) {
          if (std::find(names.begin(), names.end(), key) == names.end())
            continue; // preset key not applicable to this command
          full.push_back("--" + key + "=" + value);
        }
      }
      if (!config_path.empty()) {
        full.push_back("--config=" + config_path);
        cli::Config cfg = cli::parse_config(config_path);
        for (auto& tok : config_tokens(cfg, app, sub_name, config_path))
          full.push_back(tok);
      }
    }
    for (auto& tok : user_tokens) full.push_back(tok);

    std::vector<char*> cargv;
    for (auto& s : full) cargv.push_back(s.data());
    app.parse(static_cast<int>(cargv.size()), cargv.data());

    o.spec.cmd = commands.at(sub_name);
    finalize(o);
    return cli::run(o.spec);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
