#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "csvio.hpp"
#include "gcnse/gcnse.h"
#include "svg.hpp"

namespace cli {

namespace {

const char* kColumns[] = {
    "command", "kind", "model", "loss", "alpha", "lambda", "mu", "rho",
    "rho_test", "d", "r", "c", "n", "rep", "seed", "mc", "acc_test",
    "acc_train", "e_test", "e_train", "acc_test_se", "acc_train_se",
    "e_test_se", "e_train_se", "value", "converged", "iterations", "residual",
    "qhat_floored", "status", "error"};
constexpr int kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

struct Row {
  std::map<std::string, std::string> cells;
  void set(const std::string& key, const std::string& v) { cells[key] = v; }
  void set(const std::string& key, double v) { cells[key] = format_double(v); }
  void set(const std::string& key, long v) { cells[key] = std::to_string(v); }
};

std::vector<std::string> flatten(const Row& row) {
  std::vector<std::string> out;
  out.reserve(kNumColumns);
  for (const char* col : kColumns) {
    auto it = row.cells.find(col);
    out.push_back(it == row.cells.end() ? "" : it->second);
  }
  return out;
}

int model_code(const std::string& name) {
  if (name == "csbm") return GCNSE_MODEL_CSBM;
  if (name == "glm-sbm" || name == "glmsbm") return GCNSE_MODEL_GLM_SBM;
  throw std::runtime_error("unknown model '" + name +
                           "' (expected csbm or glm-sbm)");
}

int loss_code(const std::string& name) {
  if (name == "quadratic") return GCNSE_LOSS_QUADRATIC;
  if (name == "logistic") return GCNSE_LOSS_LOGISTIC;
  if (name == "hinge") return GCNSE_LOSS_HINGE;
  throw std::runtime_error("unknown loss '" + name +
                           "' (expected quadratic, logistic or hinge)");
}

int adjacency_code(const std::string& name) {
  if (name == "bernoulli") return GCNSE_ADJ_BERNOULLI;
  if (name == "gaussian" || name == "gaussian-equivalent")
    return GCNSE_ADJ_GAUSSIAN;
  throw std::runtime_error("unknown adjacency mode '" + name + "'");
}

struct GridPoint {
  std::string loss;
  double alpha, lambda, mu, rho, d, c, r;
};

std::vector<double> grid_or(const std::vector<double>& grid, double scalar) {
  return grid.empty() ? std::vector<double>{scalar} : grid;
}

std::vector<GridPoint> expand(const RunSpec& spec, bool with_learner) {
  std::vector<GridPoint> points;
  const bool glm = model_code(spec.model) == GCNSE_MODEL_GLM_SBM;
  auto losses = with_learner ? spec.losses : std::vector<std::string>{""};
  auto cs = with_learner ? grid_or(spec.c_grid, spec.c) : std::vector<double>{0.0};
  auto rs = with_learner ? grid_or(spec.r_grid, spec.r) : std::vector<double>{0.0};
  auto mus = glm ? std::vector<double>{0.0} : grid_or(spec.mu_grid, spec.mu);
  for (const auto& loss : losses)
    for (double alpha : grid_or(spec.alpha_grid, spec.alpha))
      for (double lambda : grid_or(spec.lambda_grid, spec.lambda))
        for (double mu : mus)
          for (double rho : grid_or(spec.rho_grid, spec.rho))
            for (double d : grid_or(spec.d_grid, spec.d))
              for (double c : cs)
                for (double r : rs)
                  points.push_back({loss, alpha, lambda, mu, rho, d, c, r});
  return points;
}

gcnse_data_params to_dp(const RunSpec& spec, const GridPoint& p) {
  gcnse_data_params dp;
  gcnse_data_params_init(&dp);
  dp.model = model_code(spec.model);
  dp.alpha = p.alpha;
  dp.lambda = p.lambda;
  dp.mu = dp.model == GCNSE_MODEL_GLM_SBM ? 0.0 : p.mu;
  dp.rho = p.rho;
  dp.rho_test = spec.rho_test;
  dp.d = p.d;
  return dp;
}

void fill_point(Row& row, const RunSpec& spec, const GridPoint& p) {
  row.set("command", std::string(command_name(spec.cmd)));
  row.set("model", spec.model);
  if (!p.loss.empty()) row.set("loss", p.loss);
  row.set("alpha", p.alpha);
  row.set("lambda", p.lambda);
  row.set("mu", model_code(spec.model) == GCNSE_MODEL_GLM_SBM ? 0.0 : p.mu);
  row.set("rho", p.rho);
  row.set("rho_test", spec.rho_test < 0 ? 1.0 - p.rho : spec.rho_test);
  row.set("d", p.d);
  row.set("status", std::string("ok"));
}

void fill_failure(Row& row, gcnse_status st) {
  row.set("status", std::string("error"));
  std::string msg = gcnse_last_error();
  for (char& ch : msg)
    if (ch == ',' || ch == '\n') ch = ';';
  row.set("error", msg);
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = static_cast<int>(std::min<std::size_t>(workers, count));
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

int effective_workers(const RunSpec& spec) {
  if (spec.workers > 0) return spec.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string default_out(const RunSpec& spec, const char* ext) {
  const char* dir = std::getenv("GCNSE_OUT_DIR");
  std::string base = dir && *dir ? std::string(dir) + "/" : std::string();
  return base + command_name(spec.cmd) + ext;
}

void write_table(const RunSpec& spec, const Table& table, int failures) {
  std::string path = spec.out;
  if (spec.format == "json") {
    if (path.empty()) path = default_out(spec, ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(table);
  } else {
    if (path.empty()) path = default_out(spec, ".csv");
    write_csv(table, path);
  }
  std::printf("wrote %s (%zu rows, %d failed)\n", path.c_str(),
              table.rows.size(), failures);
}

// ---- se -----------------------------------------------------------------

int run_se(const RunSpec& spec) {
  auto points = expand(spec, true);
  std::vector<Row> rows(points.size());
  std::atomic<int> failures{0};
  parallel_for(points.size(), effective_workers(spec), [&](std::size_t i) {
    const GridPoint& p = points[i];
    Row& row = rows[i];
    fill_point(row, spec, p);
    row.set("kind", std::string("point"));
    row.set("seed", static_cast<long>(spec.seed));
    row.set("mc", spec.mc);

    gcnse_data_params dp = to_dp(spec, p);
    gcnse_gcn_params gp;
    gcnse_gcn_params_init(&gp);
    gp.loss = loss_code(p.loss);
    gp.r = p.r;
    double c_val = p.c;
    if (spec.use_c_star) {
      gcnse_status st = gcnse_c_star(&dp, GCNSE_CSTAR_FINITE, &c_val);
      if (st != GCNSE_OK) {
        fill_failure(row, st);
        ++failures;
        return;
      }
    }
    gp.c = c_val;
    row.set("r", p.r);
    row.set("c", c_val);

    gcnse_solve_config cfg;
    gcnse_solve_config_init(&cfg);
    cfg.mc_count = spec.mc;
    cfg.seed = spec.seed;
    cfg.tol = spec.tol;
    cfg.max_iter = spec.max_iter;
    cfg.damping = spec.damping;
    cfg.workers = spec.solver_threads;

    gcnse_fixed_point* fp = nullptr;
    gcnse_status st = gcnse_se_solve(&dp, &gp, &cfg, &fp);
    if (st != GCNSE_OK) {
      fill_failure(row, st);
      ++failures;
      return;
    }
    gcnse_metrics m;
    st = gcnse_se_observables(fp, &m);
    if (st == GCNSE_OK) {
      row.set("acc_test", m.acc_test);
      row.set("acc_train", m.acc_train);
      row.set("e_test", m.e_test);
      row.set("e_train", m.e_train);
    }
    row.set("converged", static_cast<long>(gcnse_fixed_point_converged(fp)));
    row.set("iterations", static_cast<long>(gcnse_fixed_point_iterations(fp)));
    row.set("residual", gcnse_fixed_point_residual(fp));
    row.set("qhat_floored",
            static_cast<long>(gcnse_fixed_point_qhat_floored(fp)));
    gcnse_fixed_point_free(fp);
    if (st != GCNSE_OK) {
      fill_failure(row, st);
      ++failures;
    }
  });

  Table table;
  table.columns.assign(kColumns, kColumns + kNumColumns);
  for (auto& row : rows) table.rows.push_back(flatten(row));
  write_table(spec, table, failures.load());
  return failures.load() > 0 ? 2 : 0;
}

// ---- bo -----------------------------------------------------------------

int run_bo(const RunSpec& spec) {
  auto points = expand(spec, false);
  std::vector<Row> rows(points.size());
  std::atomic<int> failures{0};
  parallel_for(points.size(), effective_workers(spec), [&](std::size_t i) {
    const GridPoint& p = points[i];
    Row& row = rows[i];
    fill_point(row, spec, p);
    row.set("kind", std::string("point"));
    gcnse_data_params dp = to_dp(spec, p);
    double acc = 0.0;
    int converged = 0;
    gcnse_status st =
        gcnse_bo_accuracy(&dp, spec.tol, spec.max_iter, &acc, &converged);
    if (st != GCNSE_OK) {
      fill_failure(row, st);
      ++failures;
      return;
    }
    row.set("acc_test", acc);
    row.set("value", acc);
    row.set("converged", static_cast<long>(converged));
  });
  Table table;
  table.columns.assign(kColumns, kColumns + kNumColumns);
  for (auto& row : rows) table.rows.push_back(flatten(row));
  write_table(spec, table, failures.load());
  return failures.load() > 0 ? 2 : 0;
}

// ---- sim ----------------------------------------------------------------

struct SimKey {
  std::string loss_unused;
  double alpha, lambda, mu, d;
  bool operator==(const SimKey& o) const {
    return alpha == o.alpha && lambda == o.lambda && mu == o.mu && d == o.d;
  }
};

int run_sim(const RunSpec& spec) {
  auto points = expand(spec, true);
  const bool imported = !spec.import_dataset.empty();
  if (imported) {
    std::set<double> alphas, lambdas, mus, ds;
    for (const auto& p : points) {
      alphas.insert(p.alpha);
      lambdas.insert(p.lambda);
      mus.insert(p.mu);
      ds.insert(p.d);
    }
    if (alphas.size() > 1 || lambdas.size() > 1 || mus.size() > 1 ||
        ds.size() > 1)
      throw std::runtime_error(
          "--import-dataset replays one instance; grids over alpha, lambda, "
          "mu or d are not available");
  }
  const int reps = imported ? 1 : std::max(1, spec.reps);
  const bool want_export = !spec.export_dataset.empty();
  if (want_export) {
    std::set<std::pair<double, double>> structural;
    for (const auto& p : points) structural.insert({p.alpha, p.lambda});
    if (structural.size() > 1)
      throw std::runtime_error(
          "--export-dataset needs a single structural grid point");
  }

  // rows indexed [point][rep]; one worker task = one rep (datasets are
  // task-local and reused across the grid via mask re-slicing)
  std::vector<std::vector<Row>> rows(points.size(),
                                     std::vector<Row>(reps));
  std::atomic<int> failures{0};
  gcnse_set_linalg_threads(reps > 1 ? 1 : effective_workers(spec));

  parallel_for(reps, std::min(effective_workers(spec), reps),
               [&](std::size_t rep) {
    gcnse_dataset* ds = nullptr;
    SimKey ds_key{};
    bool ds_valid = false;
    double ds_rho = -1.0;
    auto drop = [&]() {
      if (ds) gcnse_dataset_free(ds);
      ds = nullptr;
      ds_valid = false;
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
      const GridPoint& p = points[i];
      Row& row = rows[i][rep];
      fill_point(row, spec, p);
      row.set("kind", std::string("rep"));
      row.set("rep", static_cast<long>(rep));
      row.set("n", static_cast<long>(spec.n));
      row.set("r", p.r);
      row.set("c", p.c);
      std::uint64_t rep_seed = spec.seed + rep;
      row.set("seed", static_cast<long>(rep_seed));

      gcnse_data_params dp = to_dp(spec, p);
      SimKey key{"", p.alpha, p.lambda, p.mu, p.d};
      gcnse_status st = GCNSE_OK;
      if (!ds_valid || !(key == ds_key)) {
        drop();
        if (imported) {
          st = gcnse_dataset_load(spec.import_dataset.c_str(), &ds);
        } else if (!spec.features.empty()) {
          st = gcnse_dataset_semireal(spec.features.c_str(),
                                      spec.labels.c_str(), spec.epsilon, &dp,
                                      adjacency_code(spec.adjacency), rep_seed,
                                      &ds);
        } else {
          st = gcnse_dataset_generate(&dp, spec.n,
                                      adjacency_code(spec.adjacency), rep_seed,
                                      &ds);
        }
        if (st != GCNSE_OK) {
          fill_failure(row, st);
          ++failures;
          continue;
        }
        ds_key = key;
        ds_valid = true;
        ds_rho = -1.0;
        if (want_export) {
          std::string path = spec.export_dataset;
          if (reps > 1) path += ".rep" + std::to_string(rep);
          gcnse_dataset_save(ds, path.c_str());
        }
      }
      if (ds_rho != p.rho) {
        st = gcnse_dataset_reslice(ds, p.rho, spec.rho_test);
        if (st != GCNSE_OK) {
          fill_failure(row, st);
          ++failures;
          continue;
        }
        ds_rho = p.rho;
      }

      gcnse_gcn_params gp;
      gcnse_gcn_params_init(&gp);
      gp.loss = loss_code(p.loss);
      gp.r = p.r;
      gp.c = p.c;
      int rule = gp.loss == GCNSE_LOSS_QUADRATIC ? GCNSE_STEP_EXACT_RIDGE
                                                 : GCNSE_STEP_FIRST_ORDER;
      gcnse_weights* w = nullptr;
      st = gcnse_gcn_train(ds, &gp, 1e-10, 400000, rule, &w);
      if (st != GCNSE_OK) {
        fill_failure(row, st);
        ++failures;
        continue;
      }
      gcnse_metrics m;
      st = gcnse_gcn_evaluate(ds, w, &gp, &m);
      gcnse_weights_free(w);
      if (st != GCNSE_OK) {
        fill_failure(row, st);
        ++failures;
        continue;
      }
      row.set("acc_test", m.acc_test);
      row.set("acc_train", m.acc_train);
      row.set("e_test", m.e_test);
      row.set("e_train", m.e_train);
    }
    drop();
  });

  // per-rep rows in grid order, then a summary row per grid point with the
  // across-rep mean and standard error of the mean
  Table table;
  table.columns.assign(kColumns, kColumns + kNumColumns);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int rep = 0; rep < reps; ++rep)
      table.rows.push_back(flatten(rows[i][rep]));
  for (std::size_t i = 0; i < points.size(); ++i) {
    Row summary;
    fill_point(summary, spec, points[i]);
    summary.set("kind", std::string("summary"));
    summary.set("rep", static_cast<long>(-1));
    summary.set("n", static_cast<long>(spec.n));
    summary.set("r", points[i].r);
    summary.set("c", points[i].c);
    const char* metrics[] = {"acc_test", "acc_train", "e_test", "e_train"};
    bool any_fail = false;
    for (const char* metric : metrics) {
      std::vector<double> vals;
      for (int rep = 0; rep < reps; ++rep) {
        auto it = rows[i][rep].cells.find(metric);
        if (it != rows[i][rep].cells.end() && !it->second.empty())
          vals.push_back(std::atof(it->second.c_str()));
      }
      if (vals.empty()) {
        any_fail = true;
        continue;
      }
      double mean = 0;
      for (double v : vals) mean += v;
      mean /= vals.size();
      double var = 0;
      for (double v : vals) var += (v - mean) * (v - mean);
      double sem = vals.size() > 1
                       ? std::sqrt(var / (vals.size() - 1) / vals.size())
                       : 0.0;
      summary.set(metric, mean);
      summary.set(std::string(metric) + "_se", sem);
    }
    summary.set("status", std::string(any_fail ? "error" : "ok"));
    table.rows.push_back(flatten(summary));
  }
  write_table(spec, table, failures.load());
  return failures.load() > 0 ? 2 : 0;
}

// ---- rates / cstar -------------------------------------------------------

int run_rates(const RunSpec& spec) {
  auto points = expand(spec, false);
  Table table;
  table.columns.assign(kColumns, kColumns + kNumColumns);
  int failures = 0;
  for (const auto& p : points) {
    Row row;
    fill_point(row, spec, p);
    row.set("kind", std::string("rate"));
    gcnse_data_params dp = to_dp(spec, p);
    double tau = 0.0;
    gcnse_status st = gcnse_rate_inf(&dp, &tau);
    if (st != GCNSE_OK) {
      fill_failure(row, st);
      ++failures;
    } else {
      row.set("value", tau);
      std::printf("tau_inf(%s, alpha=%g%s) = %.10g\n", spec.model.c_str(),
                  p.alpha,
                  model_code(spec.model) == GCNSE_MODEL_CSBM
                      ? (", mu=" + format_double(p.mu)).c_str()
                      : "",
                  tau);
    }
    table.rows.push_back(flatten(row));
  }
  Row bo_row;
  bo_row.set("command", std::string(command_name(spec.cmd)));
  bo_row.set("kind", std::string("rate_bo"));
  bo_row.set("value", gcnse_rate_inf_bo());
  bo_row.set("status", std::string("ok"));
  std::printf("tau_inf_bo = %.10g\n", gcnse_rate_inf_bo());
  table.rows.push_back(flatten(bo_row));
  write_table(spec, table, failures);
  return failures > 0 ? 2 : 0;
}

int run_cstar(const RunSpec& spec) {
  int regime = spec.cstar_mode == "small"
                   ? GCNSE_CSTAR_SMALL_LAMBDA
                   : (spec.cstar_mode == "large" ? GCNSE_CSTAR_LARGE_LAMBDA
                                                 : GCNSE_CSTAR_FINITE);
  if (spec.cstar_mode != "small" && spec.cstar_mode != "large" &&
      spec.cstar_mode != "finite")
    throw std::runtime_error("unknown cstar mode '" + spec.cstar_mode +
                             "' (expected small, large or finite)");
  auto points = expand(spec, false);
  Table table;
  table.columns.assign(kColumns, kColumns + kNumColumns);
  int failures = 0;
  for (const auto& p : points) {
    Row row;
    fill_point(row, spec, p);
    row.set("kind", std::string("cstar"));
    gcnse_data_params dp = to_dp(spec, p);
    double c_opt = 0.0;
    gcnse_status st = gcnse_c_star(&dp, regime, &c_opt);
    if (st != GCNSE_OK) {
      fill_failure(row, st);
      ++failures;
    } else {
      row.set("value", c_opt);
      row.set("c", c_opt);
    }
    table.rows.push_back(flatten(row));
  }
  write_table(spec, table, failures);
  return failures > 0 ? 2 : 0;
}

// ---- plot ----------------------------------------------------------------

struct SeriesData {
  std::map<std::string, PlotSeries> groups;
};

int run_plot(const RunSpec& spec) {
  PlotSpec plot;
  plot.title = spec.title;
  plot.log_x = spec.log_x;
  plot.log_y = spec.log_y;
  plot.x_label = spec.x_label.empty() ? spec.x_col : spec.x_label;
  plot.y_label = spec.y_label.empty() ? spec.y_col : spec.y_label;

  auto stem = [](const std::string& path) {
    std::size_t slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
  };

  auto gather = [&](const std::vector<std::string>& files,
                    PlotSeries::Style style, bool summaries_only,
                    std::vector<PlotSeries>& out) {
    for (const auto& file : files) {
      CsvFile csv = read_csv(file);
      int status_col = csv.column("status");
      int kind_col = csv.column("kind");
      bool derive_misclass = spec.y_col == "misclass";
      bool derive_lsq = spec.x_col == "lambda_sq";
      int x_col = csv.column(derive_lsq ? "lambda" : spec.x_col);
      int y_col = csv.column(derive_misclass ? "acc_test" : spec.y_col);
      if (x_col < 0 || y_col < 0)
        throw std::runtime_error(file + ": missing plot column '" +
                                 (x_col < 0 ? spec.x_col : spec.y_col) + "'");
      std::string se_name =
          derive_misclass ? "acc_test_se" : spec.y_col + "_se";
      int se_col = csv.column(se_name);
      std::vector<int> series_idx;
      for (const auto& sc : spec.series_cols) {
        int idx = csv.column(sc);
        if (idx >= 0) series_idx.push_back(idx);
      }
      std::map<std::string, PlotSeries> groups;
      for (const auto& row : csv.rows) {
        if (status_col >= 0 && row[status_col] != "ok") continue;
        if (kind_col >= 0) {
          bool is_summary = row[kind_col] == "summary";
          if (summaries_only != is_summary) continue;
        }
        if (row[x_col].empty() || row[y_col].empty()) continue;
        std::string key = stem(file);
        for (std::size_t k = 0; k < series_idx.size(); ++k)
          key += " " + spec.series_cols[k] + "=" + row[series_idx[k]];
        auto& series = groups[key];
        series.style = style;
        series.label = key;
        double x = std::atof(row[x_col].c_str());
        if (derive_lsq) x *= x;
        double y = std::atof(row[y_col].c_str());
        if (derive_misclass) y = 1.0 - y;
        series.x.push_back(x);
        series.y.push_back(y);
        series.ybar.push_back(
            se_col >= 0 && !row[se_col].empty()
                ? std::atof(row[se_col].c_str())
                : 0.0);
      }
      for (auto& [key, series] : groups) {
        // sort points by x for clean polylines
        std::vector<std::size_t> order(series.x.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return series.x[a] < series.x[b];
        });
        PlotSeries sorted = series;
        for (std::size_t k = 0; k < order.size(); ++k) {
          sorted.x[k] = series.x[order[k]];
          sorted.y[k] = series.y[order[k]];
          sorted.ybar[k] = series.ybar[order[k]];
        }
        out.push_back(std::move(sorted));
      }
    }
  };

  std::vector<PlotSeries> theory, sims, baselines;
  gather(spec.theory_files, PlotSeries::Style::Line, false, theory);
  gather(spec.sim_files, PlotSeries::Style::Dots, true, sims);
  gather(spec.bo_files, PlotSeries::Style::Dashed, false, baselines);

  double xmin = 1e300, xmax = -1e300;
  for (const auto* group : {&theory, &sims})
    for (const auto& s : *group)
      for (double x : s.x) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      }
  for (auto& s : baselines)
    if (s.x.size() == 1 && xmin < xmax) {
      // a single baseline value becomes a horizontal reference line
      double y = s.y[0];
      s.x = {xmin, xmax};
      s.y = {y, y};
      s.ybar = {0.0, 0.0};
    }

  for (auto& s : theory) plot.series.push_back(std::move(s));
  for (auto& s : sims) plot.series.push_back(std::move(s));
  for (auto& s : baselines) plot.series.push_back(std::move(s));
  if (plot.series.empty()) throw std::runtime_error("plot: no input series");

  std::string path = spec.out.empty() ? default_out(spec, ".svg") : spec.out;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << render_svg(plot);
  std::printf("wrote %s (%zu series)\n", path.c_str(), plot.series.size());
  return 0;
}

} // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Se: return "se";
    case Command::Bo: return "bo";
    case Command::Sim: return "sim";
    case Command::Sweep: return "sweep";
    case Command::Rates: return "rates";
    case Command::Cstar: return "cstar";
    case Command::Plot: return "plot";
  }
  return "?";
}

void RunSpec::validate() const {
  model_code(model);
  for (const auto& l : losses) loss_code(l);
  adjacency_code(adjacency);
  if (lambda < 0) throw std::runtime_error("lambda must be >= 0");
  for (double l : lambda_grid)
    if (l < 0) throw std::runtime_error("lambda grid must be >= 0");
  if (format != "csv" && format != "json")
    throw std::runtime_error("format must be csv or json");
  if (cmd == Command::Sim && !features.empty() && labels.empty())
    throw std::runtime_error("--features needs --labels");
}

int run(const RunSpec& spec) {
  spec.validate();
  switch (spec.cmd) {
    case Command::Se: return run_se(spec);
    case Command::Bo: return run_bo(spec);
    case Command::Sim: return run_sim(spec);
    case Command::Rates: return run_rates(spec);
    case Command::Cstar: return run_cstar(spec);
    case Command::Plot: return run_plot(spec);
    case Command::Sweep: {
      RunSpec inner = spec;
      if (spec.over == "se") inner.cmd = Command::Se;
      else if (spec.over == "bo") inner.cmd = Command::Bo;
      else if (spec.over == "sim") inner.cmd = Command::Sim;
      else
        throw std::runtime_error("sweep --over must be se, bo or sim");
      if (spec.axis.empty() || spec.axis_grid.empty())
        throw std::runtime_error("sweep needs --axis and --grid");
      if (spec.axis == "lambda") inner.lambda_grid = spec.axis_grid;
      else if (spec.axis == "mu") inner.mu_grid = spec.axis_grid;
      else if (spec.axis == "rho") inner.rho_grid = spec.axis_grid;
      else if (spec.axis == "alpha") inner.alpha_grid = spec.axis_grid;
      else if (spec.axis == "c") inner.c_grid = spec.axis_grid;
      else if (spec.axis == "r") inner.r_grid = spec.axis_grid;
      else if (spec.axis == "d") inner.d_grid = spec.axis_grid;
      else
        throw std::runtime_error(
            "sweep axis '" + spec.axis +
            "' is not a parameter (lambda, mu, rho, alpha, c, r, d)");
      return run(inner);
    }
  }
  return 1;
}

// ---- presets ---------------------------------------------------------------

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

const std::map<std::string, KV>& preset_table() {
  static const std::map<std::string, KV> table = [] {
    std::map<std::string, KV> t;
    KV grid_common = {{"loss", "quadratic,logistic,hinge"},
                      {"c-grid", "0,0.5,1,1.5,2"},
                      {"r-grid", "0.1,10,1000"},
                      {"n", "10000"},
                      {"d", "30"},
                      {"reps", "10"},
                      {"x", "c"},
                      {"series", "loss,r"},
                      {"y", "acc_test"}};
    auto with = [&](KV base, KV extra) {
      for (auto& kv : extra) base.push_back(kv);
      return base;
    };
    t["fig1-top"] = with({{"model", "csbm"}, {"alpha", "4"}, {"rho", "0.1"},
                          {"lambda", "0.5"}, {"mu", "1"}},
                         grid_common);
    t["fig1-bottom"] = with({{"model", "csbm"}, {"alpha", "4"}, {"rho", "0.1"},
                             {"lambda", "1.5"}, {"mu", "3"}},
                            grid_common);
    t["fig2-top"] = with({{"model", "glm-sbm"}, {"alpha", "4"},
                          {"rho", "0.1"}, {"lambda", "0.5"}},
                         grid_common);
    t["fig2-bottom"] = with({{"model", "glm-sbm"}, {"alpha", "4"},
                             {"rho", "0.1"}, {"lambda", "1.5"}},
                            grid_common);
    KV rate_common = {{"rho", "0.1"},
                      {"r", "1000"},
                      {"lambda-grid", "1.5,2,2.5,3,3.5,4,4.5,5"},
                      {"c-star", "true"},
                      {"mc", "4000000"},
                      {"tol", "1e-12"},
                      {"x", "lambda_sq"},
                      {"y", "misclass"},
                      {"logy", "true"},
                      {"series", "loss"}};
    t["fig3-left"] = with({{"model", "csbm"}, {"alpha", "4"}, {"mu", "3"},
                           {"loss", "quadratic,logistic,hinge"}},
                          rate_common);
    t["fig3-right"] = with({{"model", "glm-sbm"}, {"alpha", "4"},
                            {"loss", "quadratic,logistic,hinge"}},
                           rate_common);
    t["fig5-top"] = with({{"model", "csbm"}, {"alpha", "0.7"}, {"rho", "0.1"},
                          {"lambda", "1.5"}, {"mu", "3"}},
                         grid_common);
    t["fig5-bottom"] = with({{"model", "glm-sbm"}, {"alpha", "0.7"},
                             {"rho", "0.1"}, {"lambda", "1"}},
                            grid_common);
    t["fig6-top"] = with({{"model", "csbm"}, {"alpha", "2"}, {"rho", "0.1"},
                          {"lambda", "0.7"}, {"mu", "1"}},
                         grid_common);
    t["fig6-bottom"] = with({{"model", "glm-sbm"}, {"alpha", "2"},
                             {"rho", "0.1"}, {"lambda", "1"}},
                            grid_common);
    t["fig7"] = with({{"model", "glm-sbm"}, {"alpha", "4"},
                      {"loss", "quadratic,logistic"},
                      {"r-grid", "1,10,1000"}},
                     KV{{"rho", "0.1"},
                        {"lambda-grid", "1.5,2,2.5,3,3.5,4,4.5,5"},
                        {"c-star", "true"},
                        {"mc", "4000000"},
                        {"tol", "1e-12"},
                        {"x", "lambda_sq"},
                        {"y", "misclass"},
                        {"logy", "true"},
                        {"series", "loss,r"}});
    t["fig8"] = KV{{"model", "glm-sbm"}, {"alpha", "2"}, {"lambda", "1"},
                   {"loss", "quadratic"}, {"rho-grid", "0.1:0.9:0.05"},
                   {"r-grid", "1e-06,0.01,1"}, {"c", "1"}, {"n", "10000"},
                   {"d", "5000"}, {"reps", "3"}, {"damping", "0.7"},
                   {"max-iter", "1000"}, {"x", "rho"}, {"y", "e_test"},
                   {"series", "r"}};
    t["fig1"] = t["fig1-top"];
    t["fig2"] = t["fig2-top"];
    t["fig5"] = t["fig5-top"];
    t["fig6"] = t["fig6-top"];
    return t;
  }();
  return table;
}

} // namespace

std::vector<std::pair<std::string, std::string>> preset_values(
    const std::string& name) {
  const auto& table = preset_table();
  auto it = table.find(name);
  if (it == table.end()) {
    std::string names;
    for (const auto& [key, _] : table) names += (names.empty() ? "" : ", ") + key;
    throw std::runtime_error("unknown preset '" + name + "' (available: " +
                             names + ")");
  }
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [key, _] : preset_table()) out.push_back(key);
  return out;
}

} // namespace cli
