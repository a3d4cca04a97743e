#include "gcnse/gcnse.h"

#include <Eigen/Core>
#include <fstream>
#include <memory>
#include <string>

#include "gcnse/bayes_optimal.hpp"
#include "gcnse/closed_form.hpp"
#include "gcnse/losses.hpp"
#include "gcnse/simulator.hpp"
#include "gcnse/special.hpp"
#include "gcnse/state_evolution.hpp"

namespace {

thread_local std::string g_last_error;

gcnse_status status_of(const gcnse::Error& e) {
  switch (e.code()) {
    case gcnse::ErrorCode::InvalidArgument: return GCNSE_ERR_INVALID;
    case gcnse::ErrorCode::DegeneratePotential:
    case gcnse::ErrorCode::DegenerateOverlap: return GCNSE_ERR_DEGENERATE;
    case gcnse::ErrorCode::SingularIteration: return GCNSE_ERR_SINGULAR;
    case gcnse::ErrorCode::Numerical: return GCNSE_ERR_NUMERICAL;
    case gcnse::ErrorCode::Unconverged: return GCNSE_ERR_UNCONVERGED;
    case gcnse::ErrorCode::Parse: return GCNSE_ERR_PARSE;
    case gcnse::ErrorCode::Io: return GCNSE_ERR_IO;
  }
  return GCNSE_ERR_UNKNOWN;
}

template <typename Fn>
gcnse_status guarded(Fn&& fn) {
  try {
    fn();
    return GCNSE_OK;
  } catch (const gcnse::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GCNSE_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return GCNSE_ERR_UNKNOWN;
  }
}

gcnse::DataParams to_dp(const gcnse_data_params& p) {
  gcnse::DataParams dp;
  dp.model = p.model == GCNSE_MODEL_GLM_SBM ? gcnse::Model::GlmSbm
                                            : gcnse::Model::Csbm;
  dp.alpha = p.alpha;
  dp.lambda = p.lambda;
  dp.mu = p.mu;
  dp.rho = p.rho;
  dp.rho_test = p.rho_test;
  dp.d = p.d;
  return dp;
}

gcnse::GcnParams to_gp(const gcnse_gcn_params& p) {
  gcnse::GcnParams gp;
  gp.loss = p.loss == GCNSE_LOSS_LOGISTIC
                ? gcnse::Loss::Logistic
                : (p.loss == GCNSE_LOSS_HINGE ? gcnse::Loss::Hinge
                                              : gcnse::Loss::Quadratic);
  gp.r = p.r;
  gp.c = p.c;
  return gp;
}

gcnse::SolveConfig to_cfg(const gcnse_solve_config& c) {
  gcnse::SolveConfig cfg;
  cfg.mc_count = static_cast<std::size_t>(c.mc_count);
  cfg.seed = c.seed;
  cfg.tol = c.tol;
  cfg.max_iter = c.max_iter;
  cfg.damping = c.damping;
  cfg.workers = c.workers;
  cfg.init = c.init_kind == GCNSE_INIT_RANDOM_POSITIVE
                 ? gcnse::SeInit::RandomPositive
                 : (c.init_kind == GCNSE_INIT_CUSTOM ? gcnse::SeInit::Custom
                                                     : gcnse::SeInit::Preset);
  std::array<double, 12> custom;
  for (int i = 0; i < 12; ++i) custom[i] = c.init_custom[i];
  cfg.init_custom = gcnse::OrderParams::from_array(custom);
  cfg.init_seed = c.init_seed;
  return cfg;
}

void fill_metrics(const gcnse::Metrics& m, gcnse_metrics* out) {
  out->e_train = m.e_train;
  out->e_test = m.e_test;
  out->acc_train = m.acc_train;
  out->acc_test = m.acc_test;
}

} // namespace

struct gcnse_fixed_point {
  gcnse::DataParams dp;
  gcnse::GcnParams gp;
  gcnse::McSampleSet mc;
  gcnse::FixedPoint fp;
  int workers = 1;
};

struct gcnse_dataset {
  gcnse::Dataset ds;
  gcnse::SimWorkspace ws;
};

struct gcnse_weights {
  Eigen::VectorXd w;
};

struct gcnse_matrix {
  Eigen::MatrixXd m;
};

extern "C" {

const char* gcnse_version(void) { return "0.1.0"; }

const char* gcnse_last_error(void) { return g_last_error.c_str(); }

void gcnse_set_linalg_threads(int n) { Eigen::setNbThreads(n); }

void gcnse_data_params_init(gcnse_data_params* p) {
  p->model = GCNSE_MODEL_CSBM;
  p->alpha = 1.0;
  p->lambda = 1.0;
  p->mu = 0.0;
  p->rho = 0.1;
  p->rho_test = -1.0;
  p->d = 30.0;
}

void gcnse_gcn_params_init(gcnse_gcn_params* p) {
  p->loss = GCNSE_LOSS_QUADRATIC;
  p->r = 1.0;
  p->c = 0.0;
}

void gcnse_solve_config_init(gcnse_solve_config* c) {
  c->mc_count = 1000000;
  c->seed = 1;
  c->tol = 1e-8;
  c->max_iter = 200;
  c->damping = 0.0;
  c->workers = 1;
  c->init_kind = GCNSE_INIT_PRESET;
  for (int i = 0; i < 12; ++i) c->init_custom[i] = 0.0;
  c->init_seed = 7;
}

double gcnse_loss_eval(int loss, double x) {
  return gcnse::loss_eval(to_gp({loss, 1.0, 0.0}).loss, x);
}

double gcnse_erf(double x) { return gcnse::special::erf(x); }

gcnse_status gcnse_snr_total(const gcnse_data_params* p, double* out) {
  return guarded([&] {
    gcnse::DataParams dp = to_dp(*p);
    dp.validate();
    *out = gcnse::snr_total(dp);
  });
}

gcnse_status gcnse_se_solve(const gcnse_data_params* dp,
                            const gcnse_gcn_params* gp,
                            const gcnse_solve_config* cfg,
                            gcnse_fixed_point** out) {
  return guarded([&] {
    auto handle = std::make_unique<gcnse_fixed_point>();
    handle->dp = to_dp(*dp);
    handle->gp = to_gp(*gp);
    gcnse::SolveConfig config = to_cfg(*cfg);
    config.validate();
    handle->workers = config.workers;
    handle->mc = gcnse::sample_mc(config.mc_count, config.seed);
    handle->fp = gcnse::solve(handle->dp, handle->gp, config, handle->mc);
    *out = handle.release();
  });
}

void gcnse_fixed_point_free(gcnse_fixed_point* fp) { delete fp; }

void gcnse_fixed_point_theta(const gcnse_fixed_point* fp, double out[12]) {
  auto arr = fp->fp.theta.as_array();
  for (int i = 0; i < 12; ++i) out[i] = arr[i];
}

int gcnse_fixed_point_converged(const gcnse_fixed_point* fp) {
  return fp->fp.converged ? 1 : 0;
}
int gcnse_fixed_point_iterations(const gcnse_fixed_point* fp) {
  return fp->fp.iterations;
}
double gcnse_fixed_point_residual(const gcnse_fixed_point* fp) {
  return fp->fp.residual;
}
int gcnse_fixed_point_qhat_floored(const gcnse_fixed_point* fp) {
  return fp->fp.qhat_floored ? 1 : 0;
}

gcnse_status gcnse_se_observables(const gcnse_fixed_point* fp,
                                  gcnse_metrics* out) {
  return guarded([&] {
    gcnse::Metrics m =
        gcnse::observables(fp->fp, fp->mc, fp->dp, fp->gp, fp->workers);
    fill_metrics(m, out);
  });
}

gcnse_status gcnse_acc_large_r(const gcnse_data_params* dp,
                               const gcnse_gcn_params* gp, double* out) {
  return guarded([&] { *out = gcnse::acc_large_r(to_dp(*dp), to_gp(*gp)); });
}

gcnse_status gcnse_large_r_stats(const gcnse_data_params* dp,
                                 const gcnse_gcn_params* gp, double out[10]) {
  return guarded([&] {
    gcnse::LargeRStats s = gcnse::large_r_stats(to_dp(*dp), to_gp(*gp));
    out[0] = s.m_w;
    out[1] = s.v_w;
    out[2] = s.q_w;
    out[3] = s.m_sigma;
    out[4] = s.v_sigma;
    out[5] = s.q_sigma;
    out[6] = s.mhat_w;
    out[7] = s.qhat_w;
    out[8] = s.mhat_sigma;
    out[9] = s.qhat_sigma;
  });
}

gcnse_status gcnse_rate_inf(const gcnse_data_params* dp, double* out) {
  return guarded([&] {
    gcnse::DataParams d = to_dp(*dp);
    d.validate();
    *out = gcnse::rate_inf(d);
  });
}

double gcnse_rate_inf_bo(void) { return gcnse::rate_inf_bo(); }

gcnse_status gcnse_c_star(const gcnse_data_params* dp, int regime,
                          double* out) {
  return guarded([&] {
    gcnse::CstarRegime r =
        regime == GCNSE_CSTAR_SMALL_LAMBDA
            ? gcnse::CstarRegime::SmallLambda
            : (regime == GCNSE_CSTAR_LARGE_LAMBDA
                   ? gcnse::CstarRegime::LargeLambda
                   : gcnse::CstarRegime::Finite);
    *out = gcnse::c_star(to_dp(*dp), r);
  });
}

gcnse_status gcnse_bo_accuracy(const gcnse_data_params* dp, double tol,
                               int max_iter, double* acc, int* converged) {
  return guarded([&] {
    gcnse::DataParams d = to_dp(*dp);
    gcnse::SolveConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    if (d.model == gcnse::Model::Csbm) {
      auto s = gcnse::bo_solve_csbm(d, cfg);
      *acc = gcnse::bo_acc_csbm(s);
      if (converged) *converged = s.converged ? 1 : 0;
    } else {
      auto s = gcnse::bo_solve_glmsbm(d, cfg);
      *acc = gcnse::bo_acc_glmsbm(s);
      if (converged) *converged = s.converged ? 1 : 0;
    }
  });
}

gcnse_status gcnse_bo_misclass(const gcnse_data_params* dp, double tol,
                               int max_iter, double* misclass,
                               int* converged) {
  return guarded([&] {
    gcnse::DataParams d = to_dp(*dp);
    gcnse::SolveConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    if (d.model == gcnse::Model::Csbm) {
      auto s = gcnse::bo_solve_csbm(d, cfg);
      *misclass = gcnse::bo_misclass_csbm(s);
      if (converged) *converged = s.converged ? 1 : 0;
    } else {
      auto s = gcnse::bo_solve_glmsbm(d, cfg);
      *misclass = gcnse::bo_misclass_glmsbm(s);
      if (converged) *converged = s.converged ? 1 : 0;
    }
  });
}

gcnse_status gcnse_dataset_generate(const gcnse_data_params* dp, int n,
                                    int adjacency_mode, uint64_t seed,
                                    gcnse_dataset** out) {
  return guarded([&] {
    auto handle = std::make_unique<gcnse_dataset>();
    handle->ds = gcnse::gen_dataset(
        to_dp(*dp), n,
        adjacency_mode == GCNSE_ADJ_GAUSSIAN
            ? gcnse::AdjacencyMode::GaussianEquivalent
            : gcnse::AdjacencyMode::Bernoulli,
        seed);
    *out = handle.release();
  });
}

gcnse_status gcnse_dataset_semireal(const char* features_csv,
                                    const char* labels_csv, double epsilon,
                                    const gcnse_data_params* dp,
                                    int adjacency_mode, uint64_t seed,
                                    gcnse_dataset** out) {
  return guarded([&] {
    Eigen::MatrixXd feats = gcnse::ingest_features(features_csv, epsilon, seed);
    std::ifstream in(labels_csv);
    if (!in)
      gcnse::fail(gcnse::ErrorCode::Io,
                  std::string("cannot open label file: ") + labels_csv);
    std::vector<double> labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      char* end = nullptr;
      double v = std::strtod(line.c_str(), &end);
      if (end == line.c_str())
        gcnse::fail(gcnse::ErrorCode::Parse,
                    std::string("label file ") + labels_csv +
                        ": non-numeric row " + std::to_string(lineno));
      labels.push_back(v);
    }
    auto handle = std::make_unique<gcnse_dataset>();
    handle->ds = gcnse::dataset_from_features(
        feats, labels, to_dp(*dp),
        adjacency_mode == GCNSE_ADJ_GAUSSIAN
            ? gcnse::AdjacencyMode::GaussianEquivalent
            : gcnse::AdjacencyMode::Bernoulli,
        seed);
    *out = handle.release();
  });
}

gcnse_status gcnse_dataset_save(const gcnse_dataset* ds, const char* path) {
  return guarded([&] { gcnse::save_dataset(ds->ds, path); });
}

gcnse_status gcnse_dataset_load(const char* path, gcnse_dataset** out) {
  return guarded([&] {
    auto handle = std::make_unique<gcnse_dataset>();
    handle->ds = gcnse::load_dataset(path);
    *out = handle.release();
  });
}

void gcnse_dataset_free(gcnse_dataset* ds) { delete ds; }

int gcnse_dataset_n(const gcnse_dataset* ds) { return ds->ds.n; }
int gcnse_dataset_m(const gcnse_dataset* ds) { return ds->ds.m_dim; }

gcnse_status gcnse_dataset_reslice(gcnse_dataset* ds, double rho,
                                   double rho_test) {
  return guarded([&] {
    double rt = rho_test < 0.0 ? 1.0 - rho : rho_test;
    gcnse::reslice_masks(ds->ds, rho, rt);
  });
}

gcnse_status gcnse_gcn_train(gcnse_dataset* ds, const gcnse_gcn_params* gp,
                             double grad_tol, long max_steps, int step_rule,
                             gcnse_weights** out) {
  return guarded([&] {
    gcnse::TrainConfig tc;
    tc.grad_tol = grad_tol;
    tc.max_steps = max_steps;
    tc.step_rule = step_rule == GCNSE_STEP_FIRST_ORDER
                       ? gcnse::TrainConfig::StepRule::FirstOrder
                       : gcnse::TrainConfig::StepRule::ExactRidge;
    auto handle = std::make_unique<gcnse_weights>();
    handle->w = gcnse::train_gcn(ds->ds, to_gp(*gp), tc, ds->ws);
    *out = handle.release();
  });
}

void gcnse_weights_free(gcnse_weights* w) { delete w; }
const double* gcnse_weights_data(const gcnse_weights* w) {
  return w->w.data();
}
int gcnse_weights_len(const gcnse_weights* w) {
  return static_cast<int>(w->w.size());
}

gcnse_status gcnse_gcn_evaluate(const gcnse_dataset* ds,
                                const gcnse_weights* w,
                                const gcnse_gcn_params* gp,
                                gcnse_metrics* out) {
  return guarded([&] {
    gcnse::Metrics m = gcnse::evaluate(ds->ds, w->w, to_gp(*gp));
    fill_metrics(m, out);
  });
}

gcnse_status gcnse_erm_subgradient_norm(gcnse_dataset* ds,
                                        const gcnse_weights* w,
                                        const gcnse_gcn_params* gp,
                                        double* out) {
  return guarded([&] {
    *out = gcnse::erm_subgradient_norm(ds->ds, w->w, to_gp(*gp), 1e-9, ds->ws);
  });
}

gcnse_status gcnse_ingest_features(const char* path, double epsilon,
                                   uint64_t seed, gcnse_matrix** out) {
  return guarded([&] {
    auto handle = std::make_unique<gcnse_matrix>();
    handle->m = gcnse::ingest_features(path, epsilon, seed);
    *out = handle.release();
  });
}

int gcnse_matrix_rows(const gcnse_matrix* m) {
  return static_cast<int>(m->m.rows());
}
int gcnse_matrix_cols(const gcnse_matrix* m) {
  return static_cast<int>(m->m.cols());
}
const double* gcnse_matrix_data(const gcnse_matrix* m) { return m->m.data(); }
void gcnse_matrix_free(gcnse_matrix* m) { delete m; }

} // extern "C"
