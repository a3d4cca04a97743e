#include "gcnse/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>

#include "gcnse/losses.hpp"
#include "gcnse/rng.hpp"

namespace gcnse {

namespace {

using RowMajorXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kRowBlock = 256;       // dense byte-matrix GEMM block
constexpr double kSparseCut = 0.02;  // density below which rows are indexed

// integer in [0, bound) from one 64-bit draw (Lemire reduction)
std::uint32_t bounded_u32(Xoshiro256pp& rng, std::uint32_t bound) {
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(rng.next_u64()) * bound) >> 64);
}

// CDF walk; only used where n p is modest, so the pmf at zero cannot
// underflow.
int binomial_inverse(int n, double p, double u) {
  if (p <= 0.0) return 0;
  double pmf = std::exp(n * std::log1p(-p));
  double cdf = pmf;
  const double odds = p / (1.0 - p);
  int k = 0;
  while (u > cdf && k < n) {
    pmf *= odds * (n - k) / (k + 1.0);
    ++k;
    cdf += pmf;
  }
  return k;
}

// k distinct members of pool, appended to out (Floyd's sampling).
void sample_distinct(Xoshiro256pp& rng, const std::vector<std::int32_t>& pool,
                     int k, std::vector<std::int32_t>& out) {
  const int n = static_cast<int>(pool.size());
  std::set<int> chosen;
  for (int j = n - k; j < n; ++j) {
    int t = static_cast<int>(bounded_u32(rng, static_cast<std::uint32_t>(j + 1)));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  for (int idx : chosen) out.push_back(pool[idx]);
}

struct BernoulliProbs {
  double same, diff, scale;
};

BernoulliProbs edge_probabilities(const DataParams& dp, int n) {
  const double base = dp.d / n;
  const double scale = std::sqrt(base * (1.0 - base));
  const double bump = dp.lambda / std::sqrt(static_cast<double>(n)) * scale;
  BernoulliProbs p{base + bump, base - bump, scale};
  if (p.same < 0.0 || p.same > 1.0 || p.diff < 0.0 || p.diff > 1.0) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "edge probability out of [0,1] for d=%g lambda=%g n=%d",
                  dp.d, dp.lambda, n);
    fail(ErrorCode::InvalidArgument, msg);
  }
  return p;
}

void build_adjacency(Dataset& ds, const DataParams& dp, AdjacencyMode mode,
                     Xoshiro256pp& rng) {
  const int n = ds.n;
  ds.adjacency_mode = mode;
  if (mode == AdjacencyMode::GaussianEquivalent) {
    const double spike = dp.lambda / std::sqrt(static_cast<double>(n));
    ds.adj_gaussian.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ds.adj_gaussian(i, j) =
            spike * ds.labels(i) * ds.labels(j) + rng.next_gaussian();
    return;
  }
  const BernoulliProbs p = edge_probabilities(dp, n);
  ds.sparse = dp.d / n <= kSparseCut;
  if (ds.sparse) {
    std::vector<std::int32_t> plus, minus;
    for (int j = 0; j < n; ++j)
      (ds.labels(j) > 0 ? plus : minus).push_back(j);
    ds.adj_rows.assign(n, {});
    for (int i = 0; i < n; ++i) {
      const auto& same = ds.labels(i) > 0 ? plus : minus;
      const auto& diff = ds.labels(i) > 0 ? minus : plus;
      auto& row = ds.adj_rows[i];
      int k_same = binomial_inverse(static_cast<int>(same.size()), p.same,
                                    rng.next_unit());
      sample_distinct(rng, same, k_same, row);
      int k_diff = binomial_inverse(static_cast<int>(diff.size()), p.diff,
                                    rng.next_unit());
      sample_distinct(rng, diff, k_diff, row);
      std::sort(row.begin(), row.end());
    }
  } else {
    ds.adj_dense.resize(n, n);
    for (int i = 0; i < n; ++i) {
      const double yi = ds.labels(i);
      for (int j = 0; j < n; ++j) {
        const double prob = yi * ds.labels(j) > 0 ? p.same : p.diff;
        ds.adj_dense(i, j) = rng.next_unit() < prob ? 1 : 0;
      }
    }
  }
}

void build_masks(Dataset& ds, double rho, double rho_test,
                 Xoshiro256pp& rng) {
  const int n = ds.n;
  ds.node_order.resize(n);
  for (int i = 0; i < n; ++i) ds.node_order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(bounded_u32(rng, static_cast<std::uint32_t>(i + 1)));
    std::swap(ds.node_order[i], ds.node_order[j]);
  }
  reslice_masks(ds, rho, rho_test);
}

} // namespace

void reslice_masks(Dataset& ds, double rho, double rho_test) {
  const int n = ds.n;
  const int n_train = static_cast<int>(std::floor(rho * n));
  const int n_test = static_cast<int>(std::floor(rho_test * n));
  if (n_train < 1 || n_train + n_test > n)
    fail(ErrorCode::InvalidArgument, "reslice_masks: invalid rho / rho_test");
  ds.train_mask.assign(ds.node_order.begin(), ds.node_order.begin() + n_train);
  ds.test_mask.assign(ds.node_order.begin() + n_train,
                      ds.node_order.begin() + n_train + n_test);
  std::sort(ds.train_mask.begin(), ds.train_mask.end());
  std::sort(ds.test_mask.begin(), ds.test_mask.end());
  ds.params.rho = rho;
  ds.params.rho_test = rho_test;
}

Dataset gen_dataset(const DataParams& dp, int n, AdjacencyMode mode,
                    std::uint64_t seed) {
  dp.validate();
  if (n < 100) fail(ErrorCode::InvalidArgument, "gen_dataset: n must be >= 100");
  if (mode == AdjacencyMode::Bernoulli) edge_probabilities(dp, n);

  Dataset ds;
  ds.n = n;
  ds.m_dim = std::max(1, static_cast<int>(std::lround(n / dp.alpha)));
  ds.seed = seed;
  ds.params = dp;

  Xoshiro256pp rng_prior(substream_seed(seed, 0));
  Xoshiro256pp rng_feat(substream_seed(seed, 1));
  Xoshiro256pp rng_adj(substream_seed(seed, 2));
  Xoshiro256pp rng_mask(substream_seed(seed, 3));

  ds.hidden_u.resize(ds.m_dim);
  for (int v = 0; v < ds.m_dim; ++v) ds.hidden_u(v) = rng_prior.next_gaussian();

  ds.labels.resize(n);
  ds.features.resize(n, ds.m_dim);
  if (dp.model == Model::Csbm) {
    for (int i = 0; i < n; ++i)
      ds.labels(i) = rng_prior.next_unit() < 0.5 ? 1.0 : -1.0;
    const double spike = std::sqrt(dp.mu / n);
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < ds.m_dim; ++v)
        ds.features(i, v) =
            spike * ds.labels(i) * ds.hidden_u(v) + rng_feat.next_gaussian();
  } else {
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < ds.m_dim; ++v)
        ds.features(i, v) = rng_feat.next_gaussian();
    Eigen::VectorXd z =
        ds.features * ds.hidden_u / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) ds.labels(i) = sign_pm(z(i));
  }

  build_adjacency(ds, dp, mode, rng_adj);
  build_masks(ds, dp.rho, dp.test_fraction(), rng_mask);
  return ds;
}

Dataset dataset_from_features(const Eigen::MatrixXd& features,
                              const std::vector<double>& labels,
                              const DataParams& dp, AdjacencyMode mode,
                              std::uint64_t seed) {
  dp.validate();
  const int n = static_cast<int>(features.rows());
  if (n < 100)
    fail(ErrorCode::InvalidArgument, "dataset_from_features: need n >= 100");
  if (static_cast<int>(labels.size()) != n)
    fail(ErrorCode::InvalidArgument,
         "dataset_from_features: labels/features row mismatch");
  Dataset ds;
  ds.n = n;
  ds.m_dim = static_cast<int>(features.cols());
  ds.seed = seed;
  ds.params = dp;
  ds.features = features;
  ds.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0)
      fail(ErrorCode::InvalidArgument, "labels must be +-1");
    ds.labels(i) = labels[i];
  }
  Xoshiro256pp rng_adj(substream_seed(seed, 2));
  Xoshiro256pp rng_mask(substream_seed(seed, 3));
  build_adjacency(ds, dp, mode, rng_adj);
  build_masks(ds, dp.rho, dp.test_fraction(), rng_mask);
  return ds;
}

// --- graph filter products ---------------------------------------------

Eigen::MatrixXd Dataset::graph_filter_product() const {
  const double inv_n = 1.0 / n;
  if (adjacency_mode == AdjacencyMode::GaussianEquivalent)
    return adj_gaussian * features * inv_n;

  const double base = params.d / n;
  const double scale = std::sqrt(base * (1.0 - base));
  Eigen::RowVectorXd colsum = features.colwise().sum();
  Eigen::MatrixXd out(n, m_dim);
  if (sparse) {
    RowMajorXd x_rows = features;
    RowMajorXd acc = RowMajorXd::Zero(n, m_dim);
    for (int i = 0; i < n; ++i) {
      auto row = acc.row(i);
      for (std::int32_t j : adj_rows[i]) row += x_rows.row(j);
    }
    out = acc;
  } else {
    for (int i0 = 0; i0 < n; i0 += kRowBlock) {
      const int rows = std::min(kRowBlock, n - i0);
      out.middleRows(i0, rows) =
          adj_dense.middleRows(i0, rows).cast<double>() * features;
    }
  }
  out.rowwise() -= base * colsum;
  out *= inv_n / scale;
  return out;
}

Eigen::VectorXd Dataset::rescaled_times(const Eigen::VectorXd& t) const {
  if (adjacency_mode == AdjacencyMode::GaussianEquivalent)
    return adj_gaussian * t;
  const double base = params.d / n;
  const double scale = std::sqrt(base * (1.0 - base));
  const double shift = base * t.sum();
  Eigen::VectorXd out(n);
  if (sparse) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::int32_t j : adj_rows[i]) acc += t(j);
      out(i) = acc;
    }
  } else {
    for (int i0 = 0; i0 < n; i0 += kRowBlock) {
      const int rows = std::min(kRowBlock, n - i0);
      out.segment(i0, rows) = adj_dense.middleRows(i0, rows).cast<double>() * t;
    }
  }
  out.array() -= shift;
  out /= scale;
  return out;
}

Eigen::VectorXd Dataset::filter_row(int i, double c) const {
  const double inv_n = 1.0 / n;
  Eigen::VectorXd graph_part(m_dim);
  if (adjacency_mode == AdjacencyMode::GaussianEquivalent) {
    graph_part = (adj_gaussian.row(i) * features).transpose() * inv_n;
  } else {
    const double base = params.d / n;
    const double scale = std::sqrt(base * (1.0 - base));
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m_dim);
    if (sparse) {
      for (std::int32_t j : adj_rows[i]) acc += features.row(j);
    } else {
      acc = adj_dense.row(i).cast<double>() * features;
    }
    acc -= base * features.colwise().sum();
    graph_part = acc.transpose() * (inv_n / scale);
  }
  return graph_part +
         (c / std::sqrt(static_cast<double>(n))) * features.row(i).transpose();
}

Eigen::VectorXd gcn_forward(const Dataset& ds, const Eigen::VectorXd& w,
                            double c) {
  if (w.size() != ds.m_dim)
    fail(ErrorCode::InvalidArgument, "gcn_forward: weight dimension mismatch");
  Eigen::VectorXd t = ds.features * w;
  Eigen::VectorXd h = ds.rescaled_times(t) / ds.n;
  h += (c / std::sqrt(static_cast<double>(ds.n))) * t;
  return h;
}

Metrics evaluate(const Dataset& ds, const Eigen::VectorXd& w,
                 const GcnParams& gp) {
  Eigen::VectorXd h = gcn_forward(ds, w, gp.c);
  Metrics m;
  auto tally = [&](const std::vector<std::int32_t>& mask, double& err,
                   double& acc) {
    if (mask.empty()) return;
    double e = 0.0, a = 0.0;
    for (std::int32_t i : mask) {
      e += loss_eval(gp.loss, ds.labels(i) * h(i));
      a += ds.labels(i) == sign_pm(h(i)) ? 1.0 : 0.0;
    }
    err = e / mask.size();
    acc = a / mask.size();
  };
  tally(ds.train_mask, m.e_train, m.acc_train);
  tally(ds.test_mask, m.e_test, m.acc_test);
  return m;
}

// --- feature ingestion ---------------------------------------------------

namespace {

bool parse_double(const std::string& tok, double* out) {
  char* end = nullptr;
  *out = std::strtod(tok.c_str(), &end);
  return end != tok.c_str() && *end == '\0';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (ch == ',' || ch == ';') {
        // empty field between consecutive separators is malformed; keep a
        // placeholder so the column index in the error is right
        if (!out.empty() && out.back().empty()) out.push_back("");
      }
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

} // namespace

Eigen::MatrixXd normalize_features(Eigen::MatrixXd raw, double epsilon,
                                   std::uint64_t seed) {
  const int n = static_cast<int>(raw.rows());
  const int m = static_cast<int>(raw.cols());
  if (n < 2) fail(ErrorCode::InvalidArgument, "normalize_features: need >= 2 rows");
  if (epsilon > 0.0) {
    Xoshiro256pp rng(substream_seed(seed, 9));
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < m; ++v) raw(i, v) += epsilon * rng.next_gaussian();
  }
  for (int v = 0; v < m; ++v) {
    const double mean = raw.col(v).mean();
    raw.col(v).array() -= mean;
    const double ssq = raw.col(v).squaredNorm();
    if (!(ssq > 0.0))
      fail(ErrorCode::InvalidArgument,
           "feature column " + std::to_string(v) +
               " has zero variance after noising");
    raw.col(v) *= std::sqrt(static_cast<double>(n) / ssq);
  }
  return raw;
}

Eigen::MatrixXd ingest_features(const std::string& path, double epsilon,
                                std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open feature file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  bool maybe_header = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    bool ok = true;
    std::size_t bad_col = 0;
    for (std::size_t cidx = 0; cidx < fields.size(); ++cidx) {
      double v;
      if (!parse_double(fields[cidx], &v)) {
        ok = false;
        bad_col = cidx;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (maybe_header && rows.empty()) {
        maybe_header = false; // header line, skip
        continue;
      }
      fail(ErrorCode::Parse, "feature file " + path + ": non-numeric field at row " +
                                 std::to_string(lineno) + ", column " +
                                 std::to_string(bad_col + 1));
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      fail(ErrorCode::Parse, "feature file " + path + ": row " +
                                 std::to_string(lineno) + " has " +
                                 std::to_string(row.size()) +
                                 " fields, expected " + std::to_string(width));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    fail(ErrorCode::Parse, "feature file " + path + ": fewer than 2 data rows");
  Eigen::MatrixXd raw(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t v = 0; v < width; ++v) raw(i, v) = rows[i][v];
  return normalize_features(std::move(raw), epsilon, seed);
}

// --- dataset bundle (binary, little-endian) ------------------------------

namespace {

constexpr char kMagic[8] = {'G', 'C', 'N', 'S', 'E', 'D', 'S', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof v);
}
void put_vec_d(std::ofstream& out, const Eigen::VectorXd& v) {
  std::int64_t sz = v.size();
  put(out, sz);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sz * sizeof(double)));
}
Eigen::VectorXd get_vec_d(std::ifstream& in) {
  std::int64_t sz;
  get(in, sz);
  Eigen::VectorXd v(sz);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sz * sizeof(double)));
  return v;
}
void put_vec_i(std::ofstream& out, const std::vector<std::int32_t>& v) {
  std::int64_t sz = static_cast<std::int64_t>(v.size());
  put(out, sz);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sz * sizeof(std::int32_t)));
}
std::vector<std::int32_t> get_vec_i(std::ifstream& in) {
  std::int64_t sz;
  get(in, sz);
  std::vector<std::int32_t> v(static_cast<std::size_t>(sz));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sz * sizeof(std::int32_t)));
  return v;
}

} // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write dataset bundle: " + path);
  out.write(kMagic, sizeof kMagic);
  put(out, static_cast<std::int32_t>(ds.n));
  put(out, static_cast<std::int32_t>(ds.m_dim));
  put(out, static_cast<std::int32_t>(ds.adjacency_mode));
  put(out, static_cast<std::int32_t>(ds.sparse ? 1 : 0));
  put(out, static_cast<std::int32_t>(ds.params.model));
  put(out, ds.params.alpha);
  put(out, ds.params.lambda);
  put(out, ds.params.mu);
  put(out, ds.params.rho);
  put(out, ds.params.rho_test);
  put(out, ds.params.d);
  put(out, ds.seed);
  put_vec_d(out, ds.labels);
  put_vec_d(out, ds.hidden_u);
  std::int64_t feat_rows = ds.features.rows(), feat_cols = ds.features.cols();
  put(out, feat_rows);
  put(out, feat_cols);
  out.write(reinterpret_cast<const char*>(ds.features.data()),
            static_cast<std::streamsize>(feat_rows * feat_cols *
                                         sizeof(double)));
  if (ds.adjacency_mode == AdjacencyMode::GaussianEquivalent) {
    out.write(reinterpret_cast<const char*>(ds.adj_gaussian.data()),
              static_cast<std::streamsize>(static_cast<std::int64_t>(ds.n) *
                                           ds.n * sizeof(double)));
  } else if (ds.sparse) {
    for (const auto& row : ds.adj_rows) put_vec_i(out, row);
  } else {
    out.write(reinterpret_cast<const char*>(ds.adj_dense.data()),
              static_cast<std::streamsize>(static_cast<std::int64_t>(ds.n) *
                                           ds.n));
  }
  put_vec_i(out, ds.train_mask);
  put_vec_i(out, ds.test_mask);
  put_vec_i(out, ds.node_order);
  if (!out) fail(ErrorCode::Io, "short write on dataset bundle: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open dataset bundle: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    fail(ErrorCode::Parse, "not a dataset bundle: " + path);
  Dataset ds;
  std::int32_t n, m, mode, sparse, model;
  get(in, n);
  get(in, m);
  get(in, mode);
  get(in, sparse);
  get(in, model);
  ds.n = n;
  ds.m_dim = m;
  ds.adjacency_mode = static_cast<AdjacencyMode>(mode);
  ds.sparse = sparse != 0;
  ds.params.model = static_cast<Model>(model);
  get(in, ds.params.alpha);
  get(in, ds.params.lambda);
  get(in, ds.params.mu);
  get(in, ds.params.rho);
  get(in, ds.params.rho_test);
  get(in, ds.params.d);
  get(in, ds.seed);
  ds.labels = get_vec_d(in);
  ds.hidden_u = get_vec_d(in);
  std::int64_t feat_rows, feat_cols;
  get(in, feat_rows);
  get(in, feat_cols);
  ds.features.resize(feat_rows, feat_cols);
  in.read(reinterpret_cast<char*>(ds.features.data()),
          static_cast<std::streamsize>(feat_rows * feat_cols * sizeof(double)));
  if (ds.adjacency_mode == AdjacencyMode::GaussianEquivalent) {
    ds.adj_gaussian.resize(ds.n, ds.n);
    in.read(reinterpret_cast<char*>(ds.adj_gaussian.data()),
            static_cast<std::streamsize>(static_cast<std::int64_t>(ds.n) *
                                         ds.n * sizeof(double)));
  } else if (ds.sparse) {
    ds.adj_rows.resize(ds.n);
    for (auto& row : ds.adj_rows) row = get_vec_i(in);
  } else {
    ds.adj_dense.resize(ds.n, ds.n);
    in.read(reinterpret_cast<char*>(ds.adj_dense.data()),
            static_cast<std::streamsize>(static_cast<std::int64_t>(ds.n) *
                                         ds.n));
  }
  ds.train_mask = get_vec_i(in);
  ds.test_mask = get_vec_i(in);
  ds.node_order = get_vec_i(in);
  if (!in) fail(ErrorCode::Parse, "truncated dataset bundle: " + path);
  return ds;
}

} // namespace gcnse
