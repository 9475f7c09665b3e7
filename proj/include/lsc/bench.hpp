#ifndef LSC_BENCH_HPP
#define LSC_BENCH_HPP

// Timing harness comparing the exact cosine-similarity scan against the
// constant-time closest-center search on synthetic embeddings.
//
// Stages per repetition, over identical batches in identical order:
//   t_d  stream + decode the embedding file
//   t_f  forward time; no network runs here, so this is a configured constant
//   t_c  oracle cosine-similarity argmax
//   t_n  closest-center prediction
// Search and total acceleration: K_s = t_c / t_n and
// K_t = (t_d + t_f + t_c) / (t_d + t_f + t_n).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsc/closest_center.hpp"
#include "lsc/label_map.hpp"
#include "lsc/label_store.hpp"
#include "lsc/labeled_search.hpp"
#include "lsc/monitor.hpp"
#include "lsc/oracle.hpp"
#include "lsc/projected.hpp"
#include "lsc/vector_system.hpp"

namespace lsc::bench {

inline constexpr const char* kRngId = "mt19937_64+box-muller/v1";

enum class Strategy { kAlg1, kBruteForce, kBestFirst, kDfs };
enum class SystemKind { kPlain, kProjected };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kAlg1: return "alg1";
    case Strategy::kBruteForce: return "bruteforce";
    case Strategy::kBestFirst: return "bestfirst";
    case Strategy::kDfs: return "dfs";
  }
  return "?";
}

inline const char* to_string(SystemKind s) { return s == SystemKind::kPlain ? "plain" : "projected"; }

inline double search_acceleration(double t_c, double t_n) {
  if (!(t_n > 0)) throw ParameterError("t_n must be positive");
  return t_c / t_n;
}

inline double total_acceleration(double t_d, double t_f, double t_c, double t_n) {
  const double den = t_d + t_f + t_n;
  if (!(den > 0)) throw ParameterError("t_d + t_f + t_n must be positive");
  return (t_d + t_f + t_c) / den;
}

struct BenchConfig {
  std::uint64_t n_classes = 10000;
  std::uint32_t m = 2;
  std::uint32_t k = 2;
  std::optional<std::uint32_t> dim;  // embedding dimension; smallest admissible when unset
  std::uint64_t query_count = 10000;
  std::size_t batch_size = 256;
  double noise_sigma = 0.1;
  Strategy strategy = Strategy::kAlg1;
  SystemKind system = SystemKind::kPlain;
  unsigned repetitions = 3;
  unsigned warmup = 1;
  std::uint64_t seed = 42;
  double tf_seconds = 0.0;
  std::uint64_t mem_budget = std::uint64_t{2} << 30;
  unsigned threads = 1;  // > 1 adds a parallel-throughput measurement of t_n
  bool oracle = true;
  std::optional<MonitorConfig> monitor;

  std::uint32_t min_dim() const {
    if (system == SystemKind::kPlain) return choose_min_dim(n_classes, m, k);
    // Working dimension n is one below the base system V_{n+1}^{mk}.
    return std::max<std::uint32_t>(choose_min_dim(n_classes, m, k), m + k) - 1;
  }

  std::uint32_t resolved_dim() const {
    const std::uint32_t lo = min_dim();
    if (dim && *dim < lo)
      throw ParameterError("dimension " + std::to_string(*dim) + " is below the minimum " + std::to_string(lo) +
                           " for " + std::to_string(n_classes) + " classes");
    return dim ? *dim : lo;
  }

  void validate() const {
    if (n_classes < 1) throw ParameterError("n_classes must be positive");
    if (query_count < 1) throw ParameterError("query count must be positive");
    if (batch_size < 1) throw ParameterError("batch size must be positive");
    if (repetitions < 1) throw ParameterError("repetitions must be positive");
    if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma)) throw ParameterError("noise sigma must be >= 0");
    if (!(tf_seconds >= 0)) throw ParameterError("t_f must be >= 0");
    if (m + k < 1) throw ParameterError("vector system needs m + k >= 1");
    if (m + k > kMaxSignedEntries) throw ParameterError("m + k exceeds code capacity");
    if (system == SystemKind::kProjected && strategy != Strategy::kAlg1)
      throw ParameterError("projected systems support only the alg1 strategy");
    const std::uint32_t n = resolved_dim();
    if (n > kMaxDim) throw ParameterError("dimension exceeds 65535");
    const std::uint64_t capacity = system == SystemKind::kPlain
                                       ? count_vectors(SystemParams(n, m, k))
                                       : count_vectors(SystemParams(n + 1, m, k));
    if (n_classes > capacity) throw ParameterError("n_classes exceeds the number of system vectors");
  }
};

/// Seeded standard-normal source: mt19937_64 words to doubles in [0, 1),
/// Box-Muller pairs. Fully specified so datasets are reproducible across
/// standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 rng_;
  std::optional<double> spare_;
};

struct Dataset {
  BenchConfig config;
  std::uint32_t dim = 0;
  std::optional<LabelMap> plain;
  std::optional<ProjectedLabelMap> projected;
  EmbeddingBatch queries;
  std::vector<std::int64_t> truth;

  std::uint64_t n_classes() const { return plain ? plain->n_classes() : projected->n_classes(); }
};

namespace detail {

inline CenterVector center_of_label(const Dataset& ds, std::int64_t label) {
  if (ds.plain) return decode(*ds.plain->code_for_label(label), ds.plain->params());
  for (std::size_t s = 0; s < kSubsystemCount; ++s) {
    const auto& part = ds.projected->part(s);
    if (!part) continue;
    if (const CenterCode* c = part->code_for_label(label)) return decode(*c, part->params());
  }
  throw InputError("label " + std::to_string(label) + " not present");
}

}  // namespace detail

/// Labels the first n_classes centers in canonical order and draws
/// query_count embeddings normalize(center + sigma * N(0, I)) around
/// uniformly chosen labels.
inline Dataset generate_dataset(const BenchConfig& config) {
  config.validate();
  Dataset ds;
  ds.config = config;
  ds.dim = config.resolved_dim();
  if (config.system == SystemKind::kPlain) {
    ds.plain = canonical_label_map(SystemParams(ds.dim, config.m, config.k), config.n_classes);
  } else {
    ds.projected = canonical_projected_map(project(SystemParams(ds.dim + 1, config.m, config.k)), config.n_classes);
  }

  // Centers are materialized per label once; datasets only ever label a
  // contiguous range 0..n_classes-1.
  NormalSource src(config.seed);
  std::vector<float> values;
  values.reserve(config.query_count * ds.dim);
  ds.truth.reserve(config.query_count);
  std::vector<double> row(ds.dim);
  for (std::uint64_t q = 0; q < config.query_count; ++q) {
    const auto label = static_cast<std::int64_t>(src.below(config.n_classes));
    const CenterVector c = detail::center_of_label(ds, label);
    double sq = 0;
    do {
      sq = 0;
      for (std::uint32_t d = 0; d < ds.dim; ++d) {
        row[d] = c.coords[d] + config.noise_sigma * src.normal();
        sq += row[d] * row[d];
      }
    } while (sq == 0);
    const double inv = 1.0 / std::sqrt(sq);
    for (std::uint32_t d = 0; d < ds.dim; ++d) values.push_back(static_cast<float>(row[d] * inv));
    ds.truth.push_back(label);
  }
  ds.queries = EmbeddingBatch(ds.dim, std::move(values), "synthetic");
  return ds;
}

inline nlohmann::json config_to_json(const BenchConfig& c, std::uint32_t dim) {
  nlohmann::json j{{"n_classes", c.n_classes}, {"m", c.m}, {"k", c.k}, {"dim", dim},
                   {"queries", c.query_count}, {"batch_size", c.batch_size}, {"noise_sigma", c.noise_sigma},
                   {"strategy", to_string(c.strategy)}, {"system", to_string(c.system)},
                   {"repetitions", c.repetitions}, {"warmup", c.warmup}, {"seed", c.seed},
                   {"tf_seconds", c.tf_seconds}, {"mem_budget", c.mem_budget}, {"threads", c.threads},
                   {"rng", kRngId}};
  return j;
}

struct DatasetFiles {
  std::filesystem::path dir;
  std::filesystem::path embeddings() const { return dir / "queries.lsce"; }
  std::filesystem::path truth() const { return dir / "truth.txt"; }
  std::filesystem::path meta() const { return dir / "meta.json"; }
  std::filesystem::path map() const { return dir / "map.lscd"; }
  std::filesystem::path map_part(std::size_t s) const { return dir / ("map.part" + std::to_string(s) + ".lscd"); }
};

/// Writes label map(s), embeddings, ground-truth labels and metadata into `dir`.
inline DatasetFiles write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetFiles files{dir};
  if (ds.plain) {
    save_map(*ds.plain, files.map().string());
  } else {
    for (std::size_t s = 0; s < kSubsystemCount; ++s)
      if (ds.projected->part(s)) save_map(*ds.projected->part(s), files.map_part(s).string());
  }
  save_batch(ds.queries, files.embeddings().string());
  std::ofstream truth(files.truth());
  for (auto t : ds.truth) truth << t << '\n';
  std::ofstream meta(files.meta());
  meta << config_to_json(ds.config, ds.dim).dump(2) << '\n';
  if (!truth || !meta) throw Error("failed to write dataset files into " + dir.string());
  return files;
}

struct StageStats {
  double median = 0;
  double mad = 0;  // median absolute deviation
  std::vector<double> samples;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline StageStats summarize(std::vector<double> samples) {
  StageStats s;
  s.median = median_of(samples);
  std::vector<double> dev;
  for (double x : samples) dev.push_back(std::abs(x - s.median));
  s.mad = median_of(dev);
  s.samples = std::move(samples);
  return s;
}

struct BenchReport {
  std::uint64_t n_classes = 0;
  std::uint32_t n_dim = 0;
  std::uint32_t m = 0, k = 0;
  std::size_t batch_size = 0;
  std::uint64_t queries = 0;
  Strategy strategy = Strategy::kAlg1;
  SystemKind system = SystemKind::kPlain;

  StageStats t_d, t_f, t_n;
  std::optional<StageStats> t_c;           // unset when the oracle is disabled or over budget
  std::optional<StageStats> t_n_parallel;  // throughput mode
  unsigned threads = 1;
  std::string oracle_status = "ok";

  std::optional<double> k_s, k_t;

  std::uint64_t unlabeled_hits = 0;  // rows whose closest center has no label
  std::uint64_t tie_rows = 0;
  std::uint64_t compared_rows = 0;  // non-tie rows compared against the oracle
  std::uint64_t agreeing_rows = 0;
  std::optional<double> accuracy_cossim;
  double accuracy_new = 0;
  std::vector<Alert> alerts;
  std::string rng = kRngId;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Predicted {
  std::int64_t label;
  bool tie;
};

inline std::vector<Predicted> run_new_method(const Dataset& ds, const std::vector<EmbeddingBatch>& batches,
                                             unsigned threads) {
  std::vector<Predicted> out;
  out.reserve(ds.config.query_count);
  for (const auto& b : batches) {
    if (ds.projected) {
      for (const auto& p : predict_projected(b, *ds.projected))
        out.push_back({p.prediction.label, p.prediction.on_tie_boundary});
      continue;
    }
    std::vector<Prediction> preds;
    switch (ds.config.strategy) {
      case Strategy::kAlg1:
        preds = threads > 1 ? predict_parallel(b, *ds.plain, threads) : predict(b, *ds.plain);
        break;
      case Strategy::kBruteForce: preds = predict_labeled(b, *ds.plain, SearchStrategy::kBruteForce); break;
      case Strategy::kBestFirst: preds = predict_labeled(b, *ds.plain, SearchStrategy::kBestFirst); break;
      case Strategy::kDfs: preds = predict_labeled(b, *ds.plain, SearchStrategy::kDfs); break;
    }
    for (const auto& p : preds) out.push_back({p.label, p.on_tie_boundary});
  }
  return out;
}

struct OracleOut {
  std::int64_t label;
  bool tie;
};

inline std::vector<OracleOut> run_oracle(const CenterMatrix& centers, const std::vector<EmbeddingBatch>& batches) {
  std::vector<OracleOut> out;
  for (const auto& b : batches)
    for (const auto& h : cossim_argmax_rows(b, centers)) out.push_back({centers.label(h.row), h.tie});
  return out;
}

}  // namespace detail

/// Times all stages over the embedding file at `embeddings_path`, which must
/// hold ds.queries.
inline BenchReport run_bench(const Dataset& ds, const std::string& embeddings_path) {
  const BenchConfig& cfg = ds.config;
  BenchReport rep;
  rep.n_classes = ds.n_classes();
  rep.n_dim = ds.dim;
  rep.m = cfg.m;
  rep.k = cfg.k;
  rep.batch_size = cfg.batch_size;
  rep.queries = cfg.query_count;
  rep.strategy = cfg.strategy;
  rep.system = cfg.system;
  rep.threads = cfg.threads;

  std::optional<CenterMatrix> centers;
  if (!cfg.oracle) {
    rep.oracle_status = "disabled";
  } else if (estimate_center_matrix_bytes(rep.n_classes, ds.dim) > cfg.mem_budget) {
    rep.oracle_status = "over memory budget";
  } else {
    centers = ds.plain ? CenterMatrix::from_label_map(*ds.plain) : CenterMatrix::from_union(*ds.projected);
    // Projected unions are scanned in full, labeled or not, but label
    // prediction only compares labeled centers.
    if (ds.projected) {
      std::vector<CenterVector> rows;
      std::vector<std::int64_t> labels;
      for (std::size_t r = 0; r < centers->rows(); ++r) {
        if (centers->label(r) == kUnlabeled) continue;
        CenterVector v{std::vector<std::int8_t>(ds.dim)};
        for (std::uint32_t d = 0; d < ds.dim; ++d) v.coords[d] = static_cast<std::int8_t>(centers->row(r)[d]);
        rows.push_back(std::move(v));
        labels.push_back(centers->label(r));
      }
      centers = CenterMatrix(ds.dim, rows, std::move(labels));
    }
  }

  std::vector<double> td, tf, tc, tn, tnp;
  std::vector<EmbeddingBatch> batches;
  std::vector<detail::Predicted> predicted;
  std::vector<detail::OracleOut> oracle_out;
  for (unsigned r = 0; r < cfg.warmup + cfg.repetitions; ++r) {
    const bool record = r >= cfg.warmup;
    auto t0 = detail::Clock::now();
    batches = stream_batches(embeddings_path, cfg.batch_size);
    const double d = detail::seconds_since(t0);

    double c = 0;
    if (centers) {
      t0 = detail::Clock::now();
      oracle_out = detail::run_oracle(*centers, batches);
      c = detail::seconds_since(t0);
    }

    t0 = detail::Clock::now();
    predicted = detail::run_new_method(ds, batches, 1);
    const double n = detail::seconds_since(t0);

    double np = 0;
    if (cfg.threads > 1 && ds.plain) {
      t0 = detail::Clock::now();
      auto par = detail::run_new_method(ds, batches, cfg.threads);
      np = detail::seconds_since(t0);
    }
    if (!record) continue;
    td.push_back(d);
    tf.push_back(cfg.tf_seconds);
    tn.push_back(n);
    if (centers) tc.push_back(c);
    if (cfg.threads > 1 && ds.plain) tnp.push_back(np);
  }

  rep.t_d = summarize(td);
  rep.t_f = summarize(tf);
  rep.t_n = summarize(tn);
  if (centers) rep.t_c = summarize(tc);
  if (!tnp.empty()) rep.t_n_parallel = summarize(tnp);
  if (rep.t_c && rep.t_n.median > 0) {
    rep.k_s = search_acceleration(rep.t_c->median, rep.t_n.median);
    rep.k_t = total_acceleration(rep.t_d.median, rep.t_f.median, rep.t_c->median, rep.t_n.median);
  }

  std::uint64_t correct_new = 0, correct_cos = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i].label == kUnlabeled) ++rep.unlabeled_hits;
    if (predicted[i].label == ds.truth[i]) ++correct_new;
    const bool tie = predicted[i].tie || (centers && oracle_out[i].tie);
    if (tie) ++rep.tie_rows;
    if (centers) {
      if (oracle_out[i].label == ds.truth[i]) ++correct_cos;
      // An unlabeled closest center has no counterpart among labeled centers.
      if (!tie && predicted[i].label != kUnlabeled) {
        ++rep.compared_rows;
        rep.agreeing_rows += oracle_out[i].label == predicted[i].label;
      }
    }
  }
  rep.accuracy_new = static_cast<double>(correct_new) / static_cast<double>(predicted.size());
  if (centers) rep.accuracy_cossim = static_cast<double>(correct_cos) / static_cast<double>(predicted.size());

  if (cfg.monitor) {
    UnlabeledMonitor monitor(*cfg.monitor);
    for (const auto& b : batches) {
      std::vector<Prediction> preds;
      if (ds.plain) {
        preds = predict(b, *ds.plain);
      } else {
        for (const auto& p : predict_projected(b, *ds.projected)) preds.push_back(p.prediction);
      }
      for (const auto& p : preds)
        if (auto a = monitor.observe(p)) rep.alerts.push_back(*a);
    }
  }
  return rep;
}

/// Generates the dataset for `config` into a scratch directory and runs it.
inline BenchReport run_bench(const BenchConfig& config, const std::filesystem::path& scratch_dir) {
  const Dataset ds = generate_dataset(config);
  const DatasetFiles files = write_dataset(ds, scratch_dir);
  return run_bench(ds, files.embeddings().string());
}

struct SweepRow {
  BenchConfig config;
  std::optional<BenchReport> report;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool partial_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.report; });
  }
};

/// One report per config; a failing config is recorded and the sweep moves on.
inline SweepResult sweep(const std::vector<BenchConfig>& configs, const std::filesystem::path& scratch_root) {
  if (configs.empty()) throw ParameterError("sweep needs at least one config");
  SweepResult out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    SweepRow row{configs[i], std::nullopt, {}};
    try {
      row.report = run_bench(configs[i], scratch_root / ("row" + std::to_string(i)));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// --- report emission ---

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : "-"; }

}  // namespace detail

inline const char* kCsvHeader =
    "exp,n_classes,n_dim,batch_size,t_d,t_f,t_c,t_n,K_s,K_t,t_d_mad,t_c_mad,t_n_mad,t_n_parallel,"
    "agreement,accuracy_cossim,accuracy_new,unlabeled_hits,tie_rows,strategy,system,status";

inline void write_csv(std::ostream& os, const SweepResult& result) {
  os << kCsvHeader << '\n';
  std::size_t exp = 1;
  for (const auto& row : result.rows) {
    const auto& c = row.config;
    if (!row.report) {
      os << exp++ << ',' << c.n_classes << ",-," << c.batch_size << ",-,-,-,-,-,-,-,-,-,-,-,-,-,-,-,"
         << to_string(c.strategy) << ',' << to_string(c.system) << ",\"error: " << row.error << "\"\n";
      continue;
    }
    const BenchReport& r = *row.report;
    std::optional<double> tc, tcm, tnp, agree;
    if (r.t_c) {
      tc = r.t_c->median;
      tcm = r.t_c->mad;
    }
    if (r.t_n_parallel) tnp = r.t_n_parallel->median;
    if (r.compared_rows) agree = static_cast<double>(r.agreeing_rows) / static_cast<double>(r.compared_rows);
    using detail::fmt;
    os << exp++ << ',' << r.n_classes << ',' << r.n_dim << ',' << r.batch_size << ',' << fmt(r.t_d.median) << ','
       << fmt(r.t_f.median) << ',' << fmt(tc) << ',' << fmt(r.t_n.median) << ',' << fmt(r.k_s) << ','
       << fmt(r.k_t) << ',' << fmt(r.t_d.mad) << ',' << fmt(tcm) << ',' << fmt(r.t_n.mad) << ',' << fmt(tnp)
       << ',' << fmt(agree) << ',' << fmt(r.accuracy_cossim) << ',' << fmt(r.accuracy_new) << ','
       << r.unlabeled_hits << ',' << r.tie_rows << ',' << to_string(r.strategy) << ',' << to_string(r.system)
       << ",\"" << r.oracle_status << "\"\n";
  }
}

/// Long format (one metric per line) for plotting.
inline void write_long_csv(std::ostream& os, const SweepResult& result) {
  os << "n_classes,n_dim,metric,value\n";
  for (const auto& row : result.rows) {
    if (!row.report) continue;
    const BenchReport& r = *row.report;
    auto put = [&](const char* metric, const std::optional<double>& v) {
      if (v) os << r.n_classes << ',' << r.n_dim << ',' << metric << ',' << detail::fmt(*v) << '\n';
    };
    put("t_d", r.t_d.median);
    put("t_f", r.t_f.median);
    put("t_c", r.t_c ? std::optional<double>(r.t_c->median) : std::nullopt);
    put("t_n", r.t_n.median);
    put("K_s", r.k_s);
    put("K_t", r.k_t);
  }
}

inline nlohmann::json stats_to_json(const StageStats& s) {
  return {{"median", s.median}, {"mad", s.mad}, {"samples", s.samples}};
}

inline nlohmann::json report_to_json(const BenchReport& r) {
  nlohmann::json j{{"n_classes", r.n_classes}, {"n_dim", r.n_dim}, {"m", r.m}, {"k", r.k},
                   {"batch_size", r.batch_size}, {"queries", r.queries}, {"strategy", to_string(r.strategy)},
                   {"system", to_string(r.system)}, {"t_d", stats_to_json(r.t_d)}, {"t_f", stats_to_json(r.t_f)},
                   {"t_n", stats_to_json(r.t_n)}, {"oracle_status", r.oracle_status},
                   {"unlabeled_hits", r.unlabeled_hits}, {"tie_rows", r.tie_rows},
                   {"compared_rows", r.compared_rows}, {"agreeing_rows", r.agreeing_rows},
                   {"accuracy_new", r.accuracy_new}, {"rng", r.rng}};
  j["t_c"] = r.t_c ? stats_to_json(*r.t_c) : nlohmann::json(nullptr);
  j["K_s"] = r.k_s ? nlohmann::json(*r.k_s) : nlohmann::json(nullptr);
  j["K_t"] = r.k_t ? nlohmann::json(*r.k_t) : nlohmann::json(nullptr);
  j["accuracy_cossim"] = r.accuracy_cossim ? nlohmann::json(*r.accuracy_cossim) : nlohmann::json(nullptr);
  if (r.t_n_parallel) {
    j["t_n_parallel"] = stats_to_json(*r.t_n_parallel);
    j["threads"] = r.threads;
  }
  nlohmann::json alerts = nlohmann::json::array();
  for (const auto& a : r.alerts) alerts.push_back(alert_to_json(a));
  j["alerts"] = alerts;
  return j;
}

inline nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    if (row.report) {
      rows.push_back(report_to_json(*row.report));
    } else {
      rows.push_back({{"n_classes", row.config.n_classes}, {"error", row.error}});
    }
  }
  return {{"rng", kRngId}, {"rows", rows}};
}

}  // namespace lsc::bench

#endif  // LSC_BENCH_HPP
