#include "gsgd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "gsgd/dense_kernels.hpp"
#include "gsgd/diagnostics.hpp"
#include "gsgd/errors.hpp"
#include "gsgd/io.hpp"
#include "gsgd/rng.hpp"

namespace gsgd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  KeyValueConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + it->second + "'");
  }
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size() || v < 0) throw std::invalid_argument(it->second);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad count '" + it->second + "'");
  }
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key, std::uint64_t def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad seed '" + it->second + "'");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError("config key '" + key + "': bad boolean '" + it->second + "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  std::vector<double> out;
  for (const std::string& tok : split(it->second, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    try {
      out.push_back(std::stod(t));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad number '" + t + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(
    const std::string& key, const std::vector<std::string>& def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  std::vector<std::string> out;
  for (const std::string& tok : split(it->second, ',')) {
    const std::string t = trim(tok);
    if (!t.empty()) out.push_back(t);
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

RatingsDataset ingest_ratings(const std::string& path, RatingsFormat format,
                              double holdout_fraction, std::uint64_t seed) {
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0)
    throw BadParameter("ingest_ratings: holdout_fraction outside [0, 1)");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open ratings file: " + path);

  std::unordered_map<long long, std::size_t> user_map;
  std::unordered_map<long long, std::size_t> item_map;
  std::unordered_map<std::uint64_t, std::size_t> slot;  // (user, item) -> entry index
  std::vector<ObsEntry> entries;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = format == RatingsFormat::DoubleColon
                                          ? split_on(line, "::")
                                          : split(line, ',');
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected user, item, rating[, timestamp]");
    long long uid = 0;
    long long iid = 0;
    double rating = 0.0;
    try {
      uid = std::stoll(trim(fields[0]));
      iid = std::stoll(trim(fields[1]));
      rating = std::stod(trim(fields[2]));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed fields");
    }
    if (!std::isfinite(rating))
      throw ParseError(path + ":" + std::to_string(lineno) + ": non-finite rating");
    const auto [uit, unew] = user_map.try_emplace(uid, user_map.size());
    const auto [iit, inew] = item_map.try_emplace(iid, item_map.size());
    const std::uint64_t key =
        (static_cast<std::uint64_t>(uit->second) << 32) | iit->second;
    auto sit = slot.find(key);
    if (sit != slot.end()) {
      entries[sit->second].value = rating;  // duplicates keep the last value
    } else {
      slot.emplace(key, entries.size());
      entries.push_back({uit->second, iit->second, rating});
    }
  }
  if (entries.empty()) throw EmptyDataset("ingest_ratings: no ratings in " + path);

  RatingsDataset ds;
  ds.user_count = user_map.size();
  ds.item_count = item_map.size();

  const std::size_t hold = static_cast<std::size_t>(
      std::floor(holdout_fraction * static_cast<double>(entries.size())));
  if (hold == 0) {
    ds.entries = std::move(entries);
    return ds;
  }
  std::vector<std::size_t> idx(entries.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto rng = make_rng(seed, /*stream=*/11);
  for (std::size_t t = 0; t < hold; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, idx.size() - 1);
    std::swap(idx[t], idx[pick(rng)]);
  }
  std::vector<char> held(entries.size(), 0);
  for (std::size_t t = 0; t < hold; ++t) held[idx[t]] = 1;
  for (std::size_t k = 0; k < entries.size(); ++k)
    (held[k] ? ds.holdout : ds.entries).push_back(entries[k]);
  return ds;
}

ProblemSetup make_problem(const SynthConfig& synth_in, double p, double sigma,
                          double false_edges, std::uint64_t seed) {
  SynthConfig synth = synth_in;
  synth.seed = seed;
  ProblemSetup s;
  s.inst = generate_instance(synth);
  s.g1_used = false_edges > 0.0
                  ? perturb_edges(s.inst.g1, false_edges, mix_seed(seed, 4))
                  : s.inst.g1;
  s.g2_used = false_edges > 0.0
                  ? perturb_edges(s.inst.g2, false_edges, mix_seed(seed, 5))
                  : s.inst.g2;
  s.obs = bernoulli_sample(s.inst.x_star, p, sigma, mix_seed(seed, 3));
  return s;
}

namespace {

SynthConfig synth_config_from(const KeyValueConfig& cfg) {
  SynthConfig s;
  s.m = cfg.get_size("m", 200);
  s.n = cfg.get_size("n", 200);
  s.r = cfg.get_size("r", 5);
  const std::string kind = cfg.get_string("graph", "knn");
  if (kind == "knn") {
    s.graph_kind = GraphKind::KnnUniformPoints;
  } else if (kind == "community") {
    s.graph_kind = GraphKind::Community;
  } else {
    throw ConfigError("graph must be 'knn' or 'community', got '" + kind + "'");
  }
  s.graph_params.k = cfg.get_size("k", 10);
  s.graph_params.communities = cfg.get_size("communities", 2);
  s.graph_params.intra_p = cfg.get_double("intra_p", 0.5);
  s.graph_params.inter_p = cfg.get_double("inter_p", 0.01);
  s.filter_scale = cfg.get_double("filter_scale", 1.0);
  s.identity_filter = cfg.get_bool("identity_filter", false);
  s.seed = cfg.get_seed("seed", 0);
  return s;
}

SolverConfig solver_config_from(const KeyValueConfig& cfg) {
  SolverConfig c;
  const std::string method = cfg.get_string("method", "gsgd");
  const auto parsed = parse_method(method);
  if (!parsed) throw ConfigError("unknown method '" + method + "'");
  c.method = *parsed;
  c.rank = cfg.get_size("r", 5);
  const std::string eta = cfg.get_string("eta", "auto");
  if (eta != "auto") c.eta = cfg.get_double("eta", 0.0);
  c.beta = cfg.get_double("beta", 1.0);
  c.lambda = cfg.get_double("lambda", 1.0);
  c.max_iters = cfg.get_size("max_iters", 500);
  if (cfg.has("target_rmse")) c.target_rmse = cfg.get_double("target_rmse", 0.0);
  c.rel_change_tol = cfg.get_double("rel_change_tol", 1e-7);
  const std::string proj = cfg.get_string("projection", "disabled");
  if (proj == "disabled") {
    c.projection.mode = ProjectionConfig::Mode::Disabled;
  } else if (proj == "auto") {
    c.projection.mode = ProjectionConfig::Mode::Auto;
  } else if (proj == "fixed") {
    c.projection.mode = ProjectionConfig::Mode::Fixed;
    c.projection.radius = cfg.get_double("radius", 0.0);
  } else {
    throw ConfigError("projection must be disabled|auto|fixed, got '" + proj + "'");
  }
  c.projection.c_b = cfg.get_double("c_b", 1.1);
  const std::string init = cfg.get_string(
      "init", c.method == Method::Gsgd ? "graph" : "standard");
  if (init == "standard") {
    c.init = InitKind::Standard;
  } else if (init == "graph") {
    c.init = InitKind::Graph;
  } else {
    throw ConfigError("init must be standard|graph, got '" + init + "'");
  }
  c.seed = cfg.get_seed("seed", 0);
  return c;
}

std::string out_dir(const KeyValueConfig& cfg) {
  const std::string out = cfg.get_string("out", ".");
  std::filesystem::create_directories(out);
  return out;
}

double estimate_sigma1(const ObservationSet& obs) {
  DenseMatrix y = dense_from_observations(obs);
  y *= 1.0 / obs.sampling_probability();
  return top_r_svd(y, 1, 0).s.front();
}

}  // namespace

void cmd_synth(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  const SynthConfig synth = synth_config_from(cfg);
  const double p = cfg.get_double("p", 0.2);
  const double sigma = cfg.get_double("sigma", 0.0);
  const double false_edges = cfg.get_double("false_edges", 0.0);
  const ProblemSetup s = make_problem(synth, p, sigma, false_edges, synth.seed);

  write_matrix_csv(out + "/truth.csv", s.inst.x_star);
  write_graph(out + "/g1.txt", s.inst.g1);
  write_graph(out + "/g2.txt", s.inst.g2);
  if (false_edges > 0.0) {
    write_graph(out + "/g1_perturbed.txt", s.g1_used);
    write_graph(out + "/g2_perturbed.txt", s.g2_used);
  }
  write_observations(out + "/obs.txt", s.obs);
}

void cmd_run(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  if (!cfg.has("obs")) throw ConfigError("run: missing 'obs' (observation file)");
  ObservationSet obs = read_observations(cfg.get_string("obs", ""));

  if (cfg.has("p")) {
    // Override the file's nominal sampling probability; 'empirical' uses
    // |Omega| / (m n) for real data without a nominal p.
    const std::string pv = cfg.get_string("p", "");
    const double p =
        pv == "empirical" ? obs.empirical_probability() : cfg.get_double("p", 0.0);
    obs = ObservationSet(obs.row_count(), obs.col_count(), obs.entries(), p);
  }

  std::optional<SimilarityGraph> g1;
  std::optional<SimilarityGraph> g2;
  if (cfg.has("g1")) g1 = read_graph(cfg.get_string("g1", ""));
  if (cfg.has("g2")) g2 = read_graph(cfg.get_string("g2", ""));

  std::optional<DenseMatrix> truth;
  if (cfg.has("truth")) truth = read_matrix_csv(cfg.get_string("truth", ""));

  std::vector<ObsEntry> holdout;
  bool have_holdout = false;
  if (cfg.has("holdout")) {
    std::size_t hm = 0;
    std::size_t hn = 0;
    holdout = read_entries(cfg.get_string("holdout", ""), hm, hn);
    have_holdout = true;
  }

  const SolverConfig sc = solver_config_from(cfg);
  const SolverTrace trace =
      run(sc, obs, g1 ? &*g1 : nullptr, g2 ? &*g2 : nullptr,
          truth ? &*truth : nullptr, have_holdout ? &holdout : nullptr);

  write_trace_csv(out + "/trace.csv", trace);
  write_matrix_csv(out + "/w.csv", trace.factors.w);
  write_matrix_csv(out + "/h.csv", trace.factors.h);
  if (trace.reason == StopReason::Error)
    throw NumericalError("run: " + trace.diagnostic);
}

void cmd_bench(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  const SynthConfig synth = synth_config_from(cfg);
  const std::vector<std::string> method_names =
      cfg.get_string_list("methods", {"gsgd", "scaledgd", "glgd", "gd"});
  std::vector<Method> methods;
  for (const std::string& mname : method_names) {
    const auto parsed = parse_method(mname);
    if (!parsed) throw ConfigError("bench: unknown method '" + mname + "'");
    methods.push_back(*parsed);
  }
  if (methods.empty()) throw ConfigError("bench: empty method list");
  const std::vector<double> p_list = cfg.get_double_list("p_list", {0.2});
  const std::vector<double> sigma_list = cfg.get_double_list("sigma_list", {0.0});
  const std::vector<double> seed_list = cfg.get_double_list("seeds", {0.0});
  const double false_edges = cfg.get_double("false_edges", 0.0);
  const std::vector<double> eta_mults =
      cfg.get_double_list("grid_eta_mults", {0.1, 0.25, 0.5, 0.75, 1.0});
  const std::vector<double> grid_betas = cfg.get_double_list("grid_betas", {0.5, 1.0, 2.0});
  const std::vector<double> grid_lambdas =
      cfg.get_double_list("grid_lambdas", {0.1, 1.0, 10.0});
  const std::size_t grid_iters = cfg.get_size("grid_iters", 150);
  const std::size_t final_iters = cfg.get_size("final_iters", 500);

  std::ofstream csv(out + "/bench.csv", std::ios::binary);
  if (!csv) throw ConfigError("bench: cannot write " + out + "/bench.csv");
  csv << "method,p,sigma,m,n,rmse,time_s\n";

  for (const Method method : methods) {
    for (const double p : p_list) {
      for (const double sigma : sigma_list) {
        double rmse_sum = 0.0;
        double time_sum = 0.0;
        for (const double seed_val : seed_list) {
          const std::uint64_t seed = static_cast<std::uint64_t>(seed_val);
          const ProblemSetup s = make_problem(synth, p, sigma, false_edges, seed);

          // 80/20 train/validation split of the observed entries, shared by
          // every method at this seed (paired comparison).
          std::vector<std::size_t> idx(s.obs.size());
          std::iota(idx.begin(), idx.end(), 0);
          auto rng = make_rng(seed, /*stream=*/13);
          const std::size_t val_count = idx.size() / 5;
          for (std::size_t t = 0; t < val_count; ++t) {
            std::uniform_int_distribution<std::size_t> pick(t, idx.size() - 1);
            std::swap(idx[t], idx[pick(rng)]);
          }
          std::vector<char> in_val(s.obs.size(), 0);
          for (std::size_t t = 0; t < val_count; ++t) in_val[idx[t]] = 1;
          std::vector<ObsEntry> train_entries;
          std::vector<ObsEntry> val_entries;
          for (std::size_t k = 0; k < s.obs.size(); ++k)
            (in_val[k] ? val_entries : train_entries).push_back(s.obs.entries()[k]);
          const ObservationSet train(s.obs.row_count(), s.obs.col_count(),
                                     std::move(train_entries), p * 0.8);

          const double sigma1_train = estimate_sigma1(train);
          const bool graph_method = method == Method::GlGd || method == Method::Gsgd;
          const std::vector<double> betas = graph_method ? grid_betas
                                                         : std::vector<double>{1.0};
          const std::vector<double> lambdas = method == Method::Gsgd
                                                  ? grid_lambdas
                                                  : std::vector<double>{1.0};
          SolverConfig best;
          double best_val = std::numeric_limits<double>::infinity();
          for (const double beta : betas) {
            for (const double lambda : lambdas) {
              for (const double mult : eta_mults) {
                SolverConfig c;
                c.method = method;
                c.rank = synth.r;
                c.beta = beta;
                c.lambda = lambda;
                c.eta = mult * default_step_size(method, beta, sigma1_train);
                c.max_iters = grid_iters;
                c.init = method == Method::Gsgd ? InitKind::Graph : InitKind::Standard;
                c.seed = seed;
                const SolverTrace t =
                    run(c, train, &s.g1_used, &s.g2_used, nullptr, nullptr);
                if (t.reason == StopReason::Error) continue;
                const double val = rmse_holdout(val_entries, t.factors);
                if (val < best_val) {
                  best_val = val;
                  best = c;
                }
              }
            }
          }
          if (!std::isfinite(best_val))
            throw NumericalError("bench: every grid candidate failed");

          best.max_iters = final_iters;
          const auto t0 = std::chrono::steady_clock::now();
          const SolverTrace final_trace =
              run(best, s.obs, &s.g1_used, &s.g2_used, &s.inst.x_star, nullptr);
          const double secs =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
          rmse_sum += rmse_complement(s.inst.x_star, s.obs, final_trace.factors);
          time_sum += secs;
        }
        const double denom = static_cast<double>(seed_list.size());
        csv << method_name(method) << ',' << format_double(p) << ','
            << format_double(sigma) << ',' << synth.m << ',' << synth.n << ','
            << format_double(rmse_sum / denom) << ','
            << format_double(time_sum / denom) << '\n';
      }
    }
  }
}

void cmd_ingest(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  if (!cfg.has("ratings")) throw ConfigError("ingest: missing 'ratings' path");
  const std::string fmt = cfg.get_string("format", "double_colon");
  RatingsFormat format;
  if (fmt == "double_colon") {
    format = RatingsFormat::DoubleColon;
  } else if (fmt == "csv") {
    format = RatingsFormat::CsvTriplets;
  } else {
    throw ConfigError("ingest: format must be double_colon|csv, got '" + fmt + "'");
  }
  const double holdout_fraction = cfg.get_double("holdout_fraction", 0.3);
  const std::uint64_t seed = cfg.get_seed("seed", 0);
  const RatingsDataset ds =
      ingest_ratings(cfg.get_string("ratings", ""), format, holdout_fraction, seed);

  const ObservationSet obs(ds.user_count, ds.item_count, ds.entries,
                           std::max(1e-12, static_cast<double>(ds.entries.size()) /
                                               (static_cast<double>(ds.user_count) *
                                                static_cast<double>(ds.item_count))));
  write_observations(out + "/obs.txt", obs);
  if (!ds.holdout.empty())
    write_entries(out + "/holdout.txt", ds.user_count, ds.item_count, ds.holdout);

  const std::size_t k = cfg.get_size("knn_k", 10);
  if (cfg.has("user_features")) {
    const DenseMatrix feats = read_matrix_csv(cfg.get_string("user_features", ""));
    if (feats.rows() != ds.user_count)
      throw ConfigError("ingest: user feature rows do not match user count");
    write_graph(out + "/g1.txt", knn_graph(feats, k));
  } else if (cfg.has("g1")) {
    write_graph(out + "/g1.txt", read_graph(cfg.get_string("g1", "")));
  }
  if (cfg.has("item_features")) {
    const DenseMatrix feats = read_matrix_csv(cfg.get_string("item_features", ""));
    if (feats.rows() != ds.item_count)
      throw ConfigError("ingest: item feature rows do not match item count");
    write_graph(out + "/g2.txt", knn_graph(feats, k));
  } else if (cfg.has("g2")) {
    write_graph(out + "/g2.txt", read_graph(cfg.get_string("g2", "")));
  }
}

void cmd_eval(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  if (!cfg.has("g1") || !cfg.has("g2"))
    throw ConfigError("eval: both graph files (g1, g2) are required");
  const SimilarityGraph g1 = read_graph(cfg.get_string("g1", ""));
  const SimilarityGraph g2 = read_graph(cfg.get_string("g2", ""));
  const double beta = cfg.get_double("beta", 1.0);
  const double lambda = cfg.get_double("lambda", 1.0);
  const std::size_t r = cfg.get_size("r", 5);
  const GraphOperator op_w(g1, beta, lambda);
  const GraphOperator op_h(g2, beta, lambda);

  std::ofstream csv(out + "/eval.csv", std::ios::binary);
  if (!csv) throw ConfigError("eval: cannot write " + out + "/eval.csv");
  csv << "quantity,value\n";

  std::optional<DenseMatrix> truth;
  if (cfg.has("truth")) {
    truth = read_matrix_csv(cfg.get_string("truth", ""));
    const PsiSmoothness psi = psi_smoothness(*truth, op_w, op_h, r);
    csv << "psi_ratio," << format_double(psi.ratio) << '\n';
    csv << "psi," << format_double(psi.psi) << '\n';
    csv << "mu," << format_double(graph_incoherence_mu(*truth, r, op_w, op_h)) << '\n';
  }

  std::optional<FactorPair> factors;
  if (cfg.has("w") && cfg.has("h")) {
    FactorPair f;
    f.w = read_matrix_csv(cfg.get_string("w", ""));
    f.h = read_matrix_csv(cfg.get_string("h", ""));
    if (f.w.cols() != f.h.cols())
      throw ConfigError("eval: W and H have different ranks");
    factors = std::move(f);
  }

  if (factors && cfg.has("obs")) {
    const ObservationSet obs = read_observations(cfg.get_string("obs", ""));
    const RegularizerValues reg = regularizer_values(
        *factors, obs, op_w, op_h, g1.laplacian(), g2.laplacian(), beta);
    csv << "laplacian_reg," << format_double(reg.laplacian_reg) << '\n';
    csv << "higher_order_reg," << format_double(reg.higher_order_reg) << '\n';
  }

  if (factors && truth) {
    const TopRSvd svd = top_r_svd(*truth, factors->rank(), 0);
    FactorPair f_star;
    f_star.w = svd.u;
    f_star.h = svd.v;
    for (std::size_t k = 0; k < svd.s.size(); ++k) {
      const double root = std::sqrt(std::max(svd.s[k], 0.0));
      for (std::size_t i = 0; i < f_star.w.rows(); ++i) f_star.w(i, k) *= root;
      for (std::size_t i = 0; i < f_star.h.rows(); ++i) f_star.h(i, k) *= root;
    }
    const AlignmentResult a =
        aligned_distance(*factors, f_star, op_w, op_h, svd.s);
    csv << "aligned_dist," << format_double(a.dist) << '\n';
    csv << "aligned_foc," << format_double(a.foc_residual) << '\n';
    csv << "aligned_converged," << (a.converged ? 1 : 0) << '\n';
  }
}

void cmd_toy2d(const KeyValueConfig& cfg) {
  const std::string out = out_dir(cfg);
  const std::string which = cfg.get_string("case", "false_edge");
  double x1 = 0.0;
  double x2 = 0.0;
  if (which == "real_edge") {
    x1 = 1.0;
    x2 = 1.0;
  } else if (which == "false_edge") {
    x1 = 2.0;
    x2 = 1.0;
  } else {
    throw ConfigError("toy2d: case must be real_edge|false_edge");
  }
  const std::uint64_t seed = cfg.get_seed("seed", 7);
  const std::size_t iters = cfg.get_size("iters", 100);

  DenseMatrix x(2, 1);
  x(0, 0) = x1;
  x(1, 0) = x2;
  const SimilarityGraph g1(2, {{0, 1, 1.0}});
  const SimilarityGraph g2(1, {});
  const ObservationSet obs = bernoulli_sample(x, 1.0, 0.0, seed);

  // Fixed random initialization shared by all three methods; |H| is floored
  // so the Gram preconditioner of the first step is finite.
  auto rng = make_rng(seed, /*stream=*/21);
  std::normal_distribution<double> normal(0.0, 1.0);
  FactorPair f0;
  f0.w = DenseMatrix(2, 1);
  f0.h = DenseMatrix(1, 1);
  f0.w(0, 0) = 0.5 * normal(rng);
  f0.w(1, 0) = 0.5 * normal(rng);
  double h0 = 0.5 * normal(rng);
  while (std::abs(h0) < 0.2) h0 = 0.5 * normal(rng);
  f0.h(0, 0) = h0;

  const double beta = cfg.get_double("beta", 1.0);
  const double lambda = cfg.get_double("lambda", 1.0);
  const GraphOperator op_w(g1, beta, lambda);
  const GraphOperator op_h(g2, beta, lambda);
  const double sigma1 = std::sqrt(x1 * x1 + x2 * x2);

  const char* names[3] = {"scaledgd", "glgd", "gsgd"};
  for (int m = 0; m < 3; ++m) {
    FactorPair f = f0;
    std::ofstream csv(out + "/toy2d_" + which + "_" + names[m] + ".csv",
                      std::ios::binary);
    if (!csv) throw ConfigError("toy2d: cannot write trace for " + std::string(names[m]));
    csv << "iter,w1,w2,rmse\n";
    for (std::size_t it = 1; it <= iters; ++it) {
      if (m == 0) {
        f = scaledgd_step(f, obs, default_step_size(Method::ScaledGd, beta, sigma1));
      } else if (m == 1) {
        f = glgd_step(f, obs, default_step_size(Method::GlGd, beta, sigma1), beta,
                      g1.laplacian(), g2.laplacian());
      } else {
        f = gsgd_step(f, obs, default_step_size(Method::Gsgd, beta, sigma1), op_w,
                      op_h);
      }
      const DenseMatrix prod = f.product();
      const double rmse = frobenius_norm(prod - x) / std::sqrt(2.0);
      csv << it << ',' << format_double(f.w(0, 0)) << ',' << format_double(f.w(1, 0))
          << ',' << format_double(rmse) << '\n';
    }
  }
}

}  // namespace gsgd
