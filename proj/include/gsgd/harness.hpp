#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsgd/observation.hpp"
#include "gsgd/solvers.hpp"
#include "gsgd/synthetic.hpp"

namespace gsgd {

// Flat "key = value" configuration with '#' comments. Later set() calls win,
// which is how command-line flags override file values.
class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  std::size_t get_size(const std::string& key, std::size_t def) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& def) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& def) const;

  const std::map<std::string, std::string>& values() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

enum class RatingsFormat { DoubleColon, CsvTriplets };

struct RatingsDataset {
  std::size_t user_count = 0;
  std::size_t item_count = 0;
  std::vector<ObsEntry> entries;  // training entries after the holdout split
  std::vector<ObsEntry> holdout;
};

// Parses a ratings file, remaps ids to dense 0-based indices in first-seen
// order (duplicate (user, item) pairs keep the last value) and withholds a
// deterministic random fraction as the test split.
RatingsDataset ingest_ratings(const std::string& path, RatingsFormat format,
                              double holdout_fraction, std::uint64_t seed);

// One synthetic problem as the experiments use it: clean graphs and truth,
// optionally edge-corrupted copies handed to the solver, and sampled
// observations. All randomness derives from `seed`.
struct ProblemSetup {
  SyntheticInstance inst;
  SimilarityGraph g1_used;
  SimilarityGraph g2_used;
  ObservationSet obs;
};

ProblemSetup make_problem(const SynthConfig& synth, double p, double sigma,
                          double false_edges, std::uint64_t seed);

// Subcommand drivers. Each reads its keys from the config, writes its outputs
// under the `out` directory and throws on failure.
void cmd_synth(const KeyValueConfig& cfg);
void cmd_run(const KeyValueConfig& cfg);
void cmd_bench(const KeyValueConfig& cfg);
void cmd_ingest(const KeyValueConfig& cfg);
void cmd_eval(const KeyValueConfig& cfg);
void cmd_toy2d(const KeyValueConfig& cfg);

}  // namespace gsgd
