#pragma once

// Monte-Carlo harness over i.i.d. standard Gaussian channels.
//
// Trial j draws its channel from a generator seeded by (seed, j) only, and the
// aggregates are reduced in trial order, so a report does not depend on how
// many worker threads ran the trials.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cfsvp {

enum class TrialMode { solve, list, e1_freq, node_ratio, rate_avg };

std::string_view to_string(TrialMode mode);
std::optional<TrialMode> parse_mode(std::string_view name);

struct TrialConfig {
  std::size_t n = 2;
  double snr_db = 0.0;  // P = 10^(snr_db / 10)
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t list_size = 5;  // used by TrialMode::list
  TrialMode mode = TrialMode::e1_freq;
  unsigned parallel = 1;
  bool per_trial = false;

  double power() const;
  // Throws InputError on trials == 0, n == 0, n < 2 in statistical modes,
  // non-finite snr_db, list_size == 0 or parallel == 0.
  void validate() const;
};

// n standard normal draws. The stream is std::mt19937_64 seeded through
// std::seed_seq with the 32-bit halves of (seed, trial), fed to
// std::normal_distribution<double>.
std::vector<double> sample_channel(std::size_t n, std::uint64_t seed, std::uint64_t trial);

struct TrialRecord {
  std::uint64_t index = 0;
  double h_norm2 = 0.0;
  bool e1_hit = false;
  std::uint64_t tree_nodes = 0;   // count_fixed_radius_nodes
  std::uint64_t set_nodes = 0;    // count_tree_nodes
  std::uint64_t search_nodes = 0;
  double node_ratio = 0.0;        // tree_nodes / (n sqrt(1 + P |h|^2))
  double set_ratio = 0.0;         // set_nodes / (n sqrt(1 + P |h|^2))
  double rate = 0.0;
  double e1_rate = 0.0;
  std::uint64_t dominance_violations = 0;
  std::size_t list_length = 0;
  std::string error;  // non-empty when the trial hit a numeric degeneracy
};

struct TrialReport {
  TrialConfig config;
  std::uint64_t completed = 0;
  std::uint64_t degenerate = 0;

  std::uint64_t e1_hits = 0;
  double e1_fraction = 0.0;

  double node_ratio_avg = 0.0;
  double node_ratio_max = 0.0;
  double set_ratio_avg = 0.0;
  double set_ratio_max = 0.0;
  double tree_nodes_avg = 0.0;
  double set_nodes_avg = 0.0;
  double search_nodes_avg = 0.0;
  std::uint64_t search_exceeds_tree = 0;  // trials with search_nodes > tree_nodes + 1

  double rate_avg = 0.0;
  double e1_rate_avg = 0.0;
  std::uint64_t dominance_violations = 0;

  double list_length_avg = 0.0;
  std::uint64_t short_lists = 0;

  double wall_time = 0.0;  // seconds
  std::vector<TrialRecord> records;  // filled only when config.per_trial
};

// Runs one trial; exposed so tests can check single records.
TrialRecord run_trial(const TrialConfig& cfg, std::uint64_t index);

TrialReport run_trials(const TrialConfig& cfg);

enum class ReportFormat { json_lines, csv };

std::optional<ReportFormat> parse_format(std::string_view name);

using FieldValue = std::variant<std::uint64_t, double>;

// Mode-specific aggregate fields in output order (excludes wall_time).
std::vector<std::pair<std::string, FieldValue>> result_fields(const TrialReport& report);

// json-lines: one aggregate object
//   {"mode", "n", "snr_db", "trials", "seed", ["list_size",] "result": {...}, "wall_time"}
// followed by one {"trial": j, ...} object per record.
// csv: a header and one aggregate row (mode,n,snr_db,trials,seed,<result fields>,wall_time);
// per-trial rows follow after a blank line under their own header.
// Throws std::runtime_error if the stream fails.
void emit_report(const TrialReport& report, ReportFormat format, std::ostream& out);

}  // namespace cfsvp
