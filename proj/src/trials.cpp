#include "cfsvp/trials.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "cfsvp/errors.hpp"
#include "cfsvp/lattice_core.hpp"
#include "cfsvp/list_search.hpp"
#include "cfsvp/sphere_search.hpp"

namespace cfsvp {

namespace {

constexpr std::array<std::pair<TrialMode, std::string_view>, 5> kModeNames{{
    {TrialMode::solve, "solve"},
    {TrialMode::list, "list"},
    {TrialMode::e1_freq, "e1_freq"},
    {TrialMode::node_ratio, "node_ratio"},
    {TrialMode::rate_avg, "rate_avg"},
}};

Coefficients unit_vector(std::size_t n, std::size_t i) {
  Coefficients e(n, 0);
  e[i] = 1;
  return e;
}

// Counts heuristic candidates (unit vectors and round(c * t_raw), c = 1..4)
// that beat the optimum by more than the relative slack.
std::uint64_t count_dominance_violations(const ChannelInstance& ch, const Coefficients& best) {
  const double best_obj = channel_objective(ch, best);
  const double best_rate = computation_rate(ch, best);
  std::uint64_t violations = 0;
  auto check = [&](const Coefficients& a) {
    if (std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; })) return;
    const double obj = channel_objective(ch, a);
    if (obj < best_obj * (1.0 - 1e-9) || computation_rate(ch, a) > best_rate * (1.0 + 1e-9) + 1e-12) {
      ++violations;
    }
  };
  for (std::size_t i = 0; i < ch.size(); ++i) check(unit_vector(ch.size(), i));
  const std::vector<double> t_raw = scale_channel(ch);
  for (int c = 1; c <= 4; ++c) {
    Coefficients a(t_raw.size());
    std::transform(t_raw.begin(), t_raw.end(), a.begin(), [c](double x) { return round_nearest(c * x); });
    check(a);
  }
  return violations;
}

}  // namespace

std::string_view to_string(TrialMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

std::optional<TrialMode> parse_mode(std::string_view name) {
  for (const auto& [m, label] : kModeNames) {
    if (label == name) return m;
  }
  return std::nullopt;
}

double TrialConfig::power() const { return std::pow(10.0, snr_db / 10.0); }

void TrialConfig::validate() const {
  if (trials == 0) throw InputError("trials must be at least 1");
  if (n == 0) throw InputError("dimension n must be at least 1");
  if (mode != TrialMode::solve && mode != TrialMode::list && n < 2) {
    throw InputError("statistical modes need n >= 2");
  }
  if (!std::isfinite(snr_db)) throw InputError("snr_db must be finite");
  if (list_size == 0) throw InputError("list size must be at least 1");
  if (parallel == 0) throw InputError("parallel must be at least 1");
}

std::vector<double> sample_channel(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> h(n);
  for (auto& x : h) x = normal(gen);
  return h;
}

TrialRecord run_trial(const TrialConfig& cfg, std::uint64_t index) {
  TrialRecord rec;
  rec.index = index;
  const ChannelInstance ch{sample_channel(cfg.n, cfg.seed, index), cfg.power()};
  for (double x : ch.h) rec.h_norm2 += x * x;

  try {
    switch (cfg.mode) {
      case TrialMode::e1_freq: {
        rec.e1_hit = e1_shortcut(canonicalize(ch));
        break;
      }
      case TrialMode::node_ratio: {
        const ScaledChannel sc = canonicalize(ch);
        rec.e1_hit = e1_shortcut(sc);
        rec.tree_nodes = count_fixed_radius_nodes(sc);
        rec.set_nodes = count_tree_nodes(sc);
        rec.search_nodes = modified_search(sc).nodes_visited;
        const double scale = static_cast<double>(cfg.n) * std::sqrt(1.0 + ch.power * rec.h_norm2);
        rec.node_ratio = static_cast<double>(rec.tree_nodes) / scale;
        rec.set_ratio = static_cast<double>(rec.set_nodes) / scale;
        break;
      }
      case TrialMode::solve: {
        const Solution sol = solve(ch);
        rec.rate = sol.rate;
        rec.search_nodes = sol.stats.nodes_visited;
        rec.e1_hit = sol.stats.used_shortcut;
        break;
      }
      case TrialMode::rate_avg: {
        const ScaledChannel sc = canonicalize(ch);
        const Solution sol = solve(ch);
        rec.rate = sol.rate;
        rec.search_nodes = sol.stats.nodes_visited;
        rec.e1_hit = sol.stats.used_shortcut;
        rec.e1_rate = computation_rate(ch, restore(sc.perm, unit_vector(cfg.n, 0)));
        rec.dominance_violations = count_dominance_violations(ch, sol.a);
        break;
      }
      case TrialMode::list: {
        const auto list = list_solve(ch, cfg.list_size);
        rec.list_length = list.size();
        rec.rate = list.empty() ? 0.0 : list.front().rate;
        break;
      }
    }
  } catch (const NumericError& e) {
    rec.error = e.what();
  }
  return rec;
}

TrialReport run_trials(const TrialConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<TrialRecord> records(cfg.trials);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(cfg.parallel, cfg.trials));
  if (workers <= 1) {
    for (std::uint64_t j = 0; j < cfg.trials; ++j) records[j] = run_trial(cfg, j);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t j = next++; j < cfg.trials; j = next++) records[j] = run_trial(cfg, j);
      });
    }
    for (auto& th : pool) th.join();
  }

  TrialReport rep;
  rep.config = cfg;
  double ratio_sum = 0.0;
  double set_ratio_sum = 0.0;
  double tree_sum = 0.0;
  double set_sum = 0.0;
  double search_sum = 0.0;
  double rate_sum = 0.0;
  double e1_rate_sum = 0.0;
  double length_sum = 0.0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++rep.degenerate;
      continue;
    }
    ++rep.completed;
    rep.e1_hits += r.e1_hit ? 1 : 0;
    ratio_sum += r.node_ratio;
    rep.node_ratio_max = std::max(rep.node_ratio_max, r.node_ratio);
    set_ratio_sum += r.set_ratio;
    rep.set_ratio_max = std::max(rep.set_ratio_max, r.set_ratio);
    tree_sum += static_cast<double>(r.tree_nodes);
    set_sum += static_cast<double>(r.set_nodes);
    search_sum += static_cast<double>(r.search_nodes);
    rep.search_exceeds_tree += (cfg.mode == TrialMode::node_ratio && r.search_nodes > r.tree_nodes + 1) ? 1 : 0;
    rate_sum += r.rate;
    e1_rate_sum += r.e1_rate;
    rep.dominance_violations += r.dominance_violations;
    length_sum += static_cast<double>(r.list_length);
    rep.short_lists += (cfg.mode == TrialMode::list && r.list_length < cfg.list_size) ? 1 : 0;
  }
  if (rep.completed > 0) {
    const double c = static_cast<double>(rep.completed);
    rep.e1_fraction = static_cast<double>(rep.e1_hits) / c;
    rep.node_ratio_avg = ratio_sum / c;
    rep.set_ratio_avg = set_ratio_sum / c;
    rep.tree_nodes_avg = tree_sum / c;
    rep.set_nodes_avg = set_sum / c;
    rep.search_nodes_avg = search_sum / c;
    rep.rate_avg = rate_sum / c;
    rep.e1_rate_avg = e1_rate_sum / c;
    rep.list_length_avg = length_sum / c;
  }
  if (cfg.per_trial) rep.records = std::move(records);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace cfsvp
