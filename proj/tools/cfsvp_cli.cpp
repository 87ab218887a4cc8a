// cfsvp: optimal compute-and-forward coefficient vectors and benchmark harness.
//
//   cfsvp solve --snr-db 20 --h 0.3 -1.2 0.8
//   cfsvp list --l 5 --snr-db 10 --h-file channel.txt
//   cfsvp bench --mode e1_freq --n 8 --snr-db 10 --trials 10000 --seed 1 --parallel 8
//   cfsvp oracle-check --n 4 --snr-db 20 --trials 500

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfsvp/errors.hpp"
#include "cfsvp/lattice_core.hpp"
#include "cfsvp/list_search.hpp"
#include "cfsvp/oracle.hpp"
#include "cfsvp/sphere_search.hpp"
#include "cfsvp/trials.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

struct ChannelArgs {
  std::size_t n = 0;
  double snr_db = 0.0;
  std::vector<double> h;
  std::string h_file;
  std::uint64_t seed = 0;
};

void add_channel_options(CLI::App* cmd, ChannelArgs& args) {
  cmd->add_option("--n", args.n, "Dimension; a random channel is drawn when no h is given");
  cmd->add_option("--snr-db", args.snr_db, "SNR in dB, P = 10^(dB/10)")->required();
  auto* inline_h = cmd->add_option("--h", args.h, "Channel gains inline");
  cmd->add_option("--h-file", args.h_file, "File of whitespace-separated channel gains")->excludes(inline_h);
  cmd->add_option("--seed", args.seed, "Seed used when drawing a random channel");
}

cfsvp::ChannelInstance make_channel(const ChannelArgs& args) {
  std::vector<double> h = args.h;
  if (!args.h_file.empty()) {
    std::ifstream in(args.h_file);
    if (!in) throw cfsvp::InputError("cannot open h file '" + args.h_file + "'");
    h.assign(std::istream_iterator<double>(in), std::istream_iterator<double>());
    if (!in.eof()) throw cfsvp::InputError("h file '" + args.h_file + "' contains a non-numeric token");
  }
  if (h.empty()) {
    if (args.n == 0) throw cfsvp::InputError("give --h, --h-file or --n");
    h = cfsvp::sample_channel(args.n, args.seed, 0);
  } else if (args.n != 0 && args.n != h.size()) {
    throw cfsvp::InputError("--n does not match the number of channel gains");
  }
  cfsvp::ChannelInstance ch{std::move(h), std::pow(10.0, args.snr_db / 10.0)};
  cfsvp::validate(ch);
  return ch;
}

int run_oracle_check(std::size_t n, double snr_db, std::uint64_t trials, std::uint64_t seed) {
  const double power = std::pow(10.0, snr_db / 10.0);
  std::uint64_t mismatches = 0;
  std::uint64_t refused = 0;
  for (std::uint64_t j = 0; j < trials; ++j) {
    const cfsvp::ChannelInstance ch{cfsvp::sample_channel(n, seed, j), power};
    const cfsvp::ScaledChannel sc = cfsvp::canonicalize(ch);
    const auto fast = cfsvp::modified_search(sc);
    const auto base = cfsvp::baseline_search(cfsvp::materialize_R(sc));
    cfsvp::SearchResult ref;
    try {
      ref = cfsvp::brute_force_svp(sc.t);
    } catch (const cfsvp::OracleLimitError&) {
      ++refused;
      continue;
    }
    const double tol = 1e-9 * ref.objective;
    if (std::fabs(fast.objective - ref.objective) > tol || std::fabs(base.objective - ref.objective) > tol) {
      ++mismatches;
    }
  }
  ordered_json out;
  out["n"] = n;
  out["snr_db"] = snr_db;
  out["trials"] = trials;
  out["seed"] = seed;
  out["mismatches"] = mismatches;
  out["refused"] = refused;
  std::cout << out.dump() << '\n';
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal compute-and-forward coefficient search"};
  // --h names the channel, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ChannelArgs solve_args;
  bool no_fast_path = false;
  auto* solve_cmd = app.add_subcommand("solve", "Optimal coefficient vector for one channel");
  add_channel_options(solve_cmd, solve_args);
  solve_cmd->add_flag("--no-e1-fast-path", no_fast_path, "Always run the search");

  ChannelArgs list_args;
  std::size_t list_len = 5;
  auto* list_cmd = app.add_subcommand("list", "L best coefficient vectors for one channel");
  add_channel_options(list_cmd, list_args);
  list_cmd->add_option("--l", list_len, "Number of candidates")->check(CLI::PositiveNumber);

  cfsvp::TrialConfig bench_cfg;
  std::string mode_name = "e1_freq";
  std::string format_name = "json-lines";
  std::string out_path;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo statistics over Gaussian channels");
  bench_cmd->add_option("--mode", mode_name, "e1_freq | node_ratio | rate_avg | list | solve");
  bench_cmd->add_option("--n", bench_cfg.n, "Dimension")->required();
  bench_cmd->add_option("--snr-db", bench_cfg.snr_db, "SNR in dB")->required();
  bench_cmd->add_option("--trials", bench_cfg.trials, "Number of channel realizations")->required();
  bench_cmd->add_option("--seed", bench_cfg.seed, "Base seed");
  bench_cmd->add_option("--parallel", bench_cfg.parallel, "Worker threads");
  bench_cmd->add_option("--l", bench_cfg.list_size, "List size for --mode list");
  bench_cmd->add_option("--format", format_name, "json-lines | csv");
  bench_cmd->add_option("--out", out_path, "Output file (default stdout)");
  bench_cmd->add_flag("--per-trial", bench_cfg.per_trial, "Also emit one record per trial");

  std::size_t check_n = 4;
  double check_snr = 0.0;
  std::uint64_t check_trials = 100;
  std::uint64_t check_seed = 0;
  auto* check_cmd = app.add_subcommand("oracle-check", "Compare both searches against brute force");
  check_cmd->add_option("--n", check_n, "Dimension")->required();
  check_cmd->add_option("--snr-db", check_snr, "SNR in dB")->required();
  check_cmd->add_option("--trials", check_trials, "Number of channel realizations")->required();
  check_cmd->add_option("--seed", check_seed, "Base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const auto ch = make_channel(solve_args);
      const auto sol = cfsvp::solve(ch, cfsvp::SolveOptions{!no_fast_path});
      ordered_json out;
      out["h"] = ch.h;
      out["snr_db"] = solve_args.snr_db;
      out["a"] = sol.a;
      out["rate"] = sol.rate;
      out["objective"] = sol.objective;
      out["nodes_visited"] = sol.stats.nodes_visited;
      out["used_shortcut"] = sol.stats.used_shortcut;
      std::cout << out.dump() << '\n';
    } else if (*list_cmd) {
      const auto ch = make_channel(list_args);
      const auto list = cfsvp::list_solve(ch, list_len);
      ordered_json out;
      out["h"] = ch.h;
      out["snr_db"] = list_args.snr_db;
      out["requested"] = list_len;
      out["candidates"] = ordered_json::array();
      for (const auto& c : list) {
        out["candidates"].push_back(ordered_json{{"a", c.a}, {"objective", c.objective}, {"rate", c.rate}});
      }
      std::cout << out.dump() << '\n';
    } else if (*bench_cmd) {
      const auto mode = cfsvp::parse_mode(mode_name);
      if (!mode) throw cfsvp::InputError("unknown mode '" + mode_name + "'");
      const auto format = cfsvp::parse_format(format_name);
      if (!format) throw cfsvp::InputError("unknown format '" + format_name + "'");
      bench_cfg.mode = *mode;
      const auto report = cfsvp::run_trials(bench_cfg);
      if (out_path.empty()) {
        cfsvp::emit_report(report, *format, std::cout);
      } else {
        std::ofstream file(out_path);
        if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
        cfsvp::emit_report(report, *format, file);
      }
    } else if (*check_cmd) {
      return run_oracle_check(check_n, check_snr, check_trials, check_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "cfsvp: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
