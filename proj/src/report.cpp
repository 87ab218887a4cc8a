#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cfsvp/trials.hpp"
#include "json.hpp"

namespace cfsvp {

namespace {

using Fields = std::vector<std::pair<std::string, FieldValue>>;

Fields trial_fields(const TrialReport& report, const TrialRecord& r) {
  Fields out{{"trial", r.index}, {"h_norm2", r.h_norm2}};
  switch (report.config.mode) {
    case TrialMode::e1_freq:
      out.emplace_back("e1_hit", std::uint64_t{r.e1_hit});
      break;
    case TrialMode::node_ratio:
      out.emplace_back("tree_nodes", r.tree_nodes);
      out.emplace_back("set_nodes", r.set_nodes);
      out.emplace_back("search_nodes", r.search_nodes);
      out.emplace_back("node_ratio", r.node_ratio);
      out.emplace_back("set_ratio", r.set_ratio);
      break;
    case TrialMode::solve:
      out.emplace_back("rate", r.rate);
      out.emplace_back("search_nodes", r.search_nodes);
      out.emplace_back("e1_hit", std::uint64_t{r.e1_hit});
      break;
    case TrialMode::rate_avg:
      out.emplace_back("rate", r.rate);
      out.emplace_back("e1_rate", r.e1_rate);
      out.emplace_back("dominance_violations", r.dominance_violations);
      break;
    case TrialMode::list:
      out.emplace_back("list_length", std::uint64_t{r.list_length});
      out.emplace_back("top_rate", r.rate);
      break;
  }
  return out;
}

std::string format_value(const FieldValue& v) {
  if (const auto* u = std::get_if<std::uint64_t>(&v)) return std::to_string(*u);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
  return buf;
}

nlohmann::ordered_json to_json(const Fields& fields) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [key, value] : fields) {
    std::visit([&obj, &key](auto x) { obj[key] = x; }, value);
  }
  return obj;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "json-lines") return ReportFormat::json_lines;
  if (name == "csv") return ReportFormat::csv;
  return std::nullopt;
}

std::vector<std::pair<std::string, FieldValue>> result_fields(const TrialReport& r) {
  Fields out{{"completed", r.completed}, {"degenerate", r.degenerate}};
  switch (r.config.mode) {
    case TrialMode::e1_freq:
      out.emplace_back("e1_hits", r.e1_hits);
      out.emplace_back("e1_fraction", r.e1_fraction);
      break;
    case TrialMode::node_ratio:
      out.emplace_back("node_ratio_avg", r.node_ratio_avg);
      out.emplace_back("node_ratio_max", r.node_ratio_max);
      out.emplace_back("set_ratio_avg", r.set_ratio_avg);
      out.emplace_back("set_ratio_max", r.set_ratio_max);
      out.emplace_back("tree_nodes_avg", r.tree_nodes_avg);
      out.emplace_back("set_nodes_avg", r.set_nodes_avg);
      out.emplace_back("search_nodes_avg", r.search_nodes_avg);
      out.emplace_back("search_exceeds_tree", r.search_exceeds_tree);
      break;
    case TrialMode::solve:
      out.emplace_back("rate_avg", r.rate_avg);
      out.emplace_back("search_nodes_avg", r.search_nodes_avg);
      out.emplace_back("e1_hits", r.e1_hits);
      out.emplace_back("e1_fraction", r.e1_fraction);
      break;
    case TrialMode::rate_avg:
      out.emplace_back("rate_avg", r.rate_avg);
      out.emplace_back("e1_rate_avg", r.e1_rate_avg);
      out.emplace_back("dominance_violations", r.dominance_violations);
      break;
    case TrialMode::list:
      out.emplace_back("list_size", std::uint64_t{r.config.list_size});
      out.emplace_back("list_length_avg", r.list_length_avg);
      out.emplace_back("short_lists", r.short_lists);
      out.emplace_back("rate_avg", r.rate_avg);
      break;
  }
  return out;
}

void emit_report(const TrialReport& report, ReportFormat format, std::ostream& out) {
  const TrialConfig& cfg = report.config;
  const Fields result = result_fields(report);

  if (format == ReportFormat::json_lines) {
    nlohmann::ordered_json agg;
    agg["mode"] = std::string(to_string(cfg.mode));
    agg["n"] = cfg.n;
    agg["snr_db"] = cfg.snr_db;
    agg["trials"] = cfg.trials;
    agg["seed"] = cfg.seed;
    agg["result"] = to_json(result);
    agg["wall_time"] = report.wall_time;
    out << agg.dump() << '\n';
    for (const auto& rec : report.records) {
      auto row = to_json(trial_fields(report, rec));
      if (!rec.error.empty()) row["error"] = rec.error;
      out << row.dump() << '\n';
    }
  } else {
    std::vector<std::string> header{"mode", "n", "snr_db", "trials", "seed"};
    std::vector<std::string> row{std::string(to_string(cfg.mode)), std::to_string(cfg.n),
                                 format_value(cfg.snr_db), std::to_string(cfg.trials),
                                 std::to_string(cfg.seed)};
    for (const auto& [key, value] : result) {
      header.push_back(key);
      row.push_back(format_value(value));
    }
    header.emplace_back("wall_time");
    row.push_back(format_value(report.wall_time));
    write_csv_row(out, header);
    write_csv_row(out, row);
    if (!report.records.empty()) {
      out << '\n';
      std::vector<std::string> trial_header;
      for (const auto& [key, value] : trial_fields(report, report.records.front())) trial_header.push_back(key);
      trial_header.emplace_back("error");
      write_csv_row(out, trial_header);
      for (const auto& rec : report.records) {
        std::vector<std::string> cells;
        for (const auto& [key, value] : trial_fields(report, rec)) cells.push_back(format_value(value));
        std::string err = rec.error;
        for (auto& ch : err) {
          if (ch == ',' || ch == '"' || ch == '\n') ch = ';';
        }
        cells.push_back(err);
        write_csv_row(out, cells);
      }
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("failed to write report");
}

}  // namespace cfsvp
