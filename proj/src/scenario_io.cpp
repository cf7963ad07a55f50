#include "bwbroker/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace bwbroker {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

ReservationWarmup parse_warmup(std::string_view text) {
  if (text == "use_available_samples") return ReservationWarmup::UseAvailableSamples;
  if (text == "zero_until_full") return ReservationWarmup::ZeroUntilFull;
  throw ConfigError("invalid value for reservation_warmup: '" + std::string(text) +
                    "' (expected use_available_samples or zero_until_full)");
}

std::string_view warmup_name(ReservationWarmup w) {
  return w == ReservationWarmup::ZeroUntilFull ? "zero_until_full" : "use_available_samples";
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

template <typename T>
Setter set_field(T ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view key, std::string_view v) { c.*field = parse_value<T>(key, v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"capacity_mbps", set_field(&ScenarioConfig::capacity_mbps)},
      {"iptv_channel_max_bw_mbps", set_field(&ScenarioConfig::iptv_channel_max_bw_mbps)},
      {"iptv_channel_min_bw_mbps", set_field(&ScenarioConfig::iptv_channel_min_bw_mbps)},
      {"iptv_reservation_cap_mbps", set_field(&ScenarioConfig::iptv_reservation_cap_mbps)},
      {"num_channels_catalog", set_field(&ScenarioConfig::num_channels_catalog)},
      {"sample_interval_min", set_field(&ScenarioConfig::sample_interval_min)},
      {"history_window_min", set_field(&ScenarioConfig::history_window_min)},
      {"iptv_viewer_arrival_rate_per_min", set_field(&ScenarioConfig::iptv_viewer_arrival_rate_per_min)},
      {"iptv_viewer_mean_hold_min", set_field(&ScenarioConfig::iptv_viewer_mean_hold_min)},
      {"non_iptv_arrival_rate_per_min", set_field(&ScenarioConfig::non_iptv_arrival_rate_per_min)},
      {"non_iptv_call_bw_mbps", set_field(&ScenarioConfig::non_iptv_call_bw_mbps)},
      {"non_iptv_mean_hold_min", set_field(&ScenarioConfig::non_iptv_mean_hold_min)},
      {"channel_popularity_skew", set_field(&ScenarioConfig::channel_popularity_skew)},
      {"sim_duration_min", set_field(&ScenarioConfig::sim_duration_min)},
      {"warmup_min", set_field(&ScenarioConfig::warmup_min)},
      {"replications", set_field(&ScenarioConfig::replications)},
      {"base_seed", set_field(&ScenarioConfig::base_seed)},
      {"reservation_warmup",
       [](ScenarioConfig& c, std::string_view, std::string_view v) { c.reservation_warmup = parse_warmup(v); }},
  };
  return table;
}

void append_row(std::string& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
}

std::string count(std::size_t n) { return std::to_string(n); }

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig config = table1_preset();
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_scenario(const ScenarioConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out.append(key).append(" = ").append(value).append("\n");
  };
  line("capacity_mbps", format_number(c.capacity_mbps));
  line("iptv_channel_max_bw_mbps", format_number(c.iptv_channel_max_bw_mbps));
  line("iptv_channel_min_bw_mbps", format_number(c.iptv_channel_min_bw_mbps));
  line("iptv_reservation_cap_mbps", format_number(c.iptv_reservation_cap_mbps));
  line("num_channels_catalog", std::to_string(c.num_channels_catalog));
  line("sample_interval_min", format_number(c.sample_interval_min));
  line("history_window_min", format_number(c.history_window_min));
  line("iptv_viewer_arrival_rate_per_min", format_number(c.iptv_viewer_arrival_rate_per_min));
  line("iptv_viewer_mean_hold_min", format_number(c.iptv_viewer_mean_hold_min));
  line("non_iptv_arrival_rate_per_min", format_number(c.non_iptv_arrival_rate_per_min));
  line("non_iptv_call_bw_mbps", format_number(c.non_iptv_call_bw_mbps));
  line("non_iptv_mean_hold_min", format_number(c.non_iptv_mean_hold_min));
  line("channel_popularity_skew", format_number(c.channel_popularity_skew));
  line("sim_duration_min", format_number(c.sim_duration_min));
  line("warmup_min", format_number(c.warmup_min));
  line("replications", std::to_string(c.replications));
  line("base_seed", std::to_string(c.base_seed));
  line("reservation_warmup", std::string(warmup_name(c.reservation_warmup)));
  return out;
}

std::optional<ScenarioConfig> scenario_preset(std::string_view name) {
  if (name == "table1") return table1_preset();
  return std::nullopt;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string_view steps_csv_header() {
  return "replication,t_min,B_I,B_IPTV_demand,B_A,B_R,B_B,N_IPTV,per_channel_bw,non_iptv_grant,SL,utilization,"
         "activations,blocks,drops\n";
}

std::string steps_csv(std::span<const std::vector<StepRecord>> replications) {
  std::string out(steps_csv_header());
  for (std::size_t r = 0; r < replications.size(); ++r) {
    for (const auto& s : replications[r]) {
      append_row(out, {count(r), format_number(s.t_min), format_number(s.non_iptv_demand),
                       format_number(s.iptv_demand), format_number(s.available), format_number(s.reserved),
                       format_number(s.borrowed), count(s.active_channels), format_number(s.per_channel_bw),
                       format_number(s.non_iptv_grant), format_number(s.satisfaction),
                       format_number(s.utilization), count(s.activations), count(s.blocks), count(s.drops)});
    }
  }
  return out;
}

std::string_view summary_csv_header() {
  return "policy,replications,mean_SL,se_SL,mean_util,se_util,block_rate,drop_rate,mean_N_IPTV\n";
}

std::string summary_csv_row(PolicyKind policy, const RunSummary& s) {
  std::string out;
  append_row(out, {std::string(to_string(policy)), count(s.replications), format_number(s.mean_sl),
                   format_number(s.se_sl), format_number(s.mean_utilization), format_number(s.se_utilization),
                   format_number(s.block_rate), format_number(s.drop_rate), format_number(s.mean_active_channels)});
  return out;
}

std::string_view sweep_csv_header() {
  return "sweep_value,policy,mean_SL,se_SL,mean_util,se_util,block_rate,drop_rate,mean_N_IPTV\n";
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out(sweep_csv_header());
  for (const auto& row : rows) {
    const auto& s = row.summary;
    append_row(out, {format_number(row.sweep_value), std::string(to_string(row.policy)), format_number(s.mean_sl),
                     format_number(s.se_sl), format_number(s.mean_utilization), format_number(s.se_utilization),
                     format_number(s.block_rate), format_number(s.drop_rate), format_number(s.mean_active_channels)});
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace bwbroker
