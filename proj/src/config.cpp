#include "semnet/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace semnet::cli {

namespace {

struct RawConfig {
  // section -> key -> (value, line number); top-level keys use section "".
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> values;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

class Validator {
 public:
  Validator(RawConfig raw, std::vector<std::string>& errors)
      : raw_(std::move(raw)), errors_(errors) {}

  bool has_section(const std::string& section) const {
    return raw_.values.count(section) > 0;
  }

  template <typename T, typename Parse>
  void get(const std::string& section, const std::string& key, T& out,
           Parse parse) {
    const auto sec = raw_.values.find(section);
    if (sec == raw_.values.end()) return;
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) return;
    seen_[section + "." + key] = true;
    std::optional<T> v = parse(it->second.first);
    if (!v) {
      errors_.push_back(path(section, key) + ": cannot parse value '" +
                        it->second.first + "'");
      return;
    }
    out = *v;
  }

  void get_double(const std::string& section, const std::string& key, double& out) {
    get(section, key, out, [](const std::string& s) -> std::optional<double> {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') return std::nullopt;
      return v;
    });
  }

  void get_int(const std::string& section, const std::string& key, int& out) {
    get(section, key, out, [](const std::string& s) -> std::optional<int> {
      char* end = nullptr;
      const long v = std::strtol(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') return std::nullopt;
      return static_cast<int>(v);
    });
  }

  void get_u64(const std::string& section, const std::string& key,
               std::uint64_t& out) {
    get(section, key, out, [](const std::string& s) -> std::optional<std::uint64_t> {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') return std::nullopt;
      return static_cast<std::uint64_t>(v);
    });
  }

  void get_string(const std::string& section, const std::string& key,
                  std::string& out) {
    get(section, key, out,
        [](const std::string& s) -> std::optional<std::string> { return s; });
  }

  void require(bool condition, const std::string& section, const std::string& key,
               const std::string& message) {
    if (!condition) errors_.push_back(path(section, key) + ": " + message);
  }

  void report_unknown_keys() {
    for (const auto& [section, kv] : raw_.values) {
      for (const auto& [key, value] : kv) {
        (void)value;
        if (!seen_.count(section + "." + key)) {
          errors_.push_back(path(section, key) + ": unknown key (line " +
                            std::to_string(kv.at(key).second) + ")");
        }
      }
    }
  }

 private:
  static std::string path(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  RawConfig raw_;
  std::vector<std::string>& errors_;
  std::map<std::string, bool> seen_;
};

}  // namespace

ConfigResult parse_config(std::istream& in, const std::string& name) {
  ConfigResult result;
  RawConfig raw;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        result.errors.push_back(name + ":" + std::to_string(line_no) +
                                ": malformed section header");
        continue;
      }
      section = trim(t.substr(1, t.size() - 2));
      raw.values[section];  // sections may be present but empty
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back(name + ":" + std::to_string(line_no) +
                              ": expected key = value");
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      result.errors.push_back(name + ":" + std::to_string(line_no) + ": empty key");
      continue;
    }
    raw.values[section][key] = {value, line_no};
  }

  ExperimentConfig config;
  Validator v(std::move(raw), result.errors);

  v.get_u64("", "seed", config.seed);
  v.get_string("", "out_dir", config.out_dir);
  v.require(!config.out_dir.empty(), "", "out_dir", "must not be empty");

  config.has_wpcn = v.has_section("wpcn");
  auto& w = config.wpcn;
  v.get_int("wpcn", "devices", w.num_devices);
  v.get_double("wpcn", "eta", w.harvest_efficiency);
  v.get_double("wpcn", "power_w", w.hap_power_w);
  v.get_double("wpcn", "slot_s", w.slot_duration_s);
  v.get_double("wpcn", "energy_per_bit_j", w.energy_per_bit_j);
  v.get_double("wpcn", "w_sim", w.w_sim);
  v.get_double("wpcn", "w_bleu", w.w_bleu);
  v.get_int("wpcn", "words_per_sentence", w.payload.words_per_sentence);
  v.get_int("wpcn", "bits_per_feature", w.payload.bits_per_feature);
  std::string channel = "exp";
  v.get_string("wpcn", "channel", channel);
  if (channel == "exp") {
    w.channel = wpcn::ChannelModel::kExponential;
  } else if (channel == "const") {
    w.channel = wpcn::ChannelModel::kConstant;
  } else if (channel == "uniform") {
    w.channel = wpcn::ChannelModel::kUniform;
  } else {
    result.errors.push_back("wpcn.channel: must be one of exp|const|uniform, got '" +
                            channel + "'");
  }
  v.require(w.num_devices >= 1, "wpcn", "devices", "must be >= 1");
  v.require(w.harvest_efficiency > 0.0 && w.harvest_efficiency <= 1.0, "wpcn", "eta",
            "must be in (0, 1] (got " + std::to_string(w.harvest_efficiency) + ")");
  v.require(w.hap_power_w > 0.0, "wpcn", "power_w", "must be > 0");
  v.require(w.slot_duration_s > 0.0, "wpcn", "slot_s", "must be > 0");
  v.require(w.energy_per_bit_j > 0.0, "wpcn", "energy_per_bit_j", "must be > 0");
  v.require(w.w_sim >= 0.0 && w.w_bleu >= 0.0 &&
                std::abs(w.w_sim + w.w_bleu - 1.0) <= 1e-12,
            "wpcn", "w_sim", "weights must be non-negative and sum to 1");
  v.require(w.payload.words_per_sentence >= 1, "wpcn", "words_per_sentence",
            "must be >= 1");
  v.require(w.payload.bits_per_feature >= 1, "wpcn", "bits_per_feature",
            "must be >= 1");

  config.has_auction = v.has_section("auction");
  auto& a = config.auction;
  v.get_int("auction", "iterations", a.iterations);
  v.get_int("auction", "batch_size", a.batch_size);
  v.get_double("auction", "learning_rate", a.learning_rate);
  v.get_double("auction", "lambda_start", a.lambda_start);
  v.get_double("auction", "lambda_end", a.lambda_end);
  v.get_int("auction", "k_groups", a.groups);
  v.get_int("auction", "j_units", a.units);
  v.get_double("auction", "init_noise", a.init_noise);
  v.get_int("auction", "eval_samples", a.eval_samples);
  v.require(a.iterations >= 1, "auction", "iterations", "must be >= 1");
  v.require(a.batch_size >= 1, "auction", "batch_size", "must be >= 1");
  v.require(a.learning_rate > 0.0, "auction", "learning_rate", "must be > 0");
  v.require(a.lambda_start > 0.0, "auction", "lambda_start", "must be > 0");
  v.require(a.lambda_end >= a.lambda_start, "auction", "lambda_end",
            "must be >= lambda_start");
  v.require(a.groups >= 1, "auction", "k_groups", "must be >= 1");
  v.require(a.units >= 1, "auction", "j_units", "must be >= 1");
  v.require(a.init_noise >= 0.0, "auction", "init_noise", "must be >= 0");
  v.require(a.eval_samples >= 1, "auction", "eval_samples", "must be >= 1");

  config.has_fedse = v.has_section("fedse");
  auto& f = config.fedse;
  v.get_int("fedse", "groups", f.groups);
  v.get_int("fedse", "devices_per_group", f.devices_per_group);
  v.get_int("fedse", "dim", f.dim);
  v.get_int("fedse", "samples_per_group", f.samples_per_group);
  v.get_int("fedse", "epochs", f.epochs);
  v.get_double("fedse", "lr", f.lr);
  v.get_int("fedse", "rounds", f.rounds);
  v.get_int("fedse", "upload_batch", f.upload_batch);
  v.get_double("fedse", "label_noise", f.label_noise);
  v.require(f.groups >= 1, "fedse", "groups", "must be >= 1");
  v.require(f.devices_per_group >= 1, "fedse", "devices_per_group", "must be >= 1");
  v.require(f.dim >= 1, "fedse", "dim", "must be >= 1");
  v.require(f.samples_per_group >= 1, "fedse", "samples_per_group", "must be >= 1");
  v.require(f.epochs >= 1, "fedse", "epochs", "must be >= 1");
  v.require(f.lr > 0.0, "fedse", "lr", "must be > 0");
  v.require(f.rounds >= 1, "fedse", "rounds", "must be >= 1");
  v.require(f.upload_batch >= 0, "fedse", "upload_batch", "must be >= 0");
  v.require(f.label_noise >= 0.0, "fedse", "label_noise", "must be >= 0");

  v.report_unknown_keys();

  if (result.errors.empty()) result.config = std::move(config);
  return result;
}

ConfigResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult result;
    result.errors.push_back("cannot open config file: " + path);
    return result;
  }
  return parse_config(in, path);
}

}  // namespace semnet::cli
