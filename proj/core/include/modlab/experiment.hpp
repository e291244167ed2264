#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modlab/io.hpp"

namespace modlab {

inline constexpr const char* kVersion = "0.1.0";

// Flat key-value config with [section] blocks; keys are addressed as
// "section.key". Typed getters record every resolved value (defaults
// included) so the report can echo the full effective configuration.
class Config {
 public:
  static Config parse_file(const std::string& filename);
  static Config parse_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::string require_str(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<uint64_t> get_u64s(const std::string& key,
                                 const std::vector<uint64_t>& fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  std::vector<std::string> unused_keys() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  std::map<std::string, std::string> kv_;
  mutable std::map<std::string, std::string> resolved_;
  mutable std::set<std::string> touched_;
  std::string origin_;
};

struct ExperimentConfig {
  std::string id;  // path|localtime|irregularity|occupation-check|
                   // strichartz-transfer|cw-vanishing|solve|blowup-contrast|
                   // atoms-suite|resonance-suite
  Config values;
  std::string out_dir;
  std::optional<uint64_t> seed_override;
  int jobs = 1;
  bool quiet = false;

  static const std::vector<std::string>& known_ids();
};

struct Verdict {
  std::string name;      // the invariant or displayed inequality it checks
  bool pass = false;
  double value = 0;
  double tolerance = 0;
  std::string relation;  // e.g. "rel_err <= tol"
};

struct ExperimentReport {
  std::string experiment;
  std::string version;
  std::map<std::string, std::string> config_echo;
  JsonValue results;
  std::vector<Verdict> verdicts;
  std::vector<std::string> files;  // data files written by the run
  double wall_seconds = 0;         // excluded from report.json by design

  bool all_pass() const;
};

// Deterministic given (config, version): seeds are part of the config and
// the within-run order is fixed regardless of jobs.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { json, csv_bundle };

// Writes report.json (bit-stable), manifest.json, timings.json, and for
// csv_bundle additionally verdicts.csv. Returns the files written.
std::vector<std::string> emit_report(const ExperimentReport& report,
                                     const std::string& out_dir,
                                     ReportFormat format);

}  // namespace modlab
