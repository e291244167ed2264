// modlab -- experiment runner for modulated dispersive PDEs.
//
// Usage: modlab <experiment> run --config <file> --out <dir>
// Experiments: path localtime irregularity occupation-check strichartz cw
//              solve blowup atoms resonance

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "modlab/experiment.hpp"

namespace {

// Subcommand names are short; config files declare the full experiment id.
const std::map<std::string, std::string> kSubcommands = {
    {"path", "path"},
    {"localtime", "localtime"},
    {"irregularity", "irregularity"},
    {"occupation-check", "occupation-check"},
    {"strichartz", "strichartz-transfer"},
    {"cw", "cw-vanishing"},
    {"solve", "solve"},
    {"blowup", "blowup-contrast"},
    {"atoms", "atoms-suite"},
    {"resonance", "resonance-suite"},
};

struct RunOptions {
  std::string config_file;
  std::string out_dir;
  std::string format = "json";
  uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
  bool quiet = false;
};

int execute(const std::string& id, const RunOptions& opt) {
  modlab::ExperimentConfig cfg;
  cfg.id = id;
  cfg.values = modlab::Config::parse_file(opt.config_file);
  cfg.jobs = opt.jobs;
  cfg.quiet = opt.quiet;
  if (opt.seed_set) cfg.seed_override = opt.seed;

  if (!opt.out_dir.empty()) {
    cfg.out_dir = opt.out_dir;
  } else if (const char* root = std::getenv("MODLAB_OUT")) {
    cfg.out_dir = std::string(root) + "/" + id;
  } else {
    std::cerr << "error: no --out directory and MODLAB_OUT is unset\n";
    return 2;
  }

  const modlab::ExperimentReport report = modlab::run_experiment(cfg);
  const auto fmt = opt.format == "csv-bundle" ? modlab::ReportFormat::csv_bundle
                                              : modlab::ReportFormat::json;
  modlab::emit_report(report, cfg.out_dir, fmt);

  if (!opt.quiet) {
    for (const auto& v : report.verdicts)
      std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.name << " (" << v.relation
                << ")\n";
  }
  if (!report.all_pass()) {
    if (!opt.quiet) std::cout << "verdicts failed: see " << cfg.out_dir << "\n";
    return 1;
  }
  if (!opt.quiet) std::cout << "ok: " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulated-dispersion laboratory"};
  app.require_subcommand(1);

  std::map<std::string, RunOptions> options;
  for (const auto& [name, id] : kSubcommands) {
    auto* sub = app.add_subcommand(name, "experiment '" + id + "'");
    sub->require_subcommand(1);
    auto* run = sub->add_subcommand("run", "run with a config file");
    RunOptions& opt = options[name];
    run->add_option("--config", opt.config_file, "key-value config file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", opt.out_dir, "output directory");
    run->add_option("--format", opt.format, "report format: json|csv-bundle")
        ->check(CLI::IsMember({"json", "csv-bundle"}));
    run->add_option("--seed", opt.seed, "override the experiment seed")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
    run->add_option("--jobs", opt.jobs, "parallel workers across seeds/configs");
    run->add_flag("--quiet", opt.quiet, "suppress verdict lines");
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [name, id] : kSubcommands) {
    auto* sub = app.get_subcommand(name);
    if (sub->parsed() && sub->get_subcommand("run")->parsed()) {
      try {
        return execute(id, options[name]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
  }
  return 2;
}
