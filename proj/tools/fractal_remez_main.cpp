#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractal_remez/fractal_remez.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

int report_error(fr_status s) {
  std::cerr << "fractal-remez: " << fr_last_error() << "\n";
  return s == FR_ERR_CONFIG || s == FR_ERR_INVALID_ARGUMENT ? kExitConfig : kExitAssertion;
}

int print_listing(fr_status (*fn)(char**)) {
  char* text = nullptr;
  if (const fr_status s = fn(&text); s != FR_OK) return report_error(s);
  std::cout << text;
  fr_string_free(text);
  return kExitPass;
}

int run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "fractal-remez: cannot read config '" << path << "'\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  int code = 0;
  char* report = nullptr;
  const fr_status s =
      fr_run_config_json(buf.str().c_str(), seed ? &*seed : nullptr, out.empty() ? nullptr : out.c_str(), &code, &report);
  if (s != FR_OK) return report_error(s);
  std::cout << report;
  fr_string_free(report);
  if (code != 0) std::cerr << "fractal-remez: assertions failed, see \"failures\" in the report\n";
  return code == 0 ? kExitPass : kExitAssertion;
}

void print_line(const char* line, void*) {
  std::cout << line << std::endl;
}

int suite(const std::string& name, const std::vector<std::string>& overrides) {
  if (name != "acceptance") {
    std::cerr << "fractal-remez: unknown suite '" << name << "' (only 'acceptance')\n";
    return kExitConfig;
  }
  std::vector<const char*> raw;
  for (const auto& o : overrides) raw.push_back(o.c_str());
  int failed = 0;
  std::cout << "status id criterion              measured        threshold    wall\n";
  const fr_status s = fr_suite_acceptance(raw.data(), raw.size(), print_line, nullptr, &failed, nullptr);
  if (s != FR_OK) return report_error(s);
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? kExitPass : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remez-type inequalities on fractal sets: experiments and acceptance suite", "fractal-remez"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fr_version()));

  auto* run_cmd = app.add_subcommand("run", "Run one JSON experiment config");
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", config_path, "Path to the JSON config")->required();
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--out", out_dir, "Directory for report.json, summary.csv and plot data");

  auto* suite_cmd = app.add_subcommand("suite", "Run a verification suite");
  std::string suite_name;
  std::vector<std::string> overrides;
  suite_cmd->add_option("name", suite_name, "Suite name (acceptance)")->required();
  suite_cmd->add_option("--override", overrides, "Replace a threshold: name=value (repeatable)");
  bool list_thresholds = false;
  suite_cmd->add_flag("--list-thresholds", list_thresholds, "Print threshold names and exit");

  auto* sets_cmd = app.add_subcommand("list-sets", "Print registered set ids");
  auto* maj_cmd = app.add_subcommand("list-majorants", "Print registered majorant ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  if (*run_cmd) return run(config_path, seed, out_dir);
  if (*suite_cmd) return list_thresholds ? print_listing(fr_list_thresholds) : suite(suite_name, overrides);
  if (*sets_cmd) return print_listing(fr_list_sets);
  if (*maj_cmd) return print_listing(fr_list_majorants);
  return kExitConfig;
}
