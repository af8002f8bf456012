#ifndef FR_CORE_EXPERIMENT_HPP
#define FR_CORE_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fr {

/// Everything one `run` produces. Files are kept in memory so that the
/// caller decides where they go; contents are deterministic for a fixed
/// config and seed.
struct RunResult {
  int exit_code = 0;  ///< 0 all assertions hold, 1 otherwise
  std::string id;
  std::string report_json;
  std::string summary_csv;
  /// Extra outputs (file name, content): *.dat plot curves, grids.
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> failures;
  std::string out_dir;  ///< "out" from the config, empty when absent
};

/// Parses and executes a JSON run configuration. Malformed configs and
/// unknown ids raise fr::Error with ErrorCode::Config.
RunResult run_experiment(const std::string& config_json, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes report.json, summary.csv and the extra files into `dir`
/// (created if missing).
void write_run(const RunResult& result, const std::string& dir);

}  // namespace fr

#endif
