#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qualimeter {

enum class Command { kExtract, kCloc, kAnalyze, kDetect, kKiviat, kTreemap, kStability, kCorrelate, kCompare };
enum class InputMode { kAuto, kJava, kInterchange };
enum class OutputFormat { kDefault, kJson, kCsv, kSvg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::kAnalyze;
  std::vector<std::filesystem::path> inputs;
  InputMode input_mode = InputMode::kAuto;
  std::vector<std::string> suites;
  std::optional<std::filesystem::path> thresholds;
  std::optional<std::filesystem::path> weights;
  std::vector<std::filesystem::path> rules;
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::kDefault;
  std::uint64_t seed = 1;
  bool clpm_percent = false;
  bool cbo_bidirectional = false;
  bool noc_interfaces = false;

  // analyze
  std::optional<std::string> mi_inputs;  // "HV,CC,LOCPM,CLPM"
  std::optional<std::filesystem::path> use_cases;
  // kiviat
  std::optional<std::string> class_name;
  std::optional<std::string> vector;  // 13 comma-separated values
  // treemap
  std::optional<std::filesystem::path> hierarchy;
  std::size_t resolution = 256;
  std::size_t max_iterations = 100;
  // stability
  std::optional<std::filesystem::path> iterations;
  // correlate
  std::vector<std::string> columns;
  // compare
  std::vector<std::string> names;
};

// Throws UsageError when the configuration is inconsistent.
void validate(const RunConfig& config);

// Executes one command. Reports go to `out` (or files under out_dir);
// diagnostics go to `err`, one line each, prefixed "qualimeter:<level>:<kind>:".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses the command line (plus the QUALIMETER_CONFIG defaults file) and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qualimeter
