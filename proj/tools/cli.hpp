#ifndef OHO_TOOLS_CLI_HPP
#define OHO_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oho::cli {

/// Bad configuration; maps to exit code 2.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig
{
  double omega = 1.0;
  double energy = 2.0;
  std::string family = "VII_a";
  double a = 1.0;
  std::vector<double> hbar_list{0.2, 0.1, 0.05, 0.025};
  std::optional<int> N_override;
  int t_points = 64;
  double t_periods = 2.0;
  /// Base step for the Richardson check; default 1e−3 · period.
  std::optional<double> dt;
  std::string out_dir;
  std::uint64_t seed = 20240611;
  /// Relative band around ω/(2√(2E)) for the final commutator ratio.
  double band = 0.05;
  std::string ordering = "left";

  /// Throws ConfigError.
  void validate() const;
};

/// Reads a JSON object; unknown keys are rejected. Throws ConfigError.
RunConfig load_config(const std::string& path);

/// Applies JSON keys onto an existing config.
void merge_json(RunConfig& cfg, const std::string& json_text);

/// --out, then config "out", then $OPERADIC_HO_OUT, then ".".
std::string resolve_out_dir(const RunConfig& cfg);

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2 };

int cmd_verify_lax(const RunConfig& cfg, bool corrupt_m, std::ostream& out, std::ostream& err);
int cmd_tables(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_semiclassical(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace oho::cli

#endif
