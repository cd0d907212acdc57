#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rggcrit/theory.hpp"

namespace rggcrit::cli {

/// Process exit codes. kFailedVerdict is only produced by `report`.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kIo = 3,
  kFailedVerdict = 4,
};

/// Missing or unreadable input, unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand reads. Serialises to a flat JSON object whose
/// keys match the long flag names (minus dashes, '-' -> '_').
struct RunConfig {
  std::string command = "theory";
  int d = 3;
  int k = 0;
  double c = 0.0;
  double n = 1000.0;
  std::string region = "cube";  ///< cube | ball | box
  std::vector<double> sides;     ///< box only
  std::vector<double> c_grid;    ///< theory: c values (default {c}); simulate: default 41 points on [-2, 6]
  std::vector<double> n_grid;    ///< theory: n values (default {n}); verify-lemma: default 1e4..1e10
  std::vector<int> dims{3, 4, 5};  ///< verify-geometry
  std::uint64_t M = 100;
  std::uint64_t seed = 1;
  double xi = 0.0;               ///< verify-lemma
  std::optional<double> r;       ///< palm / decompose; default r_n(c)
  std::uint64_t budget = 1'000'000;
  double layer_constant = 1.0;
  std::uint64_t samples = 1'000'000;  ///< verify-geometry Monte Carlo
  std::string out;               ///< file (or prefix for simulate); empty = stdout
  std::string format = "csv";    ///< csv | json
  unsigned threads = 0;          ///< 0 = all cores
  std::vector<std::string> inputs;  ///< report

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);

/// Unknown keys are rejected; absent keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);

/// Validated theory parameters (region built from region/sides/d).
theory::TheoryParams theory_params(const RunConfig& config);

/// "a:b:m" (m uniform points from a to b) or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

/// A typed table that prints identically as CSV (17 significant digits) or
/// as a JSON array of row objects.
struct Table {
  using Cell = std::variant<double, std::int64_t, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& os) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Parses argv, runs the subcommand, writes results to `out` (or the
/// configured file) and diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Subcommands on a fully resolved config.
int cmd_theory(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_verify_lemma(const RunConfig& config, std::ostream& out);
int cmd_verify_geometry(const RunConfig& config, std::ostream& out);
int cmd_decompose(const RunConfig& config, std::ostream& out);
int cmd_palm(const RunConfig& config, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);

/// The report verdict over already-loaded command outputs (each a JSON object
/// with a "command" key).
nlohmann::json evaluate_report(const std::vector<nlohmann::json>& documents);

}  // namespace rggcrit::cli
