#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>

namespace tollkit {

enum class OutputFormat { Table, Data, Dot };

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string scenario;
  std::optional<double> beta;
  std::string toll_source = "zero";  // zero | marginal | path to a toll file
  std::array<double, 3> lambda{1.0, 0.0, 0.0};
  std::string out_dir;
  std::optional<double> tolerance;
  OutputFormat format = OutputFormat::Table;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Parses the command line and runs the selected command. Never throws;
/// failures are reported on err and mapped to the exit codes above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tollkit
