#ifndef MELLA_CLI_COMMANDS_HPP
#define MELLA_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mella/script/session.hpp"

namespace mella::cli {

/// Runs a script file. 0 iff every command succeeds and no theorem is left
/// open; the first failure is reported as path:line:column.
int cmd_check(const std::string& path, std::ostream& out, std::ostream& err,
              const script::SessionConfig& config = {});

/// Reads period-terminated commands and prints each response.
int cmd_repl(std::istream& in, std::ostream& out, const script::SessionConfig& config = {},
             bool prompt = false);

struct BenchArgs {
  std::string dir;
  std::vector<double> timeouts{1, 5};
  unsigned jobs = 1;
  std::string out;  // directory for summary.csv, scatter.csv, rows.csv, summary.txt
};

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err,
              const bridge::ProverConfig& prover = {});

}  // namespace mella::cli

#endif
