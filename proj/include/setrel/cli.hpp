#pragma once

// Command-line driver: `setrel solve FILE ...` and `setrel gen ...`.

#include <iosfwd>
#include <string>
#include <vector>

#include "setrel/oracle.hpp"

namespace setrel::cli {

enum Exit : int { kOk = 0, kUsage = 1, kInput = 2, kVerification = 3 };

struct RunConfig {
  std::string command;  // "solve" or "gen"
  // solve
  std::string file;
  OracleKind oracle = OracleKind::Auto;
  std::size_t max_steps = 100'000;
  double timeout = 0;
  bool check_model = false;
  bool dump_trace = false;
  bool stats = false;
  bool fragment_only = false;
  bool model = false;
  std::size_t jobs = 1;
  std::size_t dnf_cap = 1'000'000;
  // gen
  std::string family = "random";
  std::uint64_t seed = 0;
  std::string out;
};

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parse `argv` (without the program name) and run.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace setrel::cli
