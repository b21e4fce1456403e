#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "io.hpp"

namespace qflat::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // a verification or fixture did not pass
  kBadInput = 2,     // usage error or malformed input
  kDomainError = 3,  // well-formed input outside an operation's domain
};

/// Runs the command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct FixtureResult {
  std::string name;
  std::string anchor;
  bool pass = false;
  std::string detail;
};

/// The fixture document compiled into the binary.
const std::string& embedded_fixtures();

std::vector<FixtureResult> run_fixtures(const io::json& doc);

}  // namespace qflat::cli
