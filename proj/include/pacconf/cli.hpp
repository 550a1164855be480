#pragma once

#include <iosfwd>

namespace pacconf {

/// Process exit codes of the command-line tool.
enum class ExitCode : int {
  ok = 0,            // success, or validation verdict pass / vacuous-pass
  usage = 1,         // bad command line
  parse = 2,         // unreadable or malformed input file
  dimension = 3,     // inputs disagree on examples, classifiers or classes
  empty_class = 4,   // some class has no example in the sample
  delta_range = 5,   // delta outside (0, 1]
  domain = 6,        // e.g. binary-bound on a non-binary problem
  numerical = 7,     // eigensolver failed to converge
  validation_failed = 8,
  config = 9,        // infeasible simulation config
  io = 10,           // cannot write an output file
};

/// Entry point shared by the `pacconf` binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pacconf
