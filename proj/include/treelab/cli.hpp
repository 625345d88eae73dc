// Entry point for the treelab command-line tool, split out so tests can
// drive it in-process with captured streams.
//
// Exit codes: 0 success, 1 usage or validation error, 2 a gated experiment
// check failed.  Errors go to err as a single "error: ..." line.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treelab {

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace treelab
