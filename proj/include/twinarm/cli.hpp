#pragma once

#include <iosfwd>

namespace twinarm {

/**
 * Entry point for the `twinarm` command line tool.
 *
 * Exit codes: 0 on success, 1 on a domain error (unreachable target, bad
 * config, ...), 2 on a usage error. Reads interactive input from `in`.
 */
int run_cli(int argc, const char* const argv[], std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace twinarm
