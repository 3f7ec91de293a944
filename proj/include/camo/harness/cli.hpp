#pragma once

namespace camo::harness {

// Parses arguments and executes one subcommand (pretrain, run, sqm,
// render). Returns the process exit status; errors print to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace camo::harness
