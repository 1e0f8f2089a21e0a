#ifndef DICKE_TOOLS_CLI_HPP
#define DICKE_TOOLS_CLI_HPP

namespace dicke {

// Parse argv and run the selected subcommand.  Returns the process exit
// code: 0 on success, 2 on usage errors, 1 on numeric failures.
int run_cli(int argc, char** argv);

}  // namespace dicke

#endif
