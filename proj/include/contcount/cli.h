#ifndef CONTCOUNT_CLI_H_
#define CONTCOUNT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace contcount {

// Runs one command line, program name excluded. Returns 0 on success, 1 on
// bad input or a library error (message on `err`), 2 when a reproduced
// scenario fails its bound.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Subcommand paths: "", "counter run", "game run", "opt", "reproduce",
// "list-scenarios".
std::vector<std::string> CliCommands();
std::string CliHelp(const std::string& path);
// Long flags owned by the subcommand at `path`, with leading dashes.
std::vector<std::string> CliFlags(const std::string& path);

}  // namespace contcount

#endif  // CONTCOUNT_CLI_H_
