#ifndef AMI_TOOLS_CLI_H_
#define AMI_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ami::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ami::cli

#endif  // AMI_TOOLS_CLI_H_
