#pragma once

#include <string>
#include <vector>

namespace artk::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kDataMismatch = 4 };

// Runs one `artk` invocation; args excludes the program name.
int run(const std::vector<std::string>& args);

int main(int argc, char** argv);

}  // namespace artk::cli
