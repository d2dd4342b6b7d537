#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ouruin::cli {

enum ExitCode { ok = 0, invalid_spec = 1, unsupported = 2, accuracy = 3 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ouruin::cli
