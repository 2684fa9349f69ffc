#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cskd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Vocabularies the offline mock backend draws from.
const std::vector<std::string>& mock_concept_vocabulary();
const std::vector<std::string>& mock_instance_vocabulary();

}  // namespace cskd::cli
