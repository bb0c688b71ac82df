#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kroncoef {

/// Parsed invocation state shared by the subcommand handlers.
struct RunConfig {
    int n = 0;
    std::string subcommand;
    std::uint64_t seed = 42;
    int threads = 0;  // <= 0: hardware concurrency
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> out_path;
    std::string feature_mode = "bsum1";
    std::string format = "csv";
    bool verify = false;
};

/// Entry point behind main(): parses args (without the program name),
/// dispatches, and reports through the given streams.
/// Exit codes: 0 success, 1 user error, 2 internal consistency failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kroncoef
