#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fountain/codec.hpp"

namespace fountain {

enum ExitCode : int {
    kExitOk = 0,
    kExitDecodeFailure = 1,
    kExitConfigError = 2,
    kExitIoError = 3,
};

/// Environment variable consulted for the seed when --seed is not given.
inline constexpr const char* kSeedEnv = "FOUNTAIN_SEED";

struct RunConfig {
    std::string command;
    std::string scheme = "lt";
    std::size_t k = 16;
    /// 0: derived from the input size (encode) or 16 (simulate, bench).
    std::size_t packet_len = 0;
    double loss_prob = 0.0;
    std::size_t clients = 1;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    CodecConfig codec;
    /// Packets written by encode; 0 writes n for RS and 2k otherwise.
    std::size_t count = 0;
    std::vector<std::string> schemes;
    std::vector<std::size_t> ks;
    std::vector<double> losses;
    std::string input;
    std::string output;
    std::optional<std::size_t> length;
    bool wall_clock = false;
    bool lossy_acks = false;
    bool shuffle = false;
    std::size_t cap = 0;

    /// Throws ParameterError or UsageError for an unusable configuration.
    void validate() const;
    std::string to_json() const;
};

/// Runs one command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Quick end-to-end checks of every codec; prints one line per check.
bool run_selftest(std::ostream& out);

}  // namespace fountain
