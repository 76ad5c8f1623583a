#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fountain/codec.hpp"
#include "fountain/session.hpp"

namespace fountain {

/// Fixed CSV schema shared by bench and simulate output.
inline constexpr const char* kCsvHeader =
    "scheme,k,B,N,loss_prob,trials,mean_overhead,p95_overhead,fail_rate,row_xor,sym_mul,wall_ms,seed";

/// Scheme name used in CSV rows; "arq" selects the retransmission baseline.
struct BenchScheme {
    bool arq = false;
    SchemeId scheme = SchemeId::lt;

    static BenchScheme parse(const std::string& name);
    std::string name() const;
};

struct BenchConfig {
    std::vector<BenchScheme> schemes;
    std::vector<std::size_t> ks;
    std::vector<double> losses{0.0, 0.2, 0.5};
    std::size_t packet_len = 16;
    std::size_t clients = 1;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    /// Scheme parameters; its scheme and seed fields are overridden per run.
    CodecConfig codec;
    bool wall_clock = false;

    void validate() const;
};

struct BenchRow {
    std::string scheme;
    std::size_t k = 0;
    std::size_t packet_len = 0;
    std::size_t clients = 0;
    double loss_prob = 0.0;
    std::size_t trials = 0;
    double mean_overhead = 0.0;
    double p95_overhead = 0.0;
    double fail_rate = 0.0;
    /// Per decoding client; bit-level substitutions for triangular codes.
    double row_xor = 0.0;
    double sym_mul = 0.0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
};

/// Aggregates trial sessions into one row. Overheads cover decoding clients.
BenchRow summarize(const std::string& scheme, const std::vector<SessionReport>& trials, std::uint64_t seed);

/// One row per (scheme, k, loss_prob), sorted by that key.
std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string to_csv_row(const BenchRow& row);
std::string to_csv(const std::vector<BenchRow>& rows);

}  // namespace fountain
