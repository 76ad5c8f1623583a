#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fountain/codec.hpp"
#include "fountain/linalg.hpp"
#include "fountain/packet.hpp"

namespace fountain {

/// Multicast erasure channel. loss_prob is the probability that a packet is
/// erased for one client; erasures are independent across clients and
/// transmissions.
struct ChannelSpec {
    double loss_prob = 0.0;
    std::size_t clients = 1;
    std::uint64_t seed = 1;
    /// Erase ARQ acknowledgements with the same loss_prob.
    bool lossy_acks = false;

    /// Throws ParameterError for loss_prob outside [0, 1] or zero clients.
    void validate() const;
};

/// reception[t][i]: client i receives transmission t.
using ReceptionPattern = std::vector<std::vector<bool>>;

struct SessionOptions {
    /// Transmission cap; 0 picks default_transmission_cap.
    std::size_t cap = 0;
    bool measure_time = false;
};

/// ceil(10k / (1 - loss_prob)), or 10k when every packet is lost.
std::size_t default_transmission_cap(std::size_t k, double loss_prob);

struct SessionReport {
    std::string scheme;
    std::size_t k = 0;
    std::size_t packet_len = 0;
    std::size_t clients = 0;
    double loss_prob = 0.0;
    std::uint64_t seed = 0;
    std::size_t total_transmissions = 0;
    /// Transmissions beyond the first k.
    std::size_t retransmissions = 0;
    std::size_t acks = 0;
    std::vector<std::size_t> per_client_received;
    /// Receptions each client needed before it could decode; 0 if it never did.
    std::vector<std::size_t> per_client_needed;
    std::vector<double> per_client_overhead;
    std::vector<bool> per_client_decoded;
    /// Every client decoded and its block matched the input exactly.
    bool success = false;
    bool cap_hit = false;
    /// A fixed-rate code ran out of packets with clients still undecoded.
    bool budget_exhausted = false;
    OpCounter decode_ops;
    double wall_ms = 0.0;

    std::size_t decoded_clients() const noexcept;
    friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

/// Streams coded packets until every client decodes, the fixed-rate budget
/// runs out, or the cap is hit. Each decoding client sends one final ACK.
SessionReport run_session(const CodecConfig& codec, const InputBlock& block, const ChannelSpec& channel,
                          const SessionOptions& options = {});

/// Uncoded round-based retransmission: every round resends each packet some
/// client has not acknowledged. Every reception is acknowledged.
SessionReport run_arq_baseline(const InputBlock& block, const ChannelSpec& channel,
                               const SessionOptions& options = {});

/// Same sessions with scripted receptions instead of random erasures. Throws
/// UsageError if the session outlives the pattern.
SessionReport force_pattern(const CodecConfig& codec, const InputBlock& block, const ReceptionPattern& pattern,
                            const SessionOptions& options = {});
SessionReport force_pattern_arq(const InputBlock& block, const ReceptionPattern& pattern,
                                const SessionOptions& options = {});

}  // namespace fountain
