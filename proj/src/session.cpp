#include "fountain/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fountain/errors.hpp"
#include "fountain/rng.hpp"

namespace fountain {

void ChannelSpec::validate() const {
    if (!(loss_prob >= 0.0 && loss_prob <= 1.0)) throw ParameterError("loss_prob must be in [0, 1]");
    if (clients == 0) throw ParameterError("need at least one client");
}

std::size_t default_transmission_cap(std::size_t k, double loss_prob) {
    if (loss_prob >= 1.0) return 10 * k;
    return static_cast<std::size_t>(std::ceil(10.0 * static_cast<double>(k) / (1.0 - loss_prob)));
}

std::size_t SessionReport::decoded_clients() const noexcept {
    return static_cast<std::size_t>(std::count(per_client_decoded.begin(), per_client_decoded.end(), true));
}

namespace {

using Clock = std::chrono::steady_clock;

SessionReport blank_report(const char* scheme, const InputBlock& block, std::size_t clients, double loss,
                           std::uint64_t seed) {
    SessionReport r;
    r.scheme = scheme;
    r.k = block.k;
    r.packet_len = block.packet_len;
    r.clients = clients;
    r.loss_prob = loss;
    r.seed = seed;
    r.per_client_received.assign(clients, 0);
    r.per_client_needed.assign(clients, 0);
    r.per_client_overhead.assign(clients, 0.0);
    r.per_client_decoded.assign(clients, false);
    return r;
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Scripted receptions or one independent erasure stream per client.
class Reception {
public:
    Reception(const ReceptionPattern* pattern, const ChannelSpec& channel) : pattern_(pattern), loss_(channel.loss_prob) {
        for (std::size_t i = 0; i < channel.clients; ++i) rngs_.emplace_back(derive_seed(channel.seed, i));
    }

    // Receptions for transmission t (0-based), one entry per client.
    std::vector<bool> draw(std::size_t t, std::size_t clients) {
        if (pattern_) {
            if (t >= pattern_->size()) throw UsageError("reception pattern is shorter than the session");
            const auto& row = (*pattern_)[t];
            if (row.size() != clients) throw UsageError("reception pattern row must list every client");
            return row;
        }
        std::vector<bool> out(clients);
        for (std::size_t i = 0; i < clients; ++i) out[i] = !rngs_[i].bernoulli(loss_);
        return out;
    }

private:
    const ReceptionPattern* pattern_;
    double loss_;
    std::vector<SplitMix64> rngs_;
};

SessionReport coded_session(const CodecConfig& codec, const InputBlock& block, const ChannelSpec& channel,
                            const ReceptionPattern* pattern, const SessionOptions& options) {
    channel.validate();
    const auto start = Clock::now();
    const std::size_t n_clients = channel.clients;
    SessionReport r = blank_report(to_string(codec.scheme), block, n_clients, channel.loss_prob, codec.seed);

    auto encoder = make_encoder(codec, block);
    std::vector<std::unique_ptr<Decoder>> decoders;
    for (std::size_t i = 0; i < n_clients; ++i) decoders.push_back(make_decoder(codec, block.k, block.packet_len));

    const std::size_t cap = options.cap ? options.cap : default_transmission_cap(block.k, channel.loss_prob);
    const auto limit = encoder->limit();
    Reception reception(pattern, channel);
    std::size_t pending = n_clients;
    while (pending > 0) {
        if (r.total_transmissions >= cap) {
            r.cap_hit = true;
            break;
        }
        if (limit && r.total_transmissions >= *limit) {
            r.budget_exhausted = true;
            break;
        }
        const CodedPacket p = encoder->next();
        const auto got = reception.draw(r.total_transmissions, n_clients);
        ++r.total_transmissions;
        for (std::size_t i = 0; i < n_clients; ++i) {
            if (!got[i] || r.per_client_decoded[i]) continue;
            ++r.per_client_received[i];
            if (decoders[i]->ingest(p) != DecodeStatus::needs_more) {
                r.per_client_decoded[i] = true;
                r.per_client_needed[i] = r.per_client_received[i];
                --pending;
            }
        }
    }

    r.success = true;
    for (std::size_t i = 0; i < n_clients; ++i) {
        if (!r.per_client_decoded[i]) {
            r.success = false;
            continue;
        }
        if (decoders[i]->decode() != block) r.success = false;
        r.decode_ops += decoders[i]->counter();
        r.per_client_overhead[i] = static_cast<double>(r.per_client_needed[i]) / static_cast<double>(block.k) - 1.0;
        ++r.acks;
    }
    r.retransmissions = r.total_transmissions > block.k ? r.total_transmissions - block.k : 0;
    if (options.measure_time) r.wall_ms = elapsed_ms(start);
    return r;
}

SessionReport arq_session(const InputBlock& block, const ChannelSpec& channel, const ReceptionPattern* pattern,
                          const SessionOptions& options) {
    channel.validate();
    const auto start = Clock::now();
    const std::size_t k = block.k;
    const std::size_t n_clients = channel.clients;
    SessionReport r = blank_report("arq", block, n_clients, channel.loss_prob, channel.seed);
    const std::size_t cap = options.cap ? options.cap : default_transmission_cap(k, channel.loss_prob);

    // Erasure of packet p on attempt a for client i depends only on (i, p, a),
    // so adding clients never removes a retransmission.
    auto erased = [&](std::uint64_t stream, std::size_t i, std::size_t p, std::size_t a) {
        SplitMix64 rng(derive_seed(derive_seed(derive_seed(channel.seed ^ stream, i), p), a));
        return rng.bernoulli(channel.loss_prob);
    };

    std::vector<std::vector<bool>> holds(n_clients, std::vector<bool>(k, false));
    std::vector<std::vector<bool>> acked(n_clients, std::vector<bool>(k, false));
    std::vector<std::size_t> outstanding(k, n_clients);
    std::size_t open_packets = k;
    std::size_t t = 0;
    for (std::size_t attempt = 0; open_packets > 0 && !r.cap_hit; ++attempt) {
        for (std::size_t p = 0; p < k && open_packets > 0; ++p) {
            if (outstanding[p] == 0) continue;
            if (t >= cap) {
                r.cap_hit = true;
                break;
            }
            std::vector<bool> got(n_clients);
            if (pattern) {
                if (t >= pattern->size()) throw UsageError("reception pattern is shorter than the session");
                got = (*pattern)[t];
                if (got.size() != n_clients) throw UsageError("reception pattern row must list every client");
            } else {
                for (std::size_t i = 0; i < n_clients; ++i) got[i] = !erased(0, i, p, attempt);
            }
            ++t;
            for (std::size_t i = 0; i < n_clients; ++i) {
                if (!got[i]) continue;
                if (!holds[i][p]) {
                    holds[i][p] = true;
                    ++r.per_client_received[i];
                }
                ++r.acks;
                const bool ack_lost = pattern == nullptr && channel.lossy_acks && erased(1, i, p, attempt);
                if (!ack_lost && !acked[i][p]) {
                    acked[i][p] = true;
                    if (--outstanding[p] == 0) --open_packets;
                }
            }
        }
    }

    r.total_transmissions = t;
    r.retransmissions = t > k ? t - k : 0;
    r.success = true;
    for (std::size_t i = 0; i < n_clients; ++i) {
        const bool all = std::all_of(holds[i].begin(), holds[i].end(), [](bool b) { return b; });
        r.per_client_decoded[i] = all;
        if (all) {
            r.per_client_needed[i] = r.per_client_received[i];
            r.per_client_overhead[i] = 0.0;
        } else {
            r.success = false;
        }
    }
    if (options.measure_time) r.wall_ms = elapsed_ms(start);
    return r;
}

}  // namespace

SessionReport run_session(const CodecConfig& codec, const InputBlock& block, const ChannelSpec& channel,
                          const SessionOptions& options) {
    return coded_session(codec, block, channel, nullptr, options);
}

SessionReport run_arq_baseline(const InputBlock& block, const ChannelSpec& channel, const SessionOptions& options) {
    return arq_session(block, channel, nullptr, options);
}

SessionReport force_pattern(const CodecConfig& codec, const InputBlock& block, const ReceptionPattern& pattern,
                            const SessionOptions& options) {
    if (pattern.empty()) throw UsageError("empty reception pattern");
    ChannelSpec channel;
    channel.clients = pattern.front().size();
    channel.seed = codec.seed;
    return coded_session(codec, block, channel, &pattern, options);
}

SessionReport force_pattern_arq(const InputBlock& block, const ReceptionPattern& pattern,
                                const SessionOptions& options) {
    if (pattern.empty()) throw UsageError("empty reception pattern");
    ChannelSpec channel;
    channel.clients = pattern.front().size();
    return arq_session(block, channel, &pattern, options);
}

}  // namespace fountain
