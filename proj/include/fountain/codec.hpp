#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "fountain/decoder.hpp"
#include "fountain/packet.hpp"

namespace fountain {

/// Everything needed to build the encoder and decoder of one scheme.
struct CodecConfig {
    SchemeId scheme = SchemeId::lt;
    /// RS code length; 0 means min(2k, 255).
    std::size_t n = 0;
    /// Random linear: nonzero-coefficient probability and systematic prefix.
    double sparsity = 1.0;
    bool systematic = false;
    /// Robust soliton parameters for LT.
    double c = 0.1;
    double delta = 0.5;
    /// Raptor precode; j = 0 picks ceil(0.05k) + 4.
    std::size_t j = 0;
    std::size_t row_weight = 3;
    std::uint64_t seed = 1;

    /// Throws ParameterError when the configuration cannot serve k inputs.
    void validate(std::size_t k) const;
    std::size_t rs_length(std::size_t k) const noexcept;
    std::size_t raptor_j(std::size_t k) const noexcept;
};

/// Server side of a session: an endless (or, for RS, length-n) packet stream.
class Encoder {
public:
    virtual ~Encoder() = default;
    virtual CodedPacket next() = 0;
    /// Number of distinct packets for fixed-rate codes.
    virtual std::optional<std::size_t> limit() const { return std::nullopt; }
};

std::unique_ptr<Encoder> make_encoder(const CodecConfig& config, const InputBlock& block);
std::unique_ptr<Decoder> make_decoder(const CodecConfig& config, std::size_t k, std::size_t packet_len);
/// Decoder for a stream whose parameters are only known from its packets.
std::unique_ptr<Decoder> make_decoder_for(const CodedPacket& first);

}  // namespace fountain
