#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fountain/decoder.hpp"
#include "fountain/linalg.hpp"
#include "fountain/packet.hpp"

namespace fountain {

/// Evaluation points and dimensions of a Vandermonde code over GF(256).
struct VandermondeSpec {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<Symbol> points;
    bool systematic = false;

    /// Points g^0, g^1, ..., g^(n-1) for the field generator g.
    static VandermondeSpec standard(std::size_t k, std::size_t n, bool systematic = false);

    /// Throws ParameterError for n < k, n > 255, zero or repeated points.
    void validate() const;
};

/// The k x n' matrix whose row j is [1, a_j, a_j^2, ..., a_j^(k-1)].
FieldMatrix vandermonde(std::span<const Symbol> points, std::size_t k);

/// Immutable encoder/decoder for one VandermondeSpec.
class RsCode {
public:
    explicit RsCode(VandermondeSpec spec);

    const VandermondeSpec& spec() const noexcept { return spec_; }
    SchemeId scheme() const noexcept { return spec_.systematic ? SchemeId::rs_systematic : SchemeId::rs; }
    /// n x k generator; for systematic codes the first k rows form the identity.
    const FieldMatrix& generator() const noexcept { return generator_; }
    std::vector<Symbol> row(std::size_t j) const;

    CodedPacket encode_packet(const InputBlock& block, std::size_t j) const;
    std::vector<CodedPacket> encode(const InputBlock& block) const;

    /// Solves the k x k system formed by the first k packets. Throws
    /// InsufficientPacketsError for fewer than k and DuplicatePacketError for
    /// repeated rows.
    InputBlock decode(std::span<const CodedPacket> packets, OpCounter& counter) const;
    InputBlock decode(std::span<const CodedPacket> packets) const;

    std::unique_ptr<LinearDecoder> make_decoder(std::size_t packet_len) const;

private:
    VandermondeSpec spec_;
    FieldMatrix generator_;
};

std::vector<CodedPacket> rs_encode(const InputBlock& block, const VandermondeSpec& spec);
InputBlock rs_decode(std::span<const CodedPacket> packets, const VandermondeSpec& spec);

}  // namespace fountain
