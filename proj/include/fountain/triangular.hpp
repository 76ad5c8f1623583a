#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "fountain/decoder.hpp"
#include "fountain/packet.hpp"

namespace fountain {

/// Participants of one coded packet and the number of zero bits appended at
/// the tail of each (a multiplication by 2^shift).
struct ShiftVector {
    std::vector<std::uint32_t> participants;
    std::vector<std::uint16_t> shifts;

    static ShiftVector plain(std::uint32_t index);
    /// All inputs, shift 0: the plain XOR of the block.
    static ShiftVector xor_all(std::size_t k);
    /// Input i shifted by i.
    static ShiftVector staircase(std::size_t k);
    /// Input i shifted by k - 1 - i.
    static ShiftVector reversed_staircase(std::size_t k);

    /// Throws ParameterError for an empty or malformed vector, repeated or
    /// out-of-range participants, or a shift above k - 1.
    void validate(std::size_t k) const;
    std::size_t max_shift() const noexcept;
    ShiftHeader to_header(std::size_t k) const;
    static ShiftVector from_header(const ShiftHeader& h);

    friend bool operator==(const ShiftVector&, const ShiftVector&) = default;
};

/// XOR of the participants after shifting each left by its shift, tails
/// aligned, in B + ceil(max_shift / 8) bytes with zero head padding.
CodedPacket tri_encode(const InputBlock& block, const ShiftVector& sv);

/// `count` vectors over all k inputs, each with shifts forming a random
/// permutation of 0..k-1.
std::vector<ShiftVector> tri_plan_shifts(std::size_t k, std::size_t count, std::uint64_t seed);

/// Vector `index` of the session stream: the k plain inputs, then the plain
/// XOR, the staircase, the reversed staircase, then planned permutations.
ShiftVector tri_stream_vector(std::size_t k, std::size_t index, std::uint64_t seed);

class TriangularEncoder {
public:
    TriangularEncoder(InputBlock block, std::uint64_t seed);

    CodedPacket next();
    std::size_t emitted() const noexcept { return emitted_; }

private:
    InputBlock block_;
    std::uint64_t seed_;
    std::size_t emitted_ = 0;
};

/// Bit-level substitution decoder.
///
/// Every bit of every received packet is one equation over the unknown input
/// bits. An equation with exactly one unknown bit left resolves it, and the
/// value is substituted into every other equation holding that bit. Plain
/// GF(2) packets (random linear over GF(2), LT) are accepted as shift-0 packets.
class TriangularDecoder : public Decoder {
public:
    TriangularDecoder(std::size_t k, std::size_t packet_len);

    std::size_t rank() const override;
    std::size_t resolved_bits() const noexcept { return resolved_; }
    std::size_t unresolved_bits() const noexcept { return values_.size() - resolved_; }
    std::vector<std::size_t> undecoded_packets() const;

protected:
    bool accepts(SchemeId scheme) const override;
    bool absorb(const CodedPacket& p) override;
    bool complete() override { return resolved_ == values_.size(); }
    InputBlock finish() override;

private:
    struct Equation {
        std::uint32_t unknowns = 0;
        std::uint32_t id_xor = 0;
        std::uint8_t value = 0;
    };

    void resolve(std::uint32_t bit, std::uint8_t value);
    void drain();

    std::size_t bits_per_packet_;
    std::vector<std::int8_t> values_;
    std::size_t resolved_ = 0;
    std::vector<Equation> eqs_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint32_t> ripple_;
    std::set<std::vector<std::uint16_t>> seen_;
};

struct TriDecodeResult {
    bool success = false;
    std::optional<InputBlock> block;
    std::size_t unresolved_bits = 0;
    OpCounter counter;
};

TriDecodeResult tri_decode(std::span<const CodedPacket> packets, std::size_t k);

}  // namespace fountain
