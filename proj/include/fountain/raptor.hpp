#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fountain/decoder.hpp"
#include "fountain/lt.hpp"
#include "fountain/packet.hpp"

namespace fountain {

struct PrecodeSpec {
    std::size_t k = 0;
    std::size_t j = 0;
    std::size_t row_weight = 3;
    std::uint64_t seed = 0;

    /// ceil(0.05 k) + 4.
    static std::size_t default_j(std::size_t k) noexcept;
    static PrecodeSpec standard(std::size_t k, std::uint64_t seed);

    std::size_t intermediate() const noexcept { return k + j; }
    /// Throws ParameterError unless k >= 1 and 1 <= row_weight <= k.
    void validate() const;
};

/// Source inputs of each parity packet, in draw order.
std::vector<std::vector<std::uint32_t>> precode_sources(const PrecodeSpec& spec);

/// The k inputs followed by the j parity packets.
std::vector<Payload> precode(const InputBlock& block, const PrecodeSpec& spec);

/// Even mixture of a robust soliton (ideal soliton when the robust parameters
/// do not fit) and a point mass at min(dense_degree, ceil(L/2)). The dense half keeps the
/// received rows close to uniform so few packets beyond k are wasted.
DegreeDistribution raptor_mixed_distribution(std::size_t intermediate, std::size_t dense_degree = 12,
                                             double c = 0.05, double delta = 0.01);

/// LT distribution used by default for an intermediate block of L packets.
DegreeDistribution raptor_default_distribution(std::size_t intermediate);

class RaptorEncoder {
public:
    RaptorEncoder(PrecodeSpec spec, DegreeDistribution dist, const InputBlock& block, std::uint64_t seed);

    CodedPacket next();
    CodedPacket packet_for_seed(std::uint64_t packet_seed) const;

    const PrecodeSpec& spec() const noexcept { return spec_; }
    const std::vector<Payload>& intermediate() const noexcept { return intermediate_; }
    std::size_t emitted() const noexcept { return emitted_; }

private:
    PrecodeSpec spec_;
    DegreeDistribution dist_;
    std::size_t packet_len_;
    std::vector<Payload> intermediate_;
    std::uint64_t seed_;
    std::size_t emitted_ = 0;
};

/// A GF(2) system in neighbour-list form.
struct BinarySystem {
    std::size_t unknowns = 0;
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<Payload> payloads;

    BitMatrix to_matrix() const;
};

/// Received LT rows over the intermediate block, followed by one zero-payload
/// row per parity constraint (parity packet XOR its sources).
BinarySystem raptor_system(std::span<const CodedPacket> packets, std::size_t k);

struct InactivationReport {
    bool success = false;
    std::vector<Payload> values;
    std::size_t inactivations = 0;
    std::size_t core_rows = 0;
    std::size_t rank = 0;
    OpCounter counter;
};

/// Peel; on a stall inactivate the unresolved unknown with the most incident
/// rows (lowest index on ties) and keep peeling; then eliminate the dense
/// core over the inactive unknowns and back-substitute.
InactivationReport inactivation_solve(const BinarySystem& system);

struct RaptorReport {
    bool success = false;
    std::optional<InputBlock> block;
    std::size_t inactivations = 0;
    std::size_t core_rows = 0;
    std::size_t rank = 0;
    std::size_t required = 0;
    OpCounter counter;
};

RaptorReport inactivation_decode(std::span<const CodedPacket> packets, std::size_t k);

/// Keeps every distinct packet and runs inactivation decoding whenever at
/// least k packets are held. The counter reflects the latest attempt.
class RaptorDecoder : public Decoder {
public:
    RaptorDecoder(std::size_t k, std::size_t packet_len);

    std::size_t rank() const override { return rank_; }
    std::size_t inactivations() const noexcept { return inactivations_; }

protected:
    bool accepts(SchemeId scheme) const override { return scheme == SchemeId::raptor; }
    bool absorb(const CodedPacket& p) override;
    bool complete() override;
    InputBlock finish() override;

private:
    std::optional<PrecodeFields> precode_;
    std::vector<CodedPacket> packets_;
    std::vector<std::uint64_t> seeds_;
    std::optional<InputBlock> result_;
    bool dirty_ = false;
    std::size_t rank_ = 0;
    std::size_t inactivations_ = 0;
};

}  // namespace fountain
