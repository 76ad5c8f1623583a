#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "fountain/linalg.hpp"
#include "fountain/packet.hpp"

namespace fountain {

/// Receiver side of one coded session.
///
/// Packets for a different scheme or block shape are rejected with a
/// UsageError; malformed headers with a ParseError. Packets that add no new
/// information are counted and dropped without touching the state.
class Decoder {
public:
    Decoder(std::size_t k, std::size_t packet_len);
    virtual ~Decoder() = default;

    Decoder(const Decoder&) = delete;
    Decoder& operator=(const Decoder&) = delete;

    DecodeStatus ingest(const CodedPacket& p);
    DecodeStatus status() const noexcept { return status_; }

    /// Finishes decoding and returns the block. Throws UsageError while more
    /// packets are needed.
    const InputBlock& decode();
    const std::optional<InputBlock>& block() const noexcept { return block_; }

    std::size_t k() const noexcept { return k_; }
    std::size_t packet_len() const noexcept { return packet_len_; }
    std::size_t received() const noexcept { return received_; }
    std::size_t accepted() const noexcept { return accepted_; }
    std::size_t discarded() const noexcept { return received_ - accepted_; }
    /// Packets received when the status first left needs_more (0 before).
    std::size_t received_at_decodable() const noexcept { return received_at_decodable_; }
    virtual std::size_t rank() const = 0;

    const OpCounter& counter() const noexcept { return counter_; }

protected:
    virtual bool accepts(SchemeId scheme) const = 0;
    /// Returns true when the packet was innovative and kept.
    virtual bool absorb(const CodedPacket& p) = 0;
    virtual bool complete() = 0;
    virtual InputBlock finish() = 0;

    OpCounter counter_;

private:
    std::size_t k_;
    std::size_t packet_len_;
    std::size_t received_ = 0;
    std::size_t accepted_ = 0;
    std::size_t received_at_decodable_ = 0;
    DecodeStatus status_ = DecodeStatus::needs_more;
    std::optional<InputBlock> block_;
};

using CoefficientFn = std::function<std::vector<Symbol>(const CodedPacket&)>;

/// Incremental Gaussian elimination for schemes with explicit coding vectors.
///
/// Each kept row is reduced against earlier pivots and normalized so its
/// leading coefficient is 1. Status becomes decodable at rank k; decode()
/// then back-substitutes.
class LinearDecoder : public Decoder {
public:
    LinearDecoder(FieldPtr field, std::size_t k, std::size_t packet_len, std::vector<SchemeId> schemes,
                  CoefficientFn coefficients);

    std::size_t rank() const override { return rows_.size(); }
    const FieldPtr& field() const noexcept { return field_; }

protected:
    bool accepts(SchemeId scheme) const override;
    bool absorb(const CodedPacket& p) override;
    bool complete() override { return rows_.size() == k(); }
    InputBlock finish() override;

private:
    struct Row {
        std::vector<Symbol> coef;
        Payload payload;
        std::size_t pivot;
    };

    FieldPtr field_;
    std::vector<SchemeId> schemes_;
    CoefficientFn coefficients_;
    std::vector<Row> rows_;
    std::vector<std::size_t> pivot_row_;
};

}  // namespace fountain
