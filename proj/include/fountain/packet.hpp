#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fountain/gf.hpp"
#include "fountain/linalg.hpp"

namespace fountain {

enum class SchemeId : std::uint8_t {
    rs = 1,
    rs_systematic = 2,
    rl_gf2 = 3,
    rl_gf256 = 4,
    lt = 5,
    raptor = 6,
    triangular = 7,
};

const char* to_string(SchemeId scheme) noexcept;
/// Accepts the names printed by to_string. Throws UsageError otherwise.
SchemeId scheme_from_string(const std::string& name);
bool is_known_scheme(std::uint8_t id) noexcept;
/// Schemes whose coding vectors live in GF(2).
bool is_binary_scheme(SchemeId scheme) noexcept;
bool is_linear_scheme(SchemeId scheme) noexcept;

/// k source packets of B bytes each.
struct InputBlock {
    std::size_t k = 0;
    std::size_t packet_len = 0;
    std::vector<Payload> packets;

    /// Throws UsageError on an empty block, empty packets or unequal lengths.
    static InputBlock from_packets(std::vector<Payload> packets);
    /// Splits bytes into k packets of B bytes, zero-padding the tail.
    static InputBlock from_bytes(std::span<const std::uint8_t> bytes, std::size_t k, std::size_t packet_len);
    /// Random payloads, for tests and benchmarks.
    static InputBlock random(std::size_t k, std::size_t packet_len, std::uint64_t seed);

    std::vector<std::uint8_t> concat() const;

    friend bool operator==(const InputBlock&, const InputBlock&) = default;
};

enum class HeaderKind : std::uint8_t {
    coefficients = 0,
    seed_degree = 1,
    row_index = 2,
    shift_list = 3,
};

struct CoefficientHeader {
    std::vector<Symbol> coefficients;
    friend bool operator==(const CoefficientHeader&, const CoefficientHeader&) = default;
};

/// Raptor packets carry the precode parameters next to the LT fields.
struct PrecodeFields {
    std::uint64_t seed = 0;
    std::uint32_t j = 0;
    std::uint16_t row_weight = 0;
    friend bool operator==(const PrecodeFields&, const PrecodeFields&) = default;
};

struct SeedHeader {
    std::uint64_t seed = 0;
    std::uint16_t degree = 0;
    std::optional<PrecodeFields> precode;
    friend bool operator==(const SeedHeader&, const SeedHeader&) = default;
};

struct RowIndexHeader {
    std::uint32_t row = 0;
    friend bool operator==(const RowIndexHeader&, const RowIndexHeader&) = default;
};

inline constexpr std::uint16_t kNoShift = 0xFFFF;

/// One entry per input packet; kNoShift marks inputs left out of the sum.
struct ShiftHeader {
    std::vector<std::uint16_t> shifts;
    friend bool operator==(const ShiftHeader&, const ShiftHeader&) = default;
};

using Header = std::variant<CoefficientHeader, SeedHeader, RowIndexHeader, ShiftHeader>;

HeaderKind header_kind(const Header& h) noexcept;

struct CodedPacket {
    SchemeId scheme = SchemeId::lt;
    std::uint32_t k = 0;
    std::uint32_t packet_len = 0;
    Header header;
    Payload payload;

    friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

/// Status of a decoding session. Only ever moves forward.
enum class DecodeStatus {
    needs_more,
    decodable,
    decoded,
};

const char* to_string(DecodeStatus status) noexcept;

}  // namespace fountain
