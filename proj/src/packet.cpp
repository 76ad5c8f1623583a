#include "fountain/packet.hpp"

#include <array>

#include "fountain/errors.hpp"
#include "fountain/rng.hpp"

namespace fountain {

namespace {

constexpr std::array<const char*, 8> kSchemeNames = {
    "", "rs", "rs_systematic", "rl_gf2", "rl_gf256", "lt", "raptor", "triangular",
};

}  // namespace

const char* to_string(SchemeId scheme) noexcept {
    const auto i = static_cast<std::size_t>(scheme);
    return i < kSchemeNames.size() ? kSchemeNames[i] : "unknown";
}

SchemeId scheme_from_string(const std::string& name) {
    for (std::size_t i = 1; i < kSchemeNames.size(); ++i)
        if (name == kSchemeNames[i]) return static_cast<SchemeId>(i);
    throw UsageError("unknown scheme '" + name + "'");
}

bool is_known_scheme(std::uint8_t id) noexcept {
    return id >= 1 && id < kSchemeNames.size();
}

bool is_binary_scheme(SchemeId scheme) noexcept {
    return scheme == SchemeId::rl_gf2 || scheme == SchemeId::lt || scheme == SchemeId::raptor;
}

bool is_linear_scheme(SchemeId scheme) noexcept {
    return scheme != SchemeId::triangular;
}

InputBlock InputBlock::from_packets(std::vector<Payload> packets) {
    if (packets.empty()) throw UsageError("input block needs at least one packet");
    const std::size_t len = packets.front().size();
    if (len == 0) throw UsageError("input packets must be at least one byte");
    for (const auto& p : packets)
        if (p.size() != len) throw UsageError("input packets differ in length");
    InputBlock b;
    b.k = packets.size();
    b.packet_len = len;
    b.packets = std::move(packets);
    return b;
}

InputBlock InputBlock::from_bytes(std::span<const std::uint8_t> bytes, std::size_t k, std::size_t packet_len) {
    if (k == 0 || packet_len == 0) throw UsageError("k and B must be positive");
    if (bytes.size() > k * packet_len) throw UsageError("data does not fit in k packets of B bytes");
    std::vector<Payload> packets(k, Payload(packet_len, 0));
    for (std::size_t i = 0; i < bytes.size(); ++i) packets[i / packet_len][i % packet_len] = bytes[i];
    return from_packets(std::move(packets));
}

InputBlock InputBlock::random(std::size_t k, std::size_t packet_len, std::uint64_t seed) {
    if (k == 0 || packet_len == 0) throw UsageError("k and B must be positive");
    SplitMix64 rng(seed);
    std::vector<Payload> packets(k, Payload(packet_len));
    for (auto& p : packets)
        for (auto& b : p) b = static_cast<std::uint8_t>(rng.next());
    return from_packets(std::move(packets));
}

std::vector<std::uint8_t> InputBlock::concat() const {
    std::vector<std::uint8_t> out;
    out.reserve(k * packet_len);
    for (const auto& p : packets) out.insert(out.end(), p.begin(), p.end());
    return out;
}

HeaderKind header_kind(const Header& h) noexcept {
    return static_cast<HeaderKind>(h.index());
}

const char* to_string(DecodeStatus status) noexcept {
    switch (status) {
        case DecodeStatus::needs_more: return "needs_more";
        case DecodeStatus::decodable: return "decodable";
        case DecodeStatus::decoded: return "decoded";
    }
    return "unknown";
}

}  // namespace fountain
