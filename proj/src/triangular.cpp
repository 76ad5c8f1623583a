#include "fountain/triangular.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fountain/errors.hpp"
#include "fountain/lt.hpp"
#include "fountain/rng.hpp"

namespace fountain {

ShiftVector ShiftVector::plain(std::uint32_t index) {
    return ShiftVector{{index}, {0}};
}

ShiftVector ShiftVector::xor_all(std::size_t k) {
    ShiftVector sv;
    for (std::size_t i = 0; i < k; ++i) {
        sv.participants.push_back(static_cast<std::uint32_t>(i));
        sv.shifts.push_back(0);
    }
    return sv;
}

ShiftVector ShiftVector::staircase(std::size_t k) {
    ShiftVector sv = xor_all(k);
    for (std::size_t i = 0; i < k; ++i) sv.shifts[i] = static_cast<std::uint16_t>(i);
    return sv;
}

ShiftVector ShiftVector::reversed_staircase(std::size_t k) {
    ShiftVector sv = xor_all(k);
    for (std::size_t i = 0; i < k; ++i) sv.shifts[i] = static_cast<std::uint16_t>(k - 1 - i);
    return sv;
}

void ShiftVector::validate(std::size_t k) const {
    if (participants.empty()) throw ParameterError("shift vector needs at least one participant");
    if (participants.size() != shifts.size()) throw ParameterError("one shift per participant");
    std::vector<bool> seen(k, false);
    for (std::size_t i = 0; i < participants.size(); ++i) {
        const auto p = participants[i];
        if (p >= k) throw ParameterError("participant " + std::to_string(p) + " outside the block");
        if (seen[p]) throw ParameterError("participant " + std::to_string(p) + " repeated");
        seen[p] = true;
        if (shifts[i] == kNoShift || shifts[i] > k - 1)
            throw ParameterError("shift " + std::to_string(shifts[i]) + " exceeds the cap of k - 1 = " +
                                 std::to_string(k - 1));
    }
}

std::size_t ShiftVector::max_shift() const noexcept {
    std::size_t m = 0;
    for (auto s : shifts) m = std::max<std::size_t>(m, s);
    return m;
}

ShiftHeader ShiftVector::to_header(std::size_t k) const {
    ShiftHeader h;
    h.shifts.assign(k, kNoShift);
    for (std::size_t i = 0; i < participants.size(); ++i) h.shifts[participants[i]] = shifts[i];
    return h;
}

ShiftVector ShiftVector::from_header(const ShiftHeader& h) {
    ShiftVector sv;
    for (std::size_t i = 0; i < h.shifts.size(); ++i) {
        if (h.shifts[i] == kNoShift) continue;
        sv.participants.push_back(static_cast<std::uint32_t>(i));
        sv.shifts.push_back(h.shifts[i]);
    }
    return sv;
}

CodedPacket tri_encode(const InputBlock& block, const ShiftVector& sv) {
    sv.validate(block.k);
    const std::size_t len = block.packet_len;
    const std::size_t out_len = len + (sv.max_shift() + 7) / 8;
    CodedPacket p;
    p.scheme = SchemeId::triangular;
    p.k = static_cast<std::uint32_t>(block.k);
    p.packet_len = static_cast<std::uint32_t>(len);
    p.header = sv.to_header(block.k);
    p.payload.assign(out_len, 0);
    for (std::size_t n = 0; n < sv.participants.size(); ++n) {
        const Payload& src = block.packets[sv.participants[n]];
        const std::size_t byte_shift = sv.shifts[n] / 8;
        const unsigned bit_shift = sv.shifts[n] % 8;
        // Byte b of the source sits (len - 1 - b) bytes from the tail.
        for (std::size_t b = 0; b < len; ++b) {
            const std::size_t tail = len - 1 - b + byte_shift;
            const unsigned v = src[b];
            p.payload[out_len - 1 - tail] ^= static_cast<std::uint8_t>(v << bit_shift);
            if (bit_shift != 0 && tail + 1 < out_len)
                p.payload[out_len - 2 - tail] ^= static_cast<std::uint8_t>(v >> (8 - bit_shift));
        }
    }
    return p;
}

std::vector<ShiftVector> tri_plan_shifts(std::size_t k, std::size_t count, std::uint64_t seed) {
    if (k == 0) throw ParameterError("k must be positive");
    if (k > kNoShift) throw ParameterError("k too large for 16-bit shifts");
    SplitMix64 rng(seed);
    std::vector<ShiftVector> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        ShiftVector sv = ShiftVector::xor_all(k);
        std::iota(sv.shifts.begin(), sv.shifts.end(), std::uint16_t{0});
        for (std::size_t i = k; i > 1; --i) std::swap(sv.shifts[i - 1], sv.shifts[rng.below(i)]);
        out.push_back(std::move(sv));
    }
    return out;
}

ShiftVector tri_stream_vector(std::size_t k, std::size_t index, std::uint64_t seed) {
    if (index < k) return ShiftVector::plain(static_cast<std::uint32_t>(index));
    if (index == k) return ShiftVector::xor_all(k);
    if (index == k + 1) return ShiftVector::staircase(k);
    if (index == k + 2) return ShiftVector::reversed_staircase(k);
    return tri_plan_shifts(k, 1, derive_seed(seed, index)).front();
}

TriangularEncoder::TriangularEncoder(InputBlock block, std::uint64_t seed) : block_(std::move(block)), seed_(seed) {}

CodedPacket TriangularEncoder::next() {
    return tri_encode(block_, tri_stream_vector(block_.k, emitted_++, seed_));
}

TriangularDecoder::TriangularDecoder(std::size_t k, std::size_t packet_len)
    : Decoder(k, packet_len), bits_per_packet_(packet_len * 8), values_(k * packet_len * 8, -1),
      adj_(k * packet_len * 8) {
    if (values_.size() > 0xFFFFFFFFu) throw UsageError("block too large for the bit decoder");
}

bool TriangularDecoder::accepts(SchemeId scheme) const {
    return scheme == SchemeId::triangular || scheme == SchemeId::rl_gf2 || scheme == SchemeId::lt;
}

bool TriangularDecoder::absorb(const CodedPacket& p) {
    ShiftVector sv;
    if (p.scheme == SchemeId::triangular) {
        const auto* h = std::get_if<ShiftHeader>(&p.header);
        if (h == nullptr || h->shifts.size() != k()) throw ParseError(ParseErrorKind::bad_header, "expected k shifts");
        sv = ShiftVector::from_header(*h);
        try {
            sv.validate(k());
        } catch (const ParameterError& e) {
            throw ParseError(ParseErrorKind::bad_header, e.what());
        }
    } else {
        for (auto i : binary_support(p)) {
            sv.participants.push_back(i);
            sv.shifts.push_back(0);
        }
        if (sv.participants.empty()) return false;
    }
    const std::size_t max_shift = sv.max_shift();
    const std::size_t len = packet_len() + (max_shift + 7) / 8;
    if (p.payload.size() != len) throw ParseError(ParseErrorKind::bad_header, "payload length does not match shifts");
    const std::size_t coded_bits = bits_per_packet_ + max_shift;
    for (std::size_t t = coded_bits; t < len * 8; ++t)
        if ((p.payload[len - 1 - t / 8] >> (t % 8)) & 1u)
            throw ParseError(ParseErrorKind::bad_header, "head padding bits must be zero");

    std::vector<std::uint16_t> key(k(), kNoShift);
    for (std::size_t n = 0; n < sv.participants.size(); ++n) key[sv.participants[n]] = sv.shifts[n];
    if (seen_.count(key)) return false;

    bool any_unknown = false;
    std::vector<std::uint32_t> terms;
    for (std::size_t t = 0; t < coded_bits; ++t) {
        Equation eq;
        eq.value = (p.payload[len - 1 - t / 8] >> (t % 8)) & 1u;
        terms.clear();
        for (std::size_t n = 0; n < sv.participants.size(); ++n) {
            const std::size_t s = sv.shifts[n];
            if (t < s || t - s >= bits_per_packet_) continue;
            const auto bit = static_cast<std::uint32_t>(sv.participants[n] * bits_per_packet_ + (t - s));
            if (values_[bit] >= 0) {
                eq.value ^= static_cast<std::uint8_t>(values_[bit]);
                ++counter_.bit_xor;
            } else {
                terms.push_back(bit);
                eq.id_xor ^= bit;
            }
        }
        if (terms.empty()) continue;
        any_unknown = true;
        eq.unknowns = static_cast<std::uint32_t>(terms.size());
        const auto id = static_cast<std::uint32_t>(eqs_.size());
        eqs_.push_back(eq);
        for (auto bit : terms) adj_[bit].push_back(id);
        if (eq.unknowns == 1) ripple_.push_back(id);
    }
    if (!any_unknown) return false;
    seen_.insert(std::move(key));
    drain();
    return true;
}

void TriangularDecoder::drain() {
    while (!ripple_.empty()) {
        const std::uint32_t e = ripple_.back();
        ripple_.pop_back();
        Equation& eq = eqs_[e];
        if (eq.unknowns != 1) continue;
        eq.unknowns = 0;
        resolve(eq.id_xor, eq.value);
    }
}

void TriangularDecoder::resolve(std::uint32_t bit, std::uint8_t value) {
    values_[bit] = static_cast<std::int8_t>(value);
    ++resolved_;
    ++counter_.resolve;
    for (auto e : adj_[bit]) {
        Equation& eq = eqs_[e];
        if (eq.unknowns == 0) continue;
        eq.value ^= value;
        eq.id_xor ^= bit;
        ++counter_.bit_xor;
        if (--eq.unknowns == 1) ripple_.push_back(e);
    }
    adj_[bit].clear();
    adj_[bit].shrink_to_fit();
}

std::size_t TriangularDecoder::rank() const {
    std::size_t full = 0;
    for (std::size_t i = 0; i < k(); ++i) {
        const auto first = values_.begin() + static_cast<std::ptrdiff_t>(i * bits_per_packet_);
        if (std::all_of(first, first + static_cast<std::ptrdiff_t>(bits_per_packet_), [](std::int8_t v) { return v >= 0; }))
            ++full;
    }
    return full;
}

std::vector<std::size_t> TriangularDecoder::undecoded_packets() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k(); ++i)
        for (std::size_t b = 0; b < bits_per_packet_; ++b)
            if (values_[i * bits_per_packet_ + b] < 0) {
                out.push_back(i);
                break;
            }
    return out;
}

InputBlock TriangularDecoder::finish() {
    const std::size_t len = packet_len();
    std::vector<Payload> out(k(), Payload(len, 0));
    for (std::size_t i = 0; i < k(); ++i)
        for (std::size_t b = 0; b < bits_per_packet_; ++b)
            if (values_[i * bits_per_packet_ + b]) out[i][len - 1 - b / 8] |= static_cast<std::uint8_t>(1u << (b % 8));
    return InputBlock::from_packets(std::move(out));
}

TriDecodeResult tri_decode(std::span<const CodedPacket> packets, std::size_t k) {
    if (packets.empty()) throw UsageError("no packets");
    TriangularDecoder dec(k, packets.front().packet_len);
    for (const auto& p : packets) dec.ingest(p);
    TriDecodeResult r;
    r.success = dec.status() != DecodeStatus::needs_more;
    r.unresolved_bits = dec.unresolved_bits();
    if (r.success) r.block = dec.decode();
    r.counter = dec.counter();
    return r;
}

}  // namespace fountain
