#include "fountain/wire.hpp"

#include <algorithm>
#include <string>

#include "fountain/errors.hpp"

namespace fountain {

namespace {

HeaderKind expected_kind(SchemeId scheme) noexcept {
    switch (scheme) {
        case SchemeId::rs:
        case SchemeId::rs_systematic: return HeaderKind::row_index;
        case SchemeId::rl_gf2:
        case SchemeId::rl_gf256: return HeaderKind::coefficients;
        case SchemeId::lt:
        case SchemeId::raptor: return HeaderKind::seed_degree;
        case SchemeId::triangular: return HeaderKind::shift_list;
    }
    return HeaderKind::coefficients;
}

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    std::vector<std::uint8_t>& out() { return out_; }

private:
    void put(std::uint64_t v, int n) {
        for (int i = n - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::size_t offset) : bytes_(bytes), pos_(offset) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n)
            throw ParseError(ParseErrorKind::truncated,
                             "need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_));
    }
    std::uint64_t get(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 8) | bytes_[pos_++];
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_;
};

std::size_t packed_bits_len(std::size_t k) noexcept { return (k + 7) / 8; }

void bad_header(const std::string& what) {
    throw ParseError(ParseErrorKind::bad_header, what);
}

Header parse_header(SchemeId scheme, std::uint32_t k, HeaderKind kind, std::span<const std::uint8_t> raw) {
    Reader r(raw, 0);
    Header h;
    switch (kind) {
        case HeaderKind::coefficients: {
            CoefficientHeader c;
            c.coefficients.resize(k);
            if (scheme == SchemeId::rl_gf2) {
                if (raw.size() != packed_bits_len(k)) bad_header("packed coefficient length mismatch");
                for (std::uint32_t i = 0; i < k; ++i) c.coefficients[i] = (raw[i / 8] >> (7 - i % 8)) & 1u;
                if (k % 8 != 0 && (raw.back() & ((1u << (8 - k % 8)) - 1)) != 0) bad_header("nonzero padding bits");
            } else {
                if (raw.size() != k) bad_header("coefficient count mismatch");
                for (std::uint32_t i = 0; i < k; ++i) c.coefficients[i] = raw[i];
            }
            h = std::move(c);
            return h;
        }
        case HeaderKind::seed_degree: {
            const std::size_t want = scheme == SchemeId::raptor ? 24 : 10;
            if (raw.size() != want) bad_header("seed header length mismatch");
            SeedHeader s;
            s.seed = r.u64();
            s.degree = r.u16();
            if (scheme == SchemeId::raptor) {
                PrecodeFields p;
                p.seed = r.u64();
                p.j = r.u32();
                p.row_weight = r.u16();
                s.precode = p;
            }
            h = s;
            return h;
        }
        case HeaderKind::row_index: {
            if (raw.size() != 4) bad_header("row index header length mismatch");
            h = RowIndexHeader{r.u32()};
            return h;
        }
        case HeaderKind::shift_list: {
            if (raw.size() < 2) bad_header("shift list too short");
            const std::uint16_t count = r.u16();
            if (count != k) bad_header("shift list count must equal k");
            if (raw.size() != 2 + 2 * static_cast<std::size_t>(count)) bad_header("shift list length mismatch");
            ShiftHeader sh;
            sh.shifts.resize(count);
            for (auto& s : sh.shifts) s = r.u16();
            h = std::move(sh);
            return h;
        }
    }
    bad_header("unknown header kind");
    return h;
}

}  // namespace

std::size_t expected_payload_len(const CodedPacket& p) {
    if (const auto* sh = std::get_if<ShiftHeader>(&p.header)) {
        std::size_t max_shift = 0;
        for (auto s : sh->shifts)
            if (s != kNoShift) max_shift = std::max<std::size_t>(max_shift, s);
        return p.packet_len + (max_shift + 7) / 8;
    }
    return p.packet_len;
}

std::vector<std::uint8_t> encode_header(const CodedPacket& p) {
    Writer w;
    std::visit(
        [&](const auto& h) {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, CoefficientHeader>) {
                if (h.coefficients.size() != p.k) throw UsageError("coefficient count must equal k");
                if (p.scheme == SchemeId::rl_gf2) {
                    std::vector<std::uint8_t> packed(packed_bits_len(p.k), 0);
                    for (std::size_t i = 0; i < p.k; ++i) {
                        if (h.coefficients[i] > 1) throw UsageError("GF(2) coefficient out of range");
                        if (h.coefficients[i]) packed[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
                    }
                    w.bytes(packed);
                } else {
                    for (auto c : h.coefficients) {
                        if (c > 0xFF) throw UsageError("GF(256) coefficient out of range");
                        w.u8(static_cast<std::uint8_t>(c));
                    }
                }
            } else if constexpr (std::is_same_v<T, SeedHeader>) {
                if (h.precode.has_value() != (p.scheme == SchemeId::raptor))
                    throw UsageError("precode fields belong to raptor packets only");
                w.u64(h.seed);
                w.u16(h.degree);
                if (h.precode) {
                    w.u64(h.precode->seed);
                    w.u32(h.precode->j);
                    w.u16(h.precode->row_weight);
                }
            } else if constexpr (std::is_same_v<T, RowIndexHeader>) {
                w.u32(h.row);
            } else {
                if (h.shifts.size() != p.k) throw UsageError("shift list length must equal k");
                if (h.shifts.size() > 0xFFFF) throw UsageError("shift list too long");
                w.u16(static_cast<std::uint16_t>(h.shifts.size()));
                for (auto s : h.shifts) w.u16(s);
            }
        },
        p.header);
    return std::move(w.out());
}

std::vector<std::uint8_t> serialize(const CodedPacket& p) {
    if (!is_known_scheme(static_cast<std::uint8_t>(p.scheme))) throw UsageError("unknown scheme");
    if (header_kind(p.header) != expected_kind(p.scheme)) throw UsageError("header kind does not match scheme");
    if (p.payload.size() != expected_payload_len(p)) throw UsageError("payload length does not match header");
    const auto header = encode_header(p);
    if (header.size() > 0xFFFF) throw UsageError("header longer than 65535 bytes");

    Writer w;
    w.u8(kWireMagic);
    w.u8(kWireVersion);
    w.u8(static_cast<std::uint8_t>(p.scheme));
    w.u32(p.k);
    w.u32(p.packet_len);
    w.u8(static_cast<std::uint8_t>(header_kind(p.header)));
    w.u16(static_cast<std::uint16_t>(header.size()));
    w.bytes(header);
    w.bytes(p.payload);
    return std::move(w.out());
}

CodedPacket read_frame(std::span<const std::uint8_t> bytes, std::size_t& offset) {
    Reader r(bytes, offset);
    if (r.u8() != kWireMagic) throw ParseError(ParseErrorKind::bad_magic, "expected 0xEC");
    const std::uint8_t version = r.u8();
    if (version != kWireVersion)
        throw ParseError(ParseErrorKind::bad_version, "unsupported version " + std::to_string(version));
    const std::uint8_t scheme_id = r.u8();
    if (!is_known_scheme(scheme_id))
        throw ParseError(ParseErrorKind::unknown_scheme, "scheme id " + std::to_string(scheme_id));

    CodedPacket p;
    p.scheme = static_cast<SchemeId>(scheme_id);
    p.k = r.u32();
    p.packet_len = r.u32();
    if (p.k == 0 || p.packet_len == 0) bad_header("k and B must be positive");
    const std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(HeaderKind::shift_list)) bad_header("unknown header kind");
    if (static_cast<HeaderKind>(kind) != expected_kind(p.scheme)) bad_header("header kind does not match scheme");
    const std::uint16_t header_len = r.u16();
    p.header = parse_header(p.scheme, p.k, static_cast<HeaderKind>(kind), r.bytes(header_len));
    const auto payload = r.bytes(expected_payload_len(p));
    p.payload.assign(payload.begin(), payload.end());
    offset = r.pos();
    return p;
}

CodedPacket deserialize(std::span<const std::uint8_t> bytes) {
    std::size_t offset = 0;
    CodedPacket p = read_frame(bytes, offset);
    if (offset != bytes.size()) bad_header("trailing bytes after frame");
    return p;
}

std::vector<std::uint8_t> serialize_stream(std::span<const CodedPacket> packets) {
    std::vector<std::uint8_t> out;
    for (const auto& p : packets) {
        const auto frame = serialize(p);
        out.insert(out.end(), frame.begin(), frame.end());
    }
    return out;
}

std::vector<CodedPacket> deserialize_stream(std::span<const std::uint8_t> bytes) {
    std::vector<CodedPacket> packets;
    std::size_t offset = 0;
    while (offset < bytes.size()) packets.push_back(read_frame(bytes, offset));
    return packets;
}

}  // namespace fountain
