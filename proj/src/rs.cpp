#include "fountain/rs.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fountain/errors.hpp"

namespace fountain {

VandermondeSpec VandermondeSpec::standard(std::size_t k, std::size_t n, bool systematic) {
    VandermondeSpec s;
    s.k = k;
    s.n = n;
    s.systematic = systematic;
    const auto f = GaloisField::gf256();
    if (n > f->order()) throw ParameterError("n = " + std::to_string(n) + " exceeds the 255 points of GF(256)");
    for (std::size_t j = 0; j < n; ++j) s.points.push_back(f->exp(j));
    return s;
}

void VandermondeSpec::validate() const {
    if (k == 0) throw ParameterError("k must be positive");
    if (n < k) throw ParameterError("n must be at least k");
    if (n > 255) throw ParameterError("n = " + std::to_string(n) + " exceeds the 255 points of GF(256)");
    if (points.size() != n) throw ParameterError("need exactly n evaluation points");
    std::set<Symbol> seen;
    for (auto a : points) {
        if (a == 0 || a > 255) throw ParameterError("evaluation points must be nonzero GF(256) symbols");
        if (!seen.insert(a).second) throw ParameterError("evaluation points must be distinct");
    }
}

FieldMatrix vandermonde(std::span<const Symbol> points, std::size_t k) {
    const auto f = GaloisField::gf256();
    FieldMatrix m(f, points.size(), k);
    for (std::size_t r = 0; r < points.size(); ++r) {
        Symbol v = 1;
        for (std::size_t c = 0; c < k; ++c) {
            m.row(r)[c] = v;
            v = f->mul(v, points[r]);
        }
    }
    return m;
}

RsCode::RsCode(VandermondeSpec spec)
    : spec_(std::move(spec)), generator_(GaloisField::gf256(), 0, 0) {
    spec_.validate();
    FieldMatrix m = vandermonde(spec_.points, spec_.k);
    if (spec_.systematic) {
        std::vector<Symbol> head(spec_.points.begin(), spec_.points.begin() + static_cast<std::ptrdiff_t>(spec_.k));
        m = m * invert(vandermonde(head, spec_.k));
    }
    generator_ = std::move(m);
}

std::vector<Symbol> RsCode::row(std::size_t j) const {
    if (j >= spec_.n) throw UsageError("row index " + std::to_string(j) + " outside the code length");
    const auto r = generator_.row(j);
    return {r.begin(), r.end()};
}

CodedPacket RsCode::encode_packet(const InputBlock& block, std::size_t j) const {
    if (block.k != spec_.k) throw UsageError("block size does not match the code dimension");
    if (j >= spec_.n) throw UsageError("row index " + std::to_string(j) + " outside the code length");
    const auto coef = generator_.row(j);
    const GaloisField& f = *generator_.field();
    CodedPacket p;
    p.scheme = scheme();
    p.k = static_cast<std::uint32_t>(spec_.k);
    p.packet_len = static_cast<std::uint32_t>(block.packet_len);
    p.header = RowIndexHeader{static_cast<std::uint32_t>(j)};
    p.payload.assign(block.packet_len, 0);
    for (std::size_t i = 0; i < spec_.k; ++i) f.mul_add_region(p.payload, block.packets[i], coef[i]);
    return p;
}

std::vector<CodedPacket> RsCode::encode(const InputBlock& block) const {
    std::vector<CodedPacket> out;
    out.reserve(spec_.n);
    for (std::size_t j = 0; j < spec_.n; ++j) out.push_back(encode_packet(block, j));
    return out;
}

InputBlock RsCode::decode(std::span<const CodedPacket> packets, OpCounter& counter) const {
    const std::size_t k = spec_.k;
    if (packets.size() < k) throw InsufficientPacketsError(packets.size(), k);
    FieldMatrix m(generator_.field(), k, k);
    std::vector<Payload> rhs;
    std::set<std::uint32_t> rows;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& p = packets[i];
        if (p.scheme != scheme()) throw UsageError("packet scheme does not match the code");
        const auto* h = std::get_if<RowIndexHeader>(&p.header);
        if (h == nullptr) throw ParseError(ParseErrorKind::bad_header, "RS packets carry a row index");
        if (!rows.insert(h->row).second) throw DuplicatePacketError("row " + std::to_string(h->row) + " repeated");
        const auto r = row(h->row);
        std::copy(r.begin(), r.end(), m.row(i).begin());
        rhs.push_back(p.payload);
    }
    return InputBlock::from_packets(solve(m, std::move(rhs), counter));
}

InputBlock RsCode::decode(std::span<const CodedPacket> packets) const {
    OpCounter scratch;
    return decode(packets, scratch);
}

std::unique_ptr<LinearDecoder> RsCode::make_decoder(std::size_t packet_len) const {
    const FieldMatrix g = generator_;
    const std::size_t n = spec_.n;
    return std::make_unique<LinearDecoder>(
        GaloisField::gf256(), spec_.k, packet_len, std::vector<SchemeId>{scheme()},
        [g, n](const CodedPacket& p) {
            const auto* h = std::get_if<RowIndexHeader>(&p.header);
            if (h == nullptr) throw ParseError(ParseErrorKind::bad_header, "RS packets carry a row index");
            if (h->row >= n) throw ParseError(ParseErrorKind::bad_header, "row index outside the code length");
            const auto r = g.row(h->row);
            return std::vector<Symbol>(r.begin(), r.end());
        });
}

std::vector<CodedPacket> rs_encode(const InputBlock& block, const VandermondeSpec& spec) {
    return RsCode(spec).encode(block);
}

InputBlock rs_decode(std::span<const CodedPacket> packets, const VandermondeSpec& spec) {
    return RsCode(spec).decode(packets);
}

}  // namespace fountain
