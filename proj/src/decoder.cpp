#include "fountain/decoder.hpp"

#include <algorithm>
#include <limits>

#include "fountain/errors.hpp"

namespace fountain {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

Decoder::Decoder(std::size_t k, std::size_t packet_len) : k_(k), packet_len_(packet_len) {
    if (k == 0 || packet_len == 0) throw UsageError("k and B must be positive");
}

DecodeStatus Decoder::ingest(const CodedPacket& p) {
    if (!accepts(p.scheme)) throw UsageError(std::string("decoder does not accept ") + to_string(p.scheme) + " packets");
    if (p.k != k_ || p.packet_len != packet_len_) throw UsageError("packet belongs to a block of another shape");
    if (status_ != DecodeStatus::needs_more) {
        ++received_;
        return status_;
    }
    const bool innovative = absorb(p);
    ++received_;
    if (innovative) ++accepted_;
    if (complete()) {
        status_ = DecodeStatus::decodable;
        received_at_decodable_ = received_;
    }
    return status_;
}

const InputBlock& Decoder::decode() {
    if (status_ == DecodeStatus::needs_more)
        throw UsageError("not enough innovative packets to decode (rank " + std::to_string(rank()) + " of " +
                         std::to_string(k_) + ")");
    if (status_ == DecodeStatus::decodable) {
        block_ = finish();
        status_ = DecodeStatus::decoded;
    }
    return *block_;
}

LinearDecoder::LinearDecoder(FieldPtr field, std::size_t k, std::size_t packet_len, std::vector<SchemeId> schemes,
                             CoefficientFn coefficients)
    : Decoder(k, packet_len), field_(std::move(field)), schemes_(std::move(schemes)),
      coefficients_(std::move(coefficients)), pivot_row_(k, kNone) {
    if (!field_->supports_byte_payloads()) throw UsageError("linear decoding needs GF(2) or GF(256)");
}

bool LinearDecoder::accepts(SchemeId scheme) const {
    return std::find(schemes_.begin(), schemes_.end(), scheme) != schemes_.end();
}

bool LinearDecoder::absorb(const CodedPacket& p) {
    std::vector<Symbol> coef = coefficients_(p);
    if (coef.size() != k()) throw ParseError(ParseErrorKind::bad_header, "coding vector length is not k");
    for (auto c : coef)
        if (!field_->contains(c)) throw ParseError(ParseErrorKind::bad_header, "coefficient outside the field");
    if (p.payload.size() != packet_len()) throw ParseError(ParseErrorKind::bad_header, "payload length is not B");

    const GaloisField& f = *field_;
    const std::size_t n = k();
    Payload payload = p.payload;
    for (std::size_t c = 0; c < n; ++c) {
        const Symbol factor = coef[c];
        if (factor == 0 || pivot_row_[c] == kNone) continue;
        const Row& pr = rows_[pivot_row_[c]];
        for (std::size_t t = c; t < n; ++t) coef[t] ^= f.mul_unchecked(factor, pr.coef[t]);
        f.mul_add_region(payload, pr.payload, factor);
        ++counter_.row_xor;
        if (factor != 1) counter_.symbol_mul += (n - c) + payload.size();
    }
    std::size_t lead = 0;
    while (lead < n && coef[lead] == 0) ++lead;
    if (lead == n) return false;

    if (coef[lead] != 1) {
        const Symbol inv = f.inv(coef[lead]);
        for (std::size_t t = lead; t < n; ++t) coef[t] = f.mul_unchecked(coef[t], inv);
        f.scale_region(payload, inv);
        ++counter_.row_scale;
        counter_.symbol_mul += (n - lead) + payload.size();
    }
    pivot_row_[lead] = rows_.size();
    rows_.push_back(Row{std::move(coef), std::move(payload), lead});
    return true;
}

InputBlock LinearDecoder::finish() {
    const std::size_t n = k();
    std::vector<Payload> rhs(n);
    if (field_->is_binary()) {
        BitMatrix upper(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            const Row& row = rows_[pivot_row_[r]];
            for (std::size_t c = r; c < n; ++c)
                if (row.coef[c]) upper.set(r, c, true);
            rhs[r] = row.payload;
        }
        return InputBlock::from_packets(back_substitute(upper, std::move(rhs), counter_));
    }
    FieldMatrix upper(field_, n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const Row& row = rows_[pivot_row_[r]];
        std::copy(row.coef.begin(), row.coef.end(), upper.row(r).begin());
        rhs[r] = row.payload;
    }
    return InputBlock::from_packets(back_substitute(upper, std::move(rhs), counter_));
}

}  // namespace fountain
