#include "fountain/rl.hpp"

#include <cmath>

#include "fountain/errors.hpp"

namespace fountain {

void RlConfig::validate() const {
    if (k == 0) throw ParameterError("k must be positive");
    if (!(sparsity > 0.0 && sparsity <= 1.0)) throw ParameterError("sparsity must be in (0, 1]");
    if (!(field == FieldSpec::gf2() || field == FieldSpec::gf256()))
        throw ParameterError("random linear codes run over GF(2) or GF(256)");
}

SchemeId RlConfig::scheme() const noexcept {
    return field.m == 1 ? SchemeId::rl_gf2 : SchemeId::rl_gf256;
}

RlEncoder::RlEncoder(RlConfig config, InputBlock block)
    : config_(config), block_(std::move(block)), field_(GaloisField::make(config.field)), rng_(config.seed) {
    config_.validate();
    if (block_.k != config_.k) throw UsageError("block size does not match k");
}

std::vector<Symbol> RlEncoder::next_vector() {
    const std::size_t k = config_.k;
    std::vector<Symbol> v(k, 0);
    if (config_.systematic && emitted_ < k) {
        v[emitted_] = 1;
        return v;
    }
    const std::uint32_t q = field_->size();
    const bool dense = config_.sparsity >= 1.0;
    for (;;) {
        bool any = false;
        for (auto& c : v) {
            if (dense) {
                c = static_cast<Symbol>(rng_.below(q));
            } else {
                c = rng_.bernoulli(config_.sparsity) ? static_cast<Symbol>(1 + rng_.below(q - 1)) : 0;
            }
            any = any || c != 0;
        }
        if (any) return v;
    }
}

CodedPacket RlEncoder::make_packet(std::vector<Symbol> coefficients) const {
    if (coefficients.size() != config_.k) throw UsageError("coefficient vector must have k entries");
    CodedPacket p;
    p.scheme = config_.scheme();
    p.k = static_cast<std::uint32_t>(config_.k);
    p.packet_len = static_cast<std::uint32_t>(block_.packet_len);
    p.payload.assign(block_.packet_len, 0);
    for (std::size_t i = 0; i < config_.k; ++i) field_->mul_add_region(p.payload, block_.packets[i], coefficients[i]);
    p.header = CoefficientHeader{std::move(coefficients)};
    return p;
}

CodedPacket RlEncoder::next() {
    auto v = next_vector();
    ++emitted_;
    return make_packet(std::move(v));
}

std::unique_ptr<LinearDecoder> make_rl_decoder(const FieldSpec& field, std::size_t k, std::size_t packet_len) {
    const FieldPtr f = GaloisField::make(field);
    const SchemeId scheme = field.m == 1 ? SchemeId::rl_gf2 : SchemeId::rl_gf256;
    return std::make_unique<LinearDecoder>(f, k, packet_len, std::vector<SchemeId>{scheme}, [](const CodedPacket& p) {
        const auto* h = std::get_if<CoefficientHeader>(&p.header);
        if (h == nullptr) throw ParseError(ParseErrorKind::bad_header, "random linear packets carry coefficients");
        return h->coefficients;
    });
}

double rl_success_probability(std::uint32_t q, std::size_t k, std::size_t received) {
    if (received < k) return 0.0;
    double p = 1.0;
    for (std::size_t i = received - k + 1; i <= received; ++i) p *= 1.0 - std::pow(static_cast<double>(q), -static_cast<double>(i));
    return p;
}

double rl_expected_extra(std::uint32_t q, std::size_t k) {
    // E[extra] = sum over r >= k of P(rank < k after r packets).
    double extra = 0.0;
    for (std::size_t r = k;; ++r) {
        const double miss = 1.0 - rl_success_probability(q, k, r);
        extra += miss;
        if (miss < 1e-15) break;
    }
    return extra;
}

}  // namespace fountain
