#include "fountain/codec.hpp"

#include <algorithm>
#include <string>

#include "fountain/errors.hpp"
#include "fountain/lt.hpp"
#include "fountain/raptor.hpp"
#include "fountain/rl.hpp"
#include "fountain/rs.hpp"
#include "fountain/triangular.hpp"

namespace fountain {

namespace {

class RsEncoder : public Encoder {
public:
    RsEncoder(VandermondeSpec spec, InputBlock block) : code_(std::move(spec)), block_(std::move(block)) {}
    CodedPacket next() override {
        if (index_ >= code_.spec().n) throw UsageError("fixed-rate code exhausted");
        return code_.encode_packet(block_, index_++);
    }
    std::optional<std::size_t> limit() const override { return code_.spec().n; }

private:
    RsCode code_;
    InputBlock block_;
    std::size_t index_ = 0;
};

template <typename Impl>
class Wrapped : public Encoder {
public:
    template <typename... Args>
    explicit Wrapped(Args&&... args) : impl_(std::forward<Args>(args)...) {}
    CodedPacket next() override { return impl_.next(); }

private:
    Impl impl_;
};

RlConfig rl_config(const CodecConfig& c, std::size_t k) {
    RlConfig r;
    r.field = c.scheme == SchemeId::rl_gf2 ? FieldSpec::gf2() : FieldSpec::gf256();
    r.k = k;
    r.sparsity = c.sparsity;
    r.systematic = c.systematic;
    r.seed = c.seed;
    return r;
}

PrecodeSpec precode_spec(const CodecConfig& c, std::size_t k) {
    PrecodeSpec s;
    s.k = k;
    s.j = c.raptor_j(k);
    s.row_weight = c.row_weight;
    s.seed = derive_seed(c.seed, 0x9EC0DE);
    return s;
}

}  // namespace

std::size_t CodecConfig::rs_length(std::size_t k) const noexcept {
    return n != 0 ? n : std::min<std::size_t>(2 * k, 255);
}

std::size_t CodecConfig::raptor_j(std::size_t k) const noexcept {
    return j != 0 ? j : PrecodeSpec::default_j(k);
}

void CodecConfig::validate(std::size_t k) const {
    if (k == 0) throw ParameterError("k must be positive");
    switch (scheme) {
        case SchemeId::rs:
        case SchemeId::rs_systematic: {
            const std::size_t len = rs_length(k);
            if (len < k) throw ParameterError("n must be at least k");
            if (len > 255) throw ParameterError("n exceeds the 255 points of GF(256)");
            break;
        }
        case SchemeId::rl_gf2:
        case SchemeId::rl_gf256:
            rl_config(*this, k).validate();
            break;
        case SchemeId::lt:
            if (k > 0xFFFF) throw ParameterError("LT headers carry 16-bit degrees");
            DegreeDistribution::robust(k, c, delta);
            break;
        case SchemeId::raptor:
            precode_spec(*this, k).validate();
            if (k + raptor_j(k) > 0xFFFF) throw ParameterError("raptor headers carry 16-bit degrees");
            break;
        case SchemeId::triangular:
            if (k > 0x7FFE) throw ParameterError("shift headers limit k to 32766");
            break;
    }
}

std::unique_ptr<Encoder> make_encoder(const CodecConfig& config, const InputBlock& block) {
    const std::size_t k = block.k;
    config.validate(k);
    switch (config.scheme) {
        case SchemeId::rs:
        case SchemeId::rs_systematic:
            return std::make_unique<RsEncoder>(
                VandermondeSpec::standard(k, config.rs_length(k), config.scheme == SchemeId::rs_systematic), block);
        case SchemeId::rl_gf2:
        case SchemeId::rl_gf256:
            return std::make_unique<Wrapped<RlEncoder>>(rl_config(config, k), block);
        case SchemeId::lt:
            return std::make_unique<Wrapped<LtEncoder>>(DegreeDistribution::robust(k, config.c, config.delta), block,
                                                        config.seed);
        case SchemeId::raptor: {
            const PrecodeSpec spec = precode_spec(config, k);
            return std::make_unique<Wrapped<RaptorEncoder>>(spec, raptor_default_distribution(spec.intermediate()),
                                                            block, config.seed);
        }
        case SchemeId::triangular:
            return std::make_unique<Wrapped<TriangularEncoder>>(block, config.seed);
    }
    throw UsageError("unknown scheme");
}

std::unique_ptr<Decoder> make_decoder(const CodecConfig& config, std::size_t k, std::size_t packet_len) {
    config.validate(k);
    switch (config.scheme) {
        case SchemeId::rs:
        case SchemeId::rs_systematic:
            return RsCode(VandermondeSpec::standard(k, config.rs_length(k), config.scheme == SchemeId::rs_systematic))
                .make_decoder(packet_len);
        case SchemeId::rl_gf2:
            return make_rl_decoder(FieldSpec::gf2(), k, packet_len);
        case SchemeId::rl_gf256:
            return make_rl_decoder(FieldSpec::gf256(), k, packet_len);
        case SchemeId::lt:
            return std::make_unique<LtDecoder>(k, packet_len);
        case SchemeId::raptor:
            return std::make_unique<RaptorDecoder>(k, packet_len);
        case SchemeId::triangular:
            return std::make_unique<TriangularDecoder>(k, packet_len);
    }
    throw UsageError("unknown scheme");
}

std::unique_ptr<Decoder> make_decoder_for(const CodedPacket& first) {
    CodecConfig c;
    c.scheme = first.scheme;
    if (first.scheme == SchemeId::rs || first.scheme == SchemeId::rs_systematic) {
        if (first.k > 255) throw ParseError(ParseErrorKind::bad_header, "RS block larger than 255");
        c.n = 255;
    }
    if (first.scheme == SchemeId::lt || first.scheme == SchemeId::raptor) {
        // The decoder only needs the headers; skip distribution checks.
        if (first.scheme == SchemeId::lt) return std::make_unique<LtDecoder>(first.k, first.packet_len);
        return std::make_unique<RaptorDecoder>(first.k, first.packet_len);
    }
    return make_decoder(c, first.k, first.packet_len);
}

}  // namespace fountain
