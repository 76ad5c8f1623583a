#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "fountain/decoder.hpp"
#include "fountain/gf.hpp"
#include "fountain/packet.hpp"
#include "fountain/rng.hpp"

namespace fountain {

struct RlConfig {
    FieldSpec field = FieldSpec::gf256();
    std::size_t k = 0;
    /// Probability that a coefficient is nonzero; 1 gives dense vectors.
    double sparsity = 1.0;
    /// Emit the k unit vectors before the random stream.
    bool systematic = false;
    std::uint64_t seed = 0;

    /// Throws ParameterError for k = 0, sparsity outside (0, 1], or a field
    /// other than GF(2) and GF(256).
    void validate() const;
    SchemeId scheme() const noexcept;
};

/// Rateless stream of random linear combinations. Every vector is drawn from
/// a splitmix64 session generator; all-zero draws are redrawn.
class RlEncoder {
public:
    RlEncoder(RlConfig config, InputBlock block);

    std::vector<Symbol> next_vector();
    CodedPacket next();
    CodedPacket make_packet(std::vector<Symbol> coefficients) const;

    const RlConfig& config() const noexcept { return config_; }
    std::size_t emitted() const noexcept { return emitted_; }

private:
    RlConfig config_;
    InputBlock block_;
    FieldPtr field_;
    SplitMix64 rng_;
    std::size_t emitted_ = 0;
};

std::unique_ptr<LinearDecoder> make_rl_decoder(const FieldSpec& field, std::size_t k, std::size_t packet_len);

/// Probability that `received` uniform random vectors in GF(q)^k span the
/// space: prod_{i=received-k+1}^{received} (1 - q^-i).
double rl_success_probability(std::uint32_t q, std::size_t k, std::size_t received);

/// Expected packets beyond k before the received vectors reach rank k.
double rl_expected_extra(std::uint32_t q, std::size_t k);

}  // namespace fountain
