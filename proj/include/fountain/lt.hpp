#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "fountain/decoder.hpp"
#include "fountain/linalg.hpp"
#include "fountain/packet.hpp"

namespace fountain {

enum class DegreeKind { ideal, robust, regular, custom };

/// Probability law over degrees 1..k. pmf[d] is P(degree = d); pmf[0] = 0.
struct DegreeDistribution {
    std::size_t k = 0;
    DegreeKind kind = DegreeKind::custom;
    std::vector<double> pmf;
    std::vector<double> cdf;
    double c = 0.0;
    double delta = 0.0;
    std::size_t fixed_degree = 0;

    static DegreeDistribution ideal(std::size_t k);
    /// Throws ParameterError unless c > 0, 0 < delta < 1, S >= 1 and the
    /// spike degree ceil(k/S) stays within k.
    static DegreeDistribution robust(std::size_t k, double c, double delta);
    static DegreeDistribution regular(std::size_t k, std::size_t d);
    /// pmf indexed by degree, pmf[0] must be 0. Normalized on construction.
    static DegreeDistribution custom(std::vector<double> pmf);

    /// Smallest d with u < cdf[d].
    std::size_t sample(double u) const noexcept;
    double mean() const noexcept;
};

/// Robust soliton spike position ceil(k/S) and S = c ln(k/delta) sqrt(k).
double robust_soliton_s(std::size_t k, double c, double delta) noexcept;

/// Neighbour set of an LT packet: the packet generator is seeded with
/// `seed`, one draw is spent on the degree, then `degree` distinct indices
/// in [0, n) are drawn by rejection.
std::vector<std::uint32_t> lt_neighbors(std::uint64_t seed, std::size_t degree, std::size_t n);

/// Draws (degree, neighbours) for one packet seed.
std::pair<std::size_t, std::vector<std::uint32_t>> lt_draw(const DegreeDistribution& dist, std::uint64_t seed,
                                                          std::size_t n);

/// Rateless LT stream; packet i uses seed derive_seed(session_seed, i).
class LtEncoder {
public:
    LtEncoder(DegreeDistribution dist, InputBlock block, std::uint64_t seed);

    CodedPacket next();
    /// The packet for an explicit packet seed.
    CodedPacket packet_for_seed(std::uint64_t packet_seed) const;

    const DegreeDistribution& distribution() const noexcept { return dist_; }
    std::size_t emitted() const noexcept { return emitted_; }

private:
    DegreeDistribution dist_;
    InputBlock block_;
    std::uint64_t seed_;
    std::size_t emitted_ = 0;
};

/// Belief-propagation decoding over XOR equations.
///
/// Every equation keeps its unresolved neighbours and a residual payload equal
/// to its original payload XOR all decoded neighbours. The ripple is drained
/// eagerly, so after each add_equation no unresolved equation has degree 1.
class Peeler {
public:
    Peeler(std::size_t unknowns, std::size_t packet_len);

    /// Returns false when the equation carries nothing new once decoded
    /// neighbours are substituted.
    bool add_equation(std::span<const std::uint32_t> neighbors, Payload payload, OpCounter& counter);

    std::size_t unknowns() const noexcept { return decoded_.size(); }
    std::size_t decoded_count() const noexcept { return decoded_count_; }
    bool complete() const noexcept { return decoded_count_ == decoded_.size(); }
    bool is_decoded(std::size_t i) const noexcept { return decoded_[i].has_value(); }
    const Payload& value(std::size_t i) const { return *decoded_[i]; }
    std::vector<std::size_t> undecoded() const;

private:
    struct Equation {
        std::size_t degree = 0;
        std::uint32_t id_xor = 0;
        Payload payload;
        bool done = false;
    };

    void resolve(std::size_t eq, OpCounter& counter);

    std::size_t packet_len_;
    std::vector<std::optional<Payload>> decoded_;
    std::size_t decoded_count_ = 0;
    std::vector<Equation> eqs_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::size_t> ripple_;
};

/// Streaming LT receiver built on Peeler. Stalls are a status, not an error.
class LtDecoder : public Decoder {
public:
    LtDecoder(std::size_t k, std::size_t packet_len);

    std::size_t rank() const override { return peeler_.decoded_count(); }
    std::vector<std::size_t> undecoded() const { return peeler_.undecoded(); }

protected:
    bool accepts(SchemeId scheme) const override { return scheme == SchemeId::lt; }
    bool absorb(const CodedPacket& p) override;
    bool complete() override { return peeler_.complete(); }
    InputBlock finish() override;

private:
    Peeler peeler_;
    std::set<std::vector<std::uint32_t>> seen_;
};

/// Binary support of a coding vector (positions of nonzero coefficients).
std::vector<std::uint32_t> binary_support(const CodedPacket& p);

struct PeelResult {
    bool success = false;
    std::optional<InputBlock> block;
    std::vector<std::size_t> undecoded;
    OpCounter counter;
};

/// Peels a fixed packet set of any GF(2) scheme over k inputs.
PeelResult peel_decode(std::span<const CodedPacket> packets, std::size_t k);
/// Same over raw equations (neighbour lists and payloads).
PeelResult peel_decode(const std::vector<std::vector<std::uint32_t>>& rows, const std::vector<Payload>& payloads,
                       std::size_t k);

struct OverheadTrial {
    bool success = false;
    std::size_t packets = 0;
    double overhead = 0.0;
    OpCounter counter;
    double mean_degree = 0.0;
};

/// Feeds LT packets into a peeling decoder until it completes or `cap`
/// packets (default 10k) have been consumed.
OverheadTrial lt_overhead_trial(const DegreeDistribution& dist, std::size_t k, std::uint64_t seed,
                                std::size_t packet_len = 1, std::size_t cap = 0);

}  // namespace fountain
