#include "fountain/raptor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "fountain/errors.hpp"
#include "fountain/rng.hpp"

namespace fountain {

std::size_t PrecodeSpec::default_j(std::size_t k) noexcept {
    return (k + 19) / 20 + 4;
}

PrecodeSpec PrecodeSpec::standard(std::size_t k, std::uint64_t seed) {
    PrecodeSpec s;
    s.k = k;
    s.j = default_j(k);
    s.row_weight = std::min<std::size_t>(3, k);
    s.seed = seed;
    return s;
}

void PrecodeSpec::validate() const {
    if (k == 0) throw ParameterError("k must be positive");
    if (row_weight == 0 || row_weight > k) throw ParameterError("precode row weight must be in 1..k");
    if (row_weight > 0xFFFF || j > 0xFFFFFFFFu) throw ParameterError("precode parameters exceed the header fields");
}

std::vector<std::vector<std::uint32_t>> precode_sources(const PrecodeSpec& spec) {
    spec.validate();
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(spec.j);
    for (std::size_t i = 0; i < spec.j; ++i) out.push_back(lt_neighbors(derive_seed(spec.seed, i), spec.row_weight, spec.k));
    return out;
}

std::vector<Payload> precode(const InputBlock& block, const PrecodeSpec& spec) {
    if (block.k != spec.k) throw UsageError("block size does not match the precode");
    std::vector<Payload> out = block.packets;
    for (const auto& sources : precode_sources(spec)) {
        Payload y(block.packet_len, 0);
        for (auto i : sources)
            for (std::size_t b = 0; b < y.size(); ++b) y[b] ^= block.packets[i][b];
        out.push_back(std::move(y));
    }
    return out;
}

DegreeDistribution raptor_mixed_distribution(std::size_t intermediate, std::size_t dense_degree, double c,
                                             double delta) {
    DegreeDistribution soliton = DegreeDistribution::ideal(intermediate);
    try {
        soliton = DegreeDistribution::robust(intermediate, c, delta);
    } catch (const ParameterError&) {
    }
    std::vector<double> pmf(intermediate + 1, 0.0);
    for (std::size_t d = 1; d <= intermediate; ++d) pmf[d] = 0.5 * soliton.pmf[d];
    // Uniform rows average L/2 ones; a denser point mass only slows peeling.
    pmf[std::min(dense_degree, (intermediate + 1) / 2)] += 0.5;
    return DegreeDistribution::custom(std::move(pmf));
}

DegreeDistribution raptor_default_distribution(std::size_t intermediate) {
    return raptor_mixed_distribution(intermediate);
}

RaptorEncoder::RaptorEncoder(PrecodeSpec spec, DegreeDistribution dist, const InputBlock& block, std::uint64_t seed)
    : spec_(spec), dist_(std::move(dist)), packet_len_(block.packet_len), intermediate_(precode(block, spec)),
      seed_(seed) {
    if (dist_.k != spec_.intermediate()) throw UsageError("distribution must cover the k + j intermediate packets");
    if (dist_.k > 0xFFFF) throw UsageError("raptor headers carry 16-bit degrees");
}

CodedPacket RaptorEncoder::packet_for_seed(std::uint64_t packet_seed) const {
    auto [degree, neighbors] = lt_draw(dist_, packet_seed, spec_.intermediate());
    CodedPacket p;
    p.scheme = SchemeId::raptor;
    p.k = static_cast<std::uint32_t>(spec_.k);
    p.packet_len = static_cast<std::uint32_t>(packet_len_);
    p.header = SeedHeader{packet_seed, static_cast<std::uint16_t>(degree),
                          PrecodeFields{spec_.seed, static_cast<std::uint32_t>(spec_.j),
                                        static_cast<std::uint16_t>(spec_.row_weight)}};
    p.payload.assign(packet_len_, 0);
    for (auto i : neighbors)
        for (std::size_t b = 0; b < packet_len_; ++b) p.payload[b] ^= intermediate_[i][b];
    return p;
}

CodedPacket RaptorEncoder::next() {
    return packet_for_seed(derive_seed(seed_, emitted_++));
}

BitMatrix BinarySystem::to_matrix() const {
    BitMatrix m(rows.size(), unknowns);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto c : rows[r]) m.set(r, c, true);
    return m;
}

namespace {

PrecodeSpec spec_from(const PrecodeFields& f, std::size_t k) {
    PrecodeSpec s;
    s.k = k;
    s.j = f.j;
    s.row_weight = f.row_weight;
    s.seed = f.seed;
    try {
        s.validate();
    } catch (const ParameterError& e) {
        throw ParseError(ParseErrorKind::bad_header, e.what());
    }
    return s;
}

const SeedHeader& raptor_header(const CodedPacket& p) {
    const auto* h = std::get_if<SeedHeader>(&p.header);
    if (h == nullptr || !h->precode) throw ParseError(ParseErrorKind::bad_header, "raptor packets carry precode fields");
    return *h;
}

}  // namespace

BinarySystem raptor_system(std::span<const CodedPacket> packets, std::size_t k) {
    if (packets.empty()) throw UsageError("no packets");
    const PrecodeFields fields = *raptor_header(packets.front()).precode;
    const PrecodeSpec spec = spec_from(fields, k);
    BinarySystem sys;
    sys.unknowns = spec.intermediate();
    const std::size_t len = packets.front().packet_len;
    for (const auto& p : packets) {
        if (p.scheme != SchemeId::raptor || p.k != k || p.packet_len != len)
            throw UsageError("packet does not belong to this raptor block");
        const SeedHeader& h = raptor_header(p);
        if (!(*h.precode == fields)) throw ParseError(ParseErrorKind::bad_header, "packets disagree on the precode");
        if (h.degree == 0 || h.degree > sys.unknowns) throw ParseError(ParseErrorKind::bad_header, "degree out of range");
        if (p.payload.size() != len) throw ParseError(ParseErrorKind::bad_header, "payload length is not B");
        sys.rows.push_back(lt_neighbors(h.seed, h.degree, sys.unknowns));
        sys.payloads.push_back(p.payload);
    }
    const auto sources = precode_sources(spec);
    for (std::size_t i = 0; i < spec.j; ++i) {
        auto row = sources[i];
        row.push_back(static_cast<std::uint32_t>(k + i));
        sys.rows.push_back(std::move(row));
        sys.payloads.emplace_back(len, 0);
    }
    return sys;
}

InactivationReport inactivation_solve(const BinarySystem& sys) {
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    enum class State : std::uint8_t { open, peeled, inactive };

    struct Row {
        std::size_t degree = 0;
        std::uint32_t id_xor = 0;
        Payload payload;
        std::vector<std::uint64_t> inactive;
        bool done = false;
    };

    const std::size_t n = sys.unknowns;
    const std::size_t width = sys.payloads.empty() ? 0 : sys.payloads.front().size();
    InactivationReport rep;
    OpCounter& counter = rep.counter;

    std::vector<Row> rows(sys.rows.size());
    std::vector<std::vector<std::uint32_t>> adj(n);
    std::vector<std::size_t> ripple;
    std::vector<std::size_t> core;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].payload = sys.payloads[r];
        for (auto u : sys.rows[r]) {
            if (u >= n) throw UsageError("row references an unknown out of range");
            adj[u].push_back(static_cast<std::uint32_t>(r));
            rows[r].id_xor ^= u;
        }
        rows[r].degree = sys.rows[r].size();
        if (rows[r].degree == 1) ripple.push_back(r);
        if (rows[r].degree == 0) {
            rows[r].done = true;
            core.push_back(r);
        }
    }

    std::vector<State> state(n, State::open);
    std::vector<std::size_t> source(n, kNone);
    std::vector<std::size_t> inactive_ids;
    std::size_t settled = 0;

    auto set_bit = [](std::vector<std::uint64_t>& bits, std::size_t i) {
        if (bits.size() <= i / 64) bits.resize(i / 64 + 1, 0);
        bits[i / 64] |= std::uint64_t{1} << (i % 64);
    };
    auto xor_bits = [](std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
        if (dst.size() < src.size()) dst.resize(src.size(), 0);
        for (std::size_t w = 0; w < src.size(); ++w) dst[w] ^= src[w];
    };
    auto detach = [&](std::size_t r, std::uint32_t u) {
        Row& row = rows[r];
        row.id_xor ^= u;
        if (--row.degree == 1) {
            ripple.push_back(r);
        } else if (row.degree == 0) {
            row.done = true;
            core.push_back(r);
        }
    };

    while (settled < n) {
        while (!ripple.empty()) {
            const std::size_t r = ripple.back();
            ripple.pop_back();
            Row& row = rows[r];
            if (row.done || row.degree != 1) continue;
            const std::uint32_t u = row.id_xor;
            row.done = true;
            row.degree = 0;
            state[u] = State::peeled;
            source[u] = r;
            ++settled;
            ++counter.resolve;
            for (auto other : adj[u]) {
                if (other == r || rows[other].done) continue;
                Row& o = rows[other];
                for (std::size_t b = 0; b < width; ++b) o.payload[b] ^= row.payload[b];
                xor_bits(o.inactive, row.inactive);
                ++counter.row_xor;
                detach(other, u);
            }
        }
        if (settled == n) break;

        std::size_t pick = kNone;
        for (std::size_t u = 0; u < n; ++u)
            if (state[u] == State::open && (pick == kNone || adj[u].size() > adj[pick].size())) pick = u;
        state[pick] = State::inactive;
        const std::size_t slot = inactive_ids.size();
        inactive_ids.push_back(pick);
        ++settled;
        for (auto r : adj[pick]) {
            if (rows[r].done) continue;
            set_bit(rows[r].inactive, slot);
            detach(r, static_cast<std::uint32_t>(pick));
        }
    }

    rep.inactivations = inactive_ids.size();
    rep.core_rows = core.size();
    const std::size_t m = inactive_ids.size();
    std::vector<Payload> inactive_values;
    if (m > 0) {
        BitMatrix a(core.size(), m);
        std::vector<Payload> rhs;
        rhs.reserve(core.size());
        for (std::size_t i = 0; i < core.size(); ++i) {
            const Row& row = rows[core[i]];
            for (std::size_t w = 0; w < row.inactive.size(); ++w) {
                std::uint64_t bits = row.inactive[w];
                while (bits) {
                    a.set(i, w * 64 + static_cast<std::size_t>(std::countr_zero(bits)), true);
                    bits &= bits - 1;
                }
            }
            rhs.push_back(row.payload);
        }
        try {
            inactive_values = solve(a, std::move(rhs), counter);
        } catch (const SingularMatrixError&) {
            rep.rank = n - m + rank(a);
            return rep;
        }
    }

    rep.values.assign(n, Payload{});
    for (std::size_t s = 0; s < m; ++s) rep.values[inactive_ids[s]] = std::move(inactive_values[s]);
    for (std::size_t u = 0; u < n; ++u) {
        if (state[u] != State::peeled) continue;
        const Row& row = rows[source[u]];
        Payload v = row.payload;
        for (std::size_t w = 0; w < row.inactive.size(); ++w) {
            std::uint64_t bits = row.inactive[w];
            while (bits) {
                const std::size_t s = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                const Payload& x = rep.values[inactive_ids[s]];
                for (std::size_t b = 0; b < width; ++b) v[b] ^= x[b];
                ++counter.row_xor;
            }
        }
        rep.values[u] = std::move(v);
    }
    rep.success = true;
    rep.rank = n;
    return rep;
}

RaptorReport inactivation_decode(std::span<const CodedPacket> packets, std::size_t k) {
    const BinarySystem sys = raptor_system(packets, k);
    InactivationReport r = inactivation_solve(sys);
    RaptorReport out;
    out.success = r.success;
    out.inactivations = r.inactivations;
    out.core_rows = r.core_rows;
    out.rank = r.rank;
    out.required = sys.unknowns;
    out.counter = r.counter;
    if (r.success) {
        r.values.resize(k);
        out.block = InputBlock::from_packets(std::move(r.values));
    }
    return out;
}

RaptorDecoder::RaptorDecoder(std::size_t k, std::size_t packet_len) : Decoder(k, packet_len) {}

bool RaptorDecoder::absorb(const CodedPacket& p) {
    const SeedHeader& h = raptor_header(p);
    if (precode_ && !(*precode_ == *h.precode))
        throw ParseError(ParseErrorKind::bad_header, "packets disagree on the precode");
    if (!precode_) spec_from(*h.precode, k());
    const std::size_t n = k() + h.precode->j;
    if (h.degree == 0 || h.degree > n) throw ParseError(ParseErrorKind::bad_header, "degree out of range");
    if (p.payload.size() != packet_len()) throw ParseError(ParseErrorKind::bad_header, "payload length is not B");
    precode_ = *h.precode;
    if (std::find(seeds_.begin(), seeds_.end(), h.seed) != seeds_.end()) return false;
    seeds_.push_back(h.seed);
    packets_.push_back(p);
    dirty_ = true;
    return true;
}

bool RaptorDecoder::complete() {
    if (result_) return true;
    if (!dirty_ || packets_.size() < k()) return false;
    dirty_ = false;
    RaptorReport r = inactivation_decode(packets_, k());
    counter_ = r.counter;
    rank_ = r.rank;
    inactivations_ = r.inactivations;
    if (r.success) result_ = std::move(r.block);
    return result_.has_value();
}

InputBlock RaptorDecoder::finish() {
    return *result_;
}

}  // namespace fountain
