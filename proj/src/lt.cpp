#include "fountain/lt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fountain/errors.hpp"
#include "fountain/rng.hpp"

namespace fountain {

namespace {

DegreeDistribution finalize(DegreeDistribution d) {
    double total = 0.0;
    for (double p : d.pmf) total += p;
    for (double& p : d.pmf) p /= total;
    d.cdf.assign(d.pmf.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.pmf.size(); ++i) {
        acc += d.pmf[i];
        d.cdf[i] = acc;
    }
    d.cdf.back() = 1.0;
    return d;
}

std::vector<std::uint32_t> draw_distinct(SplitMix64& rng, std::size_t count, std::size_t n) {
    std::vector<std::uint32_t> out;
    out.reserve(count);
    if (count <= 32) {
        while (out.size() < count) {
            const auto v = static_cast<std::uint32_t>(rng.below(n));
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
        return out;
    }
    std::vector<bool> taken(n, false);
    while (out.size() < count) {
        const auto v = static_cast<std::uint32_t>(rng.below(n));
        if (taken[v]) continue;
        taken[v] = true;
        out.push_back(v);
    }
    return out;
}

}  // namespace

DegreeDistribution DegreeDistribution::ideal(std::size_t k) {
    if (k == 0) throw ParameterError("k must be positive");
    DegreeDistribution d;
    d.k = k;
    d.kind = DegreeKind::ideal;
    d.pmf.assign(k + 1, 0.0);
    d.pmf[1] = 1.0 / static_cast<double>(k);
    for (std::size_t i = 2; i <= k; ++i) d.pmf[i] = 1.0 / (static_cast<double>(i) * static_cast<double>(i - 1));
    return finalize(std::move(d));
}

double robust_soliton_s(std::size_t k, double c, double delta) noexcept {
    const double kd = static_cast<double>(k);
    return c * std::log(kd / delta) * std::sqrt(kd);
}

DegreeDistribution DegreeDistribution::robust(std::size_t k, double c, double delta) {
    if (k == 0) throw ParameterError("k must be positive");
    if (!(c > 0.0)) throw ParameterError("robust soliton needs c > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("robust soliton needs 0 < delta < 1");
    const double s = robust_soliton_s(k, c, delta);
    if (!(s >= 1.0)) throw ParameterError("robust soliton parameters give S = " + std::to_string(s) + " < 1");
    const double kd = static_cast<double>(k);
    const auto spike = static_cast<std::size_t>(std::ceil(kd / s));
    if (spike > k) throw ParameterError("robust soliton spike degree exceeds k");

    DegreeDistribution d = ideal(k);
    d.kind = DegreeKind::robust;
    d.c = c;
    d.delta = delta;
    for (std::size_t i = 1; i < spike; ++i) d.pmf[i] += s / (static_cast<double>(i) * kd);
    d.pmf[spike] += s * std::log(s / delta) / kd;
    return finalize(std::move(d));
}

DegreeDistribution DegreeDistribution::regular(std::size_t k, std::size_t deg) {
    if (k == 0) throw ParameterError("k must be positive");
    if (deg == 0 || deg > k) throw ParameterError("regular degree must be in 1..k");
    DegreeDistribution d;
    d.k = k;
    d.kind = DegreeKind::regular;
    d.fixed_degree = deg;
    d.pmf.assign(k + 1, 0.0);
    d.pmf[deg] = 1.0;
    return finalize(std::move(d));
}

DegreeDistribution DegreeDistribution::custom(std::vector<double> pmf) {
    if (pmf.size() < 2) throw ParameterError("custom distribution needs at least degree 1");
    if (pmf[0] != 0.0) throw ParameterError("degree 0 must have probability 0");
    double total = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ParameterError("probabilities must be finite and non-negative");
        total += p;
    }
    if (!(total > 0.0)) throw ParameterError("distribution has no mass");
    DegreeDistribution d;
    d.k = pmf.size() - 1;
    d.kind = DegreeKind::custom;
    d.pmf = std::move(pmf);
    return finalize(std::move(d));
}

std::size_t DegreeDistribution::sample(double u) const noexcept {
    const auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), u);
    if (it == cdf.end()) return k;
    return static_cast<std::size_t>(it - cdf.begin());
}

double DegreeDistribution::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 1; i < pmf.size(); ++i) m += static_cast<double>(i) * pmf[i];
    return m;
}

std::vector<std::uint32_t> lt_neighbors(std::uint64_t seed, std::size_t degree, std::size_t n) {
    if (degree == 0 || degree > n) throw UsageError("degree must be in 1..n");
    SplitMix64 rng(seed);
    rng.next();
    return draw_distinct(rng, degree, n);
}

std::pair<std::size_t, std::vector<std::uint32_t>> lt_draw(const DegreeDistribution& dist, std::uint64_t seed,
                                                          std::size_t n) {
    if (dist.k > n) throw UsageError("distribution reaches degrees above n");
    SplitMix64 rng(seed);
    const std::size_t degree = dist.sample(rng.uniform01());
    return {degree, draw_distinct(rng, degree, n)};
}

LtEncoder::LtEncoder(DegreeDistribution dist, InputBlock block, std::uint64_t seed)
    : dist_(std::move(dist)), block_(std::move(block)), seed_(seed) {
    if (dist_.k != block_.k) throw UsageError("distribution is built for a different k");
}

CodedPacket LtEncoder::packet_for_seed(std::uint64_t packet_seed) const {
    auto [degree, neighbors] = lt_draw(dist_, packet_seed, block_.k);
    CodedPacket p;
    p.scheme = SchemeId::lt;
    p.k = static_cast<std::uint32_t>(block_.k);
    p.packet_len = static_cast<std::uint32_t>(block_.packet_len);
    p.header = SeedHeader{packet_seed, static_cast<std::uint16_t>(degree), std::nullopt};
    p.payload.assign(block_.packet_len, 0);
    for (auto i : neighbors)
        for (std::size_t b = 0; b < block_.packet_len; ++b) p.payload[b] ^= block_.packets[i][b];
    return p;
}

CodedPacket LtEncoder::next() {
    if (block_.k > 0xFFFF) throw UsageError("LT headers carry 16-bit degrees; k must be at most 65535");
    return packet_for_seed(derive_seed(seed_, emitted_++));
}

Peeler::Peeler(std::size_t unknowns, std::size_t packet_len)
    : packet_len_(packet_len), decoded_(unknowns), adj_(unknowns) {}

bool Peeler::add_equation(std::span<const std::uint32_t> neighbors, Payload payload, OpCounter& counter) {
    if (payload.size() != packet_len_) throw UsageError("payload length mismatch");
    Equation eq;
    std::vector<std::uint32_t> open;
    for (auto u : neighbors) {
        if (u >= decoded_.size()) throw UsageError("neighbour index out of range");
        if (decoded_[u]) {
            const Payload& v = *decoded_[u];
            for (std::size_t b = 0; b < packet_len_; ++b) payload[b] ^= v[b];
            ++counter.row_xor;
        } else {
            open.push_back(u);
            eq.id_xor ^= u;
        }
    }
    if (open.empty()) return false;
    eq.degree = open.size();
    eq.payload = std::move(payload);
    const std::size_t id = eqs_.size();
    eqs_.push_back(std::move(eq));
    for (auto u : open) adj_[u].push_back(static_cast<std::uint32_t>(id));
    if (eqs_[id].degree == 1) ripple_.push_back(id);
    while (!ripple_.empty()) {
        const std::size_t e = ripple_.back();
        ripple_.pop_back();
        if (!eqs_[e].done && eqs_[e].degree == 1) resolve(e, counter);
    }
    return true;
}

void Peeler::resolve(std::size_t e, OpCounter& counter) {
    Equation& eq = eqs_[e];
    const std::uint32_t u = eq.id_xor;
    eq.done = true;
    eq.degree = 0;
    decoded_[u] = std::move(eq.payload);
    ++decoded_count_;
    ++counter.resolve;
    const Payload& v = *decoded_[u];
    for (auto other : adj_[u]) {
        Equation& o = eqs_[other];
        if (o.done) continue;
        for (std::size_t b = 0; b < packet_len_; ++b) o.payload[b] ^= v[b];
        ++counter.row_xor;
        o.id_xor ^= u;
        if (--o.degree == 1) {
            ripple_.push_back(other);
        } else if (o.degree == 0) {
            o.done = true;
            o.payload.clear();
        }
    }
    adj_[u].clear();
    adj_[u].shrink_to_fit();
}

std::vector<std::size_t> Peeler::undecoded() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < decoded_.size(); ++i)
        if (!decoded_[i]) out.push_back(i);
    return out;
}

LtDecoder::LtDecoder(std::size_t k, std::size_t packet_len) : Decoder(k, packet_len), peeler_(k, packet_len) {}

bool LtDecoder::absorb(const CodedPacket& p) {
    const auto* h = std::get_if<SeedHeader>(&p.header);
    if (h == nullptr || h->precode) throw ParseError(ParseErrorKind::bad_header, "LT packets carry seed and degree");
    if (h->degree == 0 || h->degree > k()) throw ParseError(ParseErrorKind::bad_header, "degree outside 1..k");
    if (p.payload.size() != packet_len()) throw ParseError(ParseErrorKind::bad_header, "payload length is not B");
    auto neighbors = lt_neighbors(h->seed, h->degree, k());
    std::sort(neighbors.begin(), neighbors.end());
    if (!seen_.insert(neighbors).second) return false;
    return peeler_.add_equation(neighbors, p.payload, counter_);
}

InputBlock LtDecoder::finish() {
    std::vector<Payload> out;
    out.reserve(k());
    for (std::size_t i = 0; i < k(); ++i) out.push_back(peeler_.value(i));
    return InputBlock::from_packets(std::move(out));
}

std::vector<std::uint32_t> binary_support(const CodedPacket& p) {
    std::vector<std::uint32_t> out;
    switch (p.scheme) {
        case SchemeId::rl_gf2: {
            const auto* h = std::get_if<CoefficientHeader>(&p.header);
            if (h == nullptr || h->coefficients.size() != p.k)
                throw ParseError(ParseErrorKind::bad_header, "random linear packets carry k coefficients");
            for (std::uint32_t i = 0; i < p.k; ++i) {
                if (h->coefficients[i] > 1) throw ParseError(ParseErrorKind::bad_header, "GF(2) coefficient out of range");
                if (h->coefficients[i]) out.push_back(i);
            }
            return out;
        }
        case SchemeId::lt:
        case SchemeId::raptor: {
            const auto* h = std::get_if<SeedHeader>(&p.header);
            if (h == nullptr) throw ParseError(ParseErrorKind::bad_header, "expected seed and degree");
            const std::size_t n = p.k + (h->precode ? h->precode->j : 0);
            if (h->degree == 0 || h->degree > n) throw ParseError(ParseErrorKind::bad_header, "degree out of range");
            out = lt_neighbors(h->seed, h->degree, n);
            std::sort(out.begin(), out.end());
            return out;
        }
        default:
            throw UsageError(std::string(to_string(p.scheme)) + " coding vectors are not binary");
    }
}

namespace {

PeelResult collect(Peeler& peeler, std::size_t k, OpCounter counter) {
    PeelResult r;
    r.counter = counter;
    r.success = peeler.complete();
    if (r.success) {
        std::vector<Payload> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(peeler.value(i));
        r.block = InputBlock::from_packets(std::move(out));
    } else {
        r.undecoded = peeler.undecoded();
    }
    return r;
}

}  // namespace

PeelResult peel_decode(std::span<const CodedPacket> packets, std::size_t k) {
    if (packets.empty()) throw UsageError("peeling needs at least one packet");
    Peeler peeler(k, packets.front().packet_len);
    OpCounter counter;
    for (const auto& p : packets) {
        if (p.k != k) throw UsageError("packet belongs to a block of another size");
        if (p.scheme == SchemeId::raptor) throw UsageError("raptor packets need inactivation decoding");
        peeler.add_equation(binary_support(p), p.payload, counter);
    }
    return collect(peeler, k, counter);
}

PeelResult peel_decode(const std::vector<std::vector<std::uint32_t>>& rows, const std::vector<Payload>& payloads,
                       std::size_t k) {
    if (rows.size() != payloads.size()) throw UsageError("one payload per row");
    if (rows.empty()) throw UsageError("peeling needs at least one packet");
    Peeler peeler(k, payloads.front().size());
    OpCounter counter;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto sorted = rows[i];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw UsageError("row lists a neighbour twice");
        peeler.add_equation(rows[i], payloads[i], counter);
    }
    return collect(peeler, k, counter);
}

OverheadTrial lt_overhead_trial(const DegreeDistribution& dist, std::size_t k, std::uint64_t seed,
                                std::size_t packet_len, std::size_t cap) {
    if (cap == 0) cap = 10 * k;
    LtEncoder enc(dist, InputBlock::random(k, packet_len, derive_seed(seed, 0xB10C)), seed);
    LtDecoder dec(k, packet_len);
    OverheadTrial t;
    double degree_sum = 0.0;
    while (dec.status() == DecodeStatus::needs_more && dec.received() < cap) {
        const CodedPacket p = enc.next();
        degree_sum += std::get<SeedHeader>(p.header).degree;
        dec.ingest(p);
    }
    t.packets = dec.received();
    t.success = dec.status() != DecodeStatus::needs_more;
    t.overhead = static_cast<double>(t.packets) / static_cast<double>(k) - 1.0;
    t.mean_degree = t.packets ? degree_sum / static_cast<double>(t.packets) : 0.0;
    if (t.success) dec.decode();
    t.counter = dec.counter();
    return t;
}

}  // namespace fountain
