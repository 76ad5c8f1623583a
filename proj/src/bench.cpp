#include "fountain/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "fountain/errors.hpp"
#include "fountain/rng.hpp"

namespace fountain {

BenchScheme BenchScheme::parse(const std::string& name) {
    if (name == "arq") return BenchScheme{true, SchemeId::lt};
    return BenchScheme{false, scheme_from_string(name)};
}

std::string BenchScheme::name() const {
    return arq ? "arq" : to_string(scheme);
}

void BenchConfig::validate() const {
    if (schemes.empty()) throw ParameterError("bench needs at least one scheme");
    if (ks.empty()) throw ParameterError("bench needs at least one k");
    if (losses.empty()) throw ParameterError("bench needs at least one loss probability");
    if (packet_len == 0) throw ParameterError("B must be positive");
    if (trials == 0) throw ParameterError("trials must be positive");
    for (double p : losses) ChannelSpec{p, clients, seed, false}.validate();
    for (const auto& s : schemes) {
        if (s.arq) continue;
        CodecConfig c = codec;
        c.scheme = s.scheme;
        for (auto k : ks) c.validate(k);
    }
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

BenchRow summarize(const std::string& scheme, const std::vector<SessionReport>& trials, std::uint64_t seed) {
    BenchRow row;
    row.scheme = scheme;
    row.seed = seed;
    row.trials = trials.size();
    if (trials.empty()) return row;
    row.k = trials.front().k;
    row.packet_len = trials.front().packet_len;
    row.clients = trials.front().clients;
    row.loss_prob = trials.front().loss_prob;

    std::vector<double> overheads;
    std::size_t clients = 0;
    std::size_t decoded = 0;
    double row_xor = 0.0;
    double sym_mul = 0.0;
    for (const auto& t : trials) {
        clients += t.clients;
        for (std::size_t i = 0; i < t.clients; ++i)
            if (t.per_client_decoded[i]) overheads.push_back(t.per_client_overhead[i]);
        decoded += t.decoded_clients();
        const auto& ops = t.decode_ops;
        row_xor += static_cast<double>(scheme == "triangular" ? ops.bit_xor : ops.row_xor);
        sym_mul += static_cast<double>(ops.symbol_mul);
        row.wall_ms += t.wall_ms;
    }
    row.fail_rate = 1.0 - static_cast<double>(decoded) / static_cast<double>(clients);
    if (!overheads.empty()) {
        double sum = 0.0;
        for (double o : overheads) sum += o;
        row.mean_overhead = sum / static_cast<double>(overheads.size());
        std::sort(overheads.begin(), overheads.end());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(overheads.size())));
        row.p95_overhead = overheads[std::max<std::size_t>(rank, 1) - 1];
    }
    if (decoded > 0) {
        row.row_xor = row_xor / static_cast<double>(decoded);
        row.sym_mul = sym_mul / static_cast<double>(decoded);
    }
    return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
    config.validate();
    std::vector<std::tuple<int, std::size_t, double, BenchRow>> keyed;
    for (const auto& s : config.schemes) {
        for (auto k : config.ks) {
            for (double loss : config.losses) {
                std::vector<SessionReport> reports;
                SessionOptions opts;
                opts.measure_time = config.wall_clock;
                for (std::size_t t = 0; t < config.trials; ++t) {
                    const std::uint64_t trial_seed = derive_seed(config.seed, t);
                    const InputBlock block = InputBlock::random(k, config.packet_len, derive_seed(trial_seed, 1));
                    ChannelSpec channel{loss, config.clients, derive_seed(trial_seed, 2), false};
                    if (s.arq) {
                        reports.push_back(run_arq_baseline(block, channel, opts));
                    } else {
                        CodecConfig codec = config.codec;
                        codec.scheme = s.scheme;
                        codec.seed = derive_seed(trial_seed, 3);
                        reports.push_back(run_session(codec, block, channel, opts));
                    }
                }
                const int order = s.arq ? 0 : static_cast<int>(s.scheme);
                keyed.emplace_back(order, k, loss, summarize(s.name(), reports, config.seed));
            }
        }
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
               std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
    });
    std::vector<BenchRow> rows;
    for (auto& kr : keyed) rows.push_back(std::move(std::get<3>(kr)));
    return rows;
}

std::string to_csv_row(const BenchRow& r) {
    return r.scheme + "," + std::to_string(r.k) + "," + std::to_string(r.packet_len) + "," +
           std::to_string(r.clients) + "," + fmt(r.loss_prob) + "," + std::to_string(r.trials) + "," +
           fmt(r.mean_overhead) + "," + fmt(r.p95_overhead) + "," + fmt(r.fail_rate) + "," + fmt(r.row_xor) + "," +
           fmt(r.sym_mul) + "," + fmt(r.wall_ms) + "," + std::to_string(r.seed);
}

std::string to_csv(const std::vector<BenchRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) out += to_csv_row(r) + "\n";
    return out;
}

}  // namespace fountain
