#include "fountain/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fountain/bench.hpp"
#include "fountain/errors.hpp"
#include "fountain/linalg.hpp"
#include "fountain/lt.hpp"
#include "fountain/rng.hpp"
#include "fountain/rs.hpp"
#include "fountain/session.hpp"
#include "fountain/triangular.hpp"
#include "fountain/wire.hpp"

namespace fountain {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return data;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("error writing '" + path + "'");
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    write_file(path, std::string(data.begin(), data.end()));
}

CodecConfig codec_for(const RunConfig& rc, const std::string& scheme) {
    CodecConfig c = rc.codec;
    c.scheme = scheme_from_string(scheme);
    c.seed = rc.seed;
    return c;
}

int cmd_encode(const RunConfig& rc, std::ostream& out) {
    const auto data = read_file(rc.input);
    if (data.empty()) throw ParameterError("input file is empty");
    const std::size_t k = rc.k;
    const std::size_t len = rc.packet_len ? rc.packet_len : (data.size() + k - 1) / k;
    if (data.size() > k * len) throw ParameterError("input does not fit in k packets of B bytes");
    const InputBlock block = InputBlock::from_bytes(data, k, len);
    const CodecConfig codec = codec_for(rc, rc.scheme);
    auto encoder = make_encoder(codec, block);
    std::size_t count = rc.count;
    if (count == 0) count = encoder->limit().value_or(2 * k);
    if (encoder->limit() && count > *encoder->limit()) throw ParameterError("count exceeds the code length n");

    std::vector<std::uint8_t> stream;
    for (std::size_t i = 0; i < count; ++i) {
        const auto frame = serialize(encoder->next());
        stream.insert(stream.end(), frame.begin(), frame.end());
    }
    write_file(rc.output, stream);

    RunConfig meta = rc;
    meta.packet_len = len;
    meta.count = count;
    meta.length = data.size();
    write_file(rc.output + ".json", meta.to_json());
    out << "wrote " << count << " packets (k=" << k << ", B=" << len << ") to " << rc.output << "\n";
    return kExitOk;
}

int cmd_decode(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const auto bytes = read_file(rc.input);
    std::optional<std::size_t> length = rc.length;
    if (!length) {
        std::ifstream side(rc.input + ".json");
        if (side) {
            const auto j = nlohmann::json::parse(side, nullptr, false);
            if (!j.is_discarded() && j.contains("original_length") && j["original_length"].is_number_unsigned())
                length = j["original_length"].get<std::size_t>();
        }
    }
    std::vector<CodedPacket> packets = deserialize_stream(bytes);
    if (packets.empty()) {
        err << "decode failed: empty stream\n";
        return kExitDecodeFailure;
    }
    if (rc.shuffle) {
        SplitMix64 rng(rc.seed);
        for (std::size_t i = packets.size(); i > 1; --i) std::swap(packets[i - 1], packets[rng.below(i)]);
    }
    auto decoder = make_decoder_for(packets.front());
    for (const auto& p : packets) decoder->ingest(p);
    if (decoder->status() == DecodeStatus::needs_more) {
        err << "decode failed: rank " << decoder->rank() << " of " << decoder->k() << " after " << packets.size()
            << " packets\n";
        return kExitDecodeFailure;
    }
    auto data = decoder->decode().concat();
    if (length) {
        if (*length > data.size()) throw ParameterError("recorded length exceeds the decoded block");
        data.resize(*length);
    }
    write_file(rc.output, data);
    out << "decoded " << data.size() << " bytes from " << decoder->received() << " packets ("
        << decoder->discarded() << " not innovative)\n";
    return kExitOk;
}

void emit_csv(const RunConfig& rc, const std::string& csv, std::ostream& out) {
    if (rc.output.empty()) {
        out << csv;
        return;
    }
    write_file(rc.output, csv);
    write_file(rc.output + ".json", rc.to_json());
}

int cmd_simulate(const RunConfig& rc, std::ostream& out) {
    const std::size_t len = rc.packet_len ? rc.packet_len : 16;
    const BenchScheme scheme = BenchScheme::parse(rc.scheme);
    SessionOptions opts;
    opts.cap = rc.cap;
    opts.measure_time = rc.wall_clock;
    std::vector<SessionReport> reports;
    for (std::size_t t = 0; t < rc.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(rc.seed, t);
        const InputBlock block = InputBlock::random(rc.k, len, derive_seed(trial_seed, 1));
        ChannelSpec channel{rc.loss_prob, rc.clients, derive_seed(trial_seed, 2), rc.lossy_acks};
        if (scheme.arq) {
            reports.push_back(run_arq_baseline(block, channel, opts));
        } else {
            CodecConfig codec = codec_for(rc, rc.scheme);
            codec.seed = derive_seed(trial_seed, 3);
            reports.push_back(run_session(codec, block, channel, opts));
        }
    }
    const BenchRow row = summarize(scheme.name(), reports, rc.seed);
    emit_csv(rc, to_csv({row}), out);
    return row.fail_rate > 0.0 ? kExitDecodeFailure : kExitOk;
}

int cmd_bench(const RunConfig& rc, std::ostream& out) {
    BenchConfig bc;
    for (const auto& s : rc.schemes) bc.schemes.push_back(BenchScheme::parse(s));
    bc.ks = rc.ks;
    if (!rc.losses.empty()) bc.losses = rc.losses;
    bc.packet_len = rc.packet_len ? rc.packet_len : 16;
    bc.clients = rc.clients;
    bc.trials = rc.trials;
    bc.seed = rc.seed;
    bc.codec = rc.codec;
    bc.wall_clock = rc.wall_clock;
    emit_csv(rc, to_csv(run_bench(bc)), out);
    return kExitOk;
}

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv(kSeedEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long s = std::strtoull(v, &end, 0);
    if (end == nullptr || *end != '\0') throw ParameterError(std::string(kSeedEnv) + " is not an integer");
    return s;
}

}  // namespace

void RunConfig::validate() const {
    if (command == "encode" || command == "decode") {
        if (input.empty()) throw UsageError(command + " needs an input file");
        if (output.empty()) throw UsageError(command + " needs --output");
    }
    if (command == "encode" || command == "simulate") {
        if (k == 0) throw ParameterError("k must be positive");
        if (command == "simulate" && scheme == "arq") {
            ChannelSpec{loss_prob, clients, seed, lossy_acks}.validate();
        } else {
            codec_for(*this, scheme).validate(k);
        }
    }
    if (command == "simulate") {
        if (trials == 0) throw ParameterError("trials must be positive");
        ChannelSpec{loss_prob, clients, seed, lossy_acks}.validate();
    }
    if (command == "bench") {
        if (schemes.empty() || ks.empty()) throw UsageError("bench needs --schemes and --ks");
    }
}

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["command"] = command;
    j["scheme"] = scheme;
    j["k"] = k;
    j["B"] = packet_len;
    j["n"] = codec.n;
    j["sparsity"] = codec.sparsity;
    j["systematic"] = codec.systematic;
    j["c"] = codec.c;
    j["delta"] = codec.delta;
    j["j"] = codec.j;
    j["row_weight"] = codec.row_weight;
    j["seed"] = seed;
    j["loss_prob"] = loss_prob;
    j["clients"] = clients;
    j["trials"] = trials;
    j["count"] = count;
    if (!schemes.empty()) j["schemes"] = schemes;
    if (!ks.empty()) j["ks"] = ks;
    if (!losses.empty()) j["losses"] = losses;
    if (length) j["original_length"] = *length;
    return j.dump(2) + "\n";
}

bool run_selftest(std::ostream& out) {
    bool all = true;
    auto check = [&](const char* name, auto&& fn) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            out << "  (" << e.what() << ")\n";
        }
        out << (ok ? "PASS " : "FAIL ") << name << "\n";
        all = all && ok;
    };
    const InputBlock block = InputBlock::random(20, 32, 42);

    check("gf256 inverse table", [] {
        const auto f = GaloisField::gf256();
        for (unsigned a = 1; a < 256; ++a)
            if (f->mul(static_cast<Symbol>(a), f->inv(static_cast<Symbol>(a))) != 1) return false;
        return true;
    });
    check("gf2 worked inverse", [] {
        const auto m = FieldMatrix::from_rows(GaloisField::gf2(), {{1, 1, 0}, {0, 1, 1}, {1, 1, 1}});
        return invert(m) == FieldMatrix::from_rows(GaloisField::gf2(), {{0, 1, 1}, {1, 1, 1}, {1, 0, 1}});
    });
    for (const char* name : {"rs", "rs_systematic", "rl_gf2", "rl_gf256", "lt", "raptor", "triangular"}) {
        const std::string label = std::string("round trip ") + name;
        check(label.c_str(), [&] {
            CodecConfig c;
            c.scheme = scheme_from_string(name);
            c.seed = 7;
            const SessionReport r = run_session(c, block, ChannelSpec{0.2, 2, 9, false});
            return r.success;
        });
    }
    check("wire round trip", [&] {
        CodecConfig c;
        c.scheme = SchemeId::raptor;
        auto enc = make_encoder(c, block);
        const CodedPacket p = enc->next();
        return deserialize(serialize(p)) == p;
    });
    check("arq baseline", [&] { return run_arq_baseline(block, ChannelSpec{0.3, 3, 5, false}).success; });
    return all;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Erasure and fountain code toolkit", "fountain"};
    app.require_subcommand(1);
    RunConfig rc;
    std::string schemes_csv;
    std::optional<std::uint64_t> seed_flag;

    auto add_codec = [&](CLI::App* sub) {
        sub->add_option("--scheme", rc.scheme, "rs, rs_systematic, rl_gf2, rl_gf256, lt, raptor, triangular");
        sub->add_option("-k,--k", rc.k, "input packets per block");
        sub->add_option("-B,--packet-len", rc.packet_len, "bytes per packet");
        sub->add_option("-n,--n", rc.codec.n, "RS code length (default min(2k, 255))");
        sub->add_option("--sparsity", rc.codec.sparsity, "random linear nonzero probability");
        sub->add_flag("--systematic", rc.codec.systematic, "random linear: send the inputs first");
        sub->add_option("--c", rc.codec.c, "robust soliton c");
        sub->add_option("--delta", rc.codec.delta, "robust soliton delta");
        sub->add_option("--j", rc.codec.j, "raptor parity packets (default ceil(0.05k)+4)");
        sub->add_option("--row-weight", rc.codec.row_weight, "raptor precode row weight");
        sub->add_option("--seed", seed_flag, std::string("session seed (default $") + kSeedEnv + " or 1)");
    };

    auto* enc = app.add_subcommand("encode", "split a file into k packets and write a coded stream");
    add_codec(enc);
    enc->add_option("input", rc.input, "file to encode")->required();
    enc->add_option("-o,--output", rc.output, "stream file")->required();
    enc->add_option("--count", rc.count, "packets to write (default n for RS, 2k otherwise)");

    auto* dec = app.add_subcommand("decode", "recover a file from a coded stream");
    dec->add_option("input", rc.input, "stream file")->required();
    dec->add_option("-o,--output", rc.output, "recovered file")->required();
    dec->add_option("--length", rc.length, "original length (default from the stream's .json sidecar)");
    dec->add_flag("--shuffle", rc.shuffle, "ingest packets in a seeded random order");
    dec->add_option("--seed", seed_flag, "shuffle seed");

    auto* sim = app.add_subcommand("simulate", "run erasure-channel sessions and print one CSV row");
    add_codec(sim);
    sim->add_option("--loss", rc.loss_prob, "per-client erasure probability");
    sim->add_option("-N,--clients", rc.clients, "receivers");
    sim->add_option("--trials", rc.trials, "independent sessions");
    sim->add_option("--cap", rc.cap, "transmission cap (default 10k/(1-loss))");
    sim->add_flag("--lossy-acks", rc.lossy_acks, "ARQ acknowledgements are erased too");
    sim->add_flag("--wall-clock", rc.wall_clock, "fill wall_ms (output is then not byte-stable)");
    sim->add_option("-o,--output", rc.output, "CSV file (default stdout)");

    auto* bench = app.add_subcommand("bench", "sweep schemes, k and loss; print CSV");
    add_codec(bench);
    bench->add_option("--schemes", schemes_csv, "comma-separated schemes, 'arq' for the baseline")->required();
    bench->add_option("--ks", rc.ks, "comma-separated k values")->delimiter(',')->required();
    bench->add_option("--losses", rc.losses, "comma-separated loss probabilities (default 0,0.2,0.5)")->delimiter(',');
    bench->add_option("-N,--clients", rc.clients, "receivers");
    bench->add_option("--trials", rc.trials, "sessions per point");
    bench->add_flag("--wall-clock", rc.wall_clock, "fill wall_ms (output is then not byte-stable)");
    bench->add_option("-o,--output", rc.output, "CSV file (default stdout)");

    auto* self = app.add_subcommand("selftest", "run quick built-in checks");

    std::vector<const char*> argv{"fountain"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const auto sub = app.get_subcommands().front();
        rc.command = sub->get_name();
        if (seed_flag) {
            rc.seed = *seed_flag;
        } else if (const auto s = env_seed()) {
            rc.seed = *s;
        }
        if (!schemes_csv.empty()) {
            std::stringstream ss(schemes_csv);
            for (std::string s; std::getline(ss, s, ',');)
                if (!s.empty()) rc.schemes.push_back(s);
        }
        rc.validate();
        if (sub == enc) return cmd_encode(rc, out);
        if (sub == dec) return cmd_decode(rc, out, err);
        if (sub == sim) return cmd_simulate(rc, out);
        if (sub == bench) return cmd_bench(rc, out);
        if (sub == self) return run_selftest(out) ? kExitOk : kExitDecodeFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const ParseError& e) {
        err << "error: malformed stream: " << e.what() << "\n";
        return kExitIoError;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDecodeFailure;
    }
    return kExitConfigError;
}

}  // namespace fountain
