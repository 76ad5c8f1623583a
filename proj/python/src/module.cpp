#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "fountain/bench.hpp"
#include "fountain/cli.hpp"
#include "fountain/codec.hpp"
#include "fountain/errors.hpp"
#include "fountain/rl.hpp"
#include "fountain/session.hpp"
#include "fountain/wire.hpp"

namespace py = pybind11;
using namespace fountain;

namespace {

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

std::vector<py::bytes> payload_list(const std::vector<Payload>& ps) {
    std::vector<py::bytes> out;
    out.reserve(ps.size());
    for (const auto& p : ps) out.push_back(to_bytes(p));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Erasure and fountain codes over GF(2^m)";

    auto base = py::register_exception<Error>(m, "FountainError", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base.ptr());
    py::register_exception<InsufficientPacketsError>(m, "InsufficientPacketsError", base.ptr());
    py::register_exception<DuplicatePacketError>(m, "DuplicatePacketError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::enum_<SchemeId>(m, "Scheme")
        .value("rs", SchemeId::rs)
        .value("rs_systematic", SchemeId::rs_systematic)
        .value("rl_gf2", SchemeId::rl_gf2)
        .value("rl_gf256", SchemeId::rl_gf256)
        .value("lt", SchemeId::lt)
        .value("raptor", SchemeId::raptor)
        .value("triangular", SchemeId::triangular);

    py::enum_<DecodeStatus>(m, "DecodeStatus")
        .value("needs_more", DecodeStatus::needs_more)
        .value("decodable", DecodeStatus::decodable)
        .value("decoded", DecodeStatus::decoded);

    py::class_<InputBlock>(m, "InputBlock")
        .def_static("from_bytes",
                    [](const py::bytes& data, std::size_t k, std::size_t packet_len) {
                        return InputBlock::from_bytes(from_bytes(data), k, packet_len);
                    },
                    py::arg("data"), py::arg("k"), py::arg("packet_len"))
        .def_static("random", &InputBlock::random, py::arg("k"), py::arg("packet_len"), py::arg("seed"))
        .def_readonly("k", &InputBlock::k)
        .def_readonly("packet_len", &InputBlock::packet_len)
        .def_property_readonly("packets", [](const InputBlock& b) { return payload_list(b.packets); })
        .def("concat", [](const InputBlock& b) { return to_bytes(b.concat()); })
        .def("__eq__", [](const InputBlock& a, const InputBlock& b) { return a == b; });

    py::class_<CodecConfig>(m, "CodecConfig")
        .def(py::init([](SchemeId scheme, std::uint64_t seed) {
                 CodecConfig c;
                 c.scheme = scheme;
                 c.seed = seed;
                 return c;
             }),
             py::arg("scheme") = SchemeId::lt, py::arg("seed") = 1)
        .def_readwrite("scheme", &CodecConfig::scheme)
        .def_readwrite("n", &CodecConfig::n)
        .def_readwrite("sparsity", &CodecConfig::sparsity)
        .def_readwrite("systematic", &CodecConfig::systematic)
        .def_readwrite("c", &CodecConfig::c)
        .def_readwrite("delta", &CodecConfig::delta)
        .def_readwrite("j", &CodecConfig::j)
        .def_readwrite("row_weight", &CodecConfig::row_weight)
        .def_readwrite("seed", &CodecConfig::seed)
        .def("validate", &CodecConfig::validate, py::arg("k"));

    py::class_<CodedPacket>(m, "CodedPacket")
        .def_readonly("scheme", &CodedPacket::scheme)
        .def_readonly("k", &CodedPacket::k)
        .def_readonly("packet_len", &CodedPacket::packet_len)
        .def_property_readonly("payload", [](const CodedPacket& p) { return to_bytes(p.payload); })
        .def("serialize", [](const CodedPacket& p) { return to_bytes(serialize(p)); })
        .def("__eq__", [](const CodedPacket& a, const CodedPacket& b) { return a == b; });

    m.def("deserialize", [](const py::bytes& frame) { return deserialize(from_bytes(frame)); }, py::arg("frame"));

    py::class_<Encoder>(m, "Encoder")
        .def("next", &Encoder::next)
        .def_property_readonly("limit", &Encoder::limit);

    py::class_<Decoder>(m, "Decoder")
        .def("ingest", &Decoder::ingest, py::arg("packet"))
        .def("decode", &Decoder::decode, py::return_value_policy::copy)
        .def_property_readonly("status", &Decoder::status)
        .def_property_readonly("k", &Decoder::k)
        .def_property_readonly("rank", &Decoder::rank)
        .def_property_readonly("received", &Decoder::received)
        .def_property_readonly("accepted", &Decoder::accepted)
        .def_property_readonly("discarded", &Decoder::discarded)
        .def_property_readonly("row_xor", [](const Decoder& d) { return d.counter().row_xor; })
        .def_property_readonly("symbol_mul", [](const Decoder& d) { return d.counter().symbol_mul; });

    m.def("make_encoder", &make_encoder, py::arg("config"), py::arg("block"));
    m.def("make_decoder", &make_decoder, py::arg("config"), py::arg("k"), py::arg("packet_len"));
    m.def("make_decoder_for", &make_decoder_for, py::arg("first"));

    m.def(
        "encode",
        [](const py::bytes& data, std::size_t k, std::size_t count, const CodecConfig& config) {
            const auto bytes = from_bytes(data);
            if (bytes.empty()) throw ParameterError("input is empty");
            const std::size_t len = (bytes.size() + k - 1) / k;
            auto enc = make_encoder(config, InputBlock::from_bytes(bytes, k, len));
            std::vector<py::bytes> frames;
            for (std::size_t i = 0; i < count; ++i) frames.push_back(to_bytes(serialize(enc->next())));
            return frames;
        },
        "Splits data into k packets and returns count serialized frames.", py::arg("data"), py::arg("k"),
        py::arg("count"), py::arg("config") = CodecConfig{});

    m.def(
        "decode",
        [](const std::vector<py::bytes>& frames, std::size_t length) {
            if (frames.empty()) throw UsageError("no frames");
            std::unique_ptr<Decoder> dec;
            for (const auto& f : frames) {
                const auto p = deserialize(from_bytes(f));
                if (!dec) dec = make_decoder_for(p);
                if (dec->ingest(p) != DecodeStatus::needs_more) break;
            }
            if (dec->status() == DecodeStatus::needs_more) throw SingularMatrixError(dec->rank(), dec->k());
            auto out = dec->decode().concat();
            if (length > out.size()) throw ParameterError("length exceeds the decoded block");
            out.resize(length);
            return to_bytes(out);
        },
        "Decodes serialized frames and returns the first length bytes.", py::arg("frames"), py::arg("length"));

    py::class_<SessionReport>(m, "SessionReport")
        .def_readonly("scheme", &SessionReport::scheme)
        .def_readonly("k", &SessionReport::k)
        .def_readonly("clients", &SessionReport::clients)
        .def_readonly("loss_prob", &SessionReport::loss_prob)
        .def_readonly("total_transmissions", &SessionReport::total_transmissions)
        .def_readonly("retransmissions", &SessionReport::retransmissions)
        .def_readonly("acks", &SessionReport::acks)
        .def_readonly("per_client_received", &SessionReport::per_client_received)
        .def_readonly("per_client_needed", &SessionReport::per_client_needed)
        .def_readonly("per_client_overhead", &SessionReport::per_client_overhead)
        .def_readonly("per_client_decoded", &SessionReport::per_client_decoded)
        .def_readonly("success", &SessionReport::success)
        .def_readonly("cap_hit", &SessionReport::cap_hit)
        .def_property_readonly("row_xor", [](const SessionReport& r) { return r.decode_ops.row_xor; });

    m.def(
        "run_session",
        [](const CodecConfig& codec, const InputBlock& block, double loss_prob, std::size_t clients,
           std::uint64_t seed, bool lossy_acks, std::size_t cap) {
            return run_session(codec, block, ChannelSpec{loss_prob, clients, seed, lossy_acks},
                               SessionOptions{cap, false});
        },
        py::arg("codec"), py::arg("block"), py::arg("loss_prob") = 0.0, py::arg("clients") = 1,
        py::arg("seed") = 1, py::arg("lossy_acks") = false, py::arg("cap") = 0);

    m.def(
        "run_arq_baseline",
        [](const InputBlock& block, double loss_prob, std::size_t clients, std::uint64_t seed, bool lossy_acks,
           std::size_t cap) {
            return run_arq_baseline(block, ChannelSpec{loss_prob, clients, seed, lossy_acks},
                                    SessionOptions{cap, false});
        },
        py::arg("block"), py::arg("loss_prob") = 0.0, py::arg("clients") = 1, py::arg("seed") = 1,
        py::arg("lossy_acks") = false, py::arg("cap") = 0);

    m.def(
        "bench_csv",
        [](const std::vector<std::string>& schemes, const std::vector<std::size_t>& ks,
           const std::vector<double>& losses, std::size_t packet_len, std::size_t clients, std::size_t trials,
           std::uint64_t seed) {
            BenchConfig cfg;
            for (const auto& s : schemes) cfg.schemes.push_back(BenchScheme::parse(s));
            cfg.ks = ks;
            cfg.losses = losses;
            cfg.packet_len = packet_len;
            cfg.clients = clients;
            cfg.trials = trials;
            cfg.seed = seed;
            return to_csv(run_bench(cfg));
        },
        py::arg("schemes"), py::arg("ks"), py::arg("losses") = std::vector<double>{0.0},
        py::arg("packet_len") = 16, py::arg("clients") = 1, py::arg("trials") = 10, py::arg("seed") = 1);

    m.def("rl_success_probability", &rl_success_probability, py::arg("q"), py::arg("k"), py::arg("received"));
    m.def("rl_expected_extra", &rl_expected_extra, py::arg("q"), py::arg("k"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line tool in process; returns (exit code, stdout, stderr).", py::arg("args"));
}
