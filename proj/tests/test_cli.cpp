#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fountain/bench.hpp"
#include "fountain/cli.hpp"
#include "fountain/rng.hpp"
#include "fountain/wire.hpp"

using namespace fountain;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fountain_cli_" + std::to_string(SplitMix64(reinterpret_cast<std::uintptr_t>(this)).next()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::uint8_t> slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& p, const std::vector<std::uint8_t>& data) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng.next());
    return v;
}

}  // namespace

TEST_CASE("one-byte file with k=1 round-trips") {
    TempDir d;
    spit(d / "in", {0x5A});
    REQUIRE(cli({"encode", d / "in", "--scheme", "rl_gf256", "-k", "1", "--count", "1", "-o", d / "s"}).code == 0);
    CHECK(deserialize_stream(slurp(d / "s")).size() == 1);
    REQUIRE(cli({"decode", d / "s", "-o", d / "out"}).code == 0);
    CHECK(slurp(d / "out") == std::vector<std::uint8_t>{0x5A});
}

TEST_CASE("every scheme round-trips a file and records its length") {
    TempDir d;
    const auto data = random_bytes(1001, 3);
    spit(d / "in", data);
    for (const char* s : {"rs", "rs_systematic", "rl_gf2", "rl_gf256", "lt", "raptor", "triangular"}) {
        CAPTURE(s);
        std::vector<std::string> args{"encode", d / "in", "--scheme", s, "-k", "24", "-o", d / "s"};
        if (std::string(s) == "lt") args.insert(args.end(), {"--c", "0.3", "--count", "80"});
        REQUIRE(cli(args).code == 0);
        std::ifstream side(d / "s.json");
        const auto meta = nlohmann::json::parse(side);
        CHECK(meta["original_length"] == 1001);
        CHECK(meta["scheme"] == s);
        CHECK(meta["k"] == 24);
        CHECK(meta["B"] == 42);
        const auto run = cli({"decode", d / "s", "-o", d / "out"});
        REQUIRE(run.code == 0);
        CHECK(slurp(d / "out") == data);
    }
}

TEST_CASE("any 4 of 8 RS packets reproduce the file") {
    TempDir d;
    const auto data = random_bytes(37, 4);
    spit(d / "in", data);
    REQUIRE(cli({"encode", d / "in", "--scheme", "rs", "-k", "4", "-n", "8", "-o", d / "s"}).code == 0);
    const auto ps = deserialize_stream(slurp(d / "s"));
    REQUIRE(ps.size() == 8);
    fs::copy_file(d / "s.json", d / "sub.json");
    int subsets = 0;
    for (unsigned mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(mask) != 4) continue;
        std::vector<CodedPacket> sub;
        for (unsigned i = 0; i < 8; ++i)
            if ((mask >> i) & 1u) sub.push_back(ps[i]);
        spit(d / "sub", serialize_stream(sub));
        REQUIRE(cli({"decode", d / "sub", "-o", d / "out"}).code == 0);
        REQUIRE(slurp(d / "out") == data);
        ++subsets;
    }
    CHECK(subsets == 70);
}

TEST_CASE("encoding replays bit-identically under a fixed seed") {
    TempDir d;
    spit(d / "in", random_bytes(300, 5));
    for (const char* s : {"rl_gf256", "raptor", "lt"}) {
        REQUIRE(cli({"encode", d / "in", "--scheme", s, "-k", "30", "--seed", "17", "-o", d / "a"}).code == 0);
        REQUIRE(cli({"encode", d / "in", "--scheme", s, "-k", "30", "--seed", "17", "-o", d / "b"}).code == 0);
        CHECK(slurp(d / "a") == slurp(d / "b"));
        REQUIRE(cli({"encode", d / "in", "--scheme", s, "-k", "30", "--seed", "18", "-o", d / "b"}).code == 0);
        CHECK(slurp(d / "a") != slurp(d / "b"));
    }
}

TEST_CASE("the seed environment variable sets the default seed") {
    TempDir d;
    spit(d / "in", random_bytes(100, 6));
    REQUIRE(cli({"encode", d / "in", "--scheme", "rl_gf2", "-k", "10", "--seed", "99", "-o", d / "a"}).code == 0);
    setenv(kSeedEnv, "99", 1);
    REQUIRE(cli({"encode", d / "in", "--scheme", "rl_gf2", "-k", "10", "-o", d / "b"}).code == 0);
    setenv(kSeedEnv, "nope", 1);
    CHECK(cli({"encode", d / "in", "--scheme", "rl_gf2", "-k", "10", "-o", d / "c"}).code == kExitConfigError);
    unsetenv(kSeedEnv);
    CHECK(slurp(d / "a") == slurp(d / "b"));
}

TEST_CASE("shuffled and truncated streams") {
    TempDir d;
    const auto data = random_bytes(500, 7);
    spit(d / "in", data);
    REQUIRE(cli({"encode", d / "in", "--scheme", "rl_gf256", "-k", "10", "-o", d / "s"}).code == 0);
    REQUIRE(cli({"decode", d / "s", "-o", d / "ordered"}).code == 0);
    REQUIRE(cli({"decode", d / "s", "--shuffle", "--seed", "3", "-o", d / "shuffled"}).code == 0);
    CHECK(slurp(d / "ordered") == slurp(d / "shuffled"));
    CHECK(slurp(d / "ordered") == data);

    auto ps = deserialize_stream(slurp(d / "s"));
    ps.resize(7);
    spit(d / "short", serialize_stream(ps));
    const auto run = cli({"decode", d / "short", "-o", d / "out"});
    CHECK(run.code == kExitDecodeFailure);
    CHECK(run.err.find("rank 7 of 10") != std::string::npos);
    CHECK_FALSE(fs::exists(d / "out"));
}

TEST_CASE("exit codes for configuration and I/O errors") {
    TempDir d;
    spit(d / "in", random_bytes(10, 8));
    CHECK(cli({}).code == kExitConfigError);
    CHECK(cli({"frobnicate"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "in", "--scheme", "tornado", "-o", d / "s"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "in", "-k", "0", "-o", d / "s"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "in", "--scheme", "rs", "-k", "300", "-o", d / "s"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "in", "-k", "2", "-B", "2", "-o", d / "s"}).code == kExitConfigError);
    CHECK(cli({"simulate", "--loss", "2"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "missing", "-o", d / "s"}).code == kExitIoError);
    CHECK(cli({"decode", d / "missing", "-o", d / "out"}).code == kExitIoError);
    spit(d / "garbage", {0xEC, 0x01, 0x63});
    CHECK(cli({"decode", d / "garbage", "-o", d / "out"}).code == kExitIoError);
    spit(d / "empty", {});
    CHECK(cli({"encode", d / "empty", "-o", d / "s"}).code == kExitConfigError);
    CHECK(cli({"encode", d / "in", "-o", (d / "no_dir") + "/s"}).code == kExitIoError);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("bench output is byte-stable and embeds its config") {
    TempDir d;
    const std::vector<std::string> args{"bench", "--schemes", "rs,lt,arq", "--ks", "16,32", "--losses", "0,0.2",
                                        "--trials", "3", "--c", "0.3", "--seed", "5"};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    auto with_file = args;
    with_file.insert(with_file.end(), {"-o", d / "bench.csv"});
    REQUIRE(cli(with_file).code == 0);
    const auto csv = slurp(d / "bench.csv");
    CHECK(std::string(csv.begin(), csv.end()) == a.out);
    std::ifstream side(d / "bench.csv.json");
    const auto meta = nlohmann::json::parse(side);
    CHECK(meta["schemes"] == std::vector<std::string>{"rs", "lt", "arq"});
    CHECK(meta["seed"] == 5);
    CHECK(cli({"bench", "--schemes", "lt", "--ks", "x"}).code == kExitConfigError);
}

TEST_CASE("simulate prints one CSV row") {
    const auto run = cli({"simulate", "--scheme", "raptor", "-k", "32", "--loss", "0.2", "-N", "3", "--trials", "4"});
    REQUIRE(run.code == 0);
    std::istringstream in(run.out);
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == kCsvHeader);
    CHECK(row.rfind("raptor,32,16,3,0.200000,4,", 0) == 0);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(cli({"simulate", "--scheme", "arq", "-k", "8", "--loss", "0.3"}).code == 0);
    CHECK(cli({"simulate", "--scheme", "lt", "--c", "0.3", "-k", "20", "--loss", "1"}).code == kExitDecodeFailure);
}

TEST_CASE("selftest passes") {
    const auto run = cli({"selftest"});
    CHECK(run.code == 0);
    CHECK(run.out.find("FAIL") == std::string::npos);
    CHECK(run.out.find("PASS round trip triangular") != std::string::npos);
}

TEST_CASE("run configuration serializes every parameter") {
    RunConfig rc;
    rc.command = "simulate";
    rc.codec.j = 7;
    const auto j = nlohmann::json::parse(rc.to_json());
    for (const char* key : {"command", "scheme", "k", "B", "n", "sparsity", "systematic", "c", "delta", "j",
                            "row_weight", "seed", "loss_prob", "clients", "trials"})
        CHECK(j.contains(key));
    CHECK(j["j"] == 7);
}
