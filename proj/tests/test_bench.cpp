#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fountain/bench.hpp"
#include "fountain/errors.hpp"

using namespace fountain;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

BenchConfig sweep(std::vector<std::string> schemes, std::vector<std::size_t> ks, std::size_t trials) {
    BenchConfig c;
    for (const auto& s : schemes) c.schemes.push_back(BenchScheme::parse(s));
    c.ks = std::move(ks);
    c.trials = trials;
    c.packet_len = 4;
    c.losses = {0.0};
    return c;
}

}  // namespace

TEST_CASE("CSV header and row format") {
    BenchRow r;
    r.scheme = "lt";
    r.k = 20;
    r.packet_len = 16;
    r.clients = 2;
    r.loss_prob = 0.25;
    r.trials = 3;
    r.mean_overhead = 0.5;
    r.seed = 9;
    CHECK(to_csv_row(r) == "lt,20,16,2,0.250000,3,0.500000,0.000000,0.000000,0.000000,0.000000,0.000000,9");
    CHECK(lines(to_csv({r})).front() == kCsvHeader);
}

TEST_CASE("scheme parsing") {
    CHECK(BenchScheme::parse("arq").arq);
    CHECK(BenchScheme::parse("raptor").scheme == SchemeId::raptor);
    CHECK(BenchScheme::parse("rs_systematic").name() == "rs_systematic");
    CHECK_THROWS_AS(BenchScheme::parse("tornado"), UsageError);
}

TEST_CASE("rows are sorted by scheme, k and loss") {
    auto c = sweep({"triangular", "arq", "lt"}, {40, 20}, 2);
    c.losses = {0.3, 0.0};
    c.codec.c = 0.3;
    const auto rows = run_bench(c);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].scheme == "arq");
    CHECK(rows[0].k == 20);
    CHECK(rows[0].loss_prob == 0.0);
    CHECK(rows[1].loss_prob == 0.3);
    CHECK(rows[2].k == 40);
    CHECK(rows[4].scheme == "lt");
    CHECK(rows[8].scheme == "triangular");
}

TEST_CASE("a fixed seed gives byte-identical CSV") {
    auto c = sweep({"rs", "rl_gf2", "rl_gf256", "lt", "raptor", "triangular", "arq"}, {16, 32}, 3);
    c.losses = {0.0, 0.2};
    c.clients = 2;
    c.codec.c = 0.3;
    const auto a = to_csv(run_bench(c));
    const auto b = to_csv(run_bench(c));
    CHECK(a == b);
    c.seed = 2;
    CHECK(to_csv(run_bench(c)) != a);
}

TEST_CASE("LT overhead shrinks as k grows") {
    const auto rows = run_bench(sweep({"lt"}, {20, 100, 1000}, 30));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mean_overhead > rows[1].mean_overhead);
    CHECK(rows[1].mean_overhead > rows[2].mean_overhead);
    for (const auto& r : rows) CHECK(r.fail_rate == 0.0);
}

TEST_CASE("RS multiplies symbols, LT only XORs") {
    const auto rows = run_bench(sweep({"rs", "lt"}, {64}, 3));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scheme == "rs");
    CHECK(rows[0].sym_mul > 0.0);
    CHECK(rows[1].sym_mul == 0.0);
    CHECK(rows[1].row_xor > 0.0);
}

TEST_CASE("default sweep covers lossless and 20% and 50% loss") {
    BenchConfig c;
    c.schemes = {BenchScheme::parse("rl_gf256")};
    c.ks = {8};
    c.trials = 2;
    const auto rows = run_bench(c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].loss_prob == 0.0);
    CHECK(rows[1].loss_prob == 0.2);
    CHECK(rows[2].loss_prob == 0.5);
}

TEST_CASE("wall clock is opt-in") {
    auto c = sweep({"lt"}, {30}, 2);
    for (const auto& r : run_bench(c)) CHECK(r.wall_ms == 0.0);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(run_bench(sweep({}, {10}, 1)), ParameterError);
    CHECK_THROWS_AS(run_bench(sweep({"lt"}, {}, 1)), ParameterError);
    CHECK_THROWS_AS(run_bench(sweep({"lt"}, {30}, 0)), ParameterError);
    auto c = sweep({"lt"}, {30}, 1);
    c.losses = {1.5};
    CHECK_THROWS_AS(run_bench(c), ParameterError);
}
