#include <doctest.h>

#include <cstdint>

#include "fountain/errors.hpp"
#include "fountain/gf.hpp"
#include "fountain/rng.hpp"

using namespace fountain;

namespace {

// Independent oracle: full carry-less product first, then long division by
// the modulus. The library interleaves reduction with the shifts instead.
std::uint32_t oracle_mul(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, unsigned m) {
    std::uint64_t prod = 0;
    for (unsigned i = 0; i < 16; ++i)
        if ((b >> i) & 1u) prod ^= static_cast<std::uint64_t>(a) << i;
    for (int bit = 2 * 16; bit >= static_cast<int>(m); --bit)
        if ((prod >> bit) & 1u) prod ^= static_cast<std::uint64_t>(modulus) << (bit - static_cast<int>(m));
    return static_cast<std::uint32_t>(prod);
}

}  // namespace

TEST_CASE("gf_add is xor") {
    auto f = GaloisField::gf256();
    CHECK(f->add(1, 1) == 0);
    CHECK(f->add(0x37, 0) == 0x37);
    CHECK(f->add(0x53, 0xCA) == 0x99);
    auto g2 = GaloisField::gf2();
    CHECK(g2->add(1, 1) == 0);
}

TEST_CASE("gf_mul examples") {
    auto f = GaloisField::gf256();
    CHECK(f->mul(0, 0x77) == 0);
    CHECK(f->mul(1, 0x77) == 0x77);
    CHECK(oracle_mul(2, 142, 0x11D, 8) == 1);
    CHECK(f->mul(2, 142) == 1);
}

TEST_CASE("gf_inv examples and errors") {
    auto f = GaloisField::gf256();
    CHECK(f->inv(1) == 1);
    CHECK(f->inv(2) == 142);
    CHECK(GaloisField::gf2()->inv(1) == 1);
    CHECK_THROWS_AS(f->inv(0), DomainError);
    CHECK_THROWS_AS(GaloisField::gf2()->inv(0), DomainError);
}

TEST_CASE("symbols outside the field are usage errors") {
    auto g2 = GaloisField::gf2();
    CHECK_THROWS_AS(g2->add(2, 1), UsageError);
    CHECK_THROWS_AS(g2->mul(1, 5), UsageError);
    CHECK_THROWS_AS(GaloisField::gf256()->mul(256, 1), UsageError);

    Element a(GaloisField::gf256(), 3);
    Element b(GaloisField::gf2(), 1);
    CHECK_THROWS_AS(a + b, UsageError);
    CHECK_THROWS_AS(a * b, UsageError);
    CHECK((a * a.inverse()).value() == 1);
    CHECK_THROWS_AS(Element(GaloisField::gf2(), 2), UsageError);
}

TEST_CASE("build_tables") {
    auto t2 = build_tables(FieldSpec::gf2());
    REQUIRE(t2.exp.size() == 1);
    CHECK(t2.exp[0] == 1);
    CHECK(t2.log[1] == 0);

    auto t = build_tables(FieldSpec::gf256());
    CHECK(t.exp.size() == 255);
    CHECK(t.exp[0] == 1);
    CHECK(t.exp[1] == 2);

    // x^8 + 1 = (x + 1)^8 is reducible.
    CHECK_THROWS_AS(build_tables({8, 0x101, 2}), ConstructionError);
    // 0x11B (AES polynomial) is irreducible but 2 is not primitive there.
    CHECK_THROWS_AS(build_tables({8, 0x11B, 2}), ConstructionError);
    CHECK_NOTHROW(build_tables({8, 0x11B, 3}));
    // modulus degree must equal m
    CHECK_THROWS_AS(build_tables({8, 0x1D, 2}), ConstructionError);
    CHECK_THROWS_AS(build_tables({17, 0x2000B, 2}), ConstructionError);
}

TEST_CASE("table multiply matches schoolbook on 1000 random pairs and all 65536 pairs") {
    auto f = GaloisField::gf256();
    SplitMix64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        auto a = static_cast<Symbol>(rng.below(256));
        auto b = static_cast<Symbol>(rng.below(256));
        CHECK(f->mul(a, b) == oracle_mul(a, b, 0x11D, 8));
    }
    int mismatches = 0;
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
            if (f->mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) != oracle_mul(a, b, 0x11D, 8)) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("field axioms for every m up to 8") {
    // One conventional primitive polynomial per degree.
    const std::uint32_t moduli[] = {0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};
    for (unsigned m = 1; m <= 8; ++m) {
        CAPTURE(m);
        GaloisField f({m, moduli[m], static_cast<Symbol>(m == 1 ? 1 : 2)});
        const std::uint32_t q = f.size();
        for (std::uint32_t a = 0; a < q; ++a) {
            const auto sa = static_cast<Symbol>(a);
            REQUIRE(f.add(sa, sa) == 0);
            if (a != 0) REQUIRE(f.mul(sa, f.inv(sa)) == 1);
            for (std::uint32_t b = 0; b < q; ++b) {
                const auto sb = static_cast<Symbol>(b);
                REQUIRE(f.mul(sa, sb) == f.mul(sb, sa));
                REQUIRE(f.mul(sa, sb) == oracle_mul(a, b, moduli[m], m));
            }
        }
        SplitMix64 rng(m);
        for (int i = 0; i < 2000; ++i) {
            auto a = static_cast<Symbol>(rng.below(q));
            auto b = static_cast<Symbol>(rng.below(q));
            auto c = static_cast<Symbol>(rng.below(q));
            REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
    }
}

TEST_CASE("GF(2^16) tables are consistent") {
    GaloisField f({16, 0x1100B, 2});
    SplitMix64 rng(16);
    for (int i = 0; i < 5000; ++i) {
        auto a = static_cast<Symbol>(rng.below(65536));
        auto b = static_cast<Symbol>(rng.below(65536));
        REQUIRE(f.mul(a, b) == oracle_mul(a, b, 0x1100B, 16));
        if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("region operations") {
    auto f = GaloisField::gf256();
    std::vector<std::uint8_t> dst{1, 2, 3, 4};
    const std::vector<std::uint8_t> src{5, 6, 7, 8};
    auto expect = dst;
    for (std::size_t i = 0; i < 4; ++i) expect[i] ^= static_cast<std::uint8_t>(f->mul(9, src[i]));
    f->mul_add_region(dst, src, 9);
    CHECK(dst == expect);
    f->scale_region(dst, f->inv(3));
    f->scale_region(dst, 3);
    CHECK(dst == expect);

    GaloisField g4({4, 0x13, 2});
    CHECK_THROWS_AS(g4.mul_add_region(dst, src, 1), UsageError);
}
