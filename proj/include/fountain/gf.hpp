#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fountain {

/// A field element stored as a plain integer. Packet bytes are GF(256) symbols.
using Symbol = std::uint16_t;

/// Defines GF(2^m): extension degree, modulus with bit m set, and the
/// primitive element used to build the exp/log tables.
struct FieldSpec {
    unsigned m = 8;
    std::uint32_t modulus = 0x11D;
    Symbol generator = 2;

    static constexpr FieldSpec gf2() noexcept { return {1, 0x3, 1}; }
    /// x^8 + x^4 + x^3 + x^2 + 1, generator 2.
    static constexpr FieldSpec gf256() noexcept { return {8, 0x11D, 2}; }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct FieldTables {
    std::vector<Symbol> exp;          // length 2^m - 1, exp[i] = generator^i
    std::vector<std::uint32_t> log;   // length 2^m, log[0] unused
};

/// Carry-less product of a and b reduced by the modulus (shift-and-xor).
Symbol poly_mulmod(std::uint32_t a, std::uint32_t b, const FieldSpec& spec) noexcept;

/// True when the modulus (degree m) has no nontrivial factor over GF(2).
bool is_irreducible(std::uint32_t modulus, unsigned m) noexcept;

/// Builds exp/log tables. Throws ConstructionError for an invalid degree,
/// a reducible modulus, or a generator that is not primitive.
FieldTables build_tables(const FieldSpec& spec);

class GaloisField;
using FieldPtr = std::shared_ptr<const GaloisField>;

/// Arithmetic over GF(2^m), 1 <= m <= 16. Immutable after construction.
///
/// Every checked operation rejects operands outside [0, 2^m) with a
/// UsageError: with plain-integer symbols that is how a symbol from a
/// different field shows up.
class GaloisField {
public:
    explicit GaloisField(const FieldSpec& spec);

    static FieldPtr gf2();
    static FieldPtr gf256();
    static FieldPtr make(const FieldSpec& spec);

    const FieldSpec& spec() const noexcept { return spec_; }
    unsigned m() const noexcept { return spec_.m; }
    std::uint32_t size() const noexcept { return 1u << spec_.m; }
    std::uint32_t order() const noexcept { return size() - 1; }
    bool is_binary() const noexcept { return spec_.m == 1; }
    bool contains(std::uint32_t value) const noexcept { return value < size(); }

    Symbol add(Symbol a, Symbol b) const;
    Symbol sub(Symbol a, Symbol b) const { return add(a, b); }
    Symbol mul(Symbol a, Symbol b) const;
    Symbol div(Symbol a, Symbol b) const;
    /// Throws DomainError for zero.
    Symbol inv(Symbol a) const;
    Symbol pow(Symbol a, std::uint64_t e) const;

    Symbol exp(std::uint64_t i) const noexcept { return exp2_[i % order()]; }
    std::uint32_t log(Symbol a) const;

    std::span<const Symbol> exp_table() const noexcept { return {exp2_.data(), order()}; }
    std::span<const std::uint32_t> log_table() const noexcept { return log_; }

    /// Unchecked multiply for inner loops; operands must already be in range.
    Symbol mul_unchecked(Symbol a, Symbol b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp2_[log_[a] + log_[b]];
    }

    /// dst ^= c * src over byte symbols. Only GF(2) and GF(256) carry byte payloads.
    void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Symbol c) const;
    /// buf = c * buf over byte symbols.
    void scale_region(std::span<std::uint8_t> buf, Symbol c) const;
    bool supports_byte_payloads() const noexcept { return spec_.m == 1 || spec_.m == 8; }

    friend bool operator==(const GaloisField& a, const GaloisField& b) noexcept { return a.spec_ == b.spec_; }

private:
    void check(Symbol a) const;

    FieldSpec spec_;
    std::vector<Symbol> exp2_;             // exp table repeated twice, skips the modulo
    std::vector<std::uint32_t> log_;
    std::vector<std::uint8_t> mul256_;     // full product table, GF(256) only
};

/// A symbol bound to its field. Mixing elements of different fields throws.
class Element {
public:
    Element(FieldPtr field, Symbol value);

    Symbol value() const noexcept { return value_; }
    const FieldPtr& field() const noexcept { return field_; }

    Element operator+(const Element& o) const;
    Element operator*(const Element& o) const;
    Element inverse() const;
    bool operator==(const Element& o) const noexcept { return *field_ == *o.field_ && value_ == o.value_; }

private:
    const GaloisField& same_field(const Element& o) const;

    FieldPtr field_;
    Symbol value_;
};

}  // namespace fountain
