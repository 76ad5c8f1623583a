#include "fountain/gf.hpp"

#include <string>

#include "fountain/errors.hpp"

namespace fountain {

namespace {

int degree_of(std::uint64_t poly) noexcept {
    int d = -1;
    while (poly != 0) {
        poly >>= 1;
        ++d;
    }
    return d;
}

// Remainder of a mod b over GF(2)[x].
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) noexcept {
    const int db = degree_of(b);
    for (int da = degree_of(a); da >= db; da = degree_of(a)) a ^= b << (da - db);
    return a;
}

}  // namespace

Symbol poly_mulmod(std::uint32_t a, std::uint32_t b, const FieldSpec& spec) noexcept {
    const std::uint32_t top = 1u << spec.m;
    std::uint32_t result = 0;
    while (b != 0) {
        if (b & 1u) result ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= spec.modulus;
    }
    return static_cast<Symbol>(result);
}

bool is_irreducible(std::uint32_t modulus, unsigned m) noexcept {
    if (degree_of(modulus) != static_cast<int>(m)) return false;
    // Any factorization has a factor of degree <= m/2.
    for (std::uint64_t d = 2; degree_of(d) <= static_cast<int>(m / 2); ++d) {
        if (poly_mod(modulus, d) == 0) return false;
    }
    return true;
}

FieldTables build_tables(const FieldSpec& spec) {
    if (spec.m < 1 || spec.m > 16)
        throw ConstructionError("extension degree must be in 1..16, got " + std::to_string(spec.m));
    if (degree_of(spec.modulus) != static_cast<int>(spec.m))
        throw ConstructionError("modulus degree does not match m");
    if (!is_irreducible(spec.modulus, spec.m)) throw ConstructionError("modulus is reducible");
    const std::uint32_t size = 1u << spec.m;
    if (spec.generator == 0 || spec.generator >= size) throw ConstructionError("generator out of range");

    FieldTables t;
    t.exp.resize(size - 1);
    t.log.assign(size, 0);
    std::vector<bool> seen(size, false);
    Symbol x = 1;
    for (std::uint32_t i = 0; i < size - 1; ++i) {
        if (seen[x]) throw ConstructionError("generator is not primitive");
        seen[x] = true;
        t.exp[i] = x;
        t.log[x] = i;
        x = poly_mulmod(x, spec.generator, spec);
    }
    if (x != 1) throw ConstructionError("generator is not primitive");
    return t;
}

GaloisField::GaloisField(const FieldSpec& spec) : spec_(spec) {
    FieldTables t = build_tables(spec);
    const std::uint32_t n = order();
    exp2_.resize(2 * static_cast<std::size_t>(n));
    for (std::uint32_t i = 0; i < 2 * n; ++i) exp2_[i] = t.exp[i % n];
    log_ = std::move(t.log);
    if (spec_.m == 8) {
        mul256_.resize(256 * 256);
        for (unsigned a = 0; a < 256; ++a)
            for (unsigned b = 0; b < 256; ++b)
                mul256_[a * 256 + b] = static_cast<std::uint8_t>(mul_unchecked(static_cast<Symbol>(a), static_cast<Symbol>(b)));
    }
}

FieldPtr GaloisField::gf2() {
    static const FieldPtr field = std::make_shared<const GaloisField>(FieldSpec::gf2());
    return field;
}

FieldPtr GaloisField::gf256() {
    static const FieldPtr field = std::make_shared<const GaloisField>(FieldSpec::gf256());
    return field;
}

FieldPtr GaloisField::make(const FieldSpec& spec) {
    if (spec == FieldSpec::gf2()) return gf2();
    if (spec == FieldSpec::gf256()) return gf256();
    return std::make_shared<const GaloisField>(spec);
}

void GaloisField::check(Symbol a) const {
    if (!contains(a))
        throw UsageError("symbol " + std::to_string(a) + " is not an element of GF(2^" + std::to_string(spec_.m) + ")");
}

Symbol GaloisField::add(Symbol a, Symbol b) const {
    check(a);
    check(b);
    return static_cast<Symbol>(a ^ b);
}

Symbol GaloisField::mul(Symbol a, Symbol b) const {
    check(a);
    check(b);
    return mul_unchecked(a, b);
}

Symbol GaloisField::inv(Symbol a) const {
    check(a);
    if (a == 0) throw DomainError("zero has no multiplicative inverse");
    return exp2_[(order() - log_[a]) % order()];
}

Symbol GaloisField::div(Symbol a, Symbol b) const {
    return mul(a, inv(b));
}

Symbol GaloisField::pow(Symbol a, std::uint64_t e) const {
    check(a);
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp2_[(static_cast<std::uint64_t>(log_[a]) * (e % order())) % order()];
}

std::uint32_t GaloisField::log(Symbol a) const {
    check(a);
    if (a == 0) throw DomainError("log of zero is undefined");
    return log_[a];
}

void GaloisField::mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Symbol c) const {
    if (!supports_byte_payloads()) throw UsageError("byte payloads need GF(2) or GF(256)");
    if (dst.size() != src.size()) throw UsageError("region lengths differ");
    check(c);
    if (c == 0) return;
    if (c == 1) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
        return;
    }
    const std::uint8_t* row = mul256_.data() + static_cast<std::size_t>(c) * 256;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

void GaloisField::scale_region(std::span<std::uint8_t> buf, Symbol c) const {
    if (!supports_byte_payloads()) throw UsageError("byte payloads need GF(2) or GF(256)");
    check(c);
    if (c == 1) return;
    if (c == 0) {
        for (auto& b : buf) b = 0;
        return;
    }
    const std::uint8_t* row = mul256_.data() + static_cast<std::size_t>(c) * 256;
    for (auto& b : buf) b = row[b];
}

Element::Element(FieldPtr field, Symbol value) : field_(std::move(field)), value_(value) {
    if (!field_) throw UsageError("element needs a field");
    if (!field_->contains(value_)) throw UsageError("element value out of range");
}

const GaloisField& Element::same_field(const Element& o) const {
    if (!(*field_ == *o.field_)) throw UsageError("operands belong to different fields");
    return *field_;
}

Element Element::operator+(const Element& o) const {
    return Element(field_, same_field(o).add(value_, o.value_));
}

Element Element::operator*(const Element& o) const {
    return Element(field_, same_field(o).mul(value_, o.value_));
}

Element Element::inverse() const {
    return Element(field_, field_->inv(value_));
}

}  // namespace fountain
