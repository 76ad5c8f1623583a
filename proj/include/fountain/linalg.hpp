#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "fountain/gf.hpp"

namespace fountain {

using Payload = std::vector<std::uint8_t>;

/// Tallies of elementary operations performed by one elimination.
///
/// One row_xor is one full row combination `row_i += f * row_j`, however many
/// machine words or symbols it touches. `resolve` counts pivot resolutions in
/// back-substitution, so `elementary_steps()` is the k(k+1)/2 step count of a
/// dense k x k triangular solve. `symbol_mul` counts individual field
/// multiplications by coefficients other than 0 and 1. `bit_xor` is only used
/// by bit-level decoders (triangular codes), where one unit is one substituted bit.
struct OpCounter {
    std::uint64_t row_xor = 0;
    std::uint64_t row_scale = 0;
    std::uint64_t row_swap = 0;
    std::uint64_t symbol_mul = 0;
    std::uint64_t resolve = 0;
    std::uint64_t bit_xor = 0;

    std::uint64_t elementary_steps() const noexcept { return row_xor + resolve; }
    void reset() noexcept { *this = OpCounter{}; }

    OpCounter& operator+=(const OpCounter& o) noexcept {
        row_xor += o.row_xor;
        row_scale += o.row_scale;
        row_swap += o.row_swap;
        symbol_mul += o.symbol_mul;
        resolve += o.resolve;
        bit_xor += o.bit_xor;
        return *this;
    }
    friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Dense GF(2) matrix, rows bit-packed into 64-bit words (bit c of a row is
/// bit c%64 of word c/64).
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return words_; }

    bool get(std::size_t r, std::size_t c) const noexcept {
        return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) noexcept {
        auto& w = bits_[r * words_ + c / 64];
        const std::uint64_t mask = std::uint64_t{1} << (c % 64);
        w = v ? (w | mask) : (w & ~mask);
    }
    void flip(std::size_t r, std::size_t c) noexcept { bits_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

    std::span<std::uint64_t> row(std::size_t r) noexcept { return {bits_.data() + r * words_, words_}; }
    std::span<const std::uint64_t> row(std::size_t r) const noexcept { return {bits_.data() + r * words_, words_}; }

    void xor_row(std::size_t dst, std::size_t src) noexcept;
    void swap_rows(std::size_t a, std::size_t b) noexcept;
    std::size_t row_weight(std::size_t r) const noexcept;
    std::size_t nonzeros() const noexcept;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Dense row-major matrix over GF(2^m).
class FieldMatrix {
public:
    FieldMatrix(FieldPtr field, std::size_t rows, std::size_t cols);

    static FieldMatrix identity(FieldPtr field, std::size_t n);
    static FieldMatrix from_rows(FieldPtr field, const std::vector<std::vector<Symbol>>& rows);
    static FieldMatrix from_bits(const BitMatrix& bits);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Symbol at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Symbol v);
    std::span<Symbol> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const Symbol> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::size_t nonzeros() const noexcept;
    double density() const noexcept;
    bool is_upper_triangular() const noexcept;

    /// Row i of the result is row perm[i] of this matrix.
    FieldMatrix permute_rows(std::span<const std::size_t> perm) const;
    FieldMatrix operator*(const FieldMatrix& rhs) const;

    BitMatrix to_bits() const;
    std::vector<std::vector<Symbol>> to_rows() const;

    friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) noexcept {
        return *a.field_ == *b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    FieldPtr field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> data_;
};

/// Row-compressed matrix: each row holds (column, symbol) pairs sorted by
/// column with no duplicates and no stored zeros.
class SparseMatrix {
public:
    struct Entry {
        std::uint32_t col;
        Symbol value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SparseMatrix(FieldPtr field, std::size_t rows, std::size_t cols);

    static SparseMatrix from_dense(const FieldMatrix& m);
    FieldMatrix to_dense() const;

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    /// Throws UsageError unless entries are sorted, unique, in range and nonzero.
    void set_row(std::size_t r, std::vector<Entry> entries);
    std::span<const Entry> row(std::size_t r) const noexcept { return rows_[r]; }

    std::size_t nonzeros() const noexcept;
    double density() const noexcept;

private:
    FieldPtr field_;
    std::size_t cols_;
    std::vector<std::vector<Entry>> rows_;
};

inline constexpr double kDefaultSparseThreshold = 0.25;

using StoredMatrix = std::variant<FieldMatrix, SparseMatrix>;

/// Picks the sparse layout when density is below `threshold`.
StoredMatrix store(const FieldMatrix& m, double threshold = kDefaultSparseThreshold);

/// Result of forward elimination.
///
/// `upper` is the row-echelon form of the input rows taken in the order
/// `permutation` (upper row i descends from input row permutation[i]); pivots
/// are normalized to 1. The input matrix is not modified. Pivot choice is the
/// first nonzero of the column, searching rows top-down, so re-running
/// elimination on the permuted input needs no swaps and yields `upper` again.
struct Echelon {
    FieldMatrix upper;
    std::vector<std::size_t> permutation;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
};

Echelon triangularize(const FieldMatrix& m, OpCounter& counter);
/// Same, carrying payload rows through every swap, scale and combination.
Echelon triangularize(const FieldMatrix& m, std::vector<Payload>& rhs, OpCounter& counter);

struct BitEchelon {
    BitMatrix upper;
    std::vector<std::size_t> permutation;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
};

BitEchelon triangularize(const BitMatrix& m, std::vector<Payload>* rhs, OpCounter& counter);

/// Solves u x = rhs for square upper-triangular u. Throws SingularMatrixError on
/// a zero diagonal and UsageError if u is not upper-triangular.
std::vector<Payload> back_substitute(const FieldMatrix& upper, std::vector<Payload> rhs, OpCounter& counter);
std::vector<Payload> back_substitute(const SparseMatrix& upper, std::vector<Payload> rhs, OpCounter& counter);
std::vector<Payload> back_substitute(const BitMatrix& upper, std::vector<Payload> rhs, OpCounter& counter);

/// Throws SingularMatrixError carrying the achieved rank.
FieldMatrix invert(const FieldMatrix& m);
FieldMatrix invert(const FieldMatrix& m, OpCounter& counter);

std::size_t rank(const FieldMatrix& m);
std::size_t rank(const BitMatrix& m);

/// Solves m x = rhs by triangularization and back-substitution. m may be tall
/// (more equations than unknowns) as long as it has full column rank.
std::vector<Payload> solve(const FieldMatrix& m, std::vector<Payload> rhs, OpCounter& counter);
std::vector<Payload> solve(const BitMatrix& m, std::vector<Payload> rhs, OpCounter& counter);

}  // namespace fountain
