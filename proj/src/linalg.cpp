#include "fountain/linalg.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <utility>

#include "fountain/errors.hpp"

namespace fountain {

// ---------------------------------------------------------------------------
// BitMatrix

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) noexcept {
    std::uint64_t* d = bits_.data() + dst * words_;
    const std::uint64_t* s = bits_.data() + src * words_;
    for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) noexcept {
    if (a == b) return;
    std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * words_),
                     bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * words_),
                     bits_.begin() + static_cast<std::ptrdiff_t>(b * words_));
}

std::size_t BitMatrix::row_weight(std::size_t r) const noexcept {
    std::size_t n = 0;
    for (auto w : row(r)) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t BitMatrix::nonzeros() const noexcept {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

// ---------------------------------------------------------------------------
// FieldMatrix

FieldMatrix::FieldMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    if (!field_) throw UsageError("matrix needs a field");
}

FieldMatrix FieldMatrix::identity(FieldPtr field, std::size_t n) {
    FieldMatrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
}

FieldMatrix FieldMatrix::from_rows(FieldPtr field, const std::vector<std::vector<Symbol>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FieldMatrix m(std::move(field), rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw UsageError("ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

FieldMatrix FieldMatrix::from_bits(const BitMatrix& bits) {
    FieldMatrix m(GaloisField::gf2(), bits.rows(), bits.cols());
    for (std::size_t r = 0; r < bits.rows(); ++r)
        for (std::size_t c = 0; c < bits.cols(); ++c) m.data_[r * m.cols_ + c] = bits.get(r, c) ? 1 : 0;
    return m;
}

void FieldMatrix::set(std::size_t r, std::size_t c, Symbol v) {
    if (r >= rows_ || c >= cols_) throw UsageError("matrix index out of range");
    if (!field_->contains(v)) throw UsageError("symbol not in the matrix field");
    data_[r * cols_ + c] = v;
}

std::size_t FieldMatrix::nonzeros() const noexcept {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](Symbol s) { return s != 0; }));
}

double FieldMatrix::density() const noexcept {
    return data_.empty() ? 0.0 : static_cast<double>(nonzeros()) / static_cast<double>(data_.size());
}

bool FieldMatrix::is_upper_triangular() const noexcept {
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < std::min(r, cols_); ++c)
            if (at(r, c) != 0) return false;
    return true;
}

FieldMatrix FieldMatrix::permute_rows(std::span<const std::size_t> perm) const {
    if (perm.size() != rows_) throw UsageError("permutation length mismatch");
    FieldMatrix out(field_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (perm[i] >= rows_) throw UsageError("permutation index out of range");
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(perm[i] * cols_), cols_,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }
    return out;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& rhs) const {
    if (!(*field_ == *rhs.field_)) throw UsageError("matrices over different fields");
    if (cols_ != rhs.rows_) throw UsageError("dimension mismatch in product");
    FieldMatrix out(field_, rows_, rhs.cols_);
    const GaloisField& f = *field_;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Symbol a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out.data_[i * out.cols_ + j] ^= f.mul_unchecked(a, rhs.at(k, j));
        }
    return out;
}

BitMatrix FieldMatrix::to_bits() const {
    if (!field_->is_binary()) throw UsageError("bit packing needs a GF(2) matrix");
    BitMatrix b(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (at(r, c)) b.set(r, c, true);
    return b;
}

std::vector<std::vector<Symbol>> FieldMatrix::to_rows() const {
    std::vector<std::vector<Symbol>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
    return out;
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), cols_(cols), rows_(rows) {
    if (!field_) throw UsageError("matrix needs a field");
}

SparseMatrix SparseMatrix::from_dense(const FieldMatrix& m) {
    SparseMatrix s(m.field(), m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.at(r, c) != 0) s.rows_[r].push_back({static_cast<std::uint32_t>(c), m.at(r, c)});
    return s;
}

FieldMatrix SparseMatrix::to_dense() const {
    FieldMatrix m(field_, rows(), cols_);
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto& e : rows_[r]) m.set(r, e.col, e.value);
    return m;
}

void SparseMatrix::set_row(std::size_t r, std::vector<Entry> entries) {
    if (r >= rows()) throw UsageError("row index out of range");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].col >= cols_) throw UsageError("column out of range");
        if (entries[i].value == 0) throw UsageError("sparse rows must not store zeros");
        if (!field_->contains(entries[i].value)) throw UsageError("symbol not in the matrix field");
        if (i > 0 && entries[i - 1].col >= entries[i].col) throw UsageError("sparse row not strictly sorted");
    }
    rows_[r] = std::move(entries);
}

std::size_t SparseMatrix::nonzeros() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

double SparseMatrix::density() const noexcept {
    const double cells = static_cast<double>(rows()) * static_cast<double>(cols_);
    return cells == 0 ? 0.0 : static_cast<double>(nonzeros()) / cells;
}

StoredMatrix store(const FieldMatrix& m, double threshold) {
    if (m.density() < threshold) return SparseMatrix::from_dense(m);
    return m;
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

void check_payloads(const GaloisField& field, const std::vector<Payload>& rhs, std::size_t rows) {
    if (rhs.size() != rows) throw UsageError("right-hand side needs one payload per row");
    if (rhs.empty()) return;
    if (!field.supports_byte_payloads()) throw UsageError("byte payloads need GF(2) or GF(256)");
    const std::size_t len = rhs.front().size();
    for (const auto& p : rhs)
        if (p.size() != len) throw UsageError("payload lengths differ");
}

std::size_t payload_width(const std::vector<Payload>* rhs) {
    return (rhs == nullptr || rhs->empty()) ? 0 : rhs->front().size();
}

void xor_payload(Payload& dst, const Payload& src) noexcept {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

// Forward elimination over a dense symbol matrix. `work` is consumed.
Echelon eliminate(FieldMatrix work, std::vector<Payload>* rhs, OpCounter& counter) {
    const GaloisField& f = *work.field();
    const std::size_t rows = work.rows();
    const std::size_t cols = work.cols();
    const std::size_t width = payload_width(rhs);

    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::size_t> pivots;

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t r = pivot_row;
        while (r < rows && work.at(r, col) == 0) ++r;
        if (r == rows) continue;
        if (r != pivot_row) {
            std::swap_ranges(work.row(r).begin(), work.row(r).end(), work.row(pivot_row).begin());
            std::swap(perm[r], perm[pivot_row]);
            if (rhs) std::swap((*rhs)[r], (*rhs)[pivot_row]);
            ++counter.row_swap;
        }
        auto prow = work.row(pivot_row);
        const Symbol p = prow[col];
        if (p != 1) {
            const Symbol inv = f.inv(p);
            for (std::size_t c = col; c < cols; ++c) prow[c] = f.mul_unchecked(prow[c], inv);
            if (rhs) f.scale_region((*rhs)[pivot_row], inv);
            ++counter.row_scale;
            counter.symbol_mul += (cols - col) + width;
        }
        for (std::size_t r2 = pivot_row + 1; r2 < rows; ++r2) {
            auto row = work.row(r2);
            const Symbol factor = row[col];
            if (factor == 0) continue;
            for (std::size_t c = col; c < cols; ++c) row[c] ^= f.mul_unchecked(factor, prow[c]);
            if (rhs) f.mul_add_region((*rhs)[r2], (*rhs)[pivot_row], factor);
            ++counter.row_xor;
            if (factor != 1) counter.symbol_mul += (cols - col) + width;
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return Echelon{std::move(work), std::move(perm), pivot_row, std::move(pivots)};
}

BitEchelon eliminate_bits(BitMatrix work, std::vector<Payload>* rhs, OpCounter& counter) {
    const std::size_t rows = work.rows();
    const std::size_t cols = work.cols();
    BitEchelon e;
    e.permutation.resize(rows);
    std::iota(e.permutation.begin(), e.permutation.end(), std::size_t{0});

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t r = pivot_row;
        while (r < rows && !work.get(r, col)) ++r;
        if (r == rows) continue;
        if (r != pivot_row) {
            work.swap_rows(r, pivot_row);
            std::swap(e.permutation[r], e.permutation[pivot_row]);
            if (rhs) std::swap((*rhs)[r], (*rhs)[pivot_row]);
            ++counter.row_swap;
        }
        for (std::size_t r2 = pivot_row + 1; r2 < rows; ++r2) {
            if (!work.get(r2, col)) continue;
            work.xor_row(r2, pivot_row);
            if (rhs) xor_payload((*rhs)[r2], (*rhs)[pivot_row]);
            ++counter.row_xor;
        }
        e.pivot_columns.push_back(col);
        ++pivot_row;
    }
    e.rank = pivot_row;
    e.upper = std::move(work);
    return e;
}

Echelon from_bit_echelon(BitEchelon b) {
    return Echelon{FieldMatrix::from_bits(b.upper), std::move(b.permutation), b.rank, std::move(b.pivot_columns)};
}

}  // namespace

Echelon triangularize(const FieldMatrix& m, OpCounter& counter) {
    if (m.field()->is_binary()) return from_bit_echelon(eliminate_bits(m.to_bits(), nullptr, counter));
    return eliminate(m, nullptr, counter);
}

Echelon triangularize(const FieldMatrix& m, std::vector<Payload>& rhs, OpCounter& counter) {
    check_payloads(*m.field(), rhs, m.rows());
    if (m.field()->is_binary()) return from_bit_echelon(eliminate_bits(m.to_bits(), &rhs, counter));
    return eliminate(m, &rhs, counter);
}

BitEchelon triangularize(const BitMatrix& m, std::vector<Payload>* rhs, OpCounter& counter) {
    if (rhs) check_payloads(*GaloisField::gf2(), *rhs, m.rows());
    return eliminate_bits(m, rhs, counter);
}

std::vector<Payload> back_substitute(const FieldMatrix& upper, std::vector<Payload> rhs, OpCounter& counter) {
    const std::size_t n = upper.rows();
    if (upper.cols() != n) throw UsageError("back-substitution needs a square matrix");
    if (!upper.is_upper_triangular()) throw UsageError("matrix is not upper-triangular");
    check_payloads(*upper.field(), rhs, n);
    for (std::size_t i = 0; i < n; ++i)
        if (upper.at(i, i) == 0) throw SingularMatrixError(i, n);

    const GaloisField& f = *upper.field();
    const std::size_t width = payload_width(&rhs);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Symbol u = upper.at(i, j);
            if (u == 0) continue;
            f.mul_add_region(rhs[i], rhs[j], u);
            ++counter.row_xor;
            if (u != 1) counter.symbol_mul += width;
        }
        const Symbol d = upper.at(i, i);
        if (d != 1) {
            f.scale_region(rhs[i], f.inv(d));
            ++counter.row_scale;
            counter.symbol_mul += width;
        }
        ++counter.resolve;
    }
    return rhs;
}

std::vector<Payload> back_substitute(const SparseMatrix& upper, std::vector<Payload> rhs, OpCounter& counter) {
    const std::size_t n = upper.rows();
    if (upper.cols() != n) throw UsageError("back-substitution needs a square matrix");
    check_payloads(*upper.field(), rhs, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = upper.row(i);
        if (!row.empty() && row.front().col < i) throw UsageError("matrix is not upper-triangular");
        if (row.empty() || row.front().col != i) throw SingularMatrixError(i, n);
    }

    const GaloisField& f = *upper.field();
    const std::size_t width = payload_width(&rhs);
    for (std::size_t i = n; i-- > 0;) {
        const auto row = upper.row(i);
        for (std::size_t t = 1; t < row.size(); ++t) {
            f.mul_add_region(rhs[i], rhs[row[t].col], row[t].value);
            ++counter.row_xor;
            if (row[t].value != 1) counter.symbol_mul += width;
        }
        const Symbol d = row.front().value;
        if (d != 1) {
            f.scale_region(rhs[i], f.inv(d));
            ++counter.row_scale;
            counter.symbol_mul += width;
        }
        ++counter.resolve;
    }
    return rhs;
}

std::vector<Payload> back_substitute(const BitMatrix& upper, std::vector<Payload> rhs, OpCounter& counter) {
    const std::size_t n = upper.rows();
    if (upper.cols() != n) throw UsageError("back-substitution needs a square matrix");
    check_payloads(*GaloisField::gf2(), rhs, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < i; ++c)
            if (upper.get(i, c)) throw UsageError("matrix is not upper-triangular");
        if (!upper.get(i, i)) throw SingularMatrixError(i, n);
    }
    for (std::size_t i = n; i-- > 0;) {
        const auto row = upper.row(i);
        for (std::size_t w = (i + 1) / 64; w < row.size(); ++w) {
            std::uint64_t bits = row[w];
            if (w == (i + 1) / 64) bits &= ~std::uint64_t{0} << ((i + 1) % 64);
            while (bits) {
                const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                xor_payload(rhs[i], rhs[j]);
                ++counter.row_xor;
            }
        }
        ++counter.resolve;
    }
    return rhs;
}

FieldMatrix invert(const FieldMatrix& m) {
    OpCounter scratch;
    return invert(m, scratch);
}

FieldMatrix invert(const FieldMatrix& m, OpCounter& counter) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw UsageError("only square matrices are invertible");
    const GaloisField& f = *m.field();

    // Gauss-Jordan on [m | I]; pivots inside the left block mean full rank.
    FieldMatrix aug(m.field(), n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.row(r)[c] = m.at(r, c);
        aug.row(r)[n + r] = 1;
    }
    FieldMatrix upper = [&] {
        if (f.is_binary()) {
            BitEchelon b = eliminate_bits(aug.to_bits(), nullptr, counter);
            const auto left = static_cast<std::size_t>(std::count_if(b.pivot_columns.begin(), b.pivot_columns.end(),
                                                                     [n](std::size_t c) { return c < n; }));
            if (left < n) throw SingularMatrixError(left, n);
            for (std::size_t i = n; i-- > 0;)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (b.upper.get(i, j)) {
                        b.upper.xor_row(i, j);
                        ++counter.row_xor;
                    }
            return FieldMatrix::from_bits(b.upper);
        }
        Echelon e = eliminate(aug, nullptr, counter);
        const auto left = static_cast<std::size_t>(std::count_if(e.pivot_columns.begin(), e.pivot_columns.end(),
                                                                 [n](std::size_t c) { return c < n; }));
        if (left < n) throw SingularMatrixError(left, n);
        for (std::size_t i = n; i-- > 0;) {
            auto row = e.upper.row(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const Symbol u = row[j];
                if (u == 0) continue;
                const auto src = e.upper.row(j);
                for (std::size_t c = j; c < 2 * n; ++c) row[c] ^= f.mul_unchecked(u, src[c]);
                ++counter.row_xor;
                if (u != 1) counter.symbol_mul += 2 * n - j;
            }
        }
        return e.upper;
    }();

    FieldMatrix inv(m.field(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv.row(r)[c] = upper.at(r, n + c);
    return inv;
}

std::size_t rank(const FieldMatrix& m) {
    OpCounter scratch;
    return triangularize(m, scratch).rank;
}

std::size_t rank(const BitMatrix& m) {
    OpCounter scratch;
    return eliminate_bits(m, nullptr, scratch).rank;
}

namespace {

FieldMatrix leading_square(const FieldMatrix& upper, std::size_t n) {
    FieldMatrix sq(upper.field(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) sq.row(r)[c] = upper.at(r, c);
    return sq;
}

}  // namespace

std::vector<Payload> solve(const FieldMatrix& m, std::vector<Payload> rhs, OpCounter& counter) {
    const std::size_t n = m.cols();
    if (m.rows() < n) throw SingularMatrixError(m.rows(), n);
    if (m.field()->is_binary()) return solve(m.to_bits(), std::move(rhs), counter);
    Echelon e = triangularize(m, rhs, counter);
    if (e.rank < n) throw SingularMatrixError(e.rank, n);
    rhs.resize(n);
    return back_substitute(leading_square(e.upper, n), std::move(rhs), counter);
}

std::vector<Payload> solve(const BitMatrix& m, std::vector<Payload> rhs, OpCounter& counter) {
    const std::size_t n = m.cols();
    if (m.rows() < n) throw SingularMatrixError(m.rows(), n);
    BitEchelon e = triangularize(m, &rhs, counter);
    if (e.rank < n) throw SingularMatrixError(e.rank, n);
    BitMatrix sq(n, n);
    for (std::size_t r = 0; r < n; ++r) std::copy(e.upper.row(r).begin(), e.upper.row(r).end(), sq.row(r).begin());
    rhs.resize(n);
    return back_substitute(sq, std::move(rhs), counter);
}

}  // namespace fountain
