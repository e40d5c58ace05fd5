#pragma once

// Dense linear algebra over a prime field F_p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopb {

/// Raised when a value violates a structural invariant (shape, modulus, d^2 = 0, ...).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The prime field F_p. Products of two residues fit in 64 bits because p < 2^31.
class FieldCtx {
public:
    explicit FieldCtx(std::uint64_t p) : p_(static_cast<std::uint32_t>(p))
    {
        if (p < 2 || p >= (std::uint64_t{1} << 31))
            throw InvariantError("modulus " + std::to_string(p) + " out of range [2, 2^31)");
        for (std::uint64_t q = 2; q * q <= p; ++q)
            if (p % q == 0)
                throw InvariantError("modulus " + std::to_string(p) + " is not prime");
    }

    std::uint32_t p() const { return p_; }

    std::uint32_t reduce(std::int64_t x) const
    {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        std::uint32_t s = a + b;  // < 2^32
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    }
    std::uint32_t inv(std::uint32_t a) const
    {
        if (a == 0)
            throw std::domain_error("inverse of zero in F_p");
        // Fermat: a^(p-2)
        std::uint64_t result = 1, base = a, e = p_ - 2;
        while (e) {
            if (e & 1)
                result = result * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(result);
    }

    friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
};

/// Row-major dense matrix of residues in [0, p).
class Matrix {
public:
    Matrix(FieldCtx field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0)
    {
    }

    static Matrix identity(FieldCtx field, std::size_t n)
    {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.a_[i * n + i] = 1;
        return m;
    }

    /// Entries are reduced mod p. All rows must have length `cols`.
    static Matrix from_rows(FieldCtx field, std::size_t rows, std::size_t cols,
                            const std::vector<std::vector<std::int64_t>>& data)
    {
        if (data.size() != rows)
            throw InvariantError("matrix has " + std::to_string(data.size()) + " rows, expected " +
                                 std::to_string(rows));
        Matrix m(field, rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (data[r].size() != cols)
                throw InvariantError("matrix row " + std::to_string(r) + " has " +
                                     std::to_string(data[r].size()) + " entries, expected " +
                                     std::to_string(cols));
            for (std::size_t c = 0; c < cols; ++c)
                m.a_[r * cols + c] = field.reduce(data[r][c]);
        }
        return m;
    }

    /// Column vector with a single 1 at `index`.
    static Matrix unit(FieldCtx field, std::size_t n, std::size_t index)
    {
        Matrix m(field, n, 1);
        m.set(index, 0, 1);
        return m;
    }

    const FieldCtx& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    std::uint32_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint32_t v) { a_[r * cols_ + c] = v % field_.p(); }
    const std::vector<std::uint32_t>& entries() const { return a_; }

    bool is_zero() const
    {
        return std::all_of(a_.begin(), a_.end(), [](std::uint32_t x) { return x == 0; });
    }

    Matrix transpose() const
    {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t.a_[c * rows_ + r] = a_[r * cols_ + c];
        return t;
    }

    /// Submatrix of `nr` rows and `nc` columns starting at (r0, c0).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        if (r0 + nr > rows_ || c0 + nc > cols_)
            throw InvariantError("block out of range");
        Matrix b(field_, nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            std::copy_n(a_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0), nc,
                        b.a_.begin() + static_cast<std::ptrdiff_t>(r * nc));
        return b;
    }
    Matrix row_range(std::size_t r0, std::size_t nr) const { return block(r0, 0, nr, cols_); }
    Matrix col_range(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }

    /// Writes `src` into this matrix with its top-left corner at (r0, c0).
    void paste(std::size_t r0, std::size_t c0, const Matrix& src)
    {
        if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
            throw InvariantError("paste out of range");
        for (std::size_t r = 0; r < src.rows_; ++r)
            std::copy_n(src.a_.begin() + static_cast<std::ptrdiff_t>(r * src.cols_), src.cols_,
                        a_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0));
    }

    Matrix select_cols(const std::vector<std::size_t>& idx) const
    {
        Matrix m(field_, rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < idx.size(); ++j)
                m.a_[r * idx.size() + j] = a_[r * cols_ + idx[j]];
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        check_same_field(a, b);
        if (a.cols_ != b.rows_)
            throw InvariantError("product shape mismatch: " + a.shape() + " * " + b.shape());
        Matrix c(a.field_, a.rows_, b.cols_);
        const std::uint64_t p = a.field_.p();
        std::vector<std::uint64_t> acc(b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const std::uint64_t aik = a.a_[i * a.cols_ + k];
                if (aik == 0)
                    continue;
                const std::uint32_t* brow = &b.a_[k * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j)
                    acc[j] = (acc[j] + aik * brow[j]) % p;
            }
            for (std::size_t j = 0; j < b.cols_; ++j)
                c.a_[i * b.cols_ + j] = static_cast<std::uint32_t>(acc[j]);
        }
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i)
            c.a_[i] = a.field_.add(a.a_[i], b.a_[i]);
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i)
            c.a_[i] = a.field_.sub(a.a_[i], b.a_[i]);
        return c;
    }

    friend Matrix operator-(const Matrix& a)
    {
        Matrix c = a;
        for (auto& x : c.a_)
            x = a.field_.neg(x);
        return c;
    }

    Matrix scaled(std::uint32_t s) const
    {
        Matrix c = *this;
        for (auto& x : c.a_)
            x = field_.mul(x, s % field_.p());
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m)
    {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? ",[" : "[");
            for (std::size_t c = 0; c < m.cols_; ++c)
                os << (c ? "," : "") << m(r, c);
            os << ']';
        }
        return os << ']';
    }

private:
    static void check_same_field(const Matrix& a, const Matrix& b)
    {
        if (!(a.field_ == b.field_))
            throw InvariantError("matrices over different fields");
    }
    static void check_same_shape(const Matrix& a, const Matrix& b)
    {
        check_same_field(a, b);
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InvariantError("shape mismatch: " + a.shape() + " vs " + b.shape());
    }

    FieldCtx field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> a_;
};

/// [a | b]
inline Matrix hstack(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw InvariantError("hstack row mismatch: " + a.shape() + " | " + b.shape());
    Matrix m(a.field(), a.rows(), a.cols() + b.cols());
    m.paste(0, 0, a);
    m.paste(0, a.cols(), b);
    return m;
}

/// [a ; b]
inline Matrix vstack(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.cols())
        throw InvariantError("vstack column mismatch: " + a.shape() + " ; " + b.shape());
    Matrix m(a.field(), a.rows() + b.rows(), a.cols());
    m.paste(0, 0, a);
    m.paste(a.rows(), 0, b);
    return m;
}

/// Block diagonal diag(a, b).
inline Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    m.paste(0, 0, a);
    m.paste(a.rows(), a.cols(), b);
    return m;
}

/// Reduced row echelon form together with its pivot columns (one per nonzero row).
struct RowEchelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination, taking the first nonzero entry in each column as pivot.
inline RowEchelon rref(Matrix m)
{
    const FieldCtx& F = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, col) == 0)
            ++piv;
        if (piv == m.rows())
            continue;
        if (piv != row)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const std::uint32_t tmp = m(row, c);
                m.set(row, c, m(piv, c));
                m.set(piv, c, tmp);
            }
        const std::uint32_t scale = F.inv(m(row, col));
        for (std::size_t c = col; c < m.cols(); ++c)
            m.set(row, c, F.mul(m(row, c), scale));
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0)
                continue;
            const std::uint32_t factor = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                m.set(r, c, F.sub(m(r, c), F.mul(factor, m(row, c))));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m)
{
    if (m.empty())
        return 0;
    return rref(m).pivots.size();
}

/// Columns form a basis of ker(m); one basis vector per non-pivot column.
inline Matrix kernel_basis(const Matrix& m)
{
    const FieldCtx& F = m.field();
    const RowEchelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots)
        is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);

    Matrix k(F, m.cols(), free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        k.set(free_cols[j], j, 1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            k.set(e.pivots[r], j, F.neg(e.reduced(r, free_cols[j])));
    }
    return k;
}

/// Some X with a * X = b, or nullopt when the system is inconsistent.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw InvariantError("solve: row mismatch " + a.shape() + " vs " + b.shape());
    Matrix x(a.field(), a.cols(), b.cols());
    if (a.rows() == 0)
        return x;
    const RowEchelon e = rref(hstack(a, b));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        const std::size_t pc = e.pivots[r];
        if (pc >= a.cols())
            return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j)
            x.set(pc, j, e.reduced(r, a.cols() + j));
    }
    return x;
}

inline Matrix inverse(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw InvariantError("inverse of non-square matrix " + m.shape());
    auto x = solve(m, Matrix::identity(m.field(), m.rows()));
    if (!x || !(m * *x == Matrix::identity(m.field(), m.rows())))
        throw InvariantError("matrix is singular");
    return *x;
}

inline bool is_injective(const Matrix& m) { return rank(m) == m.cols(); }
inline bool is_surjective(const Matrix& m) { return rank(m) == m.rows(); }

/// Indices of the pivot columns; the corresponding columns of `m` form a basis of its image.
inline std::vector<std::size_t> pivot_columns(const Matrix& m)
{
    if (m.empty())
        return {};
    return rref(m).pivots;
}

/// Standard basis vectors (by index) that complete the columns of `m` to a basis.
/// The columns of `m` must be linearly independent.
inline std::vector<std::size_t> complement_indices(const Matrix& m)
{
    // Pivots of [m | I] past m's columns pick a complement.
    const std::size_t n = m.rows();
    const RowEchelon e = rref(hstack(m, Matrix::identity(m.field(), n)));
    std::vector<std::size_t> out;
    std::size_t own = 0;
    for (auto c : e.pivots) {
        if (c < m.cols())
            ++own;
        else
            out.push_back(c - m.cols());
    }
    if (own != m.cols())
        throw InvariantError("complement_indices: columns are linearly dependent");
    return out;
}

/// Matrix whose columns are the standard basis vectors e_idx of F_p^n.
inline Matrix unit_columns(FieldCtx field, std::size_t n, const std::vector<std::size_t>& idx)
{
    Matrix m(field, n, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        m.set(idx[j], j, 1);
    return m;
}

}  // namespace hopb
