#pragma once

// Exact arithmetic in the local ring Z_(p): rationals whose denominators are
// prime to p. Every element of the p-adic integers that shows up in a finite
// computation here has such a representative, so matrices over this ring give
// exact kernels, cokernels and Smith forms without truncating Z_p.

#include <gmpxx.h>

#include <cstddef>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracture {

using Scalar = mpq_class;

/// Valuation of zero.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

inline bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline mpz_class prime_power(long p, int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

inline int valuation(const mpz_class& z, long p) {
    if (z == 0) return kInfinity;
    mpz_class t = z;
    int v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

inline int valuation(const Scalar& q, long p) {
    if (q == 0) return kInfinity;
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

/// True iff q lies in Z_(p).
inline bool is_integral(const Scalar& q, long p) {
    return !mpz_divisible_ui_p(q.get_den_mpz_t(), static_cast<unsigned long>(p));
}

/// Representative of q modulo p^k in [0, p^k). Requires q in Z_(p).
inline mpz_class residue(const Scalar& q, long p, int k) {
    if (!is_integral(q, p))
        throw std::domain_error("residue: " + q.get_str() + " is not p-integral");
    const mpz_class mod = prime_power(p, k);
    if (k == 0) return 0;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::domain_error("residue: denominator not invertible");
    mpz_class r = q.get_num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    return r;
}

/// u with q = u * p^v(q); u is a unit of Z_(p). Requires q != 0.
inline Scalar unit_part(const Scalar& q, long p) {
    const int v = valuation(q, p);
    Scalar u = q;
    if (v > 0) u /= Scalar(prime_power(p, v));
    if (v < 0) u *= Scalar(prime_power(p, -v));
    return u;
}

/// Dense row-major matrix over Z_(p) (entries are stored as exact rationals).
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<long>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        Matrix m(r, c);
        for (std::size_t a = 0; a < r; ++a) {
            if (rows[a].size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (std::size_t b = 0; b < c; ++b) m(a, b) = rows[a][b];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix out(rows_, o.cols_);
        for (std::size_t a = 0; a < rows_; ++a)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Scalar& x = (*this)(a, k);
                if (x == 0) continue;
                for (std::size_t b = 0; b < o.cols_; ++b) out(a, b) += x * o(k, b);
            }
        return out;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
        return out;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
        return out;
    }

    Matrix scaled(const Scalar& s) const {
        Matrix out = *this;
        for (auto& x : out.data_) x *= s;
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t a = 0; a < rows_; ++a)
            for (std::size_t b = 0; b < cols_; ++b) out(b, a) = (*this)(a, b);
        return out;
    }

    /// [this | o]
    Matrix hconcat(const Matrix& o) const {
        if (rows_ != o.rows_) throw std::invalid_argument("Matrix::hconcat: row mismatch");
        Matrix out(rows_, cols_ + o.cols_);
        for (std::size_t a = 0; a < rows_; ++a) {
            for (std::size_t b = 0; b < cols_; ++b) out(a, b) = (*this)(a, b);
            for (std::size_t b = 0; b < o.cols_; ++b) out(a, cols_ + b) = o(a, b);
        }
        return out;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("Matrix::block");
        Matrix out(nr, nc);
        for (std::size_t a = 0; a < nr; ++a)
            for (std::size_t b = 0; b < nc; ++b) out(a, b) = (*this)(r0 + a, c0 + b);
        return out;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < cols_; ++b) out(a, b) = (*this)(idx[a], b);
        return out;
    }

    Matrix select_cols(const std::vector<std::size_t>& idx) const {
        Matrix out(rows_, idx.size());
        for (std::size_t a = 0; a < rows_; ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = (*this)(a, idx[b]);
        return out;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }

    /// True iff every entry lies in Z_(p).
    bool is_integral(long p) const {
        for (const auto& x : data_)
            if (!fracture::is_integral(x, p)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t a = 0; a < m.rows(); ++a) {
        os << (a ? ",[" : "[");
        for (std::size_t b = 0; b < m.cols(); ++b) os << (b ? "," : "") << m(a, b).get_str();
        os << ']';
    }
    return os << ']';
}

}  // namespace fracture
