#pragma once

// Arithmetic and small dense linear algebra over GF(2^8) with the AES
// reduction polynomial x^8 + x^4 + x^3 + x + 1.

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace xlayer::gf256 {

using Symbol = std::uint8_t;

inline constexpr unsigned kOrder = 256;
inline constexpr unsigned kPoly = 0x11B;

namespace detail {

struct Tables {
    std::array<Symbol, 512> exp{};
    std::array<int, 256> log{};
};

constexpr Tables make_tables() {
    Tables t;
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[static_cast<std::size_t>(i)] = static_cast<Symbol>(x);
        t.log[x] = i;
        // multiply by the generator 0x03 = x + 1
        unsigned y = x << 1;
        if (y & 0x100) y ^= kPoly;
        x = y ^ x;
    }
    for (int i = 255; i < 512; ++i) t.exp[static_cast<std::size_t>(i)] = t.exp[static_cast<std::size_t>(i - 255)];
    t.log[0] = -1;
    return t;
}

inline constexpr Tables kTables = make_tables();

}  // namespace detail

constexpr Symbol add(Symbol a, Symbol b) { return a ^ b; }

constexpr Symbol mul(Symbol a, Symbol b) {
    if (a == 0 || b == 0) return 0;
    return detail::kTables.exp[static_cast<std::size_t>(detail::kTables.log[a] + detail::kTables.log[b])];
}

constexpr Symbol inv(Symbol a) {
    if (a == 0) throw std::domain_error("gf256: zero has no inverse");
    return detail::kTables.exp[static_cast<std::size_t>(255 - detail::kTables.log[a])];
}

constexpr Symbol pow(Symbol a, unsigned e) {
    Symbol r = 1;
    for (unsigned i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows * cols), 0) {}
    Matrix(int rows, int cols, std::initializer_list<Symbol> values) : Matrix(rows, cols) {
        if (values.size() != d_.size()) throw std::invalid_argument("gf256::Matrix: wrong number of values");
        std::copy(values.begin(), values.end(), d_.begin());
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Symbol operator()(int r, int c) const { return d_[idx(r, c)]; }
    Symbol& operator()(int r, int c) { return d_[idx(r, c)]; }

    Matrix select_rows(std::span<const int> which) const {
        Matrix out(static_cast<int>(which.size()), cols_);
        for (std::size_t k = 0; k < which.size(); ++k)
            for (int c = 0; c < cols_; ++c) out(static_cast<int>(k), c) = (*this)(which[k], c);
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r * cols_ + c); }
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Symbol> d_;
};

/// Row vector space dimension via Gaussian elimination.
inline int rank(Matrix m) {
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < m.cols(); ++c) std::swap(m(rank, c), m(pivot, c));
        const Symbol s = inv(m(rank, col));
        for (int c = 0; c < m.cols(); ++c) m(rank, c) = mul(m(rank, c), s);
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank || m(r, col) == 0) continue;
            const Symbol f = m(r, col);
            for (int c = 0; c < m.cols(); ++c) m(r, c) = add(m(r, c), mul(f, m(rank, c)));
        }
        ++rank;
    }
    return rank;
}

/// Determinant by elimination (characteristic 2: row swaps do not flip sign).
inline Symbol determinant(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("gf256::determinant: matrix not square");
    Symbol det = 1;
    const int n = m.rows();
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return 0;
        for (int c = 0; c < n; ++c) std::swap(m(col, c), m(pivot, c));
        det = mul(det, m(col, col));
        const Symbol s = inv(m(col, col));
        for (int r = col + 1; r < n; ++r) {
            if (m(r, col) == 0) continue;
            const Symbol f = mul(m(r, col), s);
            for (int c = col; c < n; ++c) m(r, c) = add(m(r, c), mul(f, m(col, c)));
        }
    }
    return det;
}

/// Gauss-Jordan inverse; empty when singular.
inline std::optional<Matrix> inverse(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("gf256::inverse: matrix not square");
    const int n = m.rows();
    Matrix out = Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return std::nullopt;
        for (int c = 0; c < n; ++c) {
            std::swap(m(col, c), m(pivot, c));
            std::swap(out(col, c), out(pivot, c));
        }
        const Symbol s = inv(m(col, col));
        for (int c = 0; c < n; ++c) {
            m(col, c) = mul(m(col, c), s);
            out(col, c) = mul(out(col, c), s);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m(r, col) == 0) continue;
            const Symbol f = m(r, col);
            for (int c = 0; c < n; ++c) {
                m(r, c) = add(m(r, c), mul(f, m(col, c)));
                out(r, c) = add(out(r, c), mul(f, out(col, c)));
            }
        }
    }
    return out;
}

inline std::vector<Symbol> multiply(const Matrix& m, std::span<const Symbol> x) {
    if (static_cast<int>(x.size()) != m.cols()) throw std::invalid_argument("gf256::multiply: dimension mismatch");
    std::vector<Symbol> y(static_cast<std::size_t>(m.rows()), 0);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) y[static_cast<std::size_t>(r)] = add(y[static_cast<std::size_t>(r)], mul(m(r, c), x[static_cast<std::size_t>(c)]));
    return y;
}

/// Rows a_i^0 .. a_i^(n-1) for each evaluation point a_i.
inline Matrix vandermonde(std::span<const Symbol> points) {
    const int n = static_cast<int>(points.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        Symbol v = 1;
        for (int j = 0; j < n; ++j) {
            m(i, j) = v;
            v = mul(v, points[static_cast<std::size_t>(i)]);
        }
    }
    return m;
}

}  // namespace xlayer::gf256
