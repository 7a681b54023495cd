#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "fmc/validation.hpp"

namespace fmc {

// Exact scalars: rationals over arbitrary-precision integers.  No floating
// point appears anywhere in rank computations.
using Scalar = boost::rational<boost::multiprecision::cpp_int>;
using Matrix = std::vector<std::vector<Scalar>>;  // row-major

inline int row_count(const Matrix& m) { return (int)m.size(); }
inline int col_count(const Matrix& m) { return m.empty() ? 0 : (int)m[0].size(); }

inline Matrix zero_matrix(int rows, int cols) {
    return Matrix(rows, std::vector<Scalar>(cols, Scalar(0)));
}

inline Matrix identity_matrix(int n) {
    auto m = zero_matrix(n, n);
    for (int i = 0; i < n; ++i) m[i][i] = Scalar(1);
    return m;
}

inline Matrix scalar_matrix(const Scalar& s) { return {{s}}; }

inline bool is_identity(const Matrix& m) {
    if (row_count(m) != col_count(m)) return false;
    for (int i = 0; i < row_count(m); ++i)
        for (int j = 0; j < col_count(m); ++j)
            if (m[i][j] != Scalar(i == j ? 1 : 0)) return false;
    return true;
}

inline Matrix matrix_mul(const Matrix& a, const Matrix& b) {
    if (col_count(a) != row_count(b)) throw StructuralError("matrix dimension mismatch in product");
    auto out = zero_matrix(row_count(a), col_count(b));
    for (int i = 0; i < row_count(a); ++i)
        for (int k = 0; k < col_count(a); ++k) {
            if (a[i][k] == Scalar(0)) continue;
            for (int j = 0; j < col_count(b); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline Matrix transpose(const Matrix& m) {
    auto out = zero_matrix(col_count(m), row_count(m));
    for (int i = 0; i < row_count(m); ++i)
        for (int j = 0; j < col_count(m); ++j) out[j][i] = m[i][j];
    return out;
}

inline Matrix kronecker(const Matrix& a, const Matrix& b) {
    int ra = row_count(a), ca = col_count(a), rb = row_count(b), cb = col_count(b);
    auto out = zero_matrix(ra * rb, ca * cb);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ca; ++j)
            for (int k = 0; k < rb; ++k)
                for (int l = 0; l < cb; ++l) out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
    return out;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    int ra = row_count(a), ca = col_count(a), rb = row_count(b), cb = col_count(b);
    auto out = zero_matrix(ra + rb, ca + cb);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ca; ++j) out[i][j] = a[i][j];
    for (int i = 0; i < rb; ++i)
        for (int j = 0; j < cb; ++j) out[ra + i][ca + j] = b[i][j];
    return out;
}

// Rank by exact Gaussian elimination.
inline int matrix_rank(Matrix m) {
    int rows = row_count(m), cols = col_count(m);
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != Scalar(0)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][col] == Scalar(0)) continue;
            Scalar f = m[r][col] / m[rank][col];
            for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

inline Matrix matrix_inverse(Matrix m) {
    int n = row_count(m);
    if (n != col_count(m)) throw StructuralError("only square matrices can be inverted");
    auto inv = identity_matrix(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col] != Scalar(0)) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw StructuralError("matrix is singular");
        std::swap(m[col], m[pivot]);
        std::swap(inv[col], inv[pivot]);
        Scalar d = m[col][col];
        for (int c = 0; c < n; ++c) {
            m[col][c] /= d;
            inv[col][c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == Scalar(0)) continue;
            Scalar f = m[r][col];
            for (int c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// Rank over the prime field F_p (the optional finite-characteristic mode);
// all denominators must be invertible mod p.
inline int matrix_rank_mod(const Matrix& m, int p) {
    using boost::multiprecision::cpp_int;
    if (p < 2) throw StructuralError("characteristic must be a prime >= 2");
    auto powmod = [&](long long b, int e) {
        long long r = 1;
        b %= p;
        if (b < 0) b += p;
        for (; e; e >>= 1, b = b * b % p)
            if (e & 1) r = r * b % p;
        return r;
    };
    std::vector<std::vector<long long>> a(row_count(m), std::vector<long long>(col_count(m)));
    for (int i = 0; i < row_count(m); ++i)
        for (int j = 0; j < col_count(m); ++j) {
            cpp_int num = m[i][j].numerator() % p, den = m[i][j].denominator() % p;
            if (den == 0) throw StructuralError("denominator not invertible in chosen characteristic");
            long long nn = (long long)num, dd = (long long)den;
            a[i][j] = (nn % p + p) % p * powmod(dd, p - 2) % p;
        }
    int rank = 0, rows = row_count(m), cols = col_count(m);
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col]) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        long long pinv = powmod(a[rank][col], p - 2);
        for (int r = rank + 1; r < rows; ++r) {
            if (!a[r][col]) continue;
            long long f = a[r][col] * pinv % p;
            for (int c = col; c < cols; ++c) a[r][c] = ((a[r][c] - f * a[rank][c]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

}  // namespace fmc
