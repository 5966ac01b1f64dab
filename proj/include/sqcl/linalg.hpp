#pragma once

// Fixed-size dense linear algebra for the 2- and 4-dimensional phase spaces
// used throughout the library. Everything here is small enough that plain
// loops beat any external solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

namespace sqcl {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

using Vec4 = Vec<4>;
using Mat4 = Mat<4>;
using Mat2 = Mat<2>;

template <std::size_t N>
constexpr Mat<N> identity() {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
    return m;
}

template <std::size_t N>
constexpr Mat<N> scaled(const Mat<N>& a, double s) {
    Mat<N> m = a;
    for (auto& row : m)
        for (auto& x : row) x *= s;
    return m;
}

template <std::size_t N>
constexpr Mat<N> operator+(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m[i][j] = a[i][j] + b[i][j];
    return m;
}

template <std::size_t N>
constexpr Mat<N> operator-(const Mat<N>& a, const Mat<N>& b) {
    return a + scaled(b, -1.0);
}

template <std::size_t N>
constexpr Mat<N> operator*(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) m[i][j] += a[i][k] * b[k][j];
    return m;
}

template <std::size_t N>
constexpr Vec<N> operator*(const Mat<N>& a, const Vec<N>& v) {
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i] += a[i][j] * v[j];
    return out;
}

template <std::size_t N>
constexpr Mat<N> transpose(const Mat<N>& a) {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m[i][j] = a[j][i];
    return m;
}

template <std::size_t N>
double max_abs_diff(const Mat<N>& a, const Mat<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

template <std::size_t N>
double max_abs_diff(const Vec<N>& a, const Vec<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

template <std::size_t N>
double asymmetry(const Mat<N>& a) {
    return max_abs_diff(a, transpose(a));
}

/// LU with partial pivoting. Returns the determinant and, when nonsingular,
/// the inverse.
template <std::size_t N>
struct LuResult {
    double det = 0.0;
    std::optional<Mat<N>> inverse;
};

template <std::size_t N>
LuResult<N> lu_invert(const Mat<N>& a) {
    Mat<N> m = a;
    Mat<N> inv = identity<N>();
    double det = 1.0;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (m[pivot][col] == 0.0) return {0.0, std::nullopt};
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            std::swap(inv[pivot], inv[col]);
            det = -det;
        }
        const double p = m[col][col];
        det *= p;
        for (std::size_t j = 0; j < N; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < N; ++r) {
            if (r == col) continue;
            const double f = m[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < N; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return {det, inv};
}

template <std::size_t N>
double determinant(const Mat<N>& a) {
    return lu_invert(a).det;
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order.
template <std::size_t N>
Vec<N> symmetric_eigenvalues(Mat<N> a) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Vec<N> ev{};
    for (std::size_t i = 0; i < N; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace sqcl
