/**
 * @brief 2x2 matrices with truncated-series entries.
 *
 * Used for lattice bases (columns are basis vectors), regular representations
 * of quadratic elements, and the conjugate-linear operators of the tree.
 */
#pragma once

#include <algorithm>
#include <array>
#include <string>

#include "atf/series.hpp"

namespace atf {

struct Mat2 {
    std::array<std::array<Series, 2>, 2> m;

    Mat2() = default;
    Mat2(Series a, Series b, Series c, Series d) {
        m[0][0] = std::move(a);
        m[0][1] = std::move(b);
        m[1][0] = std::move(c);
        m[1][1] = std::move(d);
    }

    static Mat2 identity(const LocalField& F) {
        return Mat2(Series::one(F), Series::zero(F), Series::zero(F), Series::one(F));
    }
    static Mat2 diag(const Series& a, const Series& d) {
        const LocalField& F = a.field();
        return Mat2(a, Series::zero(F), Series::zero(F), d);
    }

    const Series& operator()(int i, int j) const { return m[i][j]; }
    Series& operator()(int i, int j) { return m[i][j]; }
    const LocalField& field() const { return m[0][0].field(); }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
        return r;
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
        return r;
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
        return r;
    }
    Mat2 scaled(const Series& s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }

    Series det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    Series trace() const { return m[0][0] + m[1][1]; }

    /** Inverse via the adjugate; the determinant must be nonzero at current precision. */
    Mat2 inverse() const {
        Series di = det().inverse();
        return Mat2(m[1][1] * di, -m[0][1] * di, -m[1][0] * di, m[0][0] * di);
    }

    /** Entrywise Frobenius on coefficients. */
    Mat2 sigma() const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].sigma();
        return r;
    }

    /** Minimum entry valuation (kExact for the zero matrix). */
    int min_valuation() const {
        int v = kExact;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v = std::min(v, m[i][j].valuation());
        return v;
    }

    bool in_base_field() const {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!m[i][j].in_base_field()) return false;
        return true;
    }

    std::string to_string() const {
        return "[[" + m[0][0].to_string() + ", " + m[0][1].to_string() + "], [" + m[1][0].to_string() + ", " +
               m[1][1].to_string() + "]]";
    }
};

}  // namespace atf
