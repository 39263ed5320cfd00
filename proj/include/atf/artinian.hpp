/**
 * @brief Lengths of embedded (artinian) components of local intersection ideals.
 *
 * Each possible local shape of the intersection at a closed point is an ideal I in a
 * two-dimensional regular complete local ring, modelled here as k[[u, v]] over the prime
 * field.  Smooth points use R = k[[pi, t]] (u = pi, v = t); points on the node use
 * R = k[[u, v]] with pi = u v.  An ideal I = f * K with f a monomial (the pure part, a
 * divisor) and K primary to the maximal ideal has an embedded component of length
 * dim_k R / K.  Lengths are computed by linear algebra in R / m^N, increasing N until
 * dim R/(K + m^N) stabilizes; stabilization at N proves m^N ⊆ K (Nakayama).
 */
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/series.hpp"

namespace atf {

/** A polynomial in u, v over F_p: exponent pair -> coefficient in [0, p). */
struct BiPoly {
    std::map<std::pair<int, int>, int> terms;

    static BiPoly monomial(int i, int j, int c = 1) {
        BiPoly f;
        f.terms[{i, j}] = c;
        return f;
    }
    BiPoly reduced(int p) const {
        BiPoly r;
        for (auto [e, c] : terms) {
            int x = ((c % p) + p) % p;
            if (x) r.terms[e] = x;
        }
        return r;
    }
    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (auto [e, c] : b.terms) r.terms[e] += c;
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        BiPoly r = a;
        for (auto [e, c] : b.terms) r.terms[e] -= c;
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        for (auto [e1, c1] : a.terms)
            for (auto [e2, c2] : b.terms) r.terms[{e1.first + e2.first, e1.second + e2.second}] += c1 * c2;
        return r;
    }
};

/** Dimension of k[u,v] / (K + m^N) for generators K over F_p. */
inline int colength_truncated(const std::vector<BiPoly>& gens, int p, int N) {
    std::map<std::pair<int, int>, int> col;
    for (int d = 0; d < N; ++d)
        for (int i = 0; i <= d; ++i) col[{i, d - i}] = static_cast<int>(col.size());
    const int ncols = static_cast<int>(col.size());
    std::vector<std::vector<int>> rows;
    for (const BiPoly& g0 : gens) {
        const BiPoly g = g0.reduced(p);
        for (int d = 0; d < N; ++d)
            for (int i = 0; i <= d; ++i) {
                std::vector<int> row(ncols, 0);
                bool any = false;
                for (auto [e, c] : g.terms) {
                    const int a = e.first + i, b = e.second + d - i;
                    if (a + b >= N) continue;
                    row[col[{a, b}]] = c;
                    any = true;
                }
                if (any) rows.push_back(std::move(row));
            }
    }
    // Gaussian elimination over F_p.
    auto inv = [p](int a) {
        int r = 1, e = p - 2, b = a;
        while (e > 0) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    for (int c = 0; c < ncols && rank < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][c]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        const int s = inv(rows[rank][c]);
        for (int& x : rows[rank]) x = x * s % p;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r)
            if (r != rank && rows[r][c]) {
                const int f = rows[r][c];
                for (int k = 0; k < ncols; ++k) rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
            }
        ++rank;
    }
    return ncols - rank;
}

/** Length of R/K for an m-primary ideal K of k[[u,v]]; InternalError if K is not m-primary within the bound. */
inline int local_colength(const std::vector<BiPoly>& gens, int p, int max_degree = 96) {
    int prev = colength_truncated(gens, p, 1);
    for (int N = 2; N <= max_degree; ++N) {
        int cur = colength_truncated(gens, p, N);
        if (cur == prev) return cur;
        prev = cur;
    }
    throw InternalError("ideal is not primary to the maximal ideal within the degree bound");
}

/** Splits I = f * K with f the largest common monomial factor; returns (exponents of f, K). */
inline std::pair<std::pair<int, int>, std::vector<BiPoly>> monomial_part(const std::vector<BiPoly>& gens, int p) {
    int mi = 1 << 29, mj = 1 << 29;
    std::vector<BiPoly> red;
    for (const BiPoly& g : gens) {
        BiPoly r = g.reduced(p);
        if (r.terms.empty()) continue;
        for (auto [e, c] : r.terms) {
            mi = std::min(mi, e.first);
            mj = std::min(mj, e.second);
        }
        red.push_back(std::move(r));
    }
    if (red.empty()) throw UsageError("zero ideal");
    std::vector<BiPoly> K;
    for (const BiPoly& g : red) {
        BiPoly h;
        for (auto [e, c] : g.terms) h.terms[{e.first - mi, e.second - mj}] = c;
        K.push_back(h);
    }
    return {{mi, mj}, K};
}

/** The possible local shapes of the intersection at an embedded point. */
enum class LengthRow {
    SmoothPoint = 1,   ///< R = k[[pi, t]], I = (pi, t)
    NodePoint = 2,     ///< R = k[[u, v]], pi = uv, I = (u, v)
    NodeCusp = 3,      ///< I = (u, v^q)
    FieldPoint = 4,    ///< I = (pi - u^{q+1}, pi - v^{q+1})
    BoundaryPoint = 5  ///< I = (pi, v^{q+1})
};

inline LengthRow parse_length_row(int tag) {
    if (tag < 1 || tag > 5) throw UsageError("length row tag must be 1..5, got " + std::to_string(tag));
    return static_cast<LengthRow>(tag);
}

/** Result: the monomial pure part of the ideal and the length of its embedded component. */
struct ArtinianLength {
    std::pair<int, int> pure{0, 0};  ///< exponents (i, j) of the divisor u^i v^j
    int length = 0;
    std::string shape;               ///< human-readable ideal
};

/** The uniformizer pi inside the model ring of the row. */
inline BiPoly row_uniformizer(LengthRow row) {
    return row == LengthRow::SmoothPoint ? BiPoly::monomial(1, 0) : BiPoly::monomial(1, 1);
}

/** Generators of the ideal of the row, multiplied by pi^s (the scaled element pi^s y). */
inline std::vector<BiPoly> row_ideal(LengthRow row, int q, int s = 0) {
    const BiPoly u = BiPoly::monomial(1, 0), v = BiPoly::monomial(0, 1);
    const BiPoly pi = row_uniformizer(row);
    std::vector<BiPoly> g;
    switch (row) {
        case LengthRow::SmoothPoint: g = {pi, v}; break;
        case LengthRow::NodePoint: g = {u, v}; break;
        case LengthRow::NodeCusp: g = {u, BiPoly::monomial(0, q)}; break;
        case LengthRow::FieldPoint: g = {pi - BiPoly::monomial(q + 1, 0), pi - BiPoly::monomial(0, q + 1)}; break;
        case LengthRow::BoundaryPoint: g = {pi, BiPoly::monomial(0, q + 1)}; break;
    }
    BiPoly scale = BiPoly::monomial(0, 0);
    for (int i = 0; i < s; ++i) scale = scale * pi;
    for (BiPoly& f : g) f = f * scale;
    return g;
}

inline std::string row_shape(LengthRow row) {
    switch (row) {
        case LengthRow::SmoothPoint: return "(pi, t)";
        case LengthRow::NodePoint: return "(u, v)";
        case LengthRow::NodeCusp: return "(u, v^q)";
        case LengthRow::FieldPoint: return "(pi - u^(q+1), pi - v^(q+1))";
        case LengthRow::BoundaryPoint: return "(pi, v^(q+1))";
    }
    return "?";
}

/** Length of the embedded component of the row's ideal scaled by pi^s, computed from the ideal. */
inline ArtinianLength artinian_length(LengthRow row, int q, int s = 0) {
    if (s < 0) throw UsageError("scaling exponent must be nonnegative");
    const int p = LocalField::prime_power(q).first;
    auto [pure, K] = monomial_part(row_ideal(row, q, s), p);
    ArtinianLength out;
    out.pure = pure;
    out.length = local_colength(K, p);
    out.shape = row_shape(row);
    return out;
}

/** The tabulated length of each row: 1, 1, q, 2 + 2q, q. */
inline int expected_row_length(LengthRow row, int q) {
    switch (row) {
        case LengthRow::SmoothPoint: return 1;
        case LengthRow::NodePoint: return 1;
        case LengthRow::NodeCusp: return q;
        case LengthRow::FieldPoint: return 2 + 2 * q;
        case LengthRow::BoundaryPoint: return q;
    }
    return 0;
}

/**
 * Transport under y -> pi y: the ideal becomes pi * I, so the pure divisor gains one factor of pi
 * while the embedded length is unchanged.  Checks this for scalings s = 1..steps.
 */
inline bool scaling_transport_check(LengthRow row, int q, int steps = 3) {
    const ArtinianLength base = artinian_length(row, q, 0);
    const auto [pu, pv] = row_uniformizer(row).terms.begin()->first;
    for (int s = 1; s <= steps; ++s) {
        const ArtinianLength a = artinian_length(row, q, s);
        if (a.length != base.length) return false;
        if (a.pure != std::make_pair(base.pure.first + s * pu, base.pure.second + s * pv)) return false;
    }
    return true;
}

}  // namespace atf
