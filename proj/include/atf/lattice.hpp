/**
 * @brief Rank-2 lattices over the valuation ring, in canonical column Hermite form.
 *
 * A lattice is stored as the basis [[pi^a, c], [0, pi^b]] (columns are basis
 * vectors) with c an exact polynomial reduced modulo pi^a.  Two lattices are
 * equal iff their canonical forms agree.  Lattices over O_F live in F^2 (all
 * coefficients in F_q); lattices over O_E live in E^2 and are enumerated with
 * residue field F_{q^2}.
 */
#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/mat2.hpp"
#include "atf/quad.hpp"
#include "atf/series.hpp"

namespace atf {

/** Ring of definition of a lattice: O_F (residue field F_q) or O_E (residue field F_{q^2}). */
enum class Ring { OF, OE };

class Lattice {
public:
    /** Canonical lattice spanned by the columns of the given generator list (at least two). */
    static Lattice span(const std::vector<std::pair<Series, Series>>& gens, Ring ring) {
        if (gens.size() < 2) throw UsageError("a rank-2 lattice needs at least two generators");
        const LocalField& F = gens.front().first.field();
        std::vector<std::pair<Series, Series>> cols = gens;
        // Pivot: the generator with the smallest bottom valuation.
        int piv = -1, best = kExact;
        for (size_t i = 0; i < cols.size(); ++i) {
            int v = cols[i].second.known_nonzero() ? cols[i].second.valuation() : kExact;
            if (v < best) {
                best = v;
                piv = static_cast<int>(i);
            }
        }
        if (piv < 0) throw UsageError("generators do not span a rank-2 lattice");
        const Series p0 = cols[piv].first, p1 = cols[piv].second;
        const Series p1inv = p1.inverse();
        // Clear the bottom entries of all other generators.
        int top_best = kExact;
        Series top;
        for (size_t i = 0; i < cols.size(); ++i) {
            if (static_cast<int>(i) == piv) continue;
            Series f = cols[i].second * p1inv;
            Series t = cols[i].first - f * p0;
            // A remainder lost below the working precision cannot beat a known generator.
            int v = t.known_nonzero() ? t.valuation() : kExact;
            if (v < top_best) {
                top_best = v;
                top = t;
            }
        }
        if (top_best >= kExact) throw UsageError("generators do not span a rank-2 lattice");
        const int a = top_best, b = best;
        // Normalize the pivot column so that its bottom entry is pi^b.
        Series unit_b = p1.shifted(-b);
        Series c_full = p0 * unit_b.inverse();
        Lattice L;
        L.F_ = &F;
        L.ring_ = ring;
        L.a_ = a;
        L.b_ = b;
        L.c_ = c_full.truncated_below(a);
        return L;
    }

    /** Canonical lattice spanned by the columns of a basis matrix. */
    static Lattice from_basis(const Mat2& B, Ring ring) {
        return span({{B(0, 0), B(1, 0)}, {B(0, 1), B(1, 1)}}, ring);
    }

    /** The lattice O^2 (standard lattice). */
    static Lattice standard(const LocalField& F, Ring ring) { return from_params(F, ring, 0, Series::zero(F), 0); }

    /** The lattice with canonical parameters (a, c, b); c is reduced modulo pi^a. */
    static Lattice from_params(const LocalField& F, Ring ring, int a, const Series& c, int b) {
        Lattice L;
        L.F_ = &F;
        L.ring_ = ring;
        L.a_ = a;
        L.b_ = b;
        L.c_ = c.truncated_below(a);
        return L;
    }

    const LocalField& field() const { return *F_; }
    Ring ring() const { return ring_; }
    int a() const { return a_; }
    int b() const { return b_; }
    const Series& c() const { return c_; }

    Mat2 basis() const {
        const LocalField& F = *F_;
        return Mat2(Series::pi_power(F, a_), c_, Series::zero(F), Series::pi_power(F, b_));
    }
    /** Exact inverse of the canonical basis. */
    Mat2 basis_inverse() const {
        const LocalField& F = *F_;
        return Mat2(Series::pi_power(F, -a_), -c_.shifted(-a_ - b_), Series::zero(F), Series::pi_power(F, -b_));
    }
    /** Valuation of the determinant of the basis (the covolume exponent). */
    int volume() const { return a_ + b_; }

    /** The lattice X * this for an invertible matrix X. */
    Lattice applied(const Mat2& X) const { return from_basis(X * basis(), ring_); }
    /** The lattice x * this for an element of a quadratic algebra acting through its regular representation. */
    Lattice applied(const QuadElem& x) const { return applied(x.regular()); }
    /** pi^k * this. */
    Lattice scaled(int k) const {
        Lattice L = *this;
        L.a_ += k;
        L.b_ += k;
        L.c_ = c_.shifted(k);
        return L;
    }

    /** True when M is contained in this lattice. */
    bool contains(const Lattice& M) const {
        Mat2 C = basis_inverse() * M.basis();
        return C.min_valuation() >= 0;
    }

    friend bool operator==(const Lattice& x, const Lattice& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
    }
    friend bool operator!=(const Lattice& x, const Lattice& y) { return !(x == y); }
    friend bool operator<(const Lattice& x, const Lattice& y) {
        if (x.a_ != y.a_) return x.a_ < y.a_;
        if (x.b_ != y.b_) return x.b_ < y.b_;
        return x.c_ < y.c_;
    }

    /** Text "[[π^a, c],[0, π^b]]" with c as its coefficient list from pi^0 to pi^{a-1}. */
    std::string to_string() const {
        std::ostringstream os;
        os << "[[π^" << a_ << ", [";
        const int lo = std::min(0, c_.known_nonzero() ? c_.low() : 0);
        for (int e = lo; e < a_; ++e) {
            if (e > lo) os << ',';
            os << c_.coeff(e);
        }
        os << "]],[0, π^" << b_ << "]]";
        return os.str();
    }

private:
    Lattice() = default;
    const LocalField* F_ = nullptr;
    Ring ring_ = Ring::OF;
    int a_ = 0, b_ = 0;
    Series c_;
};

/** Elementary divisors (alpha <= beta) of M1 relative to M0 and a Smith basis of M0. */
struct RelativePosition {
    int alpha = 0;
    int beta = 0;
    /** Columns f1, f2: a basis of M0 with M1 = span(pi^alpha f1, pi^beta f2). */
    Mat2 smith_basis;
};

inline RelativePosition relative_position_full(const Lattice& M0, const Lattice& M1) {
    Mat2 C = M0.basis_inverse() * M1.basis();
    int alpha = C.min_valuation();
    int total = M1.volume() - M0.volume();
    int ii = -1, jj = -1;
    for (int i = 0; i < 2 && ii < 0; ++i)
        for (int j = 0; j < 2 && ii < 0; ++j)
            if (C(i, j).valuation() == alpha) {
                ii = i;
                jj = j;
            }
    Series v0x = C(0, jj).shifted(-alpha), v0y = C(1, jj).shifted(-alpha);
    const LocalField& F = M0.field();
    Mat2 P = (ii == 0) ? Mat2(v0x, Series::zero(F), v0y, Series::one(F))
                       : Mat2(v0x, Series::one(F), v0y, Series::zero(F));
    return RelativePosition{alpha, total - alpha, M0.basis() * P};
}

/** Elementary-divisor valuations (a, b), a <= b, of M1 inside M0. */
inline std::pair<int, int> relative_position(const Lattice& M0, const Lattice& M1) {
    auto rp = relative_position_full(M0, M1);
    return {rp.alpha, rp.beta};
}

/** Length of M0/M1; requires M1 inside M0. */
inline int lattice_index(const Lattice& M0, const Lattice& M1) {
    if (!M0.contains(M1)) throw UsageError("index requested for a lattice not contained in the other");
    return M1.volume() - M0.volume();
}

/** Every polynomial sum_{lo <= i < hi} x_i pi^i with digits x_i from the given residue set (first digit most significant). */
inline std::vector<Series> residue_polynomials(const LocalField& F, const std::vector<FElem>& digits, int lo, int hi) {
    std::vector<Series> out;
    const int len = std::max(0, hi - lo);
    std::vector<size_t> idx(static_cast<size_t>(len), 0);
    while (true) {
        std::vector<FElem> c(static_cast<size_t>(len));
        for (int i = 0; i < len; ++i) c[i] = digits[idx[i]];
        out.push_back(Series::from_coeffs(F, lo, c));
        int pos = len - 1;
        while (pos >= 0 && ++idx[pos] == digits.size()) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

inline const std::vector<FElem>& residue_digits(const LocalField& F, Ring ring) {
    return ring == Ring::OF ? F.fq() : F.fq2();
}

/**
 * All lattices Lambda with M0 >= Lambda >= M1 and [M0 : Lambda] = k, ordered
 * lexicographically by their Hermite parameters (a, c, b) relative to a Smith basis
 * of M0 adapted to M1.
 */
inline std::vector<Lattice> sublattices_between(const Lattice& M0, const Lattice& M1, int k) {
    if (!M0.contains(M1)) throw UsageError("sublattices_between requires M1 inside M0");
    auto rp = relative_position_full(M0, M1);
    const int al = rp.alpha, be = rp.beta;
    std::vector<Lattice> out;
    if (k < 0 || k > al + be) return out;
    const LocalField& F = M0.field();
    const auto& digits = residue_digits(F, M0.ring());
    for (int a = 0; a <= std::min(al, k); ++a) {
        const int b = k - a;
        if (b > be) continue;
        const int lo = std::max(0, a - be + b);
        for (const Series& c : residue_polynomials(F, digits, lo, a)) {
            Mat2 H(Series::pi_power(F, a), c, Series::zero(F), Series::pi_power(F, b));
            out.push_back(Lattice::from_basis(rp.smith_basis * H, M0.ring()));
        }
    }
    return out;
}

/** The index-1 sublattices of M (those containing pi*M). */
inline std::vector<Lattice> index_one_sublattices(const Lattice& M) { return sublattices_between(M, M.scaled(1), 1); }

/** O_L as a lattice in L = F + F*zeta (standard lattice in the basis (1, zeta)). */
inline Lattice maximal_order_lattice(const QuadAlgebra& L) { return Lattice::standard(L.field(), Ring::OF); }

/** O_L * Lambda: the span of Lambda and zeta*Lambda. */
inline Lattice order_span(const QuadAlgebra& L, const Lattice& M) {
    Mat2 B = M.basis();
    Mat2 ZB = QuadElem::zeta(L).regular() * B;
    return Lattice::span({{B(0, 0), B(1, 0)}, {B(0, 1), B(1, 1)}, {ZB(0, 0), ZB(1, 0)}, {ZB(0, 1), ZB(1, 1)}}, Ring::OF);
}

/** The conductor c of the multiplier order O_F + pi^c O_L of a lattice in L. */
inline int multiplier_conductor(const QuadAlgebra& L, const Lattice& M) {
    Mat2 C = M.basis_inverse() * QuadElem::zeta(L).regular() * M.basis();
    return std::max(0, -C.min_valuation());
}

/**
 * Conductor of Lambda in the set of lattices Lambda <= O_L with O_L * Lambda = O_L.
 * Throws UsageError for lattices outside that set.
 */
inline int conductor_of_lattice(const QuadAlgebra& L, const Lattice& M) {
    const Lattice OL = maximal_order_lattice(L);
    if (!OL.contains(M) || order_span(L, M) != OL)
        throw UsageError("lattice is not a proper sublattice generating O_L");
    return multiplier_conductor(L, M);
}

/** The order R_c = O_F + pi^c O_L as a lattice. */
inline Lattice order_of_conductor(const QuadAlgebra& L, int c) {
    const LocalField& F = L.field();
    return Lattice::from_params(F, Ring::OF, 0, Series::zero(F), c);
}

/**
 * All lattices Lambda <= O_L with O_L * Lambda = O_L and conductor c: the orbit of
 * R_c under O_L^x, via representatives x + zeta (x mod pi^c, a unit) and 1 + y*zeta
 * (y in pi*O_F mod pi^c).  Cardinality 1 for c = 0 and i(L) q^{c-1} otherwise.
 */
inline std::vector<Lattice> unit_conductor_orbit(const QuadAlgebra& L, int c) {
    if (c < 0) throw UsageError("conductor must be nonnegative");
    const LocalField& F = L.field();
    const Lattice Rc = order_of_conductor(L, c);
    if (c == 0) return {Rc};
    std::vector<Lattice> out;
    std::set<Lattice> seen;
    auto add = [&](const QuadElem& u) {
        Series N = u.norm();
        if (N.valuation() != 0) return;
        Lattice M = Rc.applied(u);
        if (seen.insert(M).second) out.push_back(M);
    };
    for (const Series& x : residue_polynomials(F, F.fq(), 0, c)) add(QuadElem(L, x, Series::one(F)));
    for (const Series& y : residue_polynomials(F, F.fq(), 1, c)) add(QuadElem(L, Series::one(F), y));
    return out;
}

}  // namespace atf
