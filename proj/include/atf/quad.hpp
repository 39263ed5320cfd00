/**
 * @brief Quadratic etale algebras L over F = F_q((pi)), numerical invariants
 * (kind, r, d) of their elements, signs, and matching predicates.
 *
 * L has the integral basis (1, zeta) with zeta^2 = t*zeta - n:
 *  - split:    L = F x F, zeta = (1, 0), t = 1, n = 0;
 *  - inert:    zeta a generator of F_{q^2} over F_q;
 *  - ramified: zeta = varpi with varpi^2 = pi, so t = 0 and n = -pi.
 */
#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/mat2.hpp"
#include "atf/series.hpp"

namespace atf {

enum class Kind { Split, Inert, Ramified };

inline std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Split: return "split";
        case Kind::Inert: return "inert";
        case Kind::Ramified: return "ram";
    }
    return "?";
}

inline Kind parse_kind(const std::string& s) {
    if (s == "split") return Kind::Split;
    if (s == "inert") return Kind::Inert;
    if (s == "ram" || s == "ramified") return Kind::Ramified;
    throw UsageError("unknown algebra kind '" + s + "' (expected split, inert or ram)");
}

inline bool is_field(Kind k) { return k != Kind::Split; }

/** The numerical invariant (kind, r, d) of a regular element, with d stored as d2 = 2d. */
struct NumInvariant {
    Kind kind = Kind::Split;
    int r = 0;
    int d2 = 0;

    bool d_nonnegative() const { return d2 >= 0; }
    /** d when it is an integer (d2 even). */
    int d() const {
        ensure(d2 % 2 == 0, "d is a half-integer");
        return d2 / 2;
    }

    /** Validity per the classification of numerical invariants. */
    bool valid() const {
        if (d2 >= 0) return r % 2 == 0 && d2 % 2 == 0;
        switch (kind) {
            case Kind::Inert: return false;
            case Kind::Ramified: return d2 == -1 && (r % 2 != 0);
            case Kind::Split: return ((r - d2) % 2) == 0;
        }
        return false;
    }

    std::string to_string() const { return kind_name(kind) + ":" + std::to_string(r) + ":" + std::to_string(d2); }

    /** Parses "kind:r:d2", e.g. "ram:3:-1". Validity is not checked here. */
    static NumInvariant parse(const std::string& text) {
        auto p1 = text.find(':');
        auto p2 = p1 == std::string::npos ? std::string::npos : text.find(':', p1 + 1);
        if (p2 == std::string::npos) throw UsageError("invariant must have the form kind:r:d2, got '" + text + "'");
        NumInvariant inv;
        inv.kind = parse_kind(text.substr(0, p1));
        try {
            size_t used = 0;
            std::string rs = text.substr(p1 + 1, p2 - p1 - 1), ds = text.substr(p2 + 1);
            inv.r = std::stoi(rs, &used);
            if (used != rs.size()) throw std::invalid_argument("r");
            inv.d2 = std::stoi(ds, &used);
            if (used != ds.size()) throw std::invalid_argument("d2");
        } catch (const std::exception&) {
            throw UsageError("invariant must have the form kind:r:d2 with integer r, d2, got '" + text + "'");
        }
        return inv;
    }

    friend bool operator==(const NumInvariant& a, const NumInvariant& b) {
        return a.kind == b.kind && a.r == b.r && a.d2 == b.d2;
    }
    friend bool operator<(const NumInvariant& a, const NumInvariant& b) {
        return std::tie(a.kind, a.r, a.d2) < std::tie(b.kind, b.r, b.d2);
    }
};

/** Enumerates every valid invariant of the given kind with r and d2 in the given ranges. */
inline std::vector<NumInvariant> valid_invariants(Kind kind, int r_min, int r_max, int d2_min, int d2_max) {
    std::vector<NumInvariant> out;
    for (int r = r_min; r <= r_max; ++r)
        for (int d2 = d2_min; d2 <= d2_max; ++d2) {
            NumInvariant inv{kind, r, d2};
            if (inv.valid()) out.push_back(inv);
        }
    return out;
}

/** A quadratic etale algebra L = F + F*zeta. */
class QuadAlgebra {
public:
    QuadAlgebra(Kind kind, const LocalField& F) : kind_(kind), F_(&F) {
        switch (kind) {
            case Kind::Split:
                t_ = Series::one(F);
                n_ = Series::zero(F);
                break;
            case Kind::Inert:
                t_ = Series::constant(F, F.trace(F.zeta()));
                n_ = Series::constant(F, F.norm(F.zeta()));
                break;
            case Kind::Ramified:
                if (F.p() == 2) throw UsageError("ramified algebras require odd q");
                t_ = Series::zero(F);
                n_ = -Series::pi_power(F, 1);
                break;
        }
    }

    Kind kind() const { return kind_; }
    const LocalField& field() const { return *F_; }
    /** Trace and norm of zeta: zeta^2 = t*zeta - n. */
    const Series& t() const { return t_; }
    const Series& n() const { return n_; }

    /** i(L) = #(O_L/pi)^x / #F_q^x: q+1 inert, q ramified, q-1 split. */
    int i_index() const { return i_index_of(kind_, F_->q()); }
    /** Ramified algebras are only modelled in odd residue characteristic. */
    static void require_supported(Kind k, int q) {
        if (k == Kind::Ramified && q % 2 == 0) throw UsageError("ramified algebras require odd q");
    }
    static int i_index_of(Kind k, int q) {
        switch (k) {
            case Kind::Inert: return q + 1;
            case Kind::Ramified: return q;
            case Kind::Split: return q - 1;
        }
        return 0;
    }

private:
    Kind kind_;
    const LocalField* F_;
    Series t_, n_;
};

/** An element x + y*zeta of a quadratic algebra. */
class QuadElem {
public:
    QuadElem(const QuadAlgebra& L, Series x, Series y) : L_(&L), x_(std::move(x)), y_(std::move(y)) {}

    static QuadElem from_base(const QuadAlgebra& L, const Series& x) { return QuadElem(L, x, Series::zero(L.field())); }
    static QuadElem one(const QuadAlgebra& L) { return from_base(L, Series::one(L.field())); }
    static QuadElem zeta(const QuadAlgebra& L) { return QuadElem(L, Series::zero(L.field()), Series::one(L.field())); }
    /** The element of F x F with components (alpha, beta); split algebras only. */
    static QuadElem from_components(const QuadAlgebra& L, const Series& alpha, const Series& beta) {
        if (L.kind() != Kind::Split) throw UsageError("components only exist in the split algebra");
        return QuadElem(L, beta, alpha - beta);
    }

    const QuadAlgebra& algebra() const { return *L_; }
    const Series& x() const { return x_; }
    const Series& y() const { return y_; }

    /** Components (alpha, beta) in F x F; split algebras only. */
    std::pair<Series, Series> components() const {
        if (L_->kind() != Kind::Split) throw UsageError("components only exist in the split algebra");
        return {x_ + y_, x_};
    }

    friend QuadElem operator+(const QuadElem& a, const QuadElem& b) { return QuadElem(*a.L_, a.x_ + b.x_, a.y_ + b.y_); }
    friend QuadElem operator-(const QuadElem& a, const QuadElem& b) { return QuadElem(*a.L_, a.x_ - b.x_, a.y_ - b.y_); }
    friend QuadElem operator*(const QuadElem& a, const QuadElem& b) {
        const Series& t = a.L_->t();
        const Series& n = a.L_->n();
        Series yy = a.y_ * b.y_;
        return QuadElem(*a.L_, a.x_ * b.x_ - n * yy, a.x_ * b.y_ + b.x_ * a.y_ + t * yy);
    }
    QuadElem scaled(const Series& s) const { return QuadElem(*L_, x_ * s, y_ * s); }

    /** Galois conjugate: zeta -> t - zeta. */
    QuadElem conj() const { return QuadElem(*L_, x_ + L_->t() * y_, -y_); }
    Series norm() const { return x_ * x_ + L_->t() * x_ * y_ + L_->n() * y_ * y_; }
    Series trace() const { return x_ + x_ + L_->t() * y_; }

    QuadElem inverse() const {
        Series ni = norm().inverse();
        return conj().scaled(ni);
    }

    /** Matrix of multiplication by this element in the basis (1, zeta). */
    Mat2 regular() const {
        return Mat2(x_, -(L_->n() * y_), y_, x_ + L_->t() * y_);
    }

    bool is_exact() const { return x_.exact() && y_.exact(); }

    std::string to_string() const { return "(" + x_.to_string() + ") + (" + y_.to_string() + ")*zeta"; }

private:
    const QuadAlgebra* L_;
    Series x_, y_;
};

/**
 * The numerical invariant of w in L^x \ F: r = v(N(w)) and d = v(y) - r/2, where
 * v(y) is the conductor of O_F[pi^k w] shifted back by k.
 */
inline NumInvariant numerical_invariant(const QuadElem& w) {
    if (w.y().is_exact_zero()) throw UsageError("element lies in F: no quadratic invariant");
    NumInvariant inv;
    inv.kind = w.algebra().kind();
    inv.r = w.norm().valuation();
    if (inv.r >= kExact) throw UsageError("element is a zero divisor");
    inv.d2 = 2 * w.y().valuation() - inv.r;
    ensure(inv.valid(), "computed invariant " + inv.to_string() + " violates the classification");
    return inv;
}

/** floor(a / 2) for possibly negative a. */
inline int floor_half(int a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }

/** floor(a / b) for b > 0 and possibly negative a. */
inline int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }

/**
 * A canonical element realizing a valid invariant:
 *  - inert, d = 0: pi^{r/2} zeta;  inert, d >= 1: pi^{r/2}(1 + pi^d zeta);
 *  - ramified, d >= 0: pi^{r/2}(1 + pi^d varpi);  ramified, d = -1/2: pi^{(r-1)/2} varpi;
 *  - split, d < 0: (pi^{r/2+d}, pi^{r/2-d});  split, d >= 1: (pi^{r/2}, pi^{r/2}(1 + pi^d));
 *  - split, d = 0: (pi^{r/2}, c pi^{r/2}) with c in F_q \ {0, 1} (impossible for q = 2).
 * The result is verified by recomputing its invariant.
 */
inline QuadElem element_from_invariant(const QuadAlgebra& L, const NumInvariant& inv) {
    if (inv.kind != L.kind()) throw UsageError("invariant kind does not match the algebra");
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    const LocalField& F = L.field();
    auto pi = [&](int e) { return Series::pi_power(F, e); };
    std::optional<QuadElem> w;
    if (inv.d2 >= 0) {
        const int h = inv.r / 2, d = inv.d2 / 2;
        if (L.kind() == Kind::Split) {
            if (d == 0) {
                if (!F.has_unit_not_one())
                    throw UsageError("split invariant with d = 0 is not realizable over F_2 by an element with distinct unit residues");
                w = QuadElem::from_components(L, pi(h), pi(h).scaled(F.unit_not_one()));
            } else {
                w = QuadElem::from_components(L, pi(h), pi(h) + pi(h + d));
            }
        } else if (L.kind() == Kind::Inert && d == 0) {
            w = QuadElem(L, Series::zero(F), pi(h));
        } else {
            w = QuadElem(L, pi(h), pi(h + d));
        }
    } else if (L.kind() == Kind::Ramified) {
        w = QuadElem(L, Series::zero(F), pi(floor_half(inv.r - 1)));
    } else {
        const int a = (inv.r + inv.d2) / 2, b = (inv.r - inv.d2) / 2;
        w = QuadElem::from_components(L, pi(a), pi(b));
    }
    NumInvariant back = numerical_invariant(*w);
    ensure(back == inv, "canonical element realizes " + back.to_string() + " instead of " + inv.to_string());
    return *w;
}

/** Monic quadratic T^2 + c1 T + c0 over F. */
struct MonicQuadratic {
    Series c1, c0;
    /** Discriminant c1^2 - 4 c0. */
    Series discriminant() const { return c1 * c1 - c0.scaled(c0.field().K().from_int(4)); }
};

/**
 * Block invariant of g = [[v, w], [x, y]] in GL_4(F) with 2x2 blocks: the characteristic
 * polynomial of v^{-1} w y^{-1} x.
 */
inline MonicQuadratic block_invariant(const Mat2& v, const Mat2& w, const Mat2& x, const Mat2& y) {
    for (const Mat2* M : {&v, &y})
        if (M->det().is_exact_zero() || M->det().valuation() >= kExact)
            throw UsageError("block is not invertible");
    Mat2 M = v.inverse() * w * y.inverse() * x;
    if (M.det().is_exact_zero()) throw UsageError("block product is singular: element is not regular semisimple");
    return MonicQuadratic{-M.trace(), M.det()};
}

/** Hasse invariant of the inner form: 1/4, 1/2 (parahoric form) or 3/4, stored as numerator over 4. */
enum class Hasse { Quarter = 1, Half = 2, ThreeQuarter = 3 };

/**
 * Sign of the functional equation: eta(delta_0) = (-1)^r times +1 when n*lambda is an
 * integer and -1 otherwise, where lambda = hasse_numerator / (2n).
 */
inline int epsilon_sign(int n, int hasse_numerator, int r) {
    (void)n;
    const int eta = (r % 2 == 0) ? 1 : -1;
    const int eps_prime = (hasse_numerator % 2 == 0) ? 1 : -1;
    return eta * eps_prime;
}

/**
 * Whether an element with invariant inv matches an element of the division algebra of
 * Hasse invariant lambda (1/4 or 3/4).  For split L the component valuations of z^2 are
 * (r/2 + d, r/2 - d) when d < 0 and (r/2, r/2) otherwise; lambda = 1/4 needs both even and
 * lambda = 3/4 both odd.
 */
inline bool matching_exists(Hasse lambda, const NumInvariant& inv) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    if (lambda == Hasse::Half) throw UsageError("matching is defined for Hasse invariants 1/4 and 3/4");
    if (inv.r % 2 != 0) return false;
    if (is_field(inv.kind)) return true;
    const int v1 = inv.r / 2 + std::min(inv.d2 / 2, 0);
    const bool even = (v1 % 2 == 0);
    return lambda == Hasse::Quarter ? even : !even;
}

}  // namespace atf
