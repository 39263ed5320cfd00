/**
 * @brief Orbital integrals of the parahoric and Iwahori test functions as Laurent
 * polynomials in u = q^s: closed forms via germ expansion, brute-force lattice
 * enumeration, functional equations and reference central values.
 *
 * For w in a quadratic algebra L with numerical invariant (kind, r, d):
 *
 *   Orb(w, f, s) = (-u)^{-r} [ P(w, s) + i(L) U(w, s) ],
 *
 * where P (principal germ) collects the lattice configurations based at O_L and
 * U (unipotent germ) the rest, divided by i(L).  The variable X = -u^{-2}.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/latcount.hpp"
#include "atf/lattice.hpp"
#include "atf/laurent.hpp"
#include "atf/quad.hpp"

namespace atf {

/** Test functions: parahoric, Iwahori, and the Iwahori function normalized by q^{-s}. */
enum class TestFn { Par, Iw, Dnorm };

inline std::string fn_name(TestFn f) {
    switch (f) {
        case TestFn::Par: return "par";
        case TestFn::Iw: return "iw";
        case TestFn::Dnorm: return "d";
    }
    return "?";
}

inline TestFn parse_fn(const std::string& s) {
    if (s == "par") return TestFn::Par;
    if (s == "iw") return TestFn::Iw;
    if (s == "d") return TestFn::Dnorm;
    throw UsageError("unknown test function '" + s + "' (expected par, iw or d)");
}

using XSeries = std::vector<std::pair<Rational, int>>;

/** u^{v} (1 + X + ... + X^{v-1}); zero for v <= 0. */
inline LaurentPoly orb_gl2_plus(int v_alpha) {
    if (v_alpha <= 0) return LaurentPoly();
    XSeries t;
    for (int i = 0; i < v_alpha; ++i) t.emplace_back(Rational(1), i);
    return from_x_series(t).shifted(v_alpha);
}

/**
 * Orbital integral of a hyperbolic element with eigenvalue valuations v_alpha, v_beta
 * and v(alpha - beta) = v_diff:
 *   Par: q^{v_diff - 1} u^{v_alpha + v_beta} (1 + ... + X^{v_alpha-1})(1 + ... + X^{v_beta-1}),
 *   Iw:  2q (X + 1) Par;  zero unless both valuations are positive.
 */
inline LaurentPoly orb_hyperbolic(TestFn fn, int v_alpha, int v_beta, int v_diff, int q) {
    if (v_alpha <= 0 || v_beta <= 0) return LaurentPoly();
    if (fn == TestFn::Dnorm) return orb_hyperbolic(TestFn::Iw, v_alpha, v_beta, v_diff, q).shifted(-1);
    Rational scale = 1;
    if (v_diff >= 1)
        for (int i = 0; i < v_diff - 1; ++i) scale *= q;
    else
        for (int i = 0; i < 1 - v_diff; ++i) scale /= q;
    LaurentPoly par = orb_gl2_plus(v_alpha) * orb_gl2_plus(v_beta) * scale;
    if (fn == TestFn::Par) return par;
    LaurentPoly xp1 = x_power(1) + LaurentPoly::constant(1);
    return par * xp1 * Rational(2 * q);
}

/** Valuations of the split canonical element: (v(alpha), v(beta), v(alpha - beta)). */
struct SplitValuations {
    int v_alpha, v_beta, v_diff;
};

inline SplitValuations split_valuations(int r, int d2) {
    if (d2 < 0) {
        int a = (r + d2) / 2, b = (r - d2) / 2;
        return {a, b, a};
    }
    return {r / 2, r / 2, r / 2 + d2 / 2};
}

/** Relative position (O_L : w O_L) = (r/2 + min(d,0), r/2 - min(d,0)) as integers. */
inline std::pair<int, int> order_position(int r, int d2) {
    if (d2 < 0) return {(r + d2) / 2, (r - d2) / 2};
    return {r / 2, r / 2};
}

/** Principal germ (without the sign prefactor). */
inline LaurentPoly principal_germ(TestFn fn, Kind kind, int r, int d2, int q) {
    NumInvariant inv{kind, r, d2};
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    if (fn == TestFn::Dnorm) throw UsageError("germs are defined for par and iw");
    XSeries t;
    if (r <= 0) return LaurentPoly();
    if (fn == TestFn::Par) {
        auto [a, b] = order_position(r, d2);
        if (a - 1 < 0) return LaurentPoly();
        for (int k = 0; k <= r - 2; ++k) t.emplace_back(Rational(phi(a - 1, b - 1, k, q)), -k - 2);
        return from_x_series(t);
    }
    switch (kind) {
        case Kind::Inert: return LaurentPoly();
        case Kind::Ramified:
            if (d2 >= 0) {
                for (int k = 0; k <= r - 1; ++k) t.emplace_back(Rational(xi(r / 2 - 1, r / 2, k, q)), -k - 1);
            } else {
                const int h = (r - 1) / 2;
                for (int k = 0; k <= r - 1; ++k) t.emplace_back(Rational(xi(h, h, k, q)), -k - 1);
            }
            break;
        case Kind::Split:
            if (d2 >= 0) {
                for (int k = 0; k <= r - 1; ++k) t.emplace_back(Rational(2 * xi(r / 2 - 1, r / 2, k, q)), -k - 1);
            } else {
                const int a = (r + d2) / 2, b = (r - d2) / 2 - 1;
                if (a < 1) return LaurentPoly();
                for (int k = 0; k <= r - 1; ++k) t.emplace_back(Rational(2 * xi_prime(a, b, k, q)), -k - 1);
            }
            break;
    }
    return from_x_series(t);
}

/**
 * Unipotent germ, computed from the split realization of (r, d):
 *   U = (q - 1)^{-1} [ (-u)^{r} Orb_split - P_split ].
 */
inline LaurentPoly unipotent_germ(TestFn fn, int r, int d2, int q) {
    NumInvariant inv{Kind::Split, r, d2};
    if (!inv.valid()) throw UsageError("no split realization of r = " + std::to_string(r) + ", d2 = " + std::to_string(d2));
    if (fn == TestFn::Dnorm) throw UsageError("germs are defined for par and iw");
    SplitValuations sv = split_valuations(r, d2);
    LaurentPoly orb = orb_hyperbolic(fn, sv.v_alpha, sv.v_beta, sv.v_diff, q);
    LaurentPoly diff = sign_prefactor_inverse(r) * orb - principal_germ(fn, Kind::Split, r, d2, q);
    return diff * Rational(1, q - 1);
}

/** Closed-form orbital integral; all coefficients are asserted to be integers. */
inline LaurentPoly orbital_closed(TestFn fn, const NumInvariant& inv, int q) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    QuadAlgebra::require_supported(inv.kind, q);
    if (fn == TestFn::Dnorm) return orbital_closed(TestFn::Iw, inv, q).shifted(-1);
    LaurentPoly out;
    if (inv.r > 0) {
        if (inv.kind == Kind::Split) {
            SplitValuations sv = split_valuations(inv.r, inv.d2);
            out = orb_hyperbolic(fn, sv.v_alpha, sv.v_beta, sv.v_diff, q);
        } else {
            const int i = QuadAlgebra::i_index_of(inv.kind, q);
            LaurentPoly germs = principal_germ(fn, inv.kind, inv.r, inv.d2, q) +
                                unipotent_germ(fn, inv.r, inv.d2, q) * Rational(i);
            out = sign_prefactor(inv.r) * germs;
        }
    }
    ensure(out.has_integer_coeffs(), "orbital integral " + out.to_string() + " has non-integer coefficients");
    return out;
}

/** Result of the brute-force enumeration, with the germ decomposition. */
struct BruteOrbital {
    LaurentPoly total;      ///< (-u)^{-r} * sum over all configurations
    LaurentPoly principal;  ///< sum over configurations based at O_L (without prefactor)
    LaurentPoly unipotent;  ///< remaining sum divided by i(L) (without prefactor)
    std::int64_t configurations = 0;
    int c_max = 0;
};

/** Default conductor bound: max(r + 2, ceil(r/2 + d) + 2, 2). */
inline int default_c_max(const NumInvariant& inv) {
    int s = inv.r + inv.d2;  // 2 (r/2 + d)
    int ceil_half = (s >= 0) ? (s + 1) / 2 : -((-s) / 2);
    return std::max({inv.r + 2, ceil_half + 2, 2});
}

/**
 * Enumerates the lattice configurations of w:
 *  - Iw: (L0, L0b, L1, L1b) with L0 >= L0b >= L1 >= w L0 and pi L0 >= L1b >= w L0b,
 *    index-1 steps L0 > L0b and L1 > L1b, and O_L L0 = O_L;
 *  - Par: (L0, L1) with pi L0 >= L1 >= w L0 and O_L L0 = O_L;
 * weighting each by X^{-[L0 : L1]}.  L0 ranges over the conductor orbits c = 0..c_max;
 * the two top levels must contribute nothing (completeness certificate).
 */
inline BruteOrbital orbital_brute(TestFn fn, const QuadElem& w, int c_max = -1) {
    if (fn == TestFn::Dnorm) {
        BruteOrbital b = orbital_brute(TestFn::Iw, w, c_max);
        b.total = b.total.shifted(-1);
        return b;
    }
    const QuadAlgebra& L = w.algebra();
    const NumInvariant inv = numerical_invariant(w);
    if (c_max < 0) c_max = default_c_max(inv);
    if (c_max < 1) throw UsageError("c_max must be at least 1");
    std::vector<std::int64_t> principal_counts, rest_counts;  // indexed by [L0 : L1]
    auto bump = [](std::vector<std::int64_t>& v, int k) {
        if (k < 0) throw InternalError("negative index in enumeration");
        if (static_cast<int>(v.size()) <= k) v.resize(static_cast<size_t>(k) + 1, 0);
        ++v[static_cast<size_t>(k)];
    };
    BruteOrbital out;
    out.c_max = c_max;
    std::vector<std::int64_t> per_level(static_cast<size_t>(c_max) + 1, 0);
    for (int c = 0; c <= c_max; ++c) {
        for (const Lattice& L0 : unit_conductor_orbit(L, c)) {
            const Lattice wL0 = L0.applied(w);
            if (!L0.contains(wL0)) continue;
            const Lattice piL0 = L0.scaled(1);
            if (fn == TestFn::Par) {
                if (!piL0.contains(wL0)) continue;
                const int base = lattice_index(L0, piL0);
                const int span = lattice_index(piL0, wL0);
                for (int k = 0; k <= span; ++k)
                    for (const Lattice& L1 : sublattices_between(piL0, wL0, k)) {
                        (void)L1;
                        bump(c == 0 ? principal_counts : rest_counts, base + k);
                        ++per_level[static_cast<size_t>(c)];
                    }
                continue;
            }
            for (const Lattice& L0b : index_one_sublattices(L0)) {
                if (!L0b.contains(wL0)) continue;
                const bool principal = (c == 0) && multiplier_conductor(L, L0b) == 0;
                const Lattice wL0b = L0b.applied(w);
                const int span = lattice_index(L0b, wL0);
                for (int k = 0; k <= span; ++k)
                    for (const Lattice& L1 : sublattices_between(L0b, wL0, k))
                        for (const Lattice& L1b : index_one_sublattices(L1)) {
                            if (!L1b.contains(wL0b) || !piL0.contains(L1b)) continue;
                            bump(principal ? principal_counts : rest_counts, 1 + k);
                            ++per_level[static_cast<size_t>(c)];
                        }
            }
        }
    }
    if (per_level[static_cast<size_t>(c_max)] != 0 || per_level[static_cast<size_t>(c_max - 1)] != 0)
        throw InternalError("completeness certificate failed: configurations found at conductor " + std::to_string(c_max) +
                            " or " + std::to_string(c_max - 1) + "; increase c_max");
    XSeries p, u;
    for (size_t k = 0; k < principal_counts.size(); ++k)
        if (principal_counts[k]) p.emplace_back(Rational(principal_counts[k]), -static_cast<int>(k));
    for (size_t k = 0; k < rest_counts.size(); ++k)
        if (rest_counts[k]) u.emplace_back(Rational(rest_counts[k]), -static_cast<int>(k));
    for (auto n : per_level) out.configurations += n;
    out.principal = from_x_series(p);
    const LaurentPoly rest = from_x_series(u);
    out.unipotent = rest * Rational(1, L.i_index());
    out.total = sign_prefactor(inv.r) * (out.principal + rest);
    return out;
}

/**
 * Functional equation of an orbital integral p of invariant inv:
 *   Dnorm: p(u^{-1}) = eps p,  Iw: p(u^{-1}) = eps u^{-2} p  with eps = (-1)^{r+1};
 *   Par:   p(u^{-1}) = (-1)^r u^{-4} p.
 */
inline bool functional_equation_check(TestFn fn, const NumInvariant& inv, const LaurentPoly& p) {
    const Rational eps_d = (inv.r % 2 == 0) ? Rational(-1) : Rational(1);
    switch (fn) {
        case TestFn::Dnorm: return p.reflect() == p * eps_d;
        case TestFn::Iw: return p.reflect() == p.shifted(-2) * eps_d;
        case TestFn::Par: return p.reflect() == p.shifted(-4) * Rational(inv.r % 2 == 0 ? 1 : -1);
    }
    return false;
}

/** Expected central values and central derivative coefficients (coefficient of log q). */
struct ReferenceValues {
    Rational par_central = 0;
    Rational iw_central = 0;
    Rational d_iw_coeff = 0;  ///< derivative coefficient of Orb(f'_Iw)
    Rational d_d_coeff = 0;   ///< derivative coefficient of Orb(f'_D) = u^{-1} Orb(f'_Iw)
};

/**
 * Tabulated central values.  Parahoric central value for r even > 0 and r/2 + d > 0:
 *   ramified: 1 + q^2 + ... + q^{r/2-2} (r in 4Z), or
 *             (1 + q^2 + ... + q^{r/2-3}) + (q^{r/2-1} + ... + q^{r/2+d-1}) (r in 2 + 4Z);
 *   inert:    2(1 + q^2 + ... + q^{r/2-2}) (r in 4Z), or
 *             2(1 + ... + q^{r/2-3}) + 2(q^{r/2-1} + ... + q^{r/2+d-2}) + q^{r/2+d-1} (r in 2 + 4Z);
 *   split:    0 if both component valuations are even, q^{r/2+d-1} otherwise.
 * Iwahori central value: 1 on ramified r odd >= 1, else 0.  Derivative: for r even > 0,
 * 4q * par + {r ramified, 2r inert, 0 split}; for r odd, d Iw = Iw central and d D = 0.
 */
inline ReferenceValues reference_table(const NumInvariant& inv, int q) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    ReferenceValues ref;
    const int r = inv.r;
    if (r <= 0) return ref;
    auto Q = [&](int e) { return Rational(ipow(q, e)); };
    auto even_powers = [&](int lo, int hi) {  // q^lo + q^{lo+2} + ... + q^hi
        Rational s = 0;
        for (int e = lo; e <= hi; e += 2) s += Q(e);
        return s;
    };
    auto all_powers = [&](int lo, int hi) {
        Rational s = 0;
        for (int e = lo; e <= hi; ++e) s += Q(e);
        return s;
    };
    if (r % 2 != 0) {
        ref.iw_central = (inv.kind == Kind::Ramified) ? 1 : 0;
        ref.d_iw_coeff = ref.iw_central;
        ref.d_d_coeff = 0;
        return ref;
    }
    const int h = r / 2;
    const int d = inv.d2 / 2;  // r even forces d2 even
    Rational par = 0;
    if (h + d > 0) {
        const bool four = (r % 4 == 0);
        switch (inv.kind) {
            case Kind::Ramified:
                par = four ? even_powers(0, h - 2) : even_powers(0, h - 3) + all_powers(h - 1, h + d - 1);
                break;
            case Kind::Inert:
                par = four ? Rational(2) * even_powers(0, h - 2)
                           : Rational(2) * even_powers(0, h - 3) + Rational(2) * all_powers(h - 1, h + d - 2) + Q(h + d - 1);
                break;
            case Kind::Split: {
                const int v1 = h + std::min(d, 0);
                par = (v1 % 2 == 0) ? Rational(0) : Q(h + d - 1);
                break;
            }
        }
    }
    ref.par_central = par;
    ref.iw_central = 0;
    const int extra = inv.kind == Kind::Ramified ? r : inv.kind == Kind::Inert ? 2 * r : 0;
    ref.d_iw_coeff = Rational(4 * q) * par + extra;
    ref.d_d_coeff = ref.d_iw_coeff;
    return ref;
}

}  // namespace atf
