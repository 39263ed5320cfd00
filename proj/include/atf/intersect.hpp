/**
 * @brief Intersection numbers Int(g) for the Hasse invariants 1/4 and 3/4.
 *
 * Closed forms are compared against a geometric recipe driven purely by the tree data of a
 * conjugate-linear z:
 *  - invariant 1/4: Int_0 = (artinian point) + sum over vertices with m = n(z, L) >= 1 of
 *        p_L = -m [ (q^2 - 1) - m (q^2 + 1) + sum_{L' ~ L} n(z, L') ],
 *    using the conormal degree q^2 - 1 of every component, the self-intersection -(q^2 + 1)
 *    and intersection 1 of adjacent components;
 *  - invariant 3/4: reduction to the tree datum of invariant (L, r - 2, d), assembled twice
 *    (directly, and through the ledger of artinian lengths).
 * Int = 2 Int_0 for inert L (two connected components meet), Int = Int_0 otherwise.
 */
#pragma once

#include <optional>
#include <string>

#include "atf/artinian.hpp"
#include "atf/bttree.hpp"
#include "atf/errors.hpp"
#include "atf/latcount.hpp"
#include "atf/laurent.hpp"
#include "atf/orbital.hpp"
#include "atf/quad.hpp"

namespace atf {

/** Conormal degree of every component of the special fibre. */
inline Count conormal_degree(int q) { return static_cast<Count>(q) * q - 1; }
/** Self-intersection of a component. */
inline Count self_intersection(int q) { return -(static_cast<Count>(q) * q + 1); }

/** Factor between Int and Int_0: 2 for inert algebras, 1 otherwise. */
inline int component_factor(Kind k) { return k == Kind::Inert ? 2 : 1; }

/** Parses "1/4" or "3/4". */
inline Hasse parse_hasse(const std::string& s) {
    if (s == "1/4") return Hasse::Quarter;
    if (s == "3/4") return Hasse::ThreeQuarter;
    throw UsageError("lambda must be 1/4 or 3/4, got '" + s + "'");
}
inline std::string hasse_name(Hasse h) {
    switch (h) {
        case Hasse::Quarter: return "1/4";
        case Hasse::Half: return "1/2";
        case Hasse::ThreeQuarter: return "3/4";
    }
    return "?";
}

/** Integer value of an exact rational that must be integral. */
inline Count to_count(const Rational& r) {
    ensure(is_integer(r), "expected an integer, got " + rational_to_string(r));
    return static_cast<Count>(numerator(r));
}

/** The invariant (L, r - 2, d) of the tree datum attached to an invariant-3/4 element. */
inline NumInvariant reduced_invariant(const NumInvariant& inv) { return NumInvariant{inv.kind, inv.r - 2, inv.d2}; }

/**
 * N = #{L : n(w, L) >= 0} (modulo the apartment translations in the split case) for the tree
 * datum of the reduced invariant, from the predicted shape and maximum: the ball of radius m
 * around T, or 0 when m < 0.
 */
inline Count nonnegative_count_closed(const NumInvariant& reduced, int q) {
    const int m = max_multiplicity(reduced);
    if (m < 0) return 0;
    return ball_count(predicted_shape(reduced), m, q);
}

/** The same count from the orbital side: 2 Orb(f'_Par) / delta. */
inline Count nonnegative_count_from_orbital(const NumInvariant& inv, int q) {
    const Count par = to_count(orbital_closed(TestFn::Par, inv, q).central_value());
    const Count two = 2 * par;
    ensure(two % component_factor(inv.kind) == 0, "2 Orb(f'_Par) is not divisible by delta");
    return two / component_factor(inv.kind);
}

/** Closed-form intersection number. */
inline Count int_closed(Hasse lambda, const NumInvariant& inv, int q) {
    if (lambda == Hasse::Half) throw UsageError("intersection numbers are defined for lambda = 1/4, 3/4");
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    QuadAlgebra::require_supported(inv.kind, q);
    if (!matching_exists(lambda, inv)) throw UsageError("no matching element for " + inv.to_string());
    if (inv.r <= 0) return 0;
    const Count base = inv.kind == Kind::Inert ? inv.r : inv.kind == Kind::Ramified ? inv.r / 2 : 0;
    if (lambda == Hasse::Quarter) return base;
    const Count N = nonnegative_count_closed(reduced_invariant(inv), q);
    const Count N_orb = nonnegative_count_from_orbital(inv, q);
    ensure(N == N_orb, "tree count " + std::to_string(N) + " differs from orbital count " + std::to_string(N_orb) +
                           " for " + inv.to_string());
    return component_factor(inv.kind) * q * N + base;
}

/** Breakdown of a geometric intersection number. */
struct IntResult {
    Count value = 0;       ///< Int
    Count int0 = 0;        ///< Int_0
    Count pure_sum = 0;    ///< sum of p_L (invariant 1/4)
    Count artinian = 0;    ///< artinian contribution (invariant 1/4)
    int doubling = 1;      ///< Int / Int_0
    Count nonzero_outside_T = 0;  ///< vertices outside T with m >= 1 and p_L != 0 (must be 0)
    // Invariant 3/4 only.
    Count reduced_int0 = 0;   ///< Int_0 of the reduced element
    Count N = 0;              ///< #{n >= 0} for the tree datum
    Count T_size = 0;         ///< #T of the tree datum
    Count boundary = 0;       ///< superspecial points on the boundary of {n >= 0}
    Count core_length = 0;    ///< length of the artinian core C(y)
    Count reduced_artinian = 0;
    Count assembly_direct = 0;   ///< Int_0 by the reduction identity
    Count assembly_ledger = 0;   ///< Int_0 by the artinian-length ledger
};

/** Invariant-1/4 recipe on an explored window of z (the window must contain {n >= 0}). */
inline IntResult int_geometric_quarter(const TreeWindow& W, const NumInvariant& inv) {
    ensure(W.floor_level() <= 0, "window does not contain {n >= 0}");
    const int q = W.q;
    const Count Qm1 = conormal_degree(q), Qp1 = -self_intersection(q);
    IntResult res;
    for (std::size_t i = 0; i < W.size(); ++i) {
        const Count m = W.n[i];
        if (m < 1) continue;
        Count nbr = 0;
        for (int v : W.nbr_n[i]) nbr += v;
        const Count p = -m * (Qm1 - m * Qp1 + nbr);
        res.pure_sum += p;
        if (W.n[i] != W.m && p != 0) ++res.nonzero_outside_T;
    }
    // The artinian locus is a single point of length one exactly when L is a field and r ∈ 2 + 4Z_{>=0}.
    res.artinian = (is_field(inv.kind) && inv.r > 0 && inv.r % 4 == 2) ? artinian_length(LengthRow::NodePoint, q).length : 0;
    res.int0 = res.artinian + res.pure_sum;
    res.doubling = component_factor(inv.kind);
    res.value = res.doubling * res.int0;
    return res;
}

/** Invariant-1/4 recipe from the invariant (builds and explores z). */
inline IntResult int_geometric_quarter(const NumInvariant& inv, int q) {
    if (!matching_exists(Hasse::Quarter, inv)) throw UsageError("no matching element for " + inv.to_string());
    return int_geometric_quarter(explore_invariant(inv, q), inv);
}

/**
 * Invariant-3/4 recipe.  With the tree datum w of the reduced invariant (L, r - 2, d) and
 * m = max n(w, -):
 *  direct: Int_0 = Int_0(reduced) + q * N + {1 field, 0 split};
 *  ledger: Int_0 = Int_0(reduced) + len C + q * #boundary - art(reduced), where
 *          len C = q #T + {1 field with r - 2 ∈ 4Z, 2 field with r - 2 ∈ 2 + 4Z, 0 split},
 *          #boundary counts vertices with 0 <= n < m (each meets exactly one component
 *          of larger multiplicity in a point of length q), and art(reduced) = 1 for fields with
 *          r - 2 ∈ 2 + 4Z_{>=0}.  Both must agree.
 */
inline IntResult int_geometric_threequarter(const NumInvariant& inv, int q) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    if (!matching_exists(Hasse::ThreeQuarter, inv)) throw UsageError("no matching element for " + inv.to_string());
    IntResult res;
    res.doubling = component_factor(inv.kind);
    if (inv.r <= 0) return res;  // not topologically nilpotent: empty intersection
    const NumInvariant red = reduced_invariant(inv);
    const TreeWindow W = explore_invariant(red, q);
    ensure(W.floor_level() <= 0, "window does not contain {n >= 0}");
    const bool field = is_field(inv.kind);
    res.reduced_int0 = red.r <= 0 ? 0 : int_geometric_quarter(W, red).int0;
    res.N = level_census(W, 0);
    // Direct assembly.
    res.assembly_direct = res.reduced_int0 + q * res.N + (field ? 1 : 0);
    // Ledger assembly.
    const int boundary_len = artinian_length(LengthRow::BoundaryPoint, q).length;
    if (W.m >= 0) {
        res.T_size = static_cast<Count>(W.T.size());
        const int field_const = !field ? 0 : (red.r % 4 == 0 ? 1 : 2);
        res.core_length = q * res.T_size + field_const;
        for (std::size_t i = 0; i < W.size(); ++i) {
            if (W.n[i] < 0 || W.n[i] >= W.m) continue;
            int up = 0;
            for (int v : W.nbr_n[i])
                if (v == W.n[i] + 1) ++up;
            ensure(up == 1, "vertex outside T has " + std::to_string(up) + " neighbours of larger multiplicity");
            ++res.boundary;
        }
    }
    res.reduced_artinian = (field && red.r >= 2 && red.r % 4 == 2) ? 1 : 0;
    res.assembly_ledger = res.reduced_int0 + res.core_length + boundary_len * res.boundary - res.reduced_artinian;
    ensure(res.assembly_direct == res.assembly_ledger,
           "invariant-3/4 assemblies disagree for " + inv.to_string() + ": " + std::to_string(res.assembly_direct) +
               " vs " + std::to_string(res.assembly_ledger));
    res.int0 = res.assembly_direct;
    res.value = res.doubling * res.int0;
    return res;
}

/** Geometric Int for either invariant. */
inline IntResult int_geometric(Hasse lambda, const NumInvariant& inv, int q) {
    if (lambda == Hasse::Quarter) {
        return int_geometric_quarter(inv, q);
    }
    if (lambda == Hasse::ThreeQuarter) return int_geometric_threequarter(inv, q);
    throw UsageError("intersection numbers are defined for lambda = 1/4, 3/4");
}

/** True when the geometric recipe can build its tree datum (split d = 0 needs q >= 3). */
inline bool geometric_available(Hasse lambda, const NumInvariant& inv, int q) {
    const NumInvariant t = lambda == Hasse::ThreeQuarter ? reduced_invariant(inv) : inv;
    return !(t.kind == Kind::Split && t.d2 == 0 && q == 2);
}

}  // namespace atf
