/**
 * @brief Verification of the fundamental lemma and the arithmetic transfer identities.
 *
 * All comparisons are exact integers (coefficients of log q):
 *  - fundamental lemma: the central value of Orb(f'_Iw) is 1 on ramified r >= 1 odd, else 0;
 *  - transfer: d/ds Orb(f'_D) at s = 0 plus a correction (-4q Orb(f'_Par) for invariant 1/4,
 *    0 for 3/4) equals 2 Int(g) when a matching g exists, and 0 otherwise.
 * Each side carries its provenance: orbitals from the closed form or the lattice enumeration,
 * Int from the closed form or the geometric recipe.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atf/intersect.hpp"
#include "atf/orbital.hpp"
#include "atf/quad.hpp"

namespace atf {

/** Where a value came from. */
enum class Source { Closed, Brute, Geometric, None };

inline std::string source_name(Source s) {
    switch (s) {
        case Source::Closed: return "closed";
        case Source::Brute: return "brute";
        case Source::Geometric: return "geometric";
        case Source::None: return "none";
    }
    return "?";
}

struct VerifyReport {
    std::string check;               ///< "fl" or "at"
    NumInvariant inv;
    int q = 0;
    std::optional<Hasse> lambda;     ///< set for transfer checks
    Count lhs_dcoeff = 0;            ///< fl: central value; at: derivative coefficient
    Count correction_coeff = 0;
    Count rhs = 0;
    bool matched = false;
    bool pass = false;
    Source orbital_source = Source::Closed;
    Source int_source = Source::None;
    std::string note;                ///< error text when the row could not be evaluated

    std::string lambda_name() const { return lambda ? hasse_name(*lambda) : "-"; }
};

namespace detail {

inline LaurentPoly orbital_from(Source src, TestFn fn, const NumInvariant& inv, int q) {
    if (src == Source::Brute) {
        const LocalField& F = LocalField::get(q, std::max(32, 4 * (std::abs(inv.r) + std::abs(inv.d2) + 8)));
        const QuadAlgebra L(inv.kind, F);
        return orbital_brute(fn, element_from_invariant(L, inv)).total;
    }
    return orbital_closed(fn, inv, q);
}

}  // namespace detail

/** True when the lattice enumeration can realize the invariant (split d = 0 needs q >= 3). */
inline bool brute_available(const NumInvariant& inv, int q) { return !(inv.kind == Kind::Split && inv.d2 == 0 && q == 2); }

/** Fundamental lemma: central value of Orb(f'_Iw) against the compact side. */
inline VerifyReport fl_check(int q, const NumInvariant& inv, Source orbital_source = Source::Closed) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    VerifyReport rep;
    rep.check = "fl";
    rep.inv = inv;
    rep.q = q;
    rep.orbital_source = orbital_source;
    rep.matched = true;
    rep.lhs_dcoeff = to_count(detail::orbital_from(orbital_source, TestFn::Iw, inv, q).central_value());
    rep.rhs = (inv.kind == Kind::Ramified && inv.r >= 1 && inv.r % 2 != 0) ? 1 : 0;
    rep.pass = rep.lhs_dcoeff == rep.rhs;
    return rep;
}

/** Arithmetic transfer for the given Hasse invariant. */
inline VerifyReport at_check(Hasse lambda, int q, const NumInvariant& inv, Source int_source = Source::Closed,
                             Source orbital_source = Source::Closed) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    if (lambda == Hasse::Half) throw UsageError("transfer identities are stated for lambda = 1/4, 3/4");
    VerifyReport rep;
    rep.check = "at";
    rep.inv = inv;
    rep.q = q;
    rep.lambda = lambda;
    rep.orbital_source = orbital_source;
    rep.lhs_dcoeff = to_count(detail::orbital_from(orbital_source, TestFn::Dnorm, inv, q).central_derivative_coeff());
    if (lambda == Hasse::Quarter)
        rep.correction_coeff =
            -4 * q * to_count(detail::orbital_from(orbital_source, TestFn::Par, inv, q).central_value());
    rep.matched = matching_exists(lambda, inv);
    if (rep.matched) {
        rep.int_source = int_source;
        const Count I = int_source == Source::Geometric ? int_geometric(lambda, inv, q).value : int_closed(lambda, inv, q);
        rep.rhs = 2 * I;
    }
    rep.pass = rep.lhs_dcoeff + rep.correction_coeff == rep.rhs;
    return rep;
}

/** Options of a verification sweep. */
struct SweepOptions {
    std::vector<int> qs{2, 3};
    int r_min = -2;
    int r_max = 6;
    int d2_min = -4;
    int d2_max = 4;
    std::vector<Hasse> lambdas{Hasse::Quarter, Hasse::ThreeQuarter};
    bool brute = true;      ///< also evaluate orbitals by lattice enumeration
    bool geometric = true;  ///< also evaluate Int by the geometric recipe
};

/** Every valid invariant of the sweep at q (ramified kinds only for odd q). */
inline std::vector<NumInvariant> sweep_invariants(int q, int r_min, int r_max, int d2_min, int d2_max) {
    std::vector<NumInvariant> out;
    for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
        if (k == Kind::Ramified && q % 2 == 0) continue;
        for (const NumInvariant& inv : valid_invariants(k, r_min, r_max, d2_min, d2_max)) out.push_back(inv);
    }
    return out;
}

/**
 * Runs the fundamental lemma and the transfer identities over the range.  Row order: q, kind,
 * r, d2, then fl rows followed by at rows per lambda, closed before brute before geometric.
 * Failures (including exceptions) are recorded in the row and never abort the sweep.
 */
inline std::vector<VerifyReport> sweep(const SweepOptions& opt) {
    std::vector<VerifyReport> rows;
    auto guarded = [&](auto&& make, VerifyReport proto) {
        try {
            rows.push_back(make());
        } catch (const std::exception& e) {
            proto.pass = false;
            proto.note = e.what();
            rows.push_back(proto);
        }
    };
    for (int q : opt.qs)
        for (const NumInvariant& inv : sweep_invariants(q, opt.r_min, opt.r_max, opt.d2_min, opt.d2_max)) {
            VerifyReport proto;
            proto.inv = inv;
            proto.q = q;
            std::vector<Source> orb{Source::Closed};
            if (opt.brute && brute_available(inv, q)) orb.push_back(Source::Brute);
            for (Source s : orb) {
                proto.check = "fl";
                proto.orbital_source = s;
                guarded([&] { return fl_check(q, inv, s); }, proto);
            }
            for (Hasse lam : opt.lambdas) {
                proto.check = "at";
                proto.lambda = lam;
                std::vector<std::pair<Source, Source>> variants;  // (orbital, int)
                for (Source s : orb) variants.emplace_back(s, Source::Closed);
                if (opt.geometric && matching_exists(lam, inv) && geometric_available(lam, inv, q))
                    variants.emplace_back(Source::Closed, Source::Geometric);
                for (auto [os, is] : variants) {
                    proto.orbital_source = os;
                    proto.int_source = is;
                    guarded([&] { return at_check(lam, q, inv, is, os); }, proto);
                }
            }
        }
    return rows;
}

/** Number of passing rows. */
inline std::size_t count_passing(const std::vector<VerifyReport>& rows) {
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.pass) ++n;
    return n;
}

}  // namespace atf
