/**
 * @brief The Bruhat–Tits tree of PGL_2 over the unramified quadratic extension E/F.
 *
 * Vertices are homothety classes of O_E-lattices in W = E^2, represented by the
 * canonical Hermite basis [[pi^a, c], [0, 1]] (bottom exponent normalized to 0).
 * A conjugate-linear map z(v) = A * sigma(v) defines the multiplicity
 *
 *     n(z, L) = max { k : z L ⊆ pi^k L } = min valuation of B^{-1} A sigma(B),
 *
 * whose maximum locus T(z) is a finite subtree (or an apartment-like subtree in
 * the split case, handled modulo the translation group of the apartment).
 */
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/lattice.hpp"
#include "atf/latcount.hpp"
#include "atf/mat2.hpp"
#include "atf/quad.hpp"
#include "atf/series.hpp"

namespace atf {

/** Working precision for tree computations; all tree arithmetic is exact, so it only bounds inverses. */
inline constexpr int kTreePrecision = 32;

/** A sigma-linear endomorphism v -> A * sigma(v) of E^2. */
struct ConjLinearMap {
    Mat2 A;
    /** True when the coordinates are an eigenbasis of z^2 for a split algebra (diagonal A). */
    bool split_eigenbasis = false;

    const LocalField& field() const { return A.field(); }
    /** The E-linear map z^2 = A * sigma(A). */
    Mat2 square() const { return A * A.sigma(); }
    /** pi * z. */
    ConjLinearMap times_pi() const { return {A.scaled(Series::pi_power(field(), 1)), split_eigenbasis}; }
};

/** True when z^2 with this invariant can be written as a norm from E ⊗ L (i.e. z exists). */
inline bool tree_realizable(const NumInvariant& inv) {
    if (!inv.valid()) return false;
    switch (inv.kind) {
        case Kind::Inert: return true;
        case Kind::Ramified: return inv.r % 2 == 0;
        case Kind::Split: {
            if (inv.d2 < 0) return ((inv.r + inv.d2) / 2) % 2 == 0 && ((inv.r - inv.d2) / 2) % 2 == 0;
            return (inv.r / 2) % 2 == 0;
        }
    }
    return false;
}

/** n(z, L): the largest k with z L ⊆ pi^k L. */
inline int n_multiplicity(const ConjLinearMap& z, const Lattice& L) {
    return (L.basis_inverse() * z.A * L.basis().sigma()).min_valuation();
}

namespace detail {

/** The element t of E ⊗ L acting on E^2 in the basis (1, zeta): t0 * I + t1 * Reg(zeta). */
inline Mat2 tensor_element(const QuadAlgebra& L, const Series& t0, const Series& t1) {
    const LocalField& F = L.field();
    Mat2 R = QuadElem::zeta(L).regular();
    return Mat2::identity(F).scaled(t0) + R.scaled(t1);
}

/** Checks that A sigma(A) lies in L (or is diagonal over F in split coordinates) with invariant inv. */
inline bool square_has_invariant(const QuadAlgebra& L, const ConjLinearMap& z, const NumInvariant& inv) {
    const Mat2 M = z.square();
    if (!M.in_base_field()) return false;
    try {
        if (z.split_eigenbasis) {
            if (!M(0, 1).is_exact_zero() || !M(1, 0).is_exact_zero()) return false;
            return numerical_invariant(QuadElem::from_components(L, M(0, 0), M(1, 1))) == inv;
        }
        QuadElem w(L, M(0, 0), M(1, 0));
        const Mat2 R = w.regular();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!(R(i, j) == M(i, j))) return false;
        return numerical_invariant(w) == inv;
    } catch (const UsageError&) {
        return false;
    }
}

/** Integer power of a quadratic element (negative exponents through the inverse). */
inline QuadElem quad_power(const QuadElem& x, int e) {
    QuadElem base = e >= 0 ? x : x.inverse();
    QuadElem r = QuadElem::one(x.algebra());
    for (int i = 0; i < std::abs(e); ++i) r = r * base;
    return r;
}

}  // namespace detail

/**
 * A conjugate-linear z whose square has the given numerical invariant.  Candidates come from
 * closed templates (one per kind); every candidate is validated by recomputing the invariant of
 * z^2, and when the primary unit parameter fails a bounded search over F_{q^2} units runs.
 *  - inert: t = x1 + x2 zeta with t sigma(t) = w, solved through E ⊗ L = E x E;
 *  - ramified (r even): t = varpi^{r/2} (1 + pi^d xi varpi) with tr(xi) != 0;
 *  - split: diagonal A = diag(pi^{v1/2}, pi^{v2/2} tau) in an eigenbasis of z^2.
 */
inline ConjLinearMap conj_linear_from_invariant(const NumInvariant& inv, int q) {
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    QuadAlgebra::require_supported(inv.kind, q);
    if (!tree_realizable(inv))
        throw UsageError("invariant " + inv.to_string() + " is not a norm from E ⊗ L (odd valuation)");
    const LocalField& F = LocalField::get(q, kTreePrecision);
    const QuadAlgebra L(inv.kind, F);
    auto pi = [&](int e) { return Series::pi_power(F, e); };
    std::vector<FElem> params;
    std::vector<FElem> primary;
    switch (inv.kind) {
        case Kind::Inert: primary = {0}; break;
        case Kind::Ramified: primary = {F.trace_unit()}; break;
        case Kind::Split:
            if (inv.d2 == 0) {
                if (q == 2) throw UsageError("split invariant with d = 0 is not realizable over F_2");
                primary = {F.norm_not_one()};
            } else {
                primary = {F.trace_unit()};
            }
            break;
    }
    params = primary;
    for (FElem x : F.fq2())
        if (x != 0 && x != primary.front()) params.push_back(x);

    for (FElem xi : params) {
        ConjLinearMap z;
        switch (inv.kind) {
            case Kind::Inert: {
                const QuadElem w = element_from_invariant(L, inv);
                const Series zeta = Series::constant(F, F.zeta());
                const Series wE = w.x() + w.y() * zeta;
                const Series x2 = (wE - Series::one(F)) * (zeta - zeta.sigma()).inverse();
                const Series x1 = Series::one(F) - x2 * zeta.sigma();
                z.A = detail::tensor_element(L, x1, x2);
                break;
            }
            case Kind::Ramified: {
                const int d = inv.d();
                const Mat2 P = detail::quad_power(QuadElem::zeta(L), inv.r / 2).regular();
                const Mat2 U = detail::tensor_element(L, Series::one(F), pi(d).scaled(xi));
                z.A = P * U;
                break;
            }
            case Kind::Split: {
                z.split_eigenbasis = true;
                if (inv.d2 < 0) {
                    z.A = Mat2::diag(pi((inv.r + inv.d2) / 4), pi((inv.r - inv.d2) / 4));
                } else {
                    const Series tau = inv.d2 == 0 ? Series::constant(F, xi)
                                                   : Series::one(F) + pi(inv.d()).scaled(xi);
                    z.A = Mat2::diag(pi(inv.r / 4), pi(inv.r / 4) * tau);
                }
                break;
            }
        }
        if (detail::square_has_invariant(L, z, inv)) return z;
    }
    throw InternalError("no template realizes " + inv.to_string());
}

/** The largest value of n(z, -) predicted from the invariant of z^2. */
inline int max_multiplicity(const NumInvariant& inv) {
    if (inv.d2 >= 0) return floor_div(inv.r, 4);
    return floor_div(inv.r + inv.d2, 4);  // floor(r/4 + d/2) with d = d2/2
}

/** The q^2 + 1 neighbours of a vertex, in residue-line order: pi-columns over F_{q^2}, then the bottom line. */
inline std::vector<Lattice> neighbors(const Lattice& v) {
    ensure(v.b() == 0, "vertex representatives have bottom exponent 0");
    const LocalField& F = v.field();
    std::vector<Lattice> out;
    out.reserve(F.fq2().size() + 1);
    for (FElem t : F.fq2())
        out.push_back(Lattice::from_params(F, Ring::OE, v.a() + 1, v.c() + Series::monomial(F, t, v.a()), 0));
    out.push_back(Lattice::from_params(F, Ring::OE, v.a() - 1, v.c(), 0));
    return out;
}

/** The canonical vertex representative (bottom exponent 0) of the class of a lattice. */
inline Lattice vertex_class(const Lattice& M) {
    ensure(M.ring() == Ring::OE, "tree vertices are O_E-lattices");
    return M.scaled(-M.b());
}

/**
 * Canonical representative modulo the translation diag(pi^2, 1) of the split apartment
 * (equivalently (pi, pi^{-1}) up to homothety): the top exponent is brought into {0, 1}.
 */
inline Lattice quotient_canonicalize(const Lattice& v) {
    ensure(v.b() == 0, "vertex representatives have bottom exponent 0");
    const int j = floor_div(v.a(), 2);
    return Lattice::from_params(v.field(), Ring::OE, v.a() - 2 * j, v.c().shifted(-2 * j), 0);
}

/** The five possible shapes of T(z). */
enum class ShapeKind { VertexBall, Edge, EdgeBall, Apartment, ApartmentBall };

struct ShapeDescriptor {
    ShapeKind kind = ShapeKind::VertexBall;
    int radius = 0;

    std::string to_string() const {
        switch (kind) {
            case ShapeKind::VertexBall: return "vertex_ball(" + std::to_string(radius) + ")";
            case ShapeKind::Edge: return "edge";
            case ShapeKind::EdgeBall: return "edge_ball(" + std::to_string(radius) + ")";
            case ShapeKind::Apartment: return "apartment";
            case ShapeKind::ApartmentBall: return "apartment_ball(" + std::to_string(radius) + ")";
        }
        return "?";
    }
    bool is_apartment() const { return kind == ShapeKind::Apartment || kind == ShapeKind::ApartmentBall; }
    friend bool operator==(const ShapeDescriptor& a, const ShapeDescriptor& b) {
        return a.kind == b.kind && a.radius == b.radius;
    }

    /** Canonical form: balls of radius 0 around an edge / apartment are the edge / apartment. */
    static ShapeDescriptor make(ShapeKind k, int radius) {
        if (k == ShapeKind::EdgeBall && radius == 0) return {ShapeKind::Edge, 0};
        if (k == ShapeKind::ApartmentBall && radius == 0) return {ShapeKind::Apartment, 0};
        if (k == ShapeKind::Edge || k == ShapeKind::Apartment) radius = 0;
        return {k, radius};
    }
};

/**
 * The shape of T(z) predicted from the invariant of z^2:
 *  - inert, r ≡ 0 (4): ball of radius d around a vertex;  inert, r ≡ 2 (4): an edge;
 *  - ramified, r ≡ 0 (4): ball of radius d around an edge;  ramified, r ≡ 2 (4): an edge;
 *  - split, d >= 0: ball of radius d around an apartment;  split, d < 0: an apartment.
 */
inline ShapeDescriptor predicted_shape(const NumInvariant& inv) {
    if (!tree_realizable(inv)) throw UsageError("invariant " + inv.to_string() + " is not tree-realizable");
    const bool r0 = ((inv.r % 4) + 4) % 4 == 0;
    switch (inv.kind) {
        case Kind::Inert: return r0 ? ShapeDescriptor::make(ShapeKind::VertexBall, inv.d()) : ShapeDescriptor::make(ShapeKind::Edge, 0);
        case Kind::Ramified: return r0 ? ShapeDescriptor::make(ShapeKind::EdgeBall, inv.d()) : ShapeDescriptor::make(ShapeKind::Edge, 0);
        case Kind::Split:
            return inv.d2 >= 0 ? ShapeDescriptor::make(ShapeKind::ApartmentBall, inv.d())
                               : ShapeDescriptor::make(ShapeKind::Apartment, 0);
    }
    return {};
}

/** Number of vertices of the shape itself (Γ0-quotient count for apartment kinds). */
inline Count shape_vertex_count(const ShapeDescriptor& s, int q) {
    switch (s.kind) {
        case ShapeKind::VertexBall: return 1 + (q + 1) * geometric_sum(q, s.radius - 1);
        case ShapeKind::Edge: return 2;
        case ShapeKind::EdgeBall: return 2 * geometric_sum(q, s.radius);
        case ShapeKind::Apartment: return 2;
        case ShapeKind::ApartmentBall: return 2 * ipow(q, s.radius);
    }
    return 0;
}

/**
 * #B(T, m): vertices within distance m of the shape (modulo the apartment translations for
 * apartment kinds).  Every vertex of T has q^2 + 1 neighbours; the edges leaving T number
 * (q^2 + 1) #T - 2 #edges(T), and each continues as a (q^2)-ary tree.
 */
inline Count ball_count(const ShapeDescriptor& s, int m, int q) {
    if (m < 0) throw UsageError("ball radius must be nonnegative");
    const Count Q = static_cast<Count>(q) * q;
    const Count nT = shape_vertex_count(s, q);
    const Count edges_T = s.is_apartment() ? nT : nT - 1;  // the quotient apartment carries a 2-cycle
    const Count exits = (Q + 1) * nT - 2 * edges_T;
    return nT + exits * geometric_sum(Q, m - 1);
}

/** An explored region of the tree around T(z): all vertices with n >= m - radius. */
struct TreeWindow {
    int q = 0;
    int m = 0;          ///< max n(z, -)
    int radius = 0;     ///< the window is {n >= m - radius}
    bool quotient = false;
    std::vector<Lattice> vertices;
    std::vector<int> n;                          ///< n(z, v)
    std::vector<std::vector<int>> nbr_index;     ///< neighbour indices (-1 outside the window)
    std::vector<std::vector<int>> nbr_n;         ///< neighbour multiplicities (always computed)
    std::vector<int> T;                          ///< indices with n = m
    std::vector<int> dist;                       ///< graph distance to T inside the window
    bool certificate = false;                    ///< strict decay on the boundary verified

    int floor_level() const { return m - radius; }
    std::size_t size() const { return vertices.size(); }
};

namespace detail {

inline Lattice canonical_vertex(const Lattice& v, bool quotient) { return quotient ? quotient_canonicalize(v) : v; }

}  // namespace detail

/** Climbs from the standard lattice along strictly increasing n; the end point maximizes n. */
inline std::pair<Lattice, int> hill_climb(const ConjLinearMap& z, bool quotient) {
    const LocalField& F = z.field();
    Lattice cur = Lattice::standard(F, Ring::OE);
    int cur_n = n_multiplicity(z, cur);
    for (int step = 0; step < 100000; ++step) {
        bool moved = false;
        for (const Lattice& nb : neighbors(cur)) {
            Lattice c = detail::canonical_vertex(nb, quotient);
            int v = n_multiplicity(z, c);
            if (v > cur_n) {
                cur = c;
                cur_n = v;
                moved = true;
                break;
            }
        }
        if (!moved) return {cur, cur_n};
    }
    throw InternalError("hill climb did not terminate");
}

/**
 * Explores {n >= m - radius} by breadth-first search from a maximizer and certifies completeness:
 * every neighbour outside the window must have n exactly one less than its parent, which sits on
 * the floor level.  Adjacent vertices never differ by more than 1 in n (checked).  A radius below
 * zero selects max(m, 0) + 1, but at least 3.
 */
inline TreeWindow compute_T(const ConjLinearMap& z, int radius = -1, bool quotient = false) {
    if (z.split_eigenbasis && !quotient) throw UsageError("split apartments are explored in quotient mode");
    TreeWindow W;
    W.q = z.field().q();
    W.quotient = quotient;
    auto [start, m] = hill_climb(z, quotient);
    W.m = m;
    W.radius = radius >= 0 ? radius : std::max(std::max(m, 0) + 1, 3);
    const int floor = W.floor_level();
    std::map<Lattice, int> index;
    auto add = [&](const Lattice& v, int nv) {
        index.emplace(v, static_cast<int>(W.vertices.size()));
        W.vertices.push_back(v);
        W.n.push_back(nv);
        W.nbr_index.emplace_back();
        W.nbr_n.emplace_back();
    };
    add(start, m);
    bool cert = true;
    for (std::size_t i = 0; i < W.vertices.size(); ++i) {
        const Lattice v = W.vertices[i];
        const int nv = W.n[i];
        for (const Lattice& raw : neighbors(v)) {
            Lattice c = detail::canonical_vertex(raw, quotient);
            int idx;
            int nc;
            auto it = index.find(c);
            if (it != index.end()) {
                idx = it->second;
                nc = W.n[idx];
            } else {
                nc = n_multiplicity(z, c);
                if (nc > m) throw InternalError("hill climb stopped below the maximum of n");
                if (nc >= floor) {
                    idx = static_cast<int>(W.vertices.size());
                    add(c, nc);
                } else {
                    idx = -1;
                    if (!(nc == floor - 1 && nv == floor)) cert = false;
                }
            }
            if (std::abs(nc - nv) > 1) throw InternalError("n jumps by more than 1 across an edge");
            W.nbr_index[i].push_back(idx);
            W.nbr_n[i].push_back(nc);
        }
    }
    W.certificate = cert;
    if (!cert) throw InternalError("window boundary does not decay strictly; window too small");
    // T and distances to T by multi-source breadth-first search.
    W.dist.assign(W.size(), -1);
    std::deque<int> queue;
    for (std::size_t i = 0; i < W.size(); ++i)
        if (W.n[i] == m) {
            W.T.push_back(static_cast<int>(i));
            W.dist[i] = 0;
            queue.push_back(static_cast<int>(i));
        }
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (int j : W.nbr_index[i])
            if (j >= 0 && W.dist[j] < 0) {
                W.dist[j] = W.dist[i] + 1;
                queue.push_back(j);
            }
    }
    return W;
}

/** Convenience: build z from the invariant and explore (quotient mode for split algebras). */
inline TreeWindow explore_invariant(const NumInvariant& inv, int q, int radius = -1) {
    ConjLinearMap z = conj_linear_from_invariant(inv, q);
    return compute_T(z, radius, z.split_eigenbasis);
}

/**
 * Structural classification of T from the window: the subgraph on T is stripped of leaves
 * layer by layer.  A finite tree reduces to a centre vertex or edge; the quotient of an
 * apartment-like T reduces to its 2-cycle.  The stripping depth is the radius, and the ball is
 * then checked to be (q+1)-regular: interior vertices have T-valency q+1, leaves sit at the
 * full radius.
 */
inline ShapeDescriptor classify_shape(const TreeWindow& W) {
    const int q = W.q;
    std::map<int, int> local;  // window index -> position in T
    for (std::size_t k = 0; k < W.T.size(); ++k) local[W.T[k]] = static_cast<int>(k);
    const int nT = static_cast<int>(W.T.size());
    std::vector<std::vector<int>> adj(nT);
    for (int k = 0; k < nT; ++k)
        for (int j : W.nbr_index[W.T[k]])
            if (j >= 0 && local.count(j)) adj[k].push_back(local[j]);
    std::vector<int> degree(nT);
    for (int k = 0; k < nT; ++k) degree[k] = static_cast<int>(adj[k].size());

    // Peel leaves; layer[k] = round in which k was removed (-1: core).
    std::vector<int> layer(nT, -1);
    std::vector<int> deg = degree;
    int alive = nT, rounds = 0;
    while (true) {
        std::vector<int> leaves;
        for (int k = 0; k < nT; ++k)
            if (layer[k] < 0 && deg[k] <= 1) leaves.push_back(k);
        // Stop before removing a centre vertex or centre edge of a finite tree.
        if (leaves.empty() || alive <= 2) break;
        if (static_cast<int>(leaves.size()) == alive) break;
        for (int k : leaves) {
            layer[k] = rounds;
            --alive;
            for (int j : adj[k])
                if (layer[j] < 0) --deg[j];
        }
        ++rounds;
    }
    std::vector<int> core;
    for (int k = 0; k < nT; ++k)
        if (layer[k] < 0) core.push_back(k);
    const int R = rounds;

    ShapeDescriptor s;
    if (W.quotient) {
        ensure(core.size() == 2, "quotient core of T is not a 2-cycle");
        int between = 0;
        for (int j : adj[core[0]])
            if (j == core[1]) ++between;
        ensure(between == 2, "quotient core of T is not a 2-cycle");
        s = ShapeDescriptor::make(ShapeKind::ApartmentBall, R);
    } else if (core.size() == 1) {
        s = ShapeDescriptor::make(ShapeKind::VertexBall, R);
    } else {
        ensure(core.size() == 2, "T does not reduce to a vertex or an edge");
        ensure(std::find(adj[core[0]].begin(), adj[core[0]].end(), core[1]) != adj[core[0]].end(),
               "centre of T is not an edge");
        s = ShapeDescriptor::make(ShapeKind::EdgeBall, R);
    }
    // Regularity: removal round r of a vertex equals R - 1 - (distance from the core); interior vertices
    // (and core vertices when R > 0) have valency q + 1, outermost vertices valency 1.
    for (int k = 0; k < nT; ++k) {
        const bool outer = layer[k] == 0;
        if (R == 0) {
            const int expect = W.quotient ? 2 : static_cast<int>(core.size()) - 1;
            ensure(degree[k] == expect, "T of radius 0 has unexpected valency");
        } else if (outer) {
            ensure(degree[k] == 1, "leaf of T has valency != 1");
        } else {
            ensure(degree[k] == q + 1, "interior vertex of T has valency != q + 1");
        }
    }
    ensure(shape_vertex_count(s, q) == nT, "T has the wrong number of vertices for " + s.to_string());
    return s;
}

/** Checks n(z, L) = m - d(L, T) on every window vertex. */
inline bool distance_law_check(const TreeWindow& W) {
    for (std::size_t i = 0; i < W.size(); ++i)
        if (W.dist[i] < 0 || W.n[i] != W.m - W.dist[i]) return false;
    return true;
}

/** Census #{v : d(v, T) <= k} from the window (requires k <= radius). */
inline Count ball_census(const TreeWindow& W, int k) {
    if (k > W.radius) throw UsageError("census radius exceeds the explored window");
    Count c = 0;
    for (int d : W.dist)
        if (d >= 0 && d <= k) ++c;
    return c;
}

/** Number of window vertices with n >= level (requires level >= floor). */
inline Count level_census(const TreeWindow& W, int level) {
    if (level < W.floor_level()) throw UsageError("level below the explored window");
    Count c = 0;
    for (int v : W.n)
        if (v >= level) ++c;
    return c;
}

}  // namespace atf
