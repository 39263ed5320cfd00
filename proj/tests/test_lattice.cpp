#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "atf/latcount.hpp"
#include "atf/lattice.hpp"

using namespace atf;

namespace {

const LocalField& field(int q) { return LocalField::get(q, 32); }

Series pi(const LocalField& F, int e) { return Series::pi_power(F, e); }

Lattice diag_lattice(const LocalField& F, int a, int b) {
    return Lattice::from_basis(Mat2::diag(pi(F, a), pi(F, b)), Ring::OF);
}

/**
 * Oracle: every lattice between M0 = O^2 and pi^n O^2, enumerated as the span of two
 * arbitrary vectors of (O/pi^n)^2 together with pi^n O^2, deduplicated.
 */
std::set<Lattice> all_lattices_between_standard(const LocalField& F, int n) {
    const std::vector<Series> residues = residue_polynomials(F, F.fq(), 0, n);
    std::set<Lattice> out;
    const Series P = pi(F, n), Z = Series::zero(F);
    for (const Series& x1 : residues)
        for (const Series& y1 : residues)
            for (const Series& x2 : residues)
                for (const Series& y2 : residues)
                    out.insert(Lattice::span({{x1, y1}, {x2, y2}, {P, Z}, {Z, P}}, Ring::OF));
    return out;
}

}  // namespace

TEST_CASE("Hermite normalization", "[lattice]") {
    const LocalField& F = field(2);
    const Series one = Series::one(F), zero = Series::zero(F);
    const Lattice O = Lattice::standard(F, Ring::OF);
    CHECK(Lattice::from_basis(Mat2(one, zero, zero, one), Ring::OF) == O);
    CHECK(Lattice::from_basis(Mat2(zero, one, one, zero), Ring::OF) == O);
    const Lattice M = Lattice::from_basis(Mat2(pi(F, 1), one, zero, one), Ring::OF);
    CHECK(M.a() + M.b() == 1);
    const Lattice N = Lattice::from_basis(Mat2(one, zero, zero, pi(F, 1)), Ring::OF);
    // Same index, but distinct lattices: mutual containment decides.
    CHECK(M.contains(M));
    CHECK(M != N);
    CHECK_FALSE(M.contains(N));
    CHECK(Lattice::from_basis(M.basis(), Ring::OF) == M);
}

TEST_CASE("relative position and index", "[lattice]") {
    const LocalField& F = field(3);
    const Lattice O = Lattice::standard(F, Ring::OF);
    CHECK(relative_position(O, O) == std::make_pair(0, 0));
    CHECK(relative_position(O, O.scaled(1)) == std::make_pair(1, 1));
    const QuadAlgebra split(Kind::Split, F), ram(Kind::Ramified, F);
    const QuadElem w = element_from_invariant(split, {Kind::Split, 4, -2});
    CHECK(relative_position(O, O.applied(w)) == std::make_pair(1, 3));
    CHECK(lattice_index(O, O.scaled(1)) == 2);
    CHECK(lattice_index(O, O) == 0);
    CHECK(lattice_index(O, O.applied(QuadElem::zeta(ram))) == 1);
    CHECK_THROWS_AS(lattice_index(O.scaled(1), O), UsageError);
    // Negative positions when M1 is not inside M0.
    CHECK(relative_position(O, O.scaled(-1)) == std::make_pair(-1, -1));
}

TEST_CASE("sublattice enumeration examples", "[lattice]") {
    for (int q : {2, 3}) {
        const LocalField& F = field(q);
        const Lattice O = Lattice::standard(F, Ring::OF);
        CHECK(static_cast<int>(sublattices_between(O, O.scaled(1), 1).size()) == q + 1);
        CHECK(sublattices_between(O, O, 0) == std::vector<Lattice>{O});
        CHECK(sublattices_between(O, diag_lattice(F, 0, 2), 1).size() == 1);
        CHECK(sublattices_between(O, O.scaled(1), 3).empty());
    }
}

TEST_CASE("enumeration matches an independent span oracle", "[lattice][oracle]") {
    for (int q : {2, 3}) {
        const LocalField& F = field(q);
        const int n = q == 2 ? 2 : 1;
        const Lattice O = Lattice::standard(F, Ring::OF);
        const std::set<Lattice> oracle = all_lattices_between_standard(F, n);
        std::set<Lattice> enumerated;
        for (int k = 0; k <= 2 * n; ++k)
            for (const Lattice& L : sublattices_between(O, O.scaled(n), k)) {
                CHECK(lattice_index(O, L) == k);
                CHECK(enumerated.insert(L).second);
            }
        CHECK(enumerated == oracle);
    }
}

TEST_CASE("sublattice counts equal the closed form for all positions", "[lattice][property]") {
    std::mt19937_64 rng(17);
    for (int q : {2, 3}) {
        const LocalField& F = field(q);
        const Lattice O = Lattice::standard(F, Ring::OF);
        for (int b = 0; b <= 4; ++b)
            for (int a = 0; a <= b; ++a) {
                const Lattice M1 = Lattice::from_basis(random_unimodular(F, rng) * Mat2::diag(pi(F, a), pi(F, b)), Ring::OF);
                REQUIRE(relative_position(O, M1) == std::make_pair(a, b));
                for (int k = 0; k <= a + b; ++k) {
                    const auto subs = sublattices_between(O, M1, k);
                    CHECK(static_cast<Count>(subs.size()) == phi(a, b, k, q));
                    CHECK(std::set<Lattice>(subs.begin(), subs.end()).size() == subs.size());
                }
            }
    }
}

TEST_CASE("relative position is invariant under invertible maps", "[lattice][property]") {
    std::mt19937_64 rng(23);
    const LocalField& F = field(3);
    const QuadAlgebra inert(Kind::Inert, F);
    for (int trial = 0; trial < 40; ++trial) {
        const Mat2 g = random_unimodular(F, rng);
        const Lattice M0 = Lattice::from_basis(g * Mat2::diag(pi(F, trial % 2), Series::one(F)), Ring::OF);
        const Lattice M1 = M0.applied(random_unimodular(F, rng) * Mat2::diag(pi(F, 1), pi(F, 2 + trial % 3)));
        const Mat2 x = random_unimodular(F, rng) * Mat2::diag(pi(F, -1), pi(F, 2));
        CHECK(relative_position(M0.applied(x), M1.applied(x)) == relative_position(M0, M1));
        const QuadElem w = element_from_invariant(inert, {Kind::Inert, 2, 2});
        CHECK(relative_position(M0.applied(w), M1.applied(w)) == relative_position(M0, M1));
    }
}

TEST_CASE("canonical form is a congruence under unimodular column operations", "[lattice][property]") {
    std::mt19937_64 rng(29);
    for (int q : {2, 3}) {
        const LocalField& F = field(q);
        for (int trial = 0; trial < 50; ++trial) {
            const Mat2 B = random_unimodular(F, rng) * Mat2::diag(pi(F, trial % 3), pi(F, trial % 4));
            const Mat2 U = random_unimodular(F, rng);
            CHECK(Lattice::from_basis(B * U, Ring::OF) == Lattice::from_basis(B, Ring::OF));
        }
    }
}

TEST_CASE("apply_element", "[lattice]") {
    const LocalField& F = field(3);
    const QuadAlgebra ram(Kind::Ramified, F), inert(Kind::Inert, F);
    const Lattice O = Lattice::standard(F, Ring::OF);
    CHECK(O.applied(QuadElem::from_base(inert, pi(F, 1))) == O.scaled(1));
    const QuadElem u(inert, Series::one(F), Series::one(F));
    CHECK(O.applied(u) == O);
    const Lattice V = O.applied(QuadElem::zeta(ram));
    CHECK(O.contains(V));
    CHECK(lattice_index(O, V) == QuadElem::zeta(ram).norm().valuation());
}

TEST_CASE("conductors of lattices", "[lattice]") {
    const LocalField& F = field(3);
    for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
        const QuadAlgebra L(k, F);
        CHECK(conductor_of_lattice(L, maximal_order_lattice(L)) == 0);
        for (int c = 1; c <= 3; ++c) CHECK(conductor_of_lattice(L, order_of_conductor(L, c)) == c);
        const QuadElem u(L, Series::one(F), Series::one(F));
        if (u.norm().valuation() == 0) CHECK(conductor_of_lattice(L, order_of_conductor(L, 2).applied(u)) == 2);
        CHECK_THROWS_AS(conductor_of_lattice(L, maximal_order_lattice(L).scaled(1)), UsageError);
    }
}

TEST_CASE("unit conductor orbits", "[lattice][property]") {
    CHECK(unit_conductor_orbit(QuadAlgebra(Kind::Inert, field(2)), 0).size() == 1);
    CHECK(unit_conductor_orbit(QuadAlgebra(Kind::Inert, field(2)), 1).size() == 3);
    CHECK(unit_conductor_orbit(QuadAlgebra(Kind::Split, field(3)), 2).size() == 6);
    for (int q : {2, 3}) {
        for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
            if (k == Kind::Ramified && q == 2) continue;
            const QuadAlgebra L(k, field(q));
            const Lattice OL = maximal_order_lattice(L);
            for (int c = 1; c <= 3; ++c) {
                const auto orbit = unit_conductor_orbit(L, c);
                CHECK(static_cast<Count>(orbit.size()) == L.i_index() * ipow(q, c - 1));
                // Oracle: every index-c sublattice of O_L with conductor c and O_L-span O_L is in the orbit.
                std::set<Lattice> found(orbit.begin(), orbit.end());
                Count direct = 0;
                for (const Lattice& M : sublattices_between(OL, OL.scaled(c), c))
                    if (order_span(L, M) == OL && multiplier_conductor(L, M) == c) {
                        ++direct;
                        CHECK(found.count(M) == 1);
                    }
                CHECK(direct == static_cast<Count>(orbit.size()));
            }
        }
    }
}
