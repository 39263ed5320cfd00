#include <catch_amalgamated.hpp>

#include <random>

#include "atf/quad.hpp"

using namespace atf;

namespace {

const LocalField& field(int q) { return LocalField::get(q, 64); }

Series pi(const LocalField& F, int e) { return Series::pi_power(F, e); }

/** Oracle: 2x2 multiplication of regular-representation matrices, written out by hand. */
bool regular_is_multiplicative(const QuadElem& a, const QuadElem& b) {
    const Mat2 A = a.regular(), B = b.regular(), C = (a * b).regular();
    const Mat2 AB = A * B;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (AB(i, j) != C(i, j)) return false;
    return true;
}

QuadElem random_unit(const QuadAlgebra& L, std::mt19937_64& rng) {
    const LocalField& F = L.field();
    std::uniform_int_distribution<size_t> pick(0, F.fq().size() - 1);
    while (true) {
        std::vector<FElem> x(3), y(3);
        for (auto& c : x) c = F.fq()[pick(rng)];
        for (auto& c : y) c = F.fq()[pick(rng)];
        QuadElem u(L, Series::from_coeffs(F, 0, x), Series::from_coeffs(F, 0, y));
        if (u.norm().known_nonzero() && u.norm().valuation() == 0) return u;
    }
}

}  // namespace

TEST_CASE("norms and conjugation in the three algebras", "[quad]") {
    const LocalField& F2 = field(2);
    const LocalField& F3 = field(3);
    const QuadAlgebra split(Kind::Split, F2), inert(Kind::Inert, F2), ram(Kind::Ramified, F3);
    const QuadElem w = QuadElem::from_components(split, pi(F2, 1), pi(F2, 3));
    CHECK(w.norm().valuation() == 4);
    CHECK(QuadElem::zeta(ram).norm() == -pi(F3, 1));
    CHECK(QuadElem::zeta(inert).norm().valuation() == 0);
    CHECK(QuadElem::zeta(inert).norm().in_base_field());
    // Split conjugation swaps the components.
    auto [a, b] = w.conj().components();
    CHECK(a == pi(F2, 3));
    CHECK(b == pi(F2, 1));
}

TEST_CASE("ramified algebras require odd q", "[quad]") {
    CHECK_THROWS_AS(QuadAlgebra(Kind::Ramified, field(2)), UsageError);
    CHECK_THROWS_AS(QuadAlgebra(Kind::Ramified, field(4)), UsageError);
}

TEST_CASE("numerical invariants of sample elements", "[quad]") {
    const LocalField& F3 = field(3);
    const QuadAlgebra ram(Kind::Ramified, F3), split(Kind::Split, F3), inert(Kind::Inert, F3);
    CHECK(numerical_invariant(QuadElem::zeta(ram)) == NumInvariant{Kind::Ramified, 1, -1});
    CHECK(numerical_invariant(QuadElem::from_components(split, pi(F3, 1), pi(F3, 3))) == NumInvariant{Kind::Split, 4, -2});
    CHECK(numerical_invariant(QuadElem::zeta(inert).scaled(pi(F3, 2))) == NumInvariant{Kind::Inert, 4, 0});
    CHECK_THROWS_AS(numerical_invariant(QuadElem::one(inert)), UsageError);
}

TEST_CASE("canonical elements from invariants", "[quad]") {
    const LocalField& F3 = field(3);
    const QuadAlgebra ram(Kind::Ramified, F3), split(Kind::Split, F3), inert(Kind::Inert, F3);
    // (ramified, 3, -1/2) -> pi * varpi.
    const QuadElem w = element_from_invariant(ram, {Kind::Ramified, 3, -1});
    CHECK(w.x().is_exact_zero());
    CHECK(w.y() == pi(F3, 1));
    // (inert, 2, 1) -> pi (1 + pi zeta).
    const QuadElem v = element_from_invariant(inert, {Kind::Inert, 2, 2});
    CHECK(v.x() == pi(F3, 1));
    CHECK(v.y() == pi(F3, 2));
    // (split, 2, 0) needs distinct unit residues: realized over F_3 by (pi, 2 pi).
    const QuadElem s = element_from_invariant(split, {Kind::Split, 2, 0});
    CHECK(numerical_invariant(s) == NumInvariant{Kind::Split, 2, 0});
    CHECK_THROWS_AS(element_from_invariant(QuadAlgebra(Kind::Split, field(2)), {Kind::Split, 2, 0}), UsageError);
    CHECK_THROWS_AS(element_from_invariant(inert, {Kind::Inert, 3, 0}), UsageError);
    CHECK_THROWS_AS(element_from_invariant(inert, {Kind::Split, 2, 2}), UsageError);
}

TEST_CASE("validity classification", "[quad]") {
    CHECK(NumInvariant{Kind::Inert, 2, 0}.valid());
    CHECK_FALSE(NumInvariant{Kind::Inert, 2, -2}.valid());
    CHECK_FALSE(NumInvariant{Kind::Inert, 3, 2}.valid());
    CHECK(NumInvariant{Kind::Ramified, 3, -1}.valid());
    CHECK_FALSE(NumInvariant{Kind::Ramified, 2, -1}.valid());
    CHECK_FALSE(NumInvariant{Kind::Ramified, 3, -3}.valid());
    CHECK(NumInvariant{Kind::Split, 3, -1}.valid());
    CHECK(NumInvariant{Kind::Split, 4, -2}.valid());
    CHECK_FALSE(NumInvariant{Kind::Split, 4, -1}.valid());
    CHECK_FALSE(NumInvariant{Kind::Split, 2, 1}.valid());
}

TEST_CASE("round trip and exhaustive classification", "[quad][property]") {
    for (int q : {2, 3, 4, 5}) {
        const LocalField& F = field(q);
        for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
            if (k == Kind::Ramified && q % 2 == 0) continue;
            const QuadAlgebra L(k, F);
            for (int r = -4; r <= 10; ++r)
                for (int d2 = -8; d2 <= 8; ++d2) {
                    const NumInvariant inv{k, r, d2};
                    const bool needs_second_unit = k == Kind::Split && d2 == 0 && q == 2;
                    if (inv.valid() && !needs_second_unit) {
                        CHECK(numerical_invariant(element_from_invariant(L, inv)) == inv);
                    } else {
                        CHECK_THROWS_AS(element_from_invariant(L, inv), UsageError);
                    }
                }
        }
    }
}

TEST_CASE("invariant is unchanged by unit twists w -> u w conj(u)", "[quad][property]") {
    std::mt19937_64 rng(3);
    for (int q : {3, 5}) {
        const LocalField& F = field(q);
        for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
            const QuadAlgebra L(k, F);
            for (const NumInvariant& inv : valid_invariants(k, 1, 8, -4, 4)) {
                const QuadElem w = element_from_invariant(L, inv);
                const QuadElem u = random_unit(L, rng);
                CHECK(numerical_invariant(u * w * u.conj()) == inv);
            }
        }
    }
}

TEST_CASE("algebra identities", "[quad][property]") {
    std::mt19937_64 rng(5);
    for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
        const QuadAlgebra L(k, field(3));
        for (int i = 0; i < 30; ++i) {
            const QuadElem a = random_unit(L, rng), b = random_unit(L, rng).scaled(pi(L.field(), i % 3));
            CHECK((a.conj().conj() - a).x().is_exact_zero());
            CHECK((a.conj().conj() - a).y().is_exact_zero());
            CHECK((a * b).norm() == a.norm() * b.norm());
            CHECK((a * a.conj()).y().is_exact_zero());
            CHECK(a.trace().in_base_field());
            CHECK(a.norm().in_base_field());
            CHECK(regular_is_multiplicative(a, b));
            const QuadElem one = a * a.inverse();
            CHECK(one.y().valuation_lower_bound() >= 20);
        }
    }
}

TEST_CASE("block invariant is a characteristic polynomial", "[quad]") {
    const LocalField& F = field(3);
    const Mat2 I = Mat2::identity(F);
    const Series al = pi(F, 1), be = pi(F, 2);
    const MonicQuadratic h = block_invariant(I, Mat2::diag(al, be), I, I);
    CHECK(h.c1 == -(al + be));
    CHECK(h.c0 == al * be);
    const MonicQuadratic deg = block_invariant(I, I, I, I);
    CHECK(deg.discriminant().is_exact_zero());
    const QuadAlgebra ram(Kind::Ramified, F);
    const MonicQuadratic m = block_invariant(I, QuadElem::zeta(ram).regular(), I, I);
    CHECK(m.c1.is_exact_zero());
    CHECK(m.c0 == -pi(F, 1));
    CHECK_THROWS_AS(block_invariant(Mat2::diag(Series::one(F), Series::zero(F)), I, I, I), UsageError);
}

TEST_CASE("functional equation signs", "[quad]") {
    CHECK(epsilon_sign(2, 3, 1) == 1);
    CHECK(epsilon_sign(2, 2, 2) == 1);
    CHECK(epsilon_sign(2, 3, 2) == -1);
    for (int r = -3; r <= 6; ++r) {
        CHECK(epsilon_sign(2, 1, r) == (r % 2 == 0 ? -1 : 1));
        CHECK(epsilon_sign(2, 2, r) == (r % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("matching predicate", "[quad]") {
    CHECK(matching_exists(Hasse::ThreeQuarter, {Kind::Inert, 2, 0}));
    CHECK(matching_exists(Hasse::Quarter, {Kind::Split, 4, 0}));
    CHECK_FALSE(matching_exists(Hasse::Quarter, {Kind::Split, 4, -2}));
    CHECK(matching_exists(Hasse::ThreeQuarter, {Kind::Split, 4, -2}));
    CHECK_FALSE(matching_exists(Hasse::Quarter, {Kind::Ramified, 3, -1}));
    CHECK_THROWS_AS(matching_exists(Hasse::Half, {Kind::Inert, 2, 0}), UsageError);
    // Exactly one of the two Hasse invariants matches every valid even-r invariant of a split algebra.
    for (const NumInvariant& inv : valid_invariants(Kind::Split, -4, 10, -6, 6))
        if (inv.r % 2 == 0)
            CHECK(matching_exists(Hasse::Quarter, inv) != matching_exists(Hasse::ThreeQuarter, inv));
}

TEST_CASE("index of the unit group of the order of conductor 1", "[quad]") {
    CHECK(QuadAlgebra::i_index_of(Kind::Inert, 3) == 4);
    CHECK(QuadAlgebra::i_index_of(Kind::Ramified, 3) == 3);
    CHECK(QuadAlgebra::i_index_of(Kind::Split, 3) == 2);
}

TEST_CASE("textual invariants", "[quad]") {
    CHECK(NumInvariant::parse("ram:3:-1") == NumInvariant{Kind::Ramified, 3, -1});
    CHECK(NumInvariant{Kind::Inert, 2, 0}.to_string() == "inert:2:0");
    CHECK_THROWS_AS(NumInvariant::parse("ram:3"), UsageError);
    CHECK_THROWS_AS(NumInvariant::parse("ram:x:1"), UsageError);
    CHECK_THROWS_AS(NumInvariant::parse("cubic:2:0"), UsageError);
}
