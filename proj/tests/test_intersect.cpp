#include <catch_amalgamated.hpp>

#include "atf/intersect.hpp"

using namespace atf;

namespace {

/** Matched invariants with r <= r_max, |d2| <= 4 that the geometric recipe can build at q. */
std::vector<NumInvariant> matched(Hasse lambda, int q, int r_max) {
    std::vector<NumInvariant> out;
    for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
        if (k == Kind::Ramified && q % 2 == 0) continue;
        for (const NumInvariant& inv : valid_invariants(k, -4, r_max, -4, 4))
            if (matching_exists(lambda, inv) && geometric_available(lambda, inv, q)) out.push_back(inv);
    }
    return out;
}

Count base_value(const NumInvariant& inv) {
    if (inv.r <= 0) return 0;
    return inv.kind == Kind::Inert ? inv.r : inv.kind == Kind::Ramified ? inv.r / 2 : 0;
}

}  // namespace

TEST_CASE("geometric constants", "[intersect]") {
    CHECK(conormal_degree(2) == 3);
    CHECK(self_intersection(3) == -10);
    CHECK(component_factor(Kind::Inert) == 2);
    CHECK(component_factor(Kind::Ramified) == 1);
    CHECK(parse_hasse("3/4") == Hasse::ThreeQuarter);
    CHECK_THROWS_AS(parse_hasse("1/2"), UsageError);
}

TEST_CASE("closed-form intersection numbers", "[intersect]") {
    CHECK(int_closed(Hasse::Quarter, {Kind::Inert, 4, 0}, 2) == 4);
    CHECK(int_closed(Hasse::Quarter, {Kind::Ramified, 6, 0}, 3) == 3);
    CHECK(int_closed(Hasse::Quarter, {Kind::Split, 8, 0}, 3) == 0);
    CHECK(int_closed(Hasse::Quarter, {Kind::Inert, -2, 0}, 3) == 0);
    for (int q : {2, 3}) {
        CHECK(int_closed(Hasse::ThreeQuarter, {Kind::Inert, 2, 0}, q) == 2 * q + 2);
        CHECK(int_closed(Hasse::ThreeQuarter, {Kind::Split, 2, 0}, q) == 2 * q);
    }
    // The reduced datum (ramified, 0, 0) has T an edge, so N = 2 and Int = q N + r/2 = 2q + 1.
    CHECK(int_closed(Hasse::ThreeQuarter, {Kind::Ramified, 2, 0}, 3) == 2 * 3 + 1);
    CHECK_THROWS_AS(int_closed(Hasse::ThreeQuarter, {Kind::Split, 4, 0}, 3), UsageError);
    CHECK_THROWS_AS(int_closed(Hasse::Half, {Kind::Inert, 2, 0}, 3), UsageError);
}

TEST_CASE("invariant 1/4: geometric recipe examples", "[intersect]") {
    const IntResult a = int_geometric(Hasse::Quarter, {Kind::Inert, 4, 0}, 2);
    CHECK(a.int0 == 2);
    CHECK(a.value == 4);
    const IntResult b = int_geometric(Hasse::Quarter, {Kind::Ramified, 2, 0}, 3);
    CHECK(b.artinian == 1);
    CHECK(b.pure_sum == 0);
    CHECK(b.value == 1);
    CHECK(int_geometric(Hasse::Quarter, {Kind::Split, 8, 0}, 3).value == 0);
}

TEST_CASE("invariant 3/4: geometric recipe examples", "[intersect]") {
    const IntResult a = int_geometric(Hasse::ThreeQuarter, {Kind::Inert, 2, 0}, 3);
    CHECK(a.N == 1);
    CHECK(a.value == 2 * 3 + 2);
    CHECK(a.assembly_direct == a.assembly_ledger);
    CHECK(int_geometric(Hasse::ThreeQuarter, {Kind::Ramified, 2, 0}, 3).value == 2 * 3 + 1);
    CHECK(int_geometric(Hasse::ThreeQuarter, {Kind::Inert, 0, 0}, 3).value == 0);
}

TEST_CASE("invariant 1/4: geometric recipe equals the closed form", "[intersect][property]") {
    for (int q : {2, 3})
        for (const NumInvariant& inv : matched(Hasse::Quarter, q, 8)) {
            INFO(inv.to_string() << " q=" << q);
            const IntResult g = int_geometric(Hasse::Quarter, inv, q);
            CHECK(g.value == int_closed(Hasse::Quarter, inv, q));
            CHECK(g.int0 == (inv.kind == Kind::Split || inv.r <= 0 ? 0 : inv.r / 2));
            CHECK(g.value == base_value(inv));
            CHECK(g.nonzero_outside_T == 0);
        }
}

TEST_CASE("invariant 3/4: both assemblies agree with the closed form", "[intersect][property]") {
    for (int q : {2, 3})
        for (const NumInvariant& inv : matched(Hasse::ThreeQuarter, q, 8)) {
            INFO(inv.to_string() << " q=" << q);
            const IntResult g = int_geometric(Hasse::ThreeQuarter, inv, q);
            CHECK(g.assembly_direct == g.assembly_ledger);
            const Count closed = int_closed(Hasse::ThreeQuarter, inv, q);
            CHECK(g.value == closed);
            if (inv.r > 0) {
                const Count par = to_count(orbital_closed(TestFn::Par, inv, q).central_value());
                CHECK(2 * par == component_factor(inv.kind) * g.N);
                CHECK(closed == 2 * q * par + base_value(inv));
            }
        }
}

TEST_CASE("tree count and orbital count of {n >= 0} agree", "[intersect][property]") {
    for (int q : {2, 3, 5})
        for (Kind k : {Kind::Split, Kind::Inert, Kind::Ramified}) {
            if (k == Kind::Ramified && q % 2 == 0) continue;
            for (const NumInvariant& inv : valid_invariants(k, 2, 12, -6, 6))
                if (matching_exists(Hasse::ThreeQuarter, inv))
                    CHECK(nonnegative_count_closed(reduced_invariant(inv), q) == nonnegative_count_from_orbital(inv, q));
        }
}
