#include <catch_amalgamated.hpp>

#include <random>

#include "atf/series.hpp"

using namespace atf;

namespace {

/** Oracle: schoolbook product of integer coefficient lists modulo p. */
std::vector<int> naive_product(const std::vector<int>& a, const std::vector<int>& b, int p) {
    std::vector<int> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
}

Series to_series(const LocalField& F, int lo, const std::vector<int>& c, int prec = kExact) {
    std::vector<FElem> e;
    for (int x : c) e.push_back(F.K().from_int(x));
    return Series::from_coeffs(F, lo, e, prec);
}

}  // namespace

TEST_CASE("valuations of simple series", "[series]") {
    const LocalField& F = LocalField::get(3, 16);
    CHECK(Series::pi_power(F, 3).valuation() == 3);
    CHECK((Series::one(F) + Series::pi_power(F, 1)).valuation() == 0);
    CHECK(Series::zero(F).valuation() == kExact);
    const Series tiny = Series::from_coeffs(F, 0, {}, 5);
    CHECK_THROWS_AS(tiny.valuation(), PrecisionError);
    CHECK(tiny.valuation_lower_bound() == 5);
}

TEST_CASE("products agree with schoolbook multiplication", "[series][property]") {
    std::mt19937_64 rng(11);
    for (int p : {2, 3, 5}) {
        const LocalField& F = LocalField::get(p, 24);
        std::uniform_int_distribution<int> digit(0, p - 1), len(1, 7), shift(-3, 3);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int> a(len(rng)), b(len(rng));
            for (int& x : a) x = digit(rng);
            for (int& x : b) x = digit(rng);
            a[0] = 1 + digit(rng) % (p - 1);
            b[0] = 1 + digit(rng) % (p - 1);
            const int la = shift(rng), lb = shift(rng);
            CHECK(to_series(F, la, a) * to_series(F, lb, b) == to_series(F, la + lb, naive_product(a, b, p)));
        }
    }
}

TEST_CASE("inverse of a unit series", "[series]") {
    const LocalField& F = LocalField::get(5, 20);
    const Series u = to_series(F, 0, {2, 1, 0, 3});
    const Series prod = u * u.inverse();
    // Exact times truncated: equal to 1 up to the working precision.
    CHECK(prod.valuation() == 0);
    CHECK(prod.truncated_below(prod.precision()) == Series::one(F));
    const Series m = Series::pi_power(F, -2).scaled(F.K().from_int(3));
    CHECK(m * m.inverse() == Series::one(F));
}

TEST_CASE("precision tracking of sums", "[series]") {
    const LocalField& F = LocalField::get(2, 16);
    const Series a = to_series(F, 0, {1, 1}, 6);
    const Series b = to_series(F, 0, {1, 1, 1}, 4);
    const Series s = a - b;
    CHECK(s.precision() == 4);
    CHECK(s.valuation() == 2);
    CHECK_THROWS_AS((a - a).valuation(), PrecisionError);
}

TEST_CASE("Frobenius fixes exactly the base field", "[series]") {
    for (int q : {2, 3, 4, 5}) {
        const LocalField& F = LocalField::get(q, 8);
        CHECK(static_cast<int>(F.fq().size()) == q);
        CHECK(static_cast<int>(F.fq2().size()) == q * q);
        CHECK_FALSE(F.in_fq(F.zeta()));
        CHECK(F.in_fq(F.norm(F.zeta())));
        CHECK(F.in_fq(F.trace(F.zeta())));
        CHECK(F.trace(F.trace_unit()) != 0);
        const Series z = Series::constant(F, F.zeta());
        CHECK(z.sigma().sigma() == z);
        CHECK_FALSE(z.in_base_field());
    }
}

TEST_CASE("prime power decomposition", "[series]") {
    CHECK(LocalField::prime_power(8) == std::make_pair(2, 3));
    CHECK(LocalField::prime_power(9) == std::make_pair(3, 2));
    CHECK_THROWS_AS(LocalField::prime_power(6), UsageError);
    CHECK_THROWS_AS(LocalField::get(32, 8), UsageError);
}
