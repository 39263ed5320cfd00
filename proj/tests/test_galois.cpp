#include <catch_amalgamated.hpp>

#include "atf/galois.hpp"

using namespace atf;

TEST_CASE("prime fields agree with modular integer arithmetic", "[galois]") {
    for (int p : {2, 3, 5, 7, 11, 13}) {
        GaloisField K(p, 1);
        CHECK(K.size() == p);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) {
                CHECK(K.add(static_cast<FElem>(a), static_cast<FElem>(b)) == (a + b) % p);
                CHECK(K.mul(static_cast<FElem>(a), static_cast<FElem>(b)) == (a * b) % p);
            }
    }
}

TEST_CASE("field axioms hold for extension fields", "[galois][property]") {
    for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 2}, {5, 2}, {2, 8}}) {
        GaloisField K(p, n);
        const int s = K.size();
        for (int a = 0; a < s; ++a) {
            const auto x = static_cast<FElem>(a);
            CHECK(K.add(x, K.neg(x)) == 0);
            CHECK(K.sub(x, x) == 0);
            if (a) CHECK(K.mul(x, K.inv(x)) == 1);
            // Frobenius of the prime field: x^(p^n) = x.
            CHECK(K.pow(x, s) == x);
            for (int b = 0; b < s; b += 3) {
                const auto y = static_cast<FElem>(b);
                CHECK(K.mul(x, y) == K.mul(y, x));
                for (int c = 0; c < s; c += 5) {
                    const auto z = static_cast<FElem>(c);
                    CHECK(K.mul(x, K.add(y, z)) == K.add(K.mul(x, y), K.mul(x, z)));
                }
            }
        }
    }
}

TEST_CASE("multiplicative group is cyclic of order size - 1", "[galois]") {
    GaloisField K(2, 4);
    bool found_generator = false;
    for (int g = 2; g < K.size() && !found_generator; ++g) {
        int order = 1;
        auto x = static_cast<FElem>(g);
        while (x != 1) {
            x = K.mul(x, static_cast<FElem>(g));
            ++order;
        }
        found_generator = (order == K.size() - 1);
    }
    CHECK(found_generator);
}

TEST_CASE("invalid parameters are rejected", "[galois]") {
    CHECK_THROWS_AS(GaloisField(4, 1), UsageError);
    CHECK_THROWS_AS(GaloisField(2, 9), UsageError);
    CHECK_THROWS_AS(GaloisField(2, 0), UsageError);
}
