/**
 * @brief Small finite fields GF(p^n) with full addition/multiplication tables.
 *
 * Elements are encoded as integers 0..p^n-1 whose base-p digits are the
 * coefficients of a polynomial in a root of a fixed irreducible polynomial.
 * In particular 0 and 1 encode the field's zero and one, and the prime
 * subfield consists of the codes 0..p-1.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atf/errors.hpp"

namespace atf {

using FElem = std::uint16_t;

class GaloisField {
public:
    /** Builds GF(p^n); p must be prime and p^n at most 256. */
    GaloisField(int p, int n) : p_(p), n_(n) {
        if (p < 2 || !is_prime(p)) throw UsageError("field characteristic must be prime");
        size_ = 1;
        for (int i = 0; i < n; ++i) size_ *= p;
        if (n < 1 || size_ > 256) throw UsageError("finite field too large for table arithmetic");
        modulus_ = find_irreducible();
        build_tables();
    }

    int characteristic() const { return p_; }
    int degree() const { return n_; }
    int size() const { return size_; }

    FElem add(FElem a, FElem b) const { return add_[a * size_ + b]; }
    FElem sub(FElem a, FElem b) const { return add_[a * size_ + neg_[b]]; }
    FElem mul(FElem a, FElem b) const { return mul_[a * size_ + b]; }
    FElem neg(FElem a) const { return neg_[a]; }
    FElem inv(FElem a) const {
        if (a == 0) throw InternalError("inverse of zero in finite field");
        return inv_[a];
    }
    FElem pow(FElem a, long long e) const {
        FElem r = 1;
        FElem b = a;
        while (e > 0) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    /** The image of the integer k under Z -> GF(p^n). */
    FElem from_int(long long k) const {
        long long m = ((k % p_) + p_) % p_;
        return static_cast<FElem>(m);
    }

    static bool is_prime(int p) {
        if (p < 2) return false;
        for (int d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

private:
    using Poly = std::vector<int>;  // coefficients over F_p, low degree first

    static void trim(Poly& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }

    Poly poly_mod(Poly a, const Poly& m) const {
        trim(a);
        int dm = static_cast<int>(m.size()) - 1;
        int lead_inv = 1;
        while ((lead_inv * m.back()) % p_ != 1) ++lead_inv;
        while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
            int shift = static_cast<int>(a.size()) - 1 - dm;
            int factor = (a.back() * lead_inv) % p_;
            for (int i = 0; i <= dm; ++i)
                a[i + shift] = ((a[i + shift] - factor * m[i]) % p_ + p_) % p_;
            trim(a);
        }
        return a;
    }

    /** Smallest monic irreducible polynomial of degree n (lexicographic in the code). */
    Poly find_irreducible() const {
        if (n_ == 1) return {0, 1};
        for (int code = 0; code < size_; ++code) {
            Poly f(n_ + 1, 0);
            int c = code;
            for (int i = 0; i < n_; ++i) {
                f[i] = c % p_;
                c /= p_;
            }
            f[n_] = 1;
            if (irreducible(f)) return f;
        }
        throw InternalError("no irreducible polynomial found");
    }

    bool irreducible(const Poly& f) const {
        // Trial division by every monic polynomial of degree 1..n/2.
        for (int deg = 1; deg <= n_ / 2; ++deg) {
            int count = 1;
            for (int i = 0; i < deg; ++i) count *= p_;
            for (int code = 0; code < count; ++code) {
                Poly g(deg + 1, 0);
                int c = code;
                for (int i = 0; i < deg; ++i) {
                    g[i] = c % p_;
                    c /= p_;
                }
                g[deg] = 1;
                if (poly_mod(f, g).empty()) return false;
            }
        }
        return true;
    }

    Poly decode(int code) const {
        Poly f(n_, 0);
        for (int i = 0; i < n_; ++i) {
            f[i] = code % p_;
            code /= p_;
        }
        return f;
    }

    int encode(const Poly& f) const {
        int code = 0;
        for (int i = n_ - 1; i >= 0; --i) code = code * p_ + (i < static_cast<int>(f.size()) ? f[i] : 0);
        return code;
    }

    void build_tables() {
        const int s = size_;
        add_.assign(s * s, 0);
        mul_.assign(s * s, 0);
        neg_.assign(s, 0);
        inv_.assign(s, 0);
        std::vector<Poly> dec(s);
        for (int a = 0; a < s; ++a) dec[a] = decode(a);
        for (int a = 0; a < s; ++a) {
            Poly na(n_);
            for (int i = 0; i < n_; ++i) na[i] = (p_ - dec[a][i]) % p_;
            neg_[a] = static_cast<FElem>(encode(na));
            for (int b = 0; b < s; ++b) {
                Poly sum(n_);
                for (int i = 0; i < n_; ++i) sum[i] = (dec[a][i] + dec[b][i]) % p_;
                add_[a * s + b] = static_cast<FElem>(encode(sum));
                Poly prod(2 * n_, 0);
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + dec[a][i] * dec[b][j]) % p_;
                mul_[a * s + b] = static_cast<FElem>(encode(poly_mod(prod, modulus_)));
            }
        }
        for (int a = 1; a < s; ++a)
            for (int b = 1; b < s; ++b)
                if (mul_[a * s + b] == 1) inv_[a] = static_cast<FElem>(b);
    }

    int p_;
    int n_;
    int size_ = 1;
    Poly modulus_;
    std::vector<FElem> add_, mul_, neg_, inv_;
};

}  // namespace atf
