/**
 * @brief Exact Laurent polynomials in u = q^s with rational coefficients.
 *
 * Every orbital integral in the library is carried by a LaurentPoly.  The
 * auxiliary variable X = -u^{-2} used by the lattice-counting formulas is
 * handled by from_x_series(); the prefactor (-u)^{-r} by sign_prefactor().
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "atf/errors.hpp"

namespace atf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/** Canonical decimal text of a rational: "n" or "n/d". */
inline std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

class LaurentPoly {
public:
    LaurentPoly() = default;

    /** The constant polynomial c. */
    static LaurentPoly constant(const Rational& c) { return monomial(c, 0); }

    /** The monomial c*u^k. */
    static LaurentPoly monomial(const Rational& c, int k) {
        LaurentPoly p;
        if (c != 0) p.coeffs_[k] = c;
        return p;
    }

    const std::map<int, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    /** Adds c*u^k in place, keeping the canonical form. */
    void add_term(const Rational& c, int k) {
        if (c == 0) return;
        auto [it, inserted] = coeffs_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [k, c] : o.coeffs_) add_term(c, k);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [k, c] : o.coeffs_) add_term(-c, k);
        return *this;
    }
    LaurentPoly& operator*=(const Rational& s) {
        if (s == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto& kv : coeffs_) kv.second *= s;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(LaurentPoly a) { return a *= Rational(-1); }
    friend LaurentPoly operator*(LaurentPoly a, const Rational& s) { return a *= s; }
    friend LaurentPoly operator*(const Rational& s, LaurentPoly a) { return a *= s; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ka, ca] : a.coeffs_)
            for (const auto& [kb, cb] : b.coeffs_) r.add_term(ca * cb, ka + kb);
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /** Value at u = 1, i.e. at s = 0. */
    Rational central_value() const {
        Rational s = 0;
        for (const auto& kv : coeffs_) s += kv.second;
        return s;
    }

    /** Sum of k*c_k: the derivative at s = 0 divided by log(q). */
    Rational central_derivative_coeff() const {
        Rational s = 0;
        for (const auto& [k, c] : coeffs_) s += c * k;
        return s;
    }

    /** Substitution u -> u^{-1}, i.e. s -> -s. */
    LaurentPoly reflect() const {
        LaurentPoly r;
        for (const auto& [k, c] : coeffs_) r.coeffs_[-k] = c;
        return r;
    }

    /** Multiplication by u^k. */
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }

    bool has_integer_coeffs() const {
        for (const auto& kv : coeffs_)
            if (!is_integer(kv.second)) return false;
        return true;
    }

    /** Sorted (exponent, numerator, denominator) triples. */
    std::vector<std::tuple<int, BigInt, BigInt>> serialize() const {
        std::vector<std::tuple<int, BigInt, BigInt>> out;
        for (const auto& [k, c] : coeffs_)
            out.emplace_back(k, BigInt(numerator(c)), BigInt(denominator(c)));
        return out;
    }

    static LaurentPoly deserialize(const std::vector<std::tuple<int, BigInt, BigInt>>& triples) {
        LaurentPoly p;
        for (const auto& [k, n, d] : triples) p.add_term(Rational(n, d), k);
        return p;
    }

    /** Text "c_k u^k + ..." with ascending exponents; "0" for the zero polynomial. */
    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : coeffs_) {
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << '-';
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool unit = (mag == 1);
            if (k == 0) {
                os << rational_to_string(mag);
                continue;
            }
            if (!unit) os << rational_to_string(mag) << ' ';
            os << 'u';
            if (k != 1) os << '^' << k;
        }
        return os.str();
    }

private:
    std::map<int, Rational> coeffs_;
};

/** Image of sum c_m X^m under X = -u^{-2}. */
inline LaurentPoly from_x_series(const std::vector<std::pair<Rational, int>>& terms) {
    LaurentPoly p;
    for (const auto& [c, m] : terms) p.add_term((m % 2 == 0) ? c : Rational(-c), -2 * m);
    return p;
}

/** Image of the monomial X^m. */
inline LaurentPoly x_power(int m) { return from_x_series({{Rational(1), m}}); }

/** The prefactor (-u)^{-r} = (-1)^r u^{-r}. */
inline LaurentPoly sign_prefactor(int r) {
    return LaurentPoly::monomial((r % 2 == 0) ? Rational(1) : Rational(-1), -r);
}

/** Inverse of sign_prefactor(r), namely (-1)^r u^{r}. */
inline LaurentPoly sign_prefactor_inverse(int r) {
    return LaurentPoly::monomial((r % 2 == 0) ? Rational(1) : Rational(-1), r);
}

}  // namespace atf
