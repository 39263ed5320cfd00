/**
 * @brief The local field F = F_q((pi)), its unramified quadratic extension
 * E = F_{q^2}((pi)), and truncated Laurent series with tracked precision.
 *
 * All series carry coefficients in F_{q^2}; elements of F are the series whose
 * coefficients lie in the subfield F_q.  A series is either exact (a Laurent
 * polynomial, known completely) or known modulo pi^prec.  Any question whose
 * answer is not determined at the current precision raises PrecisionError.
 */
#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "atf/errors.hpp"
#include "atf/galois.hpp"

namespace atf {

/** Precision value marking an exact series; also the valuation of exact zero. */
constexpr int kExact = INT_MAX / 4;

/**
 * Field parameters: q, the working relative precision N, and the residue
 * fields F_q inside F_{q^2} with the Frobenius x -> x^q.
 */
class LocalField {
public:
    /** Shared immutable instance for (q, N); instances live for the whole process. */
    static const LocalField& get(int q, int precision) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<LocalField>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(q, precision);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<LocalField>(new LocalField(q, precision))).first;
        return *it->second;
    }

    int q() const { return q_; }
    int p() const { return p_; }
    int precision() const { return N_; }
    const GaloisField& K() const { return K_; }

    /** Elements of F_q (ascending codes; 0 and 1 first). */
    const std::vector<FElem>& fq() const { return fq_; }
    /** All elements of F_{q^2} (ascending codes). */
    const std::vector<FElem>& fq2() const { return fq2_; }
    bool in_fq(FElem a) const { return in_fq_[a]; }
    FElem frob(FElem a) const { return frob_[a]; }
    FElem trace(FElem a) const { return K_.add(a, frob_[a]); }
    FElem norm(FElem a) const { return K_.mul(a, frob_[a]); }

    /** Generator of F_{q^2} over F_q (smallest code outside F_q). */
    FElem zeta() const { return zeta_; }
    /** An element of F_{q^2} with nonzero trace to F_q. */
    FElem trace_unit() const { return trace_unit_; }
    /** An element of F_q other than 0 and 1; only exists for q >= 3. */
    bool has_unit_not_one() const { return unit_not_one_ != 0; }
    FElem unit_not_one() const {
        if (!unit_not_one_) throw UsageError("F_q has no unit other than 1 for q = 2");
        return unit_not_one_;
    }
    /** An element of F_{q^2} whose norm lies in F_q minus {0, 1}; q >= 3 only. */
    FElem norm_not_one() const {
        if (!norm_not_one_) throw UsageError("every unit of F_4 has norm 1 to F_2");
        return norm_not_one_;
    }

    /** Decomposes q as a prime power p^k, or throws UsageError. */
    static std::pair<int, int> prime_power(int q) {
        if (q < 2) throw UsageError("q must be a prime power >= 2");
        int p = 2;
        while (q % p != 0) ++p;
        int k = 0;
        int m = q;
        while (m % p == 0) {
            m /= p;
            ++k;
        }
        if (m != 1) throw UsageError("q must be a prime power, got " + std::to_string(q));
        return {p, k};
    }

private:
    LocalField(int q, int precision)
        : q_(q), p_(prime_power(q).first), N_(precision), K_(p_, 2 * prime_power(q).second) {
        if (precision < 4) throw UsageError("precision must be at least 4");
        if (q > 16) throw UsageError("q > 16 is not supported by the table arithmetic");
        const int s = K_.size();
        frob_.resize(s);
        in_fq_.assign(s, false);
        for (int a = 0; a < s; ++a) {
            fq2_.push_back(static_cast<FElem>(a));
            frob_[a] = K_.pow(static_cast<FElem>(a), q_);
            if (frob_[a] == a) {
                in_fq_[a] = true;
                fq_.push_back(static_cast<FElem>(a));
            }
        }
        for (int a = 0; a < s; ++a)
            if (!in_fq_[a]) {
                zeta_ = static_cast<FElem>(a);
                break;
            }
        for (int a = 1; a < s; ++a)
            if (trace(static_cast<FElem>(a)) != 0) {
                trace_unit_ = static_cast<FElem>(a);
                break;
            }
        for (FElem a : fq_)
            if (a != 0 && a != 1) {
                unit_not_one_ = a;
                break;
            }
        for (int a = 1; a < s; ++a) {
            FElem n = norm(static_cast<FElem>(a));
            if (n != 1) {
                norm_not_one_ = static_cast<FElem>(a);
                break;
            }
        }
    }

    int q_;
    int p_;
    int N_;
    GaloisField K_;
    std::vector<FElem> fq_, fq2_, frob_;
    std::vector<bool> in_fq_;
    FElem zeta_ = 0, trace_unit_ = 0, unit_not_one_ = 0, norm_not_one_ = 0;
};

/** A truncated Laurent series sum c_i pi^{lo+i} over F_{q^2}, known modulo pi^prec. */
class Series {
public:
    Series() = default;
    explicit Series(const LocalField& F) : F_(&F) {}

    static Series zero(const LocalField& F) { return Series(F); }
    static Series monomial(const LocalField& F, FElem c, int e) {
        Series s(F);
        if (c != 0) {
            s.lo_ = e;
            s.c_.push_back(c);
        }
        return s;
    }
    static Series constant(const LocalField& F, FElem c) { return monomial(F, c, 0); }
    static Series one(const LocalField& F) { return monomial(F, 1, 0); }
    static Series pi_power(const LocalField& F, int e) { return monomial(F, 1, e); }
    static Series from_int(const LocalField& F, long long k) { return constant(F, F.K().from_int(k)); }
    /** sum coeffs[i] pi^{lo+i}, known modulo pi^prec (kExact for an exact polynomial). */
    static Series from_coeffs(const LocalField& F, int lo, std::vector<FElem> coeffs, int prec = kExact) {
        Series s(F);
        s.lo_ = lo;
        s.c_ = std::move(coeffs);
        s.prec_ = prec;
        s.normalize();
        return s;
    }

    const LocalField& field() const { return *F_; }
    bool valid() const { return F_ != nullptr; }
    bool exact() const { return prec_ >= kExact; }
    int precision() const { return prec_; }
    bool is_exact_zero() const { return c_.empty() && exact(); }
    bool known_nonzero() const { return !c_.empty(); }

    /** Normalized valuation; kExact for exact zero; PrecisionError if undetermined. */
    int valuation() const {
        if (!c_.empty()) return lo_;
        if (exact()) return kExact;
        throw PrecisionError("valuation undetermined: series vanishes modulo pi^" + std::to_string(prec_));
    }
    /** A lower bound for the valuation that never throws. */
    int valuation_lower_bound() const { return c_.empty() ? prec_ : lo_; }

    /** Coefficient of pi^e. */
    FElem coeff(int e) const {
        if (e >= prec_) throw PrecisionError("coefficient beyond precision requested");
        if (c_.empty() || e < lo_ || e >= lo_ + static_cast<int>(c_.size())) return 0;
        return c_[e - lo_];
    }
    FElem leading_coeff() const {
        valuation();
        if (c_.empty()) throw InternalError("leading coefficient of zero");
        return c_.front();
    }
    int low() const { return lo_; }
    const std::vector<FElem>& raw() const { return c_; }

    Series operator-() const {
        Series r = *this;
        for (auto& x : r.c_) x = F_->K().neg(x);
        return r;
    }
    friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }

    friend Series operator*(const Series& a, const Series& b) {
        const LocalField& F = *a.F_;
        if (a.is_exact_zero() || b.is_exact_zero()) return Series(F);
        long long pa = a.prec_, pb = b.prec_;
        long long p1 = a.exact() ? kExact : pa + b.valuation_lower_bound();
        long long p2 = b.exact() ? kExact : pb + a.valuation_lower_bound();
        long long prec = std::min(p1, p2);
        if (a.exact() && b.exact()) prec = kExact;
        prec = std::min<long long>(prec, kExact);
        Series r(F);
        r.prec_ = static_cast<int>(prec);
        if (a.c_.empty() || b.c_.empty()) {
            r.normalize();
            return r;
        }
        long long lo = static_cast<long long>(a.lo_) + b.lo_;
        long long end = lo + static_cast<long long>(a.c_.size() + b.c_.size()) - 1;
        if (end > prec) end = prec;
        if (end <= lo) {
            r.normalize();
            return r;
        }
        const GaloisField& K = F.K();
        std::vector<FElem> out(static_cast<size_t>(end - lo), 0);
        const size_t na = a.c_.size(), nb = b.c_.size(), no = out.size();
        for (size_t i = 0; i < na && i < no; ++i) {
            FElem ai = a.c_[i];
            if (ai == 0) continue;
            size_t jmax = std::min(nb, no - i);
            for (size_t j = 0; j < jmax; ++j)
                if (b.c_[j]) out[i + j] = K.add(out[i + j], K.mul(ai, b.c_[j]));
        }
        r.lo_ = static_cast<int>(lo);
        r.c_ = std::move(out);
        r.normalize();
        return r;
    }

    Series& operator+=(const Series& o) { return *this = *this + o; }
    Series& operator-=(const Series& o) { return *this = *this - o; }
    Series& operator*=(const Series& o) { return *this = *this * o; }

    /** Multiplication by a constant of F_{q^2}. */
    Series scaled(FElem k) const {
        if (k == 0) {
            Series r(*F_);
            r.prec_ = prec_;
            r.normalize();
            return r;
        }
        Series r = *this;
        for (auto& x : r.c_) x = F_->K().mul(x, k);
        return r;
    }

    /** Multiplication by pi^k. */
    Series shifted(int k) const {
        Series r = *this;
        if (!r.c_.empty()) r.lo_ += k;  // zero keeps the canonical lo_ = 0
        if (!exact()) r.prec_ += k;
        return r;
    }

    /**
     * Multiplicative inverse.  Inverses of exact non-monomials are infinite
     * series and are truncated to the field's working relative precision.
     */
    Series inverse() const {
        if (is_exact_zero()) throw InternalError("division by exact zero");
        const int v = valuation();
        const GaloisField& K = F_->K();
        if (exact() && c_.size() == 1) return monomial(*F_, K.inv(c_[0]), -v);
        const int rel = exact() ? F_->precision() : prec_ - v;
        std::vector<FElem> inv(static_cast<size_t>(std::max(rel, 0)), 0);
        if (rel > 0) {
            const FElem u0inv = K.inv(c_[0]);
            inv[0] = u0inv;
            for (int i = 1; i < rel; ++i) {
                FElem acc = 0;
                for (int j = 1; j <= i && j < static_cast<int>(c_.size()); ++j)
                    if (c_[j]) acc = K.add(acc, K.mul(c_[j], inv[i - j]));
                inv[i] = K.mul(K.neg(acc), u0inv);
            }
        }
        return from_coeffs(*F_, -v, std::move(inv), -v + rel);
    }

    friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

    /** Coefficientwise Frobenius x -> x^q: the Galois conjugation of E/F. */
    Series sigma() const {
        Series r = *this;
        for (auto& x : r.c_) x = F_->frob(x);
        return r;
    }

    /** True when every known coefficient lies in F_q, i.e. the series lies in F. */
    bool in_base_field() const {
        for (auto x : c_)
            if (!F_->in_fq(x)) return false;
        return true;
    }

    /** The exact polynomial of all terms with exponent < e (requires prec >= e). */
    Series truncated_below(int e) const {
        if (prec_ < e) throw PrecisionError("cannot reduce modulo pi^" + std::to_string(e) + " at precision " + std::to_string(prec_));
        Series r(*F_);
        if (!c_.empty() && lo_ < e) {
            r.lo_ = lo_;
            r.c_.assign(c_.begin(), c_.begin() + std::min<long long>(static_cast<long long>(c_.size()), static_cast<long long>(e) - lo_));
        }
        r.normalize();
        return r;
    }

    /** The series with precision lowered to min(prec, e). */
    Series with_precision(int e) const {
        if (e >= prec_) return *this;
        Series r = *this;
        r.prec_ = e;
        r.normalize();
        return r;
    }

    /** Marks the series exact: used after a canonical reduction has fixed the representative. */
    Series as_exact() const {
        Series r = *this;
        r.prec_ = kExact;
        r.normalize();
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.prec_ == b.prec_ && a.lo_ == b.lo_ && a.c_ == b.c_;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }
    /** Structural total order on exact series (for deterministic containers). */
    friend bool operator<(const Series& a, const Series& b) {
        if (a.c_.empty() != b.c_.empty()) return a.c_.empty();
        if (a.lo_ != b.lo_) return a.lo_ < b.lo_;
        if (a.c_ != b.c_) return a.c_ < b.c_;
        return a.prec_ < b.prec_;
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(lo_) * 1000003u + c_.size();
        for (auto x : c_) h = h * 131u + x;
        return h;
    }

    /** Text such as "1 + 2 pi^3 + O(pi^8)"; coefficients printed by field code. */
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i]) continue;
            if (!first) os << " + ";
            first = false;
            int e = lo_ + static_cast<int>(i);
            if (e == 0) {
                os << c_[i];
            } else {
                if (c_[i] != 1) os << c_[i] << ' ';
                os << "pi";
                if (e != 1) os << '^' << e;
            }
        }
        if (first) os << '0';
        if (!exact()) os << " + O(pi^" << prec_ << ')';
        return os.str();
    }

private:
    static Series combine(const Series& a, const Series& b, bool subtract) {
        const LocalField& F = *a.F_;
        const GaloisField& K = F.K();
        Series r(F);
        r.prec_ = std::min(a.prec_, b.prec_);
        if (a.c_.empty() && b.c_.empty()) {
            r.normalize();
            return r;
        }
        long long lo = LLONG_MAX, end = LLONG_MIN;
        if (!a.c_.empty()) {
            lo = std::min<long long>(lo, a.lo_);
            end = std::max<long long>(end, a.lo_ + static_cast<long long>(a.c_.size()));
        }
        if (!b.c_.empty()) {
            lo = std::min<long long>(lo, b.lo_);
            end = std::max<long long>(end, b.lo_ + static_cast<long long>(b.c_.size()));
        }
        end = std::min<long long>(end, r.prec_);
        if (end <= lo) {
            r.normalize();
            return r;
        }
        std::vector<FElem> out(static_cast<size_t>(end - lo), 0);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            long long e = a.lo_ + static_cast<long long>(i);
            if (e < end) out[e - lo] = a.c_[i];
        }
        for (size_t i = 0; i < b.c_.size(); ++i) {
            long long e = b.lo_ + static_cast<long long>(i);
            if (e >= end) continue;
            FElem x = subtract ? K.neg(b.c_[i]) : b.c_[i];
            out[e - lo] = K.add(out[e - lo], x);
        }
        r.lo_ = static_cast<int>(lo);
        r.c_ = std::move(out);
        r.normalize();
        return r;
    }

    void normalize() {
        if (!exact()) {
            long long keep = static_cast<long long>(prec_) - lo_;
            if (keep < static_cast<long long>(c_.size())) c_.resize(static_cast<size_t>(std::max(0LL, keep)));
        }
        size_t first = 0;
        while (first < c_.size() && c_[first] == 0) ++first;
        if (first == c_.size()) {
            c_.clear();
            lo_ = 0;
            return;
        }
        if (first > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(first));
            lo_ += static_cast<int>(first);
        }
        if (exact())
            while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    const LocalField* F_ = nullptr;
    int lo_ = 0;
    std::vector<FElem> c_;
    int prec_ = kExact;
};

}  // namespace atf
