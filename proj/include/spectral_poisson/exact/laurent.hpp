#ifndef SPECTRAL_POISSON_EXACT_LAURENT_HPP
#define SPECTRAL_POISSON_EXACT_LAURENT_HPP

#include "spectral_poisson/exact/rational.hpp"

#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sp::exact {

/**
 * Sparse Laurent polynomial in one variable z with rational coefficients.
 *
 * Zero coefficients are never stored, so two polynomials are equal iff their
 * term maps are equal. Ordinary polynomials are the special case where every
 * stored exponent is non-negative.
 */
class LaurentPoly {
public:
    using Terms = std::map<int, Rational>;

    LaurentPoly() = default;

    explicit LaurentPoly(const Rational& c) { set(0, c); }

    /// c * z^k
    static LaurentPoly monomial(int k, const Rational& c = Rational(1)) {
        LaurentPoly p;
        p.set(k, c);
        return p;
    }

    /// Dense coefficients for z^0, z^1, ...
    static LaurentPoly from_coefficients(const std::vector<Rational>& coeffs, int offset = 0) {
        LaurentPoly p;
        for (std::size_t i = 0; i < coeffs.size(); ++i) p.set(offset + static_cast<int>(i), coeffs[i]);
        return p;
    }

    static LaurentPoly from_ints(std::initializer_list<long> coeffs, int offset = 0) {
        LaurentPoly p;
        int k = offset;
        for (long c : coeffs) p.set(k++, Rational(c));
        return p;
    }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Rational coeff(int k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void set(int k, const Rational& c) {
        if (c == 0)
            terms_.erase(k);
        else
            terms_[k] = c;
    }

    void add_term(int k, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Lowest / highest stored exponent; empty for the zero polynomial.
    std::optional<int> min_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.begin()->first;
    }
    std::optional<int> max_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

    bool is_polynomial() const { return terms_.empty() || terms_.begin()->first >= 0; }

    /// Polynomial degree; -1 for zero. Throws if negative exponents are present.
    int degree() const {
        if (!is_polynomial()) throw std::logic_error("degree() of a proper Laurent polynomial");
        return terms_.empty() ? -1 : terms_.rbegin()->first;
    }

    Rational leading_coeff() const { return terms_.empty() ? Rational(0) : terms_.rbegin()->second; }

    /// Terms with lo <= exponent <= hi.
    LaurentPoly slice(int lo, int hi) const {
        LaurentPoly out;
        for (auto it = terms_.lower_bound(lo); it != terms_.end() && it->first <= hi; ++it)
            out.terms_.emplace_hint(out.terms_.end(), it->first, it->second);
        return out;
    }

    bool support_within(int lo, int hi) const {
        return terms_.empty() || (terms_.begin()->first >= lo && terms_.rbegin()->first <= hi);
    }

    /// Multiplication by z^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + k, c);
        return out;
    }

    /// p(z) -> p(1/z)
    LaurentPoly inverted() const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(-e, c);
        return out;
    }

    LaurentPoly derivative() const {
        LaurentPoly out;
        for (const auto& [e, c] : terms_)
            if (e != 0) out.terms_.emplace(e - 1, c * e);
        return out;
    }

    Rational evaluate(const Rational& z) const {
        Rational acc(0);
        for (const auto& [e, c] : terms_) {
            Rational p(1);
            Rational base = e >= 0 ? z : Rational(1) / z;
            for (int i = 0; i < (e >= 0 ? e : -e); ++i) p *= base;
            acc += c * p;
        }
        return acc;
    }

    LaurentPoly operator-() const {
        LaurentPoly out(*this);
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    LaurentPoly& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) {
        *this = *this * o;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const Rational& s) { return a *= s; }
    friend LaurentPoly operator*(const Rational& s, LaurentPoly a) { return a *= s; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly out;
        if (a.is_zero() || b.is_zero()) return out;
        Rational t;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                t = ca * cb;
                out.add_term(ea + eb, t);
            }
        return out;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            first = false;
            Rational a = abs(c);
            if (e == 0) {
                os << a.get_str();
                continue;
            }
            if (a != 1) os << a.get_str() << "*";
            os << "z";
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

private:
    Terms terms_;
};

}  // namespace sp::exact

#endif
