#pragma once

#include <map>
#include <string>

#include "awb/poly.hpp"

namespace awb {

// Quotient num/den of polynomials. Normalized so that den is primitive with
// positive leading coefficient; a constant den is folded into num. Common
// monomial factors and exact polynomial quotients are cancelled, but there is
// no general gcd, so equality is decided by cross-multiplication.
class RatFn {
public:
    RatFn() : den_(1L) {}
    RatFn(long c) : num_(c), den_(1L) {}  // NOLINT
    RatFn(const Rational& c) : num_(c), den_(1L) {}  // NOLINT
    RatFn(Poly p) : num_(std::move(p)), den_(1L) {}  // NOLINT
    RatFn(Poly num, Poly den);
    static RatFn variable(Symbol s) { return RatFn(Poly::variable(s)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;  // requires is_constant()

    RatFn operator-() const;
    RatFn operator+(const RatFn& o) const;
    RatFn operator-(const RatFn& o) const;
    RatFn operator*(const RatFn& o) const;
    RatFn operator/(const RatFn& o) const;
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    RatFn pow(unsigned e) const;

    RatFn partial(Symbol s) const;
    RatFn substitute(const std::map<Symbol, RatFn>& values) const;
    // Highest exponent of s over numerator and denominator.
    std::uint32_t degree_in(Symbol s) const;

    friend bool operator==(const RatFn& a, const RatFn& b);
    friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

    std::string to_string() const;

private:
    void normalize();
    Poly num_, den_;
};

inline RatFn operator*(long c, const RatFn& f) { return RatFn(c) * f; }

}  // namespace awb
