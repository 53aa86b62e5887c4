#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "awb/symbol.hpp"

namespace awb {

using Rational = mpq_class;

// Sparse power product: (symbol id, exponent) pairs sorted by id, exponents > 0.
class Monomial {
public:
    using Factor = std::pair<std::uint32_t, std::uint32_t>;

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);
    static Monomial of(Symbol s, std::uint32_t e = 1);

    const std::vector<Factor>& factors() const { return f_; }
    std::uint32_t degree() const { return deg_; }
    std::uint32_t exponent(Symbol s) const;
    bool is_one() const { return f_.empty(); }

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    // Requires divides(o): returns o / *this.
    Monomial quotient_of(const Monomial& o) const;
    // Removes the factor of s entirely, returning its exponent.
    Monomial without(Symbol s, std::uint32_t& exp_out) const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.f_ != b.f_; }

    std::string to_string() const;

private:
    std::vector<Factor> f_;
    std::uint32_t deg_ = 0;
};

// Graded lexicographic comparison; lower symbol ids are more significant.
int grlex_compare(const Monomial& a, const Monomial& b);

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_compare(a, b) > 0; }
};

class Poly {
public:
    using Term = std::pair<Monomial, Rational>;

    Poly() = default;
    Poly(long c);  // NOLINT: implicit integer constants are convenient in formulas
    Poly(const Rational& c);  // NOLINT
    static Poly variable(Symbol s);
    static Poly monomial(const Monomial& m, const Rational& c);
    // Terms may be unsorted and may repeat; they are combined.
    static Poly from_terms(std::vector<Term> terms);

    // Sorted by decreasing grlex order; no zero coefficients.
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // coefficient of the unit monomial
    const Term& leading() const { return terms_.front(); }
    std::uint32_t total_degree() const;
    std::uint32_t degree_in(Symbol s) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scaled(const Rational& c) const;
    Poly times_monomial(const Monomial& m) const;
    Poly pow(unsigned e) const;

    Poly partial(Symbol s) const;
    Poly substitute(const std::map<Symbol, Poly>& values) const;

    // Multivariate division by a single divisor; returns true iff the remainder is zero.
    bool divide_exact(const Poly& divisor, Poly& quotient) const;
    // gcd of numerators over lcm of denominators; positive; zero for the zero polynomial.
    Rational content() const;
    // Largest monomial dividing every term.
    Monomial monomial_content() const;

    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

}  // namespace awb
