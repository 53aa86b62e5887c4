#pragma once

// Hand-rolled random inputs for property tests. Seeds are fixed per test so
// failures reproduce.

#include <random>
#include <vector>

#include "awb/ratfn.hpp"

namespace awb::testing {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Rational rational() {
        long n = integer(-5, 5);
        long d = integer(1, 3);
        Rational q(n, d);
        q.canonicalize();
        return q;
    }

    // Sparse polynomial in vars with up to `terms` terms of degree <= max_deg.
    Poly poly(const std::vector<Symbol>& vars, int terms, int max_deg) {
        std::vector<Poly::Term> out;
        int count = static_cast<int>(integer(0, terms));
        for (int t = 0; t < count; ++t) {
            std::vector<Monomial::Factor> f;
            int deg = static_cast<int>(integer(0, max_deg));
            for (int k = 0; k < deg && !vars.empty(); ++k)
                f.emplace_back(vars[static_cast<std::size_t>(integer(0, static_cast<long>(vars.size()) - 1))].id(), 1);
            out.emplace_back(Monomial(std::move(f)), rational());
        }
        return Poly::from_terms(std::move(out));
    }

    RatFn ratfn(const std::vector<Symbol>& vars, int terms, int max_deg) { return RatFn(poly(vars, terms, max_deg)); }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

inline std::vector<Symbol> symbols(std::initializer_list<const char*> names) {
    std::vector<Symbol> v;
    for (const char* n : names) v.push_back(Symbol::intern(n));
    return v;
}

}  // namespace awb::testing
