#pragma once

#include <map>
#include <string>

#include "awb/ratfn.hpp"

namespace awb {

// A vector field written in coordinates over an arbitrary set of symbols:
// sum of comps[s] * d/ds. Used for lifted vector fields on big bases.
class Derivation {
public:
    Derivation() = default;

    void add(Symbol s, const RatFn& c);
    const std::map<Symbol, RatFn>& components() const { return comps_; }
    RatFn component(Symbol s) const;
    bool is_zero() const { return comps_.empty(); }

    RatFn apply(const RatFn& f) const;

    Derivation operator+(const Derivation& o) const;
    Derivation operator-(const Derivation& o) const;
    Derivation scaled(const RatFn& f) const;
    Derivation& operator+=(const Derivation& o) { return *this = *this + o; }

    friend bool operator==(const Derivation& a, const Derivation& b);
    std::string to_string() const;

private:
    std::map<Symbol, RatFn> comps_;  // no zero entries
};

// Commutator of derivations.
Derivation bracket(const Derivation& a, const Derivation& b);

}  // namespace awb
