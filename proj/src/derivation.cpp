#include "awb/derivation.hpp"

#include <set>

namespace awb {

void Derivation::add(Symbol s, const RatFn& c) {
    if (c.is_zero()) return;
    auto it = comps_.find(s);
    if (it == comps_.end()) {
        comps_.emplace(s, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) comps_.erase(it);
}

RatFn Derivation::component(Symbol s) const {
    auto it = comps_.find(s);
    return it == comps_.end() ? RatFn() : it->second;
}

RatFn Derivation::apply(const RatFn& f) const {
    RatFn r;
    for (const auto& [s, c] : comps_) {
        if (f.degree_in(s) == 0) continue;
        r += c * f.partial(s);
    }
    return r;
}

Derivation Derivation::operator+(const Derivation& o) const {
    Derivation r = *this;
    for (const auto& [s, c] : o.comps_) r.add(s, c);
    return r;
}

Derivation Derivation::operator-(const Derivation& o) const { return *this + o.scaled(RatFn(-1L)); }

Derivation Derivation::scaled(const RatFn& f) const {
    Derivation r;
    for (const auto& [s, c] : comps_) r.add(s, c * f);
    return r;
}

bool operator==(const Derivation& a, const Derivation& b) {
    Derivation d = a - b;
    return d.is_zero();
}

std::string Derivation::to_string() const {
    if (comps_.empty()) return "0";
    std::string out;
    for (const auto& [s, c] : comps_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")*d/d" + s.name();
    }
    return out;
}

Derivation bracket(const Derivation& a, const Derivation& b) {
    std::set<Symbol> keys;
    for (const auto& kv : a.components()) keys.insert(kv.first);
    for (const auto& kv : b.components()) keys.insert(kv.first);
    Derivation r;
    for (Symbol s : keys) r.add(s, a.apply(b.component(s)) - b.apply(a.component(s)));
    return r;
}

}  // namespace awb
