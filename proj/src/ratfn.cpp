#include "awb/ratfn.hpp"

#include <stdexcept>

namespace awb {

RatFn::RatFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
}

void RatFn::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(1L);
        return;
    }
    if (den_.is_constant()) {
        if (den_.constant_value() != 1) {
            num_ = num_.scaled(1 / den_.constant_value());
            den_ = Poly(1L);
        }
        return;
    }
    Monomial common = num_.monomial_content();
    Monomial dcommon = den_.monomial_content();
    std::vector<Monomial::Factor> shared;
    for (const auto& [v, e] : common.factors()) {
        std::uint32_t de = dcommon.exponent(Symbol::from_id(v));
        if (de) shared.emplace_back(v, std::min(e, de));
    }
    if (!shared.empty()) {
        Monomial g(std::move(shared));
        Poly q;
        num_.divide_exact(Poly::monomial(g, 1), q);
        num_ = q;
        den_.divide_exact(Poly::monomial(g, 1), q);
        den_ = q;
    }
    Poly q;
    if (num_.divide_exact(den_, q)) {
        num_ = std::move(q);
        den_ = Poly(1L);
        return;
    }
    Rational c = den_.content();
    if (sgn(den_.leading().second) < 0) c = -c;
    if (c != 1) {
        num_ = num_.scaled(1 / c);
        den_ = den_.scaled(1 / c);
    }
    if (den_.is_constant()) normalize();
}

Rational RatFn::constant_value() const {
    if (!is_constant()) throw std::logic_error("not a constant");
    return num_.constant_value() / den_.constant_value();
}

RatFn RatFn::operator-() const {
    RatFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFn RatFn::operator+(const RatFn& o) const {
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    if (den_ == o.den_) {
        if (den_.is_constant()) return RatFn(num_ + o.num_);
        return RatFn(num_ + o.num_, den_);
    }
    return RatFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFn RatFn::operator-(const RatFn& o) const { return *this + (-o); }

RatFn RatFn::operator*(const RatFn& o) const {
    if (is_zero() || o.is_zero()) return RatFn();
    if (is_polynomial() && o.is_polynomial()) return RatFn(num_ * o.num_);
    return RatFn(num_ * o.num_, den_ * o.den_);
}

RatFn RatFn::operator/(const RatFn& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return RatFn(num_ * o.den_, den_ * o.num_);
}

RatFn RatFn::pow(unsigned e) const {
    if (is_polynomial()) return RatFn(num_.pow(e));
    return RatFn(num_.pow(e), den_.pow(e));
}

RatFn RatFn::partial(Symbol s) const {
    if (is_polynomial()) return RatFn(num_.partial(s));
    return RatFn(num_.partial(s) * den_ - num_ * den_.partial(s), den_ * den_);
}

RatFn RatFn::substitute(const std::map<Symbol, RatFn>& values) const {
    bool all_poly = true;
    for (const auto& kv : values)
        if (!kv.second.is_polynomial()) all_poly = false;
    if (all_poly) {
        std::map<Symbol, Poly> pv;
        for (const auto& [s, v] : values) pv.emplace(s, v.num());
        Poly n = num_.substitute(pv);
        if (is_polynomial()) return RatFn(n);
        return RatFn(n, den_.substitute(pv));
    }
    // General case: expand term by term in the field.
    auto eval = [&](const Poly& p) {
        RatFn acc;
        for (const auto& [m, c] : p.terms()) {
            RatFn t(c);
            std::vector<Monomial::Factor> keep;
            for (const auto& [v, e] : m.factors()) {
                auto it = values.find(Symbol::from_id(v));
                if (it == values.end())
                    keep.emplace_back(v, e);
                else
                    t *= it->second.pow(e);
            }
            t *= RatFn(Poly::monomial(Monomial(std::move(keep)), 1));
            acc += t;
        }
        return acc;
    };
    return eval(num_) / eval(den_);
}

std::uint32_t RatFn::degree_in(Symbol s) const { return std::max(num_.degree_in(s), den_.degree_in(s)); }

bool operator==(const RatFn& a, const RatFn& b) {
    if (a.den_ == b.den_) return a.num_ == b.num_;
    return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
}

std::string RatFn::to_string() const {
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace awb
