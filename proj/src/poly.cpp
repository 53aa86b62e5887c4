#include "awb/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace awb {

Monomial::Monomial(std::vector<Factor> factors) : f_(std::move(factors)) {
    std::sort(f_.begin(), f_.end());
    std::vector<Factor> merged;
    for (const auto& [v, e] : f_) {
        if (e == 0) continue;
        if (!merged.empty() && merged.back().first == v)
            merged.back().second += e;
        else
            merged.emplace_back(v, e);
    }
    f_ = std::move(merged);
    for (const auto& fe : f_) deg_ += fe.second;
}

Monomial Monomial::of(Symbol s, std::uint32_t e) {
    return Monomial(std::vector<Factor>{{s.id(), e}});
}

std::uint32_t Monomial::exponent(Symbol s) const {
    for (const auto& [v, e] : f_)
        if (v == s.id()) return e;
    return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.f_.reserve(f_.size() + o.f_.size());
    auto i = f_.begin(), j = o.f_.begin();
    while (i != f_.end() || j != o.f_.end()) {
        if (j == o.f_.end() || (i != f_.end() && i->first < j->first)) {
            r.f_.push_back(*i++);
        } else if (i == f_.end() || j->first < i->first) {
            r.f_.push_back(*j++);
        } else {
            r.f_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    r.deg_ = deg_ + o.deg_;
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    auto j = o.f_.begin();
    for (const auto& [v, e] : f_) {
        while (j != o.f_.end() && j->first < v) ++j;
        if (j == o.f_.end() || j->first != v || j->second < e) return false;
    }
    return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
    std::vector<Factor> r;
    auto i = f_.begin();
    for (const auto& [v, e] : o.f_) {
        while (i != f_.end() && i->first < v) ++i;
        std::uint32_t sub = (i != f_.end() && i->first == v) ? i->second : 0;
        if (e > sub) r.emplace_back(v, e - sub);
    }
    return Monomial(std::move(r));
}

Monomial Monomial::without(Symbol s, std::uint32_t& exp_out) const {
    exp_out = 0;
    Monomial r;
    for (const auto& fe : f_) {
        if (fe.first == s.id())
            exp_out = fe.second;
        else
            r.f_.push_back(fe);
    }
    r.deg_ = deg_ - exp_out;
    return r;
}

std::string Monomial::to_string() const {
    std::string s;
    for (const auto& [v, e] : f_) {
        if (!s.empty()) s += "*";
        s += Symbol::from_id(v).name();
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

int grlex_compare(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0;
    for (; i < fa.size() && i < fb.size(); ++i) {
        if (fa[i].first != fb[i].first)
            // The monomial carrying the earlier variable has the larger exponent there.
            return fa[i].first < fb[i].first ? 1 : -1;
        if (fa[i].second != fb[i].second) return fa[i].second > fb[i].second ? 1 : -1;
    }
    if (i < fa.size()) return 1;
    if (i < fb.size()) return -1;
    return 0;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(long c) {
    if (c != 0) terms_.emplace_back(Monomial(), Rational(c));
}

Poly::Poly(const Rational& c) {
    if (sgn(c) != 0) terms_.emplace_back(Monomial(), c);
}

Poly Poly::variable(Symbol s) { return monomial(Monomial::of(s), 1); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.emplace_back(m, c);
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::map<Monomial, Rational, GrlexGreater> acc;
    for (auto& [m, c] : terms) {
        auto [it, inserted] = acc.try_emplace(std::move(m), c);
        if (!inserted) it->second += c;
    }
    Poly p;
    p.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (sgn(c) != 0) p.terms_.emplace_back(m, std::move(c));
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

Rational Poly::constant_value() const {
    if (!terms_.empty() && terms_.back().first.is_one()) return terms_.back().second;
    return 0;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }

std::uint32_t Poly::degree_in(Symbol s) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.first.exponent(s));
    return d;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return o;
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin(), j = o.terms_.begin();
    while (i != terms_.end() && j != o.terms_.end()) {
        int c = grlex_compare(i->first, j->first);
        if (c > 0) {
            r.terms_.push_back(*i++);
        } else if (c < 0) {
            r.terms_.push_back(*j++);
        } else {
            Rational sum = i->second + j->second;
            if (sgn(sum) != 0) r.terms_.emplace_back(i->first, std::move(sum));
            ++i;
            ++j;
        }
    }
    r.terms_.insert(r.terms_.end(), i, terms_.end());
    r.terms_.insert(r.terms_.end(), j, o.terms_.end());
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (terms_.empty() || o.terms_.empty()) return Poly();
    if (o.is_constant()) return scaled(o.terms_[0].second);
    if (is_constant()) return o.scaled(terms_[0].second);
    if (o.terms_.size() == 1) return times_monomial(o.terms_[0].first).scaled(o.terms_[0].second);
    std::map<Monomial, Rational, GrlexGreater> acc;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma * mb;
            auto it = acc.find(m);
            if (it == acc.end())
                acc.emplace(std::move(m), ca * cb);
            else
                it->second += ca * cb;
        }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (sgn(c) != 0) r.terms_.emplace_back(m, std::move(c));
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    if (sgn(c) == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

Poly Poly::times_monomial(const Monomial& m) const {
    Poly r = *this;
    // Multiplying by a monomial preserves the order.
    for (auto& t : r.terms_) t.first = t.first * m;
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly result(1L), base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Poly Poly::partial(Symbol s) const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) {
        std::uint32_t e = 0;
        Monomial rest = m.without(s, e);
        if (e == 0) continue;
        if (e > 1) rest = rest * Monomial::of(s, e - 1);
        out.emplace_back(std::move(rest), c * e);
    }
    return from_terms(std::move(out));
}

Poly Poly::substitute(const std::map<Symbol, Poly>& values) const {
    std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> powers;
    Poly result;
    for (const auto& [m, c] : terms_) {
        std::vector<Monomial::Factor> keep;
        Poly factor(c);
        for (const auto& [v, e] : m.factors()) {
            auto it = values.find(Symbol::from_id(v));
            if (it == values.end()) {
                keep.emplace_back(v, e);
                continue;
            }
            auto key = std::make_pair(v, e);
            auto pit = powers.find(key);
            if (pit == powers.end()) pit = powers.emplace(key, it->second.pow(e)).first;
            factor *= pit->second;
            if (factor.is_zero()) break;
        }
        if (factor.is_zero()) continue;
        result += factor.times_monomial(Monomial(std::move(keep)));
    }
    return result;
}

bool Poly::divide_exact(const Poly& divisor, Poly& quotient) const {
    if (divisor.is_zero()) throw std::domain_error("division by the zero polynomial");
    const auto& [lm, lc] = divisor.leading();
    Poly rem = *this;
    std::vector<Term> q;
    while (!rem.is_zero()) {
        const auto& [rm, rc] = rem.leading();
        if (!lm.divides(rm)) return false;
        Monomial qm = lm.quotient_of(rm);
        Rational qc = rc / lc;
        rem -= divisor.times_monomial(qm).scaled(qc);
        q.emplace_back(std::move(qm), std::move(qc));
    }
    quotient = from_terms(std::move(q));
    return true;
}

Rational Poly::content() const {
    if (terms_.empty()) return 0;
    mpz_class num = 0, den = 1;
    for (const auto& [m, c] : terms_) {
        mpz_class n = abs(c.get_num());
        num = gcd(num, n);
        den = lcm(den, c.get_den());
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return Monomial();
    std::vector<Monomial::Factor> common = terms_.front().first.factors();
    for (const auto& [m, c] : terms_) {
        std::vector<Monomial::Factor> next;
        for (const auto& [v, e] : common) {
            std::uint32_t me = m.exponent(Symbol::from_id(v));
            if (me) next.emplace_back(v, std::min(e, me));
        }
        common = std::move(next);
        if (common.empty()) break;
    }
    return Monomial(std::move(common));
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
        if (a.terms_[k].first != b.terms_[k].first || a.terms_[k].second != b.terms_[k].second) return false;
    return true;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        if (first) {
            if (sgn(c) < 0) s += "-";
        } else {
            s += sgn(c) < 0 ? " - " : " + ";
        }
        first = false;
        if (m.is_one()) {
            s += a.get_str();
        } else {
            if (a != 1) s += a.get_str() + "*";
            s += m.to_string();
        }
    }
    return s;
}

}  // namespace awb
