#include <doctest.h>

#include "awb/derivation.hpp"
#include "awb/expr.hpp"
#include "generators.hpp"

using namespace awb;
using awb::testing::Gen;
using awb::testing::symbols;

namespace {

const std::vector<Symbol>& ctx() {
    static const auto v = symbols({"x", "y", "z", "x1", "x2"});
    return v;
}

RatFn P(const char* s) { return parse_ratfn(s, ctx()); }

}  // namespace

TEST_CASE("ring examples") {
    CHECK((P("x+1") * P("x-1")).to_string() == "x^2 - 1");
    CHECK(P("x") + P("0") == P("x"));
    RatFn inv(Poly(1L), P("x").num());
    RatFn one = inv * P("x");
    CHECK(one.num() == Poly(1L));
    CHECK(one.den() == Poly(1L));
}

TEST_CASE("partial derivatives") {
    Symbol x = Symbol::intern("x"), z = Symbol::intern("z");
    CHECK(P("x^2*y").partial(x) == P("2*x*y"));
    CHECK(P("x^2*y").partial(z).is_zero());
    RatFn q = RatFn(P("y").num(), P("x").num());
    CHECK(q.partial(x) == RatFn(-P("y").num(), P("x^2").num()));
}

TEST_CASE("zero tests") {
    CHECK(P("x^2 - x*x").is_zero());
    CHECK_FALSE(RatFn(P("x-y").num(), P("x+y").num()).is_zero());
    CHECK(P("((x+1)^2 - x^2 - 2*x - 1)/7").is_zero());
}

TEST_CASE("parser") {
    CHECK(P("x1*x2 - 3").to_string() == "x1*x2 - 3");
    CHECK(P("-(x+1)^2") == P("-x^2 - 2*x - 1"));
    CHECK(P("-x^2").to_string() == "-x^2");
    CHECK(P("2*3^2") == RatFn(18L));
    CHECK(P("x - y - z") == P("x - (y + z)"));

    try {
        P("x1*");
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 4);
    }
    try {
        P("x + w");
        FAIL("expected an unknown variable");
    } catch (const UnknownVariable& e) {
        CHECK(e.name() == "w");
    }
    CHECK_THROWS_AS(P("x^y"), ParseError);
    CHECK_THROWS_AS(P("(x"), ParseError);
    CHECK_THROWS_AS(P("x $ y"), ParseError);
}

TEST_CASE("grlex printing order") {
    // Degree first, then the earlier declared variable dominates.
    CHECK(P("y + x^2 + x*y + 1 + x").to_string() == "x^2 + x*y + x + y + 1");
}

TEST_CASE("rational normalization") {
    RatFn a = P("(2*x + 2)/(4*y)");
    CHECK(a.den() == P("y").num());
    CHECK(a.num() == P("1/2*x + 1/2").num());
    RatFn b = P("(x^2 - 1)/(x - 1)");
    CHECK(b.is_polynomial());
    CHECK(b == P("x + 1"));
    RatFn c = P("1/(-x)");
    CHECK(sgn(c.den().leading().second) > 0);
    CHECK(c == RatFn(Poly(-1L), P("x").num()));
}

TEST_CASE("property: ring axioms") {
    Gen g(11);
    const auto& v = ctx();
    for (int trial = 0; trial < 60; ++trial) {
        RatFn a = g.ratfn(v, 4, 3), b = g.ratfn(v, 4, 3), c = g.ratfn(v, 4, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("property: Leibniz rule and commuting partials") {
    Gen g(12);
    const auto& v = ctx();
    for (int trial = 0; trial < 60; ++trial) {
        RatFn f = g.ratfn(v, 5, 4), h = g.ratfn(v, 5, 4);
        for (Symbol s : v) CHECK((f * h).partial(s) - f.partial(s) * h - f * h.partial(s) == RatFn());
        CHECK(f.partial(v[0]).partial(v[1]) == f.partial(v[1]).partial(v[0]));
        RatFn q = f / (h + RatFn(v.size() + 1L) + RatFn::variable(v[2]));
        CHECK(q.partial(v[0]).partial(v[1]) == q.partial(v[1]).partial(v[0]));
    }
}

TEST_CASE("property: print/parse round trip") {
    Gen g(13);
    const auto& v = ctx();
    for (int trial = 0; trial < 60; ++trial) {
        RatFn f = g.ratfn(v, 5, 3);
        if (trial % 2) f = f / (g.ratfn(v, 3, 2) + RatFn::variable(v[1]) + RatFn(7L));
        RatFn back = parse_ratfn(f.to_string(), v);
        CHECK(back == f);
    }
}

TEST_CASE("substitution") {
    Symbol x = Symbol::intern("x"), y = Symbol::intern("y");
    RatFn f = P("x^2*y + y");
    CHECK(f.substitute({{x, P("y + 1")}}) == P("(y+1)^2*y + y"));
    CHECK(f.substitute({{x, P("1/y")}}) == P("1/y + y"));
    CHECK(f.substitute({{x, RatFn(0L)}, {y, RatFn(3L)}}) == RatFn(3L));
}

TEST_CASE("derivations") {
    Symbol x = Symbol::intern("x"), y = Symbol::intern("y");
    Derivation a, b;
    a.add(x, RatFn(1L));
    b.add(y, P("x"));
    Derivation c = bracket(a, b);
    CHECK(c.component(y) == RatFn(1L));
    CHECK(c.component(x).is_zero());
    CHECK(a.apply(P("x^2*y")) == P("2*x*y"));
}
