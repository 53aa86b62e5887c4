#include <doctest.h>

#include "awb/algebroid.hpp"
#include "fixtures.hpp"

using namespace awb;
using namespace awb::testing;

namespace {

MixedTensor random_section(Gen& g, const Algebroid& A, int terms = 2, int deg = 1) {
    return A.section(random_components(g, A.chart(), A.n(), terms, deg));
}

MixedTensor random_multisection(Gen& g, const Algebroid& A, int q) { return random_tensor(g, A.bundle(), 0, q, 2, 1); }

// Graded Jacobi: [X,[Y,Z]] - [[X,Y],Z] - (-1)^{(x-1)(y-1)} [Y,[X,Z]].
MixedTensor jacobiator(const Algebroid& A, const MixedTensor& X, const MixedTensor& Y, const MixedTensor& Z) {
    MixedTensor r = schouten(A, X, schouten(A, Y, Z)) - schouten(A, schouten(A, X, Y), Z);
    MixedTensor t = schouten(A, Y, schouten(A, X, Z));
    return ((X.q() - 1) * (Y.q() - 1)) % 2 ? r + t : r - t;
}

}  // namespace

TEST_CASE("algebroid axioms on standard examples") {
    auto plane = make_chart("P", {"x", "y"});
    CHECK(check_algebroid(*Algebroid::tangent(plane)).passed());

    auto S = so3_dual();
    Report rep = check_algebroid(*S);
    CHECK(rep.passed());
    CHECK(S->bracket(S->frame(0), S->frame(1)) == S->frame(2));
    CHECK(S->bracket(S->frame(1), S->frame(2)) == S->frame(0));
    CHECK(S->bracket(S->frame(2), S->frame(0)) == S->frame(1));
    // anchor of dx1 is x3 d/dx2 - x2 d/dx3
    auto c = S->chart();
    CHECK(S->anchor_of_frame(0) == VectorField(c, {RatFn(), fn(c, "x3"), fn(c, "-x2")}));

    // Mutating one structure function breaks Jacobi.
    Algebroid::Table upper = S->table();
    upper[0][1][2] = fn(c, "x1");
    auto bad = Algebroid::make("bad", S->bundle(), S->anchor_matrix(), upper);
    Report br = check_algebroid(*bad);
    CHECK_FALSE(br.passed("jacobi"));
    CHECK_FALSE(br.passed());

    // A non-skew raw table is reported.
    Algebroid::Table raw = S->table();
    raw[1][0][2] = RatFn(1L);
    CHECK_FALSE(check_algebroid(*Algebroid::make_raw("raw", S->bundle(), S->anchor_matrix(), raw)).passed("skew"));
}

TEST_CASE("Lie algebras over a point") {
    auto pt = make_chart("pt", {});
    auto B = make_bundle(pt, {"e1", "e2", "e3"});
    Algebroid::Table upper(3, std::vector<std::vector<RatFn>>(3, std::vector<RatFn>(3)));
    upper[0][1][2] = RatFn(1L);
    upper[1][2][0] = RatFn(1L);
    upper[0][2][1] = RatFn(-1L);
    auto g = Algebroid::make("so3", B, Algebroid::Matrix(3, std::vector<RatFn>{}), upper);
    CHECK(check_algebroid(*g).passed());
    CHECK(g->bracket(g->frame(2), g->frame(0)) == g->frame(1));
}

TEST_CASE("bracket examples") {
    auto plane = make_chart("P", {"x", "y"});
    auto T = Algebroid::tangent(plane);
    auto dX = T->frame(0), dY = T->frame(1);
    CHECK(T->bracket(dX, dY.scaled(fn(plane, "x"))) == dY);
    Gen g(11);
    auto S = so3_dual();
    for (int k = 0; k < 10; ++k) {
        auto a = random_section(g, *S);
        CHECK(S->bracket(a, a).is_zero());
    }
    CHECK_THROWS_AS(S->bracket(S->frame(0), dX), BundleMismatch);
}

TEST_CASE("cotangent algebroid examples") {
    auto plane = make_chart("P", {"x", "y"});
    auto T = tangent_bundle(plane);
    auto C = cotangent_algebroid(MixedTensor::basis(T, 0, set_of({0, 1})));
    CHECK(check_algebroid(*C).passed());
    CHECK(C->bracket(C->frame(0), C->frame(1)).is_zero());
    // dx -> d/dy, dy -> -d/dx
    CHECK(C->anchor(0, 1) == RatFn(1L));
    CHECK(C->anchor(1, 0) == RatFn(-1L));
    CHECK(C->bundle()->frame == std::vector<std::string>{"dx", "dy"});

    auto Z = cotangent_algebroid(MixedTensor(T, 0, 2));
    CHECK(check_algebroid(*Z).passed());
    for (int i = 0; i < 2; ++i) {
        CHECK(Z->anchor_of_frame(i).is_zero());
        for (int j = 0; j < 2; ++j) CHECK(Z->bracket(Z->frame(i), Z->frame(j)).is_zero());
    }

    // [df, dg] = d{f,g} for polynomial f, g
    auto S = so3_dual();
    auto c = S->chart();
    Gen g(5);
    auto N = S->anchor_matrix();
    for (int k = 0; k < 8; ++k) {
        RatFn f = g.ratfn(c->vars, 3, 2), h = g.ratfn(c->vars, 3, 2);
        auto dfA = df(S->bundle(), f), dhA = df(S->bundle(), h);
        MixedTensor lhs = koszul_bracket(N, dfA, dhA);
        RatFn pb;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) pb += partial(c, f, i) * N[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * partial(c, h, j);
        CHECK(lhs == df(S->bundle(), pb));
    }
}

TEST_CASE("schouten examples") {
    auto plane = make_chart("P", {"x", "y"});
    auto T = Algebroid::tangent(plane);
    auto biv = MixedTensor::basis(T->bundle(), 0, set_of({0, 1}));
    auto x = MixedTensor::scalar(T->bundle(), fn(plane, "x"));
    CHECK(schouten(*T, biv, x) == -T->frame(1));
    CHECK(schouten(*T, x, biv) == -T->frame(1));

    auto c = r3();
    auto T3 = Algebroid::tangent(c);
    auto pi = so3_bivector(c);
    CHECK(schouten(*T3, pi, pi).is_zero());
    // A non-Poisson bivector
    auto bad = MixedTensor::basis(T3->bundle(), 0, set_of({0, 1}), fn(c, "x2"));
    bad += MixedTensor::basis(T3->bundle(), 0, set_of({1, 2}));
    CHECK_FALSE(schouten(*T3, bad, bad).is_zero());

    // Degree-1 agreement with the bracket and with the action.
    Gen g(3);
    auto S = so3_dual();
    for (int k = 0; k < 6; ++k) {
        auto a = random_section(g, *S), b = random_section(g, *S);
        CHECK(schouten(*S, a, b) == S->bracket(a, b));
        auto X = random_multisection(g, *S, 2);
        CHECK(schouten(*S, a, X) == action(*S, a, X));
        // property (1): [X, f] = (-1)^{q-1} i_{rho* df} X
        RatFn f = g.ratfn(c->vars, 2, 2);
        auto rf = S->rho_star(df(S->bundle(), f));
        CHECK(schouten(*S, X, MixedTensor::scalar(S->bundle(), f)) == -contract_dual(rf, X));
        CHECK(schouten(*S, a, MixedTensor::scalar(S->bundle(), f)) == contract_dual(rf, a));
    }
}

TEST_CASE("schouten graded skewness and Jacobi") {
    Gen g(21);
    auto S = so3_dual();
    for (int k = 0; k < 6; ++k) {
        auto a = random_section(g, *S), b = random_section(g, *S);
        auto X = random_multisection(g, *S, 2), Y = random_multisection(g, *S, 2);
        CHECK(schouten(*S, X, Y) == schouten(*S, Y, X));
        CHECK(schouten(*S, a, X) == -schouten(*S, X, a));
        CHECK(jacobiator(*S, a, b, X).is_zero());
        CHECK(jacobiator(*S, a, X, Y).is_zero());
    }
    // Also on a tangent algebroid, where the bracket has derivative terms.
    auto c = make_chart("P", {"x", "y", "z"});
    auto T = Algebroid::tangent(c);
    for (int k = 0; k < 4; ++k) {
        auto a = random_section(g, *T, 2, 2), b = random_section(g, *T, 2, 2);
        auto X = random_multisection(g, *T, 2), Y = random_multisection(g, *T, 2);
        CHECK(jacobiator(*T, a, b, X).is_zero());
        CHECK(jacobiator(*T, a, X, Y).is_zero());
    }
}

TEST_CASE("action examples and properties") {
    auto plane = make_chart("P", {"x", "y"});
    auto T = Algebroid::tangent(plane);
    auto B = T->bundle();
    auto dxdx = MixedTensor::basis(B, set_of({0}), set_of({0}));
    auto dydy = MixedTensor::basis(B, set_of({1}), set_of({1}));
    CHECK(action(*T, T->frame(0), dxdx).is_zero());
    CHECK(action(*T, T->frame(0), dydy.scaled(fn(plane, "x"))) == dydy);

    Gen g(8);
    auto S = so3_dual();
    auto SB = S->bundle();
    for (int k = 0; k < 6; ++k) {
        int p = static_cast<int>(g.integer(0, 2)), q = static_cast<int>(g.integer(0, 2));
        auto phi = random_tensor(g, SB, p, q, 2, 1);
        auto a = random_section(g, *S), b = random_section(g, *S);
        // Lie algebra action
        MixedTensor lhs = action(*S, S->bracket(a, b), phi);
        CHECK(lhs == action(*S, a, action(*S, b, phi)) - action(*S, b, action(*S, a, phi)));
        // (fa).tau = f(a.tau) + df ^ i_{rho a} tau - a ^ i_{df} tau
        RatFn f = g.ratfn(S->chart()->vars, 2, 2);
        MixedTensor res = action(*S, a.scaled(f), phi) - action(*S, a, phi).scaled(f) -
                          wedge(df(SB, f), contract_form_or_zero(S->anchor_of(a), phi)) +
                          wedge(a, contract_dual_or_zero(S->rho_star(df(SB, f)), phi));
        CHECK(res.is_zero());
    }
}

TEST_CASE("lift examples") {
    auto plane = make_chart("P", {"x", "y"});
    SlotLayout L = SlotLayout::standard(2, 2, 1, 0);
    VectorField Y(plane, {RatFn(), fn(plane, "x")});
    Derivation YT = tangent_lift(Y, L);
    Symbol X1 = L.tangent[0][0], X2 = L.tangent[0][1];
    Derivation expected;
    expected.add(plane->vars[1], fn(plane, "x"));
    expected.add(X2, RatFn::variable(X1));
    CHECK(YT == expected);
    // L_{Y^T} l_alpha = l_{L_Y alpha} and Y^T f = Y f
    Gen g(4);
    auto T = tangent_bundle(plane);
    for (int k = 0; k < 5; ++k) {
        auto alpha = random_tensor(g, T, 1, 0);
        auto Lalpha = lie_derivative(Y, alpha);
        CHECK(YT.apply(to_cwl_value(alpha, L)) == to_cwl_value(Lalpha, L));
        RatFn f = g.ratfn(plane->vars, 3, 2);
        CHECK(YT.apply(f) == Y.apply(f));
    }

    auto S = so3_dual();
    auto c = S->chart();
    SlotLayout D = SlotLayout::standard(3, 3, 0, 1);
    Derivation H = hamiltonian_lift(*S, S->frame(0), D);
    const auto& ph = D.dual[0];
    Derivation Hx;
    Hx.add(c->vars[1], fn(c, "x3"));
    Hx.add(c->vars[2], fn(c, "-x2"));
    Hx.add(ph[1], RatFn::variable(ph[2]));
    Hx.add(ph[2], -RatFn::variable(ph[1]));
    CHECK(H == Hx);
    CHECK(H.apply(RatFn::variable(ph[1])) == RatFn::variable(ph[2]));

    // Both characterizing identities for frame and non-frame sections.
    for (int k = 0; k < 6; ++k) {
        auto a = k < 3 ? S->frame(k) : random_section(g, *S);
        auto b = random_section(g, *S);
        Derivation Ha = hamiltonian_lift(*S, a, D);
        CHECK(Ha.apply(to_cwl_value(b, D)) == to_cwl_value(S->bracket(a, b), D));
        RatFn f = g.ratfn(c->vars, 3, 2);
        CHECK(Ha.apply(f) == S->anchor_of(a).apply(f));
    }

    auto E = make_bundle(plane, {"e1", "e2"});
    auto t = std::vector<Symbol>{Symbol::intern("t1"), Symbol::intern("t2")};
    Derivation v = vertical_lift(MixedTensor::frame(E, 0), t);
    Derivation dt1;
    dt1.add(t[0], RatFn(1L));
    CHECK(v == dt1);
}

TEST_CASE("cwl Lie derivative identities") {
    auto plane = make_chart("P", {"x", "y"});
    auto T = Algebroid::tangent(plane);
    auto tau = MixedTensor::basis(T->bundle(), set_of({0}), set_of({0}));
    auto Y = VectorField::coordinate(plane, 1);
    Report r = cwl_lie_derivative_identities(*T, tau, T->frame(0), Y, {RatFn(1L), RatFn(2L)});
    CHECK(r.passed());
    CHECK(cwl_lie_derivative_identities(*T, MixedTensor(T->bundle(), 1, 1), T->frame(0), Y, {RatFn(1L), RatFn()})
              .passed());

    Gen g(31);
    auto S = so3_dual();
    auto c = S->chart();
    for (int k = 0; k < 8; ++k) {
        int p = static_cast<int>(g.integer(0, 2)), q = static_cast<int>(g.integer(0, 2));
        auto t = random_tensor(g, S->bundle(), p, q, 2, 1);
        auto a = k % 2 ? S->frame(k % 3) : random_section(g, *S);
        Report rep = cwl_lie_derivative_identities(*S, t, a, random_field(g, c, 2, 1),
                                                   random_components(g, c, 3));
        CHECK_MESSAGE(rep.passed(), rep.to_text());
    }

    // A deliberately wrong sign in the slot identity is caught.
    auto t2 = MixedTensor::basis(T->bundle(), set_of({0, 1}), 0);
    SlotLayout L = SlotLayout::standard(2, 2, 2, 0);
    RatFn lhs = vertical_lift_tangent(Y, L, 1).apply(to_cwl_value(t2, L));
    RatFn wrong = lhs - to_cwl_value(contract_form(Y, t2), L.drop_tangent(1));
    CHECK_FALSE(wrong.is_zero());
    CHECK(lie_identity_tangent(*T, t2, Y, 1).is_zero());
}
