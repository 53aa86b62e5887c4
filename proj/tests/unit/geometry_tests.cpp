#include <doctest.h>

#include "awb/expr.hpp"
#include "awb/geometry.hpp"
#include "fixtures.hpp"

using namespace awb;
using awb::testing::Gen;
using awb::testing::random_field;
using awb::testing::random_tensor;

namespace {

struct Plane {
    ChartPtr M = make_chart("M", {"x", "y"});
    BundlePtr A = make_bundle(M, {"e1", "e2"});
    RatFn f(const char* s) const { return parse_ratfn(s, M->vars); }
};

struct Space3 {
    ChartPtr M = make_chart("R3", {"x1", "x2", "x3"});
    BundlePtr A = make_bundle(M, {"a1", "a2"});
};

}  // namespace

TEST_CASE("wedge examples") {
    Plane P;
    auto dx = MixedTensor::dx(P.A, 0), dy = MixedTensor::dx(P.A, 1);
    auto w = wedge(dx, dy);
    CHECK(w.coeff(set_of({0, 1}), 0) == RatFn(1L));
    CHECK(wedge(dx, dx).is_zero());
    CHECK(wedge(dy, dx) == -w);
    auto e1 = MixedTensor::frame(P.A, 0), e2 = MixedTensor::frame(P.A, 1);
    auto mixed = wedge(e1, wedge(dx, e2));
    CHECK(mixed == MixedTensor::basis(P.A, set_of({0}), set_of({0, 1})));
    // Degrees beyond the dimension give the zero tensor.
    CHECK(wedge(w, dx).is_zero());
    ChartPtr other = make_chart("N", {"u"});
    CHECK_THROWS_AS(wedge(dx, MixedTensor::dx(make_bundle(other, {"e1", "e2"}), 0)), BundleMismatch);
}

TEST_CASE("contraction examples") {
    Plane P;
    auto dxdy = MixedTensor::basis(P.A, set_of({0, 1}), 0);
    CHECK(contract_form(VectorField::coordinate(P.M, 0), dxdy) == MixedTensor::dx(P.A, 1));
    CHECK(contract_form(VectorField::coordinate(P.M, 1), dxdy) == -MixedTensor::dx(P.A, 0));
    auto e12 = MixedTensor::basis(P.A, 0, set_of({0, 1}));
    CHECK(contract_dual({RatFn(1L), RatFn()}, e12) == MixedTensor::frame(P.A, 1));
    auto dxe1 = MixedTensor::basis(P.A, set_of({0}), set_of({0}));
    CHECK(contract_form(VectorField::coordinate(P.M, 1), dxe1).is_zero());
    CHECK_THROWS_AS(contract_form(VectorField::coordinate(P.M, 0), MixedTensor::frame(P.A, 0)), DegreeError);
    CHECK_THROWS_AS(contract_dual({RatFn(1L), RatFn()}, MixedTensor::dx(P.A, 0)), DegreeError);
}

TEST_CASE("exterior derivative and Lie derivative examples") {
    Plane P;
    auto xdy = MixedTensor::dx(P.A, 1).scaled(P.f("x"));
    CHECK(d(xdy) == MixedTensor::basis(P.A, set_of({0, 1}), 0));
    CHECK(d(MixedTensor::dx(P.A, 0)).is_zero());
    VectorField X(P.M, {P.f("x"), RatFn()});
    CHECK(lie_derivative(X, MixedTensor::dx(P.A, 0)) == MixedTensor::dx(P.A, 0));
    CHECK_THROWS_AS(d(MixedTensor::frame(P.A, 0)), DegreeError);
}

TEST_CASE("cwl examples") {
    Plane P;
    auto w = MixedTensor::basis(P.A, set_of({0, 1}), 0);
    CwlFunction c = to_cwl(w);
    CHECK(c.value.to_string() == "X1_1*X2_2 - X1_2*X2_1");
    CHECK(from_cwl(c) == w);

    MixedTensor zero(P.A, 1, 1);
    CHECK(to_cwl(zero).value.is_zero());
    CHECK(from_cwl(to_cwl(zero)).is_zero());

    SlotLayout L = SlotLayout::standard(2, 2, 2, 0);
    CwlFunction sym{P.A, L, RatFn::variable(L.tangent[0][0]) * RatFn::variable(L.tangent[1][0])};
    try {
        from_cwl(sym);
        FAIL("symmetric function accepted");
    } catch (const CwlError& e) {
        CHECK(e.witness() == "X1_1*X2_1");
    }
    CHECK(skew_project(sym).value.is_zero());

    CwlFunction quad{P.A, L, RatFn::variable(L.tangent[0][0]).pow(2) * RatFn::variable(L.tangent[1][0])};
    CHECK_THROWS_AS(from_cwl(quad), CwlError);
}

TEST_CASE("property: cwl round trip and projection") {
    Gen g(21);
    Space3 S;
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 2; ++q)
            for (int trial = 0; trial < 4; ++trial) {
                MixedTensor t = random_tensor(g, S.A, p, q);
                CwlFunction c = to_cwl(t);
                CHECK(from_cwl(c) == t);
                CHECK(skew_project(c).value == c.value);
                CHECK(to_cwl(from_cwl(c)).value == c.value);
            }
}

TEST_CASE("property: d^2 = 0, Leibniz rules, contraction anticommutes") {
    Gen g(22);
    Space3 S;
    for (int trial = 0; trial < 10; ++trial)
        for (int p = 0; p <= 3; ++p) {
            MixedTensor w = random_tensor(g, S.A, p, 0);
            CHECK(d(d(w)).is_zero());
            MixedTensor eta = random_tensor(g, S.A, static_cast<int>(g.integer(0, 3 - p)), 0);
            VectorField X = random_field(g, S.M), Y = random_field(g, S.M);
            CHECK(lie_derivative(X, wedge(w, eta)) == wedge(lie_derivative(X, w), eta) + wedge(w, lie_derivative(X, eta)));
            CHECK(lie_derivative(X, w) == lie_derivative_cartan(X, w));
            int sgn = p % 2 ? -1 : 1;
            CHECK(d(wedge(w, eta)) == wedge(d(w), eta) + wedge(w, d(eta)).scaled(sgn));
            if (p >= 2) {
                CHECK((contract_form(X, contract_form(Y, w)) + contract_form(Y, contract_form(X, w))).is_zero());
            }
            // [L_X, L_Y] = L_[X,Y]
            CHECK(lie_derivative(X, lie_derivative(Y, w)) - lie_derivative(Y, lie_derivative(X, w)) ==
                  lie_derivative(lie_bracket(X, Y), w));
        }
}

TEST_CASE("mixed tensor printing") {
    Plane P;
    MixedTensor t = MixedTensor::basis(P.A, set_of({0}), set_of({1}), P.f("x+1")) +
                    MixedTensor::basis(P.A, set_of({1}), set_of({0}), P.f("-y"));
    CHECK(t.to_string() == "(x + 1)*dx*e2 - y*dy*e1");
}
