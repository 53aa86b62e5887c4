#include <doctest.h>

#include "awb/prolongation.hpp"
#include "fixtures.hpp"

using namespace awb;
using namespace awb::testing;

namespace {

IMTensor canonical_form(const AlgebroidPtr& A) {
    std::vector<MixedTensor> D, l;
    for (int i = 0; i < A->n(); ++i) {
        D.push_back(A->zero(2, 0));
        l.push_back(A->dx(i));
    }
    return IMTensor::make(A, 0, 2, D, l, {});
}

RatFn var(const char* name) { return RatFn::variable(Symbol::intern(name)); }

// Random coefficients in the base and slot variables.
GenSection random_gen_section(Gen& g, const BigBasePtr& B, int terms) {
    auto vars = B->coordinates();
    GenSection G(B);
    for (int t = 0; t < terms; ++t) {
        int fam = static_cast<int>(g.integer(0, 2));
        if (fam == 1 && B->p == 0) fam = 0;
        if (fam == 2 && B->q == 0) fam = 0;
        Generator gen;
        if (fam == 0) {
            gen = {GenFamily::full, 0, static_cast<int>(g.integer(0, B->A->n() - 1))};
        } else if (fam == 1) {
            gen = {GenFamily::core_a, static_cast<int>(g.integer(0, B->p - 1)), static_cast<int>(g.integer(0, B->A->n() - 1))};
        } else {
            gen = {GenFamily::core_f, static_cast<int>(g.integer(0, B->q - 1)), static_cast<int>(g.integer(0, B->A->m() - 1))};
        }
        G.add(gen, g.ratfn(vars, 2, 1) + RatFn(g.rational()));
    }
    return G;
}

// Leibniz triple with random values; no bracket axioms.
IMTensor random_triple(Gen& g, const AlgebroidPtr& A, int q, int p) {
    std::vector<MixedTensor> D, l, r;
    for (int k = 0; k < A->n(); ++k) D.push_back(random_tensor(g, A->bundle(), p, q, 2, 1));
    if (p >= 1)
        for (int k = 0; k < A->n(); ++k) l.push_back(random_tensor(g, A->bundle(), p - 1, q, 2, 1));
    if (q >= 1)
        for (int s = 0; s < A->m(); ++s) r.push_back(random_tensor(g, A->bundle(), p, q - 1, 2, 1));
    return IMTensor::make(A, q, p, D, l, r);
}

bool same_triple(const IMTensor& a, const IMTensor& b) {
    return a.p() == b.p() && a.q() == b.q() && a.D_frame() == b.D_frame() && a.l_frame() == b.l_frame() &&
           a.r_frame() == b.r_frame();
}

AlgebroidPtr plane_bundle() {
    return Algebroid::vector_bundle(make_bundle(make_chart("B2", {"x1", "x2"}), {"e1", "e2"}));
}

}  // namespace

TEST_CASE("anchor on generators") {
    auto P = Algebroid::tangent(make_chart("P", {"x", "y"}));
    auto B = BigBase::make(P, 1, 0);
    CHECK(gen_anchor(GenSection::full(B, 0)) == tangent_lift(P->anchor_of_frame(0), B->L));
    CHECK(gen_anchor(GenSection(B)).is_zero());

    auto S = so3_dual();
    auto C = BigBase::make(S, 1, 1);
    Derivation expect;
    for (int j = 0; j < 3; ++j) expect.add(C->L.tangent[0][static_cast<std::size_t>(j)], S->anchor(0, j));
    CHECK(gen_anchor(GenSection::core_a(C, 0, 0)) == expect);
    Derivation vf;
    for (int k = 0; k < 3; ++k) vf.add(C->L.dual[0][static_cast<std::size_t>(k)], S->anchor(k, 1));
    CHECK(gen_anchor(GenSection::core_f(C, 0, 1)) == vf);
    CHECK_THROWS_AS(GenSection::core_a(B, 1, 0), std::out_of_range);
}

TEST_CASE("rescaled full generators keep the anchor") {
    Gen g(3);
    auto S = so3_dual();
    auto c = S->chart();
    for (auto [p, q] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
        auto B = BigBase::make(S, p, q);
        for (int k = 0; k < 3; ++k) {
            auto a = S->section(random_components(g, c, 3, 2, 2));
            CHECK(gen_anchor(full_of(B, a)) == prolonged_anchor(*S, a, B->L));
        }
    }
}

TEST_CASE("bracket on generators") {
    auto S = so3_dual();
    auto B = BigBase::make(S, 1, 1);
    CHECK(gen_bracket(GenSection::full(B, 0), GenSection::full(B, 1)) == GenSection::full(B, 2));
    CHECK(gen_bracket(GenSection::core_a(B, 0, 0), GenSection::core_a(B, 0, 1)).is_zero());
    CHECK(gen_bracket(GenSection::core_f(B, 0, 0), GenSection::core_a(B, 0, 1)).is_zero());
    CHECK(gen_bracket(GenSection::full(B, 0), GenSection::core_a(B, 0, 1)) == GenSection::core_a(B, 0, 2));

    RatFn F = var("X1_1");
    GenSection lhs = gen_bracket(GenSection::full(B, 0).scaled(F), GenSection::full(B, 1));
    GenSection rhs = GenSection::full(B, 2).scaled(F) -
                     GenSection::full(B, 0).scaled(gen_anchor(GenSection::full(B, 1)).apply(F));
    CHECK(lhs == rhs);

    // [full_a, core_f(j, dx_s)] = core_f(j, d rho_as): rho_12 = x3 on so3*
    CHECK(gen_bracket(GenSection::full(B, 0), GenSection::core_f(B, 0, 1)) == GenSection::core_f(B, 0, 2));
}

TEST_CASE("gen_bracket is skew, Jacobi and anchor-preserving") {
    Gen g(11);
    for (const auto& A : {so3_dual(), Algebroid::tangent(make_chart("P", {"x", "y"}))})
        for (auto [p, q] : {std::pair{1, 0}, {1, 1}, {0, 2}}) {
            auto B = BigBase::make(A, p, q);
            for (int k = 0; k < 3; ++k) {
                auto U = random_gen_section(g, B, 2), V = random_gen_section(g, B, 2), W = random_gen_section(g, B, 2);
                CHECK(gen_bracket(U, V) == -gen_bracket(V, U));
                GenSection jac = gen_bracket(U, gen_bracket(V, W)) + gen_bracket(V, gen_bracket(W, U)) +
                                 gen_bracket(W, gen_bracket(U, V));
                CHECK_MESSAGE(jac.is_zero(), jac.to_string());
                CHECK(gen_anchor(gen_bracket(U, V)) == bracket(gen_anchor(U), gen_anchor(V)));
            }
        }
}

TEST_CASE("mu section") {
    auto S = so3_dual();
    auto B = BigBase::make(S, 2, 0);
    MuSection mu = build_mu(B, canonical_form(S));
    for (int i = 0; i < 3; ++i) CHECK(mu.on({GenFamily::full, 0, i}).is_zero());
    // l = id: <mu, core_a(2,k)> = -X1_k
    CHECK(mu.on({GenFamily::core_a, 1, 2}) == -var("X1_3"));

    MuSection zero = build_mu(BigBase::make(S, 1, 1), IMTensor::zero(S, 1, 1));
    CHECK(zero.on({GenFamily::core_f, 0, 2}).is_zero());

    Gen g(5);
    auto c = S->chart();
    auto C = BigBase::make(S, 1, 1);
    auto Phi = random_tensor(g, S->bundle(), 1, 1, 2, 1);
    IMTensor T = coboundary(S, Phi);
    MuSection m = build_mu(C, T);
    for (int k = 0; k < 3; ++k) {
        auto expect = to_cwl_value(contract_form(S->anchor_of_frame(k), Phi), C->L.drop_tangent(0));
        CHECK(m.on({GenFamily::core_a, 0, k}) == expect);
    }
    // well defined under the rescaling rules
    for (int k = 0; k < 4; ++k) {
        auto a = S->section(random_components(g, c, 3, 2, 2));
        CHECK(m.pair(full_of(C, a)) == to_cwl_value(T.D(a), C->L));
    }
}

TEST_CASE("cocycle check agrees with the IM check") {
    auto S = so3_dual();
    IMTensor T = canonical_form(S);
    Report ok = cocycle_check(T);
    CHECK_MESSAGE(ok.passed(), ok.to_text());

    auto l = T.l_frame();
    l[0] = l[0].scaled(2L);
    IMTensor bad = IMTensor::make(S, 0, 2, T.D_frame(), l, {});
    Report cr = cocycle_check(bad);
    // Families compare with the frame probes; on x_s e_i the IM1 failure shows up
    // in the full/core_a family through the rescaling rule.
    Report ir = im_check(bad, false);
    CHECK(cr.failing_checks() == std::vector<std::string>{family_check_name(GenFamily::full, GenFamily::core_a),
                                                          family_check_name(GenFamily::core_a, GenFamily::core_a)});
    CHECK(ir.failing_checks() == std::vector<std::string>{"IM2", "IM4"});
    CHECK_FALSE(im_check(bad).passed("IM1"));

    Gen g(21);
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) {
            if (p + q == 0) continue;
            IMTensor C = coboundary(S, random_tensor(g, S->bundle(), p, q, 2, 1));
            Report rep = cocycle_check(C, false);
            CHECK_MESSAGE(rep.passed(), "p=", p, " q=", q, "\n", rep.to_text());
        }

    // Per equation on broken triples: each family fails exactly when its IM equation does.
    auto P = Algebroid::tangent(make_chart("P", {"x", "y"}));
    int broken = 0;
    for (const auto& A : {S, P})
        for (auto [p, q] : {std::pair{1, 1}, {2, 0}, {0, 2}, {2, 1}}) {
            IMTensor C = coboundary(A, random_tensor(g, A->bundle(), p, q, 2, 1));
            IMTensor R = random_triple(g, A, q, p);
            for (IMTensor X : {R, C + R.scaled(RatFn(Rational(1, 3)))}) {
                Report cr2 = cocycle_check(X, false);
                Report ir2 = im_check(X, false);
                CHECK(cr2.passed() == ir2.passed());
                for (auto f : {GenFamily::full, GenFamily::core_a, GenFamily::core_f})
                    for (auto h : {GenFamily::full, GenFamily::core_a, GenFamily::core_f}) {
                        if (f > h) continue;
                        int eq = family_equation(f, h);
                        if (!im_applicable(eq, q, p)) continue;
                        CHECK_MESSAGE(cr2.passed(family_check_name(f, h)) == ir2.passed("IM" + std::to_string(eq)),
                                      "equation ", eq, " p=", p, " q=", q);
                    }
                if (!ir2.passed()) ++broken;
            }
        }
    CHECK(broken >= 8);
}

TEST_CASE("linear tensor on the line") {
    auto E = make_bundle(make_chart("L", {"x"}), {"e"});
    auto A = Algebroid::vector_bundle(E);
    IMTensor T = IMTensor::make(A, 0, 1, {A->dx(0)}, {MixedTensor::scalar(E, RatFn(1L))}, {});
    LinearTensor tau = reconstruct_linear(T);
    CHECK(tau.value == var("t1") * var("xd1_1") + var("ud1_1"));
    IMTensor back = extract_components(tau);
    CHECK(back.D_frame()[0] == A->dx(0));
    CHECK(back.l_frame()[0].scalar_value() == RatFn(1L));
    CHECK(homogeneity_check(tau).passed());

    CHECK(reconstruct_linear(IMTensor::zero(A, 1, 1)).value.is_zero());
    CHECK(same_triple(extract_components(LinearTensor::make(E, 1, 1, RatFn())), IMTensor::zero(A, 1, 1)));

    Report h = homogeneity_check(LinearTensor::make(E, 1, 0, var("t1") * var("xd1_1").pow(2)));
    CHECK_FALSE(h.passed("homogeneity"));
    Report one = homogeneity_check(LinearTensor::make(E, 1, 0, RatFn(1L)));
    CHECK_FALSE(one.passed("zero insertion"));
    CHECK_THROWS_AS(extract_components(LinearTensor::make(E, 1, 0, var("t1") * var("t1") * var("xd1_1"))), CwlError);
    CHECK_THROWS_AS(extract_components(LinearTensor::make(E, 1, 0, var("xd1_1").pow(2))), CwlError);
}

TEST_CASE("reconstruction and extraction are inverse") {
    Gen g(8);
    auto A = plane_bundle();
    for (auto [p, q] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}}) {
        for (int k = 0; k < 3; ++k) {
            IMTensor T = random_triple(g, A, q, p);
            LinearTensor tau = reconstruct_linear(T);
            CHECK(linear_tensor_violation(tau).empty());
            CHECK(same_triple(extract_components(tau), T));
            CHECK(homogeneity_check(tau).passed());

            // the prolonged constant section reads D(u)
            std::vector<RatFn> uc = {RatFn(g.rational()), RatFn(g.rational())};
            CHECK(evaluate_prolonged_section(tau, uc) ==
                  to_cwl_value(T.D(A->section(uc)), tau.layout.projected()));

            // another extension of the section gives the same tensor
            std::vector<std::vector<Rational>> w(2, std::vector<Rational>(2));
            for (auto& row : w)
                for (auto& x : row) x = g.rational();
            CHECK(reconstruct_linear_extended(T, w).value == tau.value);

            // two bar-type insertions vanish
            if (p >= 2) CHECK(evaluate_bars(tau, {0, 1}, {}).is_zero());
            if (q >= 2) CHECK(evaluate_bars(tau, {}, {0, 1}).is_zero());
            if (p >= 1 && q >= 1) CHECK(evaluate_bars(tau, {0}, {0}).is_zero());
            if (p >= 1) CHECK(evaluate_bars(tau, {0}, {}) == evaluate_bar_vector(tau, 0, {var("ud1_1"), var("ud1_2")}));
        }
    }
}

TEST_CASE("extraction then reconstruction on random linear tensors") {
    Gen g(13);
    auto A = plane_bundle();
    const auto& E = A->bundle();
    auto x = E->chart->vars;
    for (auto [p, q] : {std::pair{1, 0}, {1, 1}, {2, 1}, {0, 2}}) {
        LinearLayout L = LinearLayout::make(*E, p, q);
        auto pick = [&](const std::vector<Symbol>& b) { return RatFn::variable(b[static_cast<std::size_t>(g.integer(0, 1))]); };
        RatFn raw;
        for (int term = 0; term < 4; ++term) {
            // one factor linear over the projected base, the rest read slots
            int special = static_cast<int>(g.integer(0, p + q));
            RatFn prod = g.ratfn(x, 2, 1) + RatFn(1L);
            if (special == p + q) prod *= pick(L.t);
            for (int i = 0; i < p; ++i) prod *= special == i ? pick(L.ud[static_cast<std::size_t>(i)]) : pick(L.xd[static_cast<std::size_t>(i)]);
            for (int j = 0; j < q; ++j)
                prod *= special == p + j ? pick(L.px[static_cast<std::size_t>(j)]) : pick(L.pu[static_cast<std::size_t>(j)]);
            raw += prod;
        }
        RatFn value = skew_project(CwlFunction{E, L.joint(), raw}).value;
        LinearTensor tau = LinearTensor::make(E, p, q, value);
        REQUIRE(linear_tensor_violation(tau).empty());
        CHECK(reconstruct_linear(extract_components(tau)).value == tau.value);
    }
}
