#pragma once

// Shared random tensors and standard algebroids for the unit tests.

#include "awb/algebroid.hpp"
#include "awb/expr.hpp"
#include "generators.hpp"

namespace awb::testing {

inline MixedTensor random_tensor(Gen& g, const BundlePtr& b, int p, int q, int terms = 3, int deg = 2) {
    MixedTensor t(b, p, q);
    for (IndexSet I : subsets(b->chart->dim(), p))
        for (IndexSet J : subsets(b->rank(), q))
            if (g.coin(0.7)) t.add_term(I, J, g.ratfn(b->chart->vars, terms, deg));
    return t;
}

inline VectorField random_field(Gen& g, const ChartPtr& c, int terms = 3, int deg = 2) {
    std::vector<RatFn> v;
    for (int i = 0; i < c->dim(); ++i) v.push_back(g.ratfn(c->vars, terms, deg));
    return VectorField(c, v);
}

inline std::vector<RatFn> random_components(Gen& g, const ChartPtr& c, int count, int terms = 2, int deg = 1) {
    std::vector<RatFn> v;
    for (int i = 0; i < count; ++i) v.push_back(g.ratfn(c->vars, terms, deg));
    return v;
}

inline RatFn fn(const ChartPtr& c, const char* s) { return parse_ratfn(s, c->vars); }

// x3 d1^d2 + x1 d2^d3 + x2 d3^d1 on R^3.
inline MixedTensor so3_bivector(const ChartPtr& c) {
    BundlePtr T = tangent_bundle(c);
    MixedTensor pi(T, 0, 2);
    pi.add_term(0, set_of({0, 1}), RatFn::variable(c->vars[2]));
    pi.add_term(0, set_of({1, 2}), RatFn::variable(c->vars[0]));
    pi.add_term(0, set_of({0, 2}), -RatFn::variable(c->vars[1]));
    return pi;
}

inline ChartPtr r3() { return make_chart("R3", {"x1", "x2", "x3"}); }

inline AlgebroidPtr so3_dual() { return cotangent_algebroid(so3_bivector(r3())); }

}  // namespace awb::testing
