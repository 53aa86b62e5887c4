#include "awb/vvforms.hpp"

#include <future>
#include <stdexcept>

namespace awb {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

int parity_sign(int k) { return (k % 2 + 2) % 2 ? -1 : 1; }

void require_vv(const MixedTensor& K, const char* op) {
    if (K.q() != 1 || K.n() != K.m()) throw DegreeError(std::string(op) + ": expected a vector-valued form on TM");
}

void require_q1(const IMTensor& T, const char* op) {
    if (T.q() != 1) throw DegreeError(std::string(op) + ": expected an IM tensor with q = 1");
}

void require_11(const IMTensor& T, const char* op) {
    if (T.q() != 1 || T.p() != 1) throw DegreeError(std::string(op) + ": expected an IM (1,1)-tensor");
}

RatFn var(const ChartPtr& c, int s) { return RatFn::variable(c->vars[u(s)]); }

// Vector-valued 2-form from its values on pairs of coordinate fields.
template <class F>
MixedTensor vv2_from_values(const ChartPtr& chart, F value) {
    const int m = chart->dim();
    MixedTensor out(tangent_bundle(chart), 2, 1);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            VectorField v = value(VectorField::coordinate(chart, a), VectorField::coordinate(chart, b));
            for (int s = 0; s < m; ++s)
                if (!v[s].is_zero()) out.add_term(set_of({a, b}), IndexSet{1} << s, v[s]);
        }
    return out;
}

// Splits eta in Omega^j(M, A) into the j-forms alpha_k with eta = sum alpha_k (x) e_k.
std::vector<MixedTensor> split_forms(const IMTensor& T, const MixedTensor& eta) {
    const Algebroid& A = *T.algebroid();
    if (eta.q() != 1 || eta.chart() != A.chart() || eta.n() != A.n())
        throw BundleMismatch("expected a form with values in the algebroid");
    std::vector<MixedTensor> out(u(A.n()), MixedTensor(A.bundle(), eta.p(), 0));
    for (const auto& [k, c] : eta.coeffs()) out[u(set_indices(k.second)[0])].add_term(k.first, 0, c);
    return out;
}

}  // namespace

// ------------------------------------------------------------ vector-valued forms

MixedTensor on_bundle(const MixedTensor& t, const BundlePtr& b) {
    if (t.bundle() == b) return t;
    if (t.chart() != b->chart) throw BundleMismatch("on_bundle: another chart");
    if (t.q() > 0 && t.n() != b->rank()) throw BundleMismatch("on_bundle: multivector part on a bundle of another rank");
    MixedTensor r(b, t.p(), t.q());
    for (const auto& [k, c] : t.coeffs()) r.add_term(k.first, k.second, c);
    return r;
}

MixedTensor vv_component(const MixedTensor& K, int s) {
    require_vv(K, "vv_component");
    MixedTensor r(K.bundle(), K.p(), 0);
    for (const auto& [k, c] : K.coeffs())
        if (k.second == (IndexSet{1} << s)) r.add_term(k.first, 0, c);
    return r;
}

MixedTensor vv_from_components(const ChartPtr& chart, int p, const std::vector<MixedTensor>& comps) {
    if (static_cast<int>(comps.size()) != chart->dim()) throw DegreeError("vv_from_components: one form per coordinate");
    MixedTensor r(tangent_bundle(chart), p, 1);
    for (int s = 0; s < chart->dim(); ++s) {
        const MixedTensor& f = comps[u(s)];
        if (f.is_zero()) continue;
        if (f.q() != 0 || f.p() != p || f.chart() != chart) throw DegreeError("vv_from_components: bad component");
        for (const auto& [k, c] : f.coeffs()) r.add_term(k.first, IndexSet{1} << s, c);
    }
    return r;
}

MixedTensor vv_from_matrix(const ChartPtr& chart, const Endo& M) {
    BundlePtr T = tangent_bundle(chart);
    std::vector<MixedTensor> comps;
    for (int s = 0; s < chart->dim(); ++s) comps.push_back(MixedTensor::one_form(T, M[u(s)]));
    return vv_from_components(chart, 1, comps);
}

Endo vv_matrix(const MixedTensor& K) {
    require_vv(K, "vv_matrix");
    if (K.p() != 1) throw DegreeError("vv_matrix: expected a (1,1) tensor");
    const int m = K.m();
    Endo M(u(m), std::vector<RatFn>(u(m)));
    for (int s = 0; s < m; ++s)
        for (int t = 0; t < m; ++t) M[u(s)][u(t)] = K.coeff(IndexSet{1} << t, IndexSet{1} << s);
    return M;
}

VectorField vv_apply(const MixedTensor& K, const VectorField& X) {
    require_vv(K, "vv_apply");
    if (K.p() != 1) throw DegreeError("vv_apply: expected a (1,1) tensor");
    std::vector<RatFn> v;
    for (int s = 0; s < K.m(); ++s) v.push_back(contract_form(X, vv_component(K, s)).scalar_value());
    return VectorField(K.chart(), v);
}

VectorField vv_apply(const MixedTensor& K, const VectorField& X, const VectorField& Y) {
    require_vv(K, "vv_apply");
    if (K.p() != 2) throw DegreeError("vv_apply: expected a vector-valued 2-form");
    std::vector<RatFn> v;
    for (int s = 0; s < K.m(); ++s) v.push_back(form_eval(vv_component(K, s), X, Y));
    return VectorField(K.chart(), v);
}

RatFn form_eval(const MixedTensor& omega, const VectorField& X, const VectorField& Y) {
    if (omega.is_zero()) return {};
    return contract_form(Y, contract_form(X, omega)).scalar_value();
}

RatFn form_eval(const MixedTensor& omega, const VectorField& X, const VectorField& Y, const VectorField& Z) {
    if (omega.is_zero()) return {};
    return contract_form(Z, contract_form(Y, contract_form(X, omega))).scalar_value();
}

MixedTensor i_K(const MixedTensor& K, const MixedTensor& omega) {
    require_vv(K, "i_K");
    if (omega.q() != 0) throw DegreeError("i_K: expected a form");
    if (omega.chart() != K.chart()) throw BundleMismatch("i_K: forms on another chart");
    MixedTensor r(omega.bundle(), std::max(0, omega.p() + K.p() - 1), 0);
    if (omega.p() == 0) return r;
    for (int s = 0; s < K.m(); ++s) {
        MixedTensor w = contract_form(VectorField::coordinate(K.chart(), s), omega);
        if (w.is_zero()) continue;
        MixedTensor ks = vv_component(K, s);
        if (ks.is_zero()) continue;
        r += wedge(on_bundle(ks, omega.bundle()), w);
    }
    return r;
}

MixedTensor L_K(const MixedTensor& K, const MixedTensor& omega) {
    MixedTensor a = i_K(K, d(omega));
    MixedTensor b = d(i_K(K, omega));
    return parity_sign(K.p() - 1) > 0 ? a - b : a + b;
}

MixedTensor fn_bracket(const MixedTensor& K1, const MixedTensor& K2) {
    require_vv(K1, "fn_bracket");
    require_vv(K2, "fn_bracket");
    if (K1.chart() != K2.chart()) throw BundleMismatch("fn_bracket: different charts");
    const int sg = parity_sign(K1.p() * K2.p());
    std::vector<MixedTensor> comps;
    for (int s = 0; s < K1.m(); ++s) {
        MixedTensor c = L_K(K1, vv_component(K2, s));
        MixedTensor e = L_K(K2, vv_component(K1, s));
        comps.push_back(sg > 0 ? c - e : c + e);
    }
    return vv_from_components(K1.chart(), K1.p() + K2.p(), comps);
}

MixedTensor fn_bracket_11(const MixedTensor& K1, const MixedTensor& K2) {
    require_vv(K1, "fn_bracket_11");
    require_vv(K2, "fn_bracket_11");
    if (K1.p() != 1 || K2.p() != 1) throw DegreeError("fn_bracket_11: expected (1,1) tensors");
    return vv2_from_values(K1.chart(), [&](const VectorField& U, const VectorField& V) {
        VectorField k1u = vv_apply(K1, U), k1v = vv_apply(K1, V), k2u = vv_apply(K2, U), k2v = vv_apply(K2, V);
        VectorField uv = lie_bracket(U, V);
        return lie_bracket(k1u, k2v) - vv_apply(K2, lie_bracket(k1u, V)) - lie_bracket(k1v, k2u) +
               vv_apply(K2, lie_bracket(k1v, U)) - vv_apply(K1, lie_bracket(k2u, V) - lie_bracket(k2v, U)) +
               vv_apply(K2, vv_apply(K1, uv)) + vv_apply(K1, vv_apply(K2, uv));
    });
}

MixedTensor nijenhuis_torsion(const MixedTensor& K) {
    require_vv(K, "nijenhuis_torsion");
    if (K.p() != 1) throw DegreeError("nijenhuis_torsion: expected a (1,1) tensor");
    return vv2_from_values(K.chart(), [&](const VectorField& X, const VectorField& Y) {
        VectorField kx = vv_apply(K, X), ky = vv_apply(K, Y);
        return lie_bracket(kx, ky) - vv_apply(K, lie_bracket(kx, Y) + lie_bracket(X, ky)) +
               vv_apply(K, vv_apply(K, lie_bracket(X, Y)));
    });
}

// ------------------------------------------------------------ IM vector-valued forms

MixedTensor r_as_vv(const IMTensor& T) {
    require_q1(T, "r_as_vv");
    return vv_from_components(T.algebroid()->chart(), T.p(), T.r_frame());
}

namespace {

// D(alpha (x) a) given D(a) and l(a); l_a is ignored when p = 0.
MixedTensor extend_term(const IMTensor& T, const MixedTensor& rvv, const MixedTensor& alpha, const MixedTensor& a,
                        const MixedTensor& Da, const MixedTensor& la) {
    const int j = alpha.p(), p = T.p();
    MixedTensor out = wedge(alpha, Da);
    MixedTensor inner(T.algebroid()->bundle(), j + p, 1);
    if (T.has_l()) inner += wedge(d(alpha), la);
    MixedTensor lr = wedge(L_K(rvv, alpha), a);
    inner = parity_sign(j * (p - 1)) > 0 ? inner - lr : inner + lr;
    return parity_sign(j) > 0 ? out + inner : out - inner;
}

}  // namespace

MixedTensor imvv_extend_D(const IMTensor& T, const MixedTensor& eta) {
    require_q1(T, "imvv_extend_D");
    const Algebroid& A = *T.algebroid();
    auto alphas = split_forms(T, eta);
    MixedTensor rvv = r_as_vv(T);
    MixedTensor out(A.bundle(), eta.p() + T.p(), 1);
    for (int k = 0; k < A.n(); ++k) {
        if (alphas[u(k)].is_zero()) continue;
        MixedTensor la = T.has_l() ? T.l_frame()[u(k)] : MixedTensor();
        out += extend_term(T, rvv, alphas[u(k)], A.frame(k), T.D_frame()[u(k)], la);
    }
    return out;
}

MixedTensor imvv_extend_D(const IMTensor& T, const MixedTensor& alpha, const MixedTensor& a) {
    require_q1(T, "imvv_extend_D");
    const Algebroid& A = *T.algebroid();
    MixedTensor al = on_bundle(alpha, A.bundle());
    return extend_term(T, r_as_vv(T), al, a, T.D(a), T.has_l() ? T.l(a) : MixedTensor());
}

MixedTensor imvv_extend_l(const IMTensor& T, const MixedTensor& eta) {
    require_q1(T, "imvv_extend_l");
    const Algebroid& A = *T.algebroid();
    if (!T.has_l()) throw DegreeError("imvv_extend_l: l is absent for p = 0");
    auto alphas = split_forms(T, eta);
    MixedTensor out(A.bundle(), eta.p() + T.p() - 1, 1);
    for (int k = 0; k < A.n(); ++k)
        if (!alphas[u(k)].is_zero()) out += wedge(alphas[u(k)], T.l_frame()[u(k)]);
    return out;
}

IMTensor imvv_bracket(const IMTensor& T1, const IMTensor& T2) {
    require_q1(T1, "imvv_bracket");
    require_q1(T2, "imvv_bracket");
    if (T1.algebroid() != T2.algebroid()) throw BundleMismatch("imvv_bracket: different algebroids");
    const AlgebroidPtr& A = T1.algebroid();
    const int p1 = T1.p(), p2 = T2.p(), p = p1 + p2;
    const int sg = parity_sign(p1 * p2);
    auto signed_add = [](MixedTensor& acc, int sign, const MixedTensor& t) { acc = sign > 0 ? acc + t : acc - t; };

    std::vector<MixedTensor> D, l, r;
    for (int k = 0; k < A->n(); ++k) {
        const MixedTensor& d1 = T1.D_frame()[u(k)];
        const MixedTensor& d2 = T2.D_frame()[u(k)];
        MixedTensor dk = imvv_extend_D(T2, d1);
        signed_add(dk, -sg, imvv_extend_D(T1, d2));
        D.push_back(dk);
        if (p == 0) continue;
        MixedTensor lk(A->bundle(), p - 1, 1);
        if (T1.has_l()) lk += imvv_extend_D(T2, T1.l_frame()[u(k)]);
        if (T2.has_l()) signed_add(lk, -sg, imvv_extend_D(T1, T2.l_frame()[u(k)]));
        if (T2.has_l()) signed_add(lk, parity_sign(p1), imvv_extend_l(T2, d1));
        if (T1.has_l()) signed_add(lk, -parity_sign((p1 - 1) * p2), imvv_extend_l(T1, d2));
        l.push_back(lk);
    }
    MixedTensor rb = fn_bracket(r_as_vv(T1), r_as_vv(T2));
    for (int s = 0; s < A->m(); ++s) r.push_back(on_bundle(vv_component(rb, s), A->bundle()));
    return IMTensor::make(A, 1, p, std::move(D), std::move(l), std::move(r));
}

// ------------------------------------------------------------ IM (1,1) tensors

Endo endo_identity(int n) {
    Endo M(u(n), std::vector<RatFn>(u(n)));
    for (int i = 0; i < n; ++i) M[u(i)][u(i)] = RatFn(1L);
    return M;
}

Endo endo_mul(const Endo& A, const Endo& B) {
    const std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    Endo C(n, std::vector<RatFn>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (A[i][t].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!B[t][j].is_zero()) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

Endo complement(const Endo& P) {
    Endo C = endo_identity(static_cast<int>(P.size()));
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < P.size(); ++j) C[i][j] -= P[i][j];
    return C;
}

MixedTensor apply_endo(const Endo& M, const MixedTensor& a) {
    auto c = a.section_components();
    std::vector<RatFn> v(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t k = 0; k < c.size(); ++k)
            if (!c[k].is_zero() && !M[i][k].is_zero()) v[i] += M[i][k] * c[k];
    return MixedTensor::section(a.bundle(), v);
}

VectorField apply_endo(const Endo& M, const VectorField& X) {
    std::vector<RatFn> v(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t k = 0; k < M.size(); ++k)
            if (!X.comps()[k].is_zero() && !M[i][k].is_zero()) v[i] += M[i][k] * X.comps()[k];
    return VectorField(X.chart(), v);
}

MixedTensor D_along(const IMTensor& T, const VectorField& X, const MixedTensor& a) {
    require_11(T, "D_along");
    return contract_form(X, T.D(a));
}

Endo l_matrix(const IMTensor& T) {
    require_11(T, "l_matrix");
    const int n = T.algebroid()->n();
    Endo M(u(n), std::vector<RatFn>(u(n)));
    for (int k = 0; k < n; ++k) {
        auto c = T.l_frame()[u(k)].section_components();
        for (int i = 0; i < n; ++i) M[u(i)][u(k)] = c[u(i)];
    }
    return M;
}

Endo r_matrix(const IMTensor& T) {
    require_11(T, "r_matrix");
    Endo M;
    for (const auto& f : T.r_frame()) M.push_back(f.form_components());
    return M;
}

VectorField r_apply(const IMTensor& T, const VectorField& X) { return apply_endo(r_matrix(T), X); }

MixedTensor section_of(const VectorField& X) { return X.as_tensor(); }

VectorField field_of(const MixedTensor& s) {
    if (s.n() != s.m()) throw BundleMismatch("field_of: not a section of a tangent bundle");
    return VectorField(s.chart(), s.section_components());
}

MixedTensor im1s_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b, const VectorField& X) {
    const Algebroid& A = *T.algebroid();
    VectorField ra = A.anchor_of(a), rb = A.anchor_of(b);
    return D_along(T, X, A.bracket(a, b)) - A.bracket(a, D_along(T, X, b)) + A.bracket(b, D_along(T, X, a)) -
           D_along(T, lie_bracket(rb, X), a) + D_along(T, lie_bracket(ra, X), b);
}

MixedTensor im2s_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b) {
    const Algebroid& A = *T.algebroid();
    return T.l(A.bracket(a, b)) - A.bracket(a, T.l(b)) + D_along(T, A.anchor_of(b), a);
}

MixedTensor im3s_residual(const IMTensor& T, const MixedTensor& a, const VectorField& X) {
    const Algebroid& A = *T.algebroid();
    VectorField ra = A.anchor_of(a);
    return section_of(r_apply(T, lie_bracket(ra, X)) - lie_bracket(ra, r_apply(T, X)) +
                      A.anchor_of(D_along(T, X, a)));
}

MixedTensor im6s_residual(const IMTensor& T, const MixedTensor& a) {
    const Algebroid& A = *T.algebroid();
    return section_of(r_apply(T, A.anchor_of(a)) - A.anchor_of(T.l(a)));
}

namespace {

std::vector<VectorField> field_probes(const ChartPtr& chart, bool scaled) {
    std::vector<VectorField> F;
    const int m = chart->dim();
    for (int t = 0; t < m; ++t) F.push_back(VectorField::coordinate(chart, t));
    if (scaled)
        for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) F.push_back(VectorField::coordinate(chart, t).scaled(var(chart, s)));
    return F;
}

struct Probe11 {
    std::string label;
    MixedTensor value;
};

std::string lbl(const std::string& k, const std::string& v) { return k + "=" + v; }

std::vector<Probe11> evaluate11(const IMTensor& T, int eq, const std::vector<MixedTensor>& S,
                                const std::vector<VectorField>& F) {
    std::vector<Probe11> out;
    switch (eq) {
        case 1:
            for (std::size_t i = 0; i < S.size(); ++i)
                for (std::size_t j = i + 1; j < S.size(); ++j)
                    for (const auto& X : F)
                        out.push_back({lbl("a", S[i].to_string()) + ", " + lbl("b", S[j].to_string()) + ", " +
                                           lbl("X", X.to_string()),
                                       im1s_residual(T, S[i], S[j], X)});
            break;
        case 2:
            for (const auto& a : S)
                for (const auto& b : S)
                    out.push_back({lbl("a", a.to_string()) + ", " + lbl("b", b.to_string()), im2s_residual(T, a, b)});
            break;
        case 3:
            for (const auto& a : S)
                for (const auto& X : F)
                    out.push_back({lbl("a", a.to_string()) + ", " + lbl("X", X.to_string()), im3s_residual(T, a, X)});
            break;
        case 6:
            for (const auto& a : S) out.push_back({lbl("a", a.to_string()), im6s_residual(T, a)});
            break;
    }
    return out;
}

}  // namespace

Report im11_check(const IMTensor& T, bool scaled_probes) {
    require_11(T, "im11_check");
    Report rep("IM(1,1) equations on " + T.algebroid()->name());
    ProbeSet P = im_probes(*T.algebroid(), scaled_probes);
    auto F = field_probes(T.algebroid()->chart(), scaled_probes);
    const int eqs[] = {1, 2, 3, 6};
    std::vector<std::future<std::vector<Probe11>>> jobs;
    for (int eq : eqs) jobs.push_back(std::async(std::launch::async, [&, eq] { return evaluate11(T, eq, P.sections, F); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::string name = "IM" + std::to_string(eqs[i]) + "*";
        rep.declare(name);
        for (auto& pr : jobs[i].get()) rep.record(name, pr.label, pr.value);
    }
    return rep;
}

IMTensor im11_power(const IMTensor& T, int n) {
    require_11(T, "im11_power");
    if (n < 1) throw std::invalid_argument("im11_power: exponent must be positive");
    const AlgebroidPtr& A = T.algebroid();
    const ChartPtr& chart = A->chart();
    Endo L = l_matrix(T), R = r_matrix(T);
    std::vector<Endo> Lp{endo_identity(A->n())}, Rp{endo_identity(A->m())};
    for (int j = 1; j <= n; ++j) {
        Lp.push_back(endo_mul(Lp.back(), L));
        Rp.push_back(endo_mul(Rp.back(), R));
    }
    std::vector<MixedTensor> D, l, r;
    for (int k = 0; k < A->n(); ++k) {
        MixedTensor dk(A->bundle(), 1, 1);
        for (int t = 0; t < A->m(); ++t) {
            MixedTensor acc(A->bundle(), 0, 1);
            for (int j = 1; j <= n; ++j) {
                VectorField X = apply_endo(Rp[u(n - j)], VectorField::coordinate(chart, t));
                acc += apply_endo(Lp[u(j - 1)], contract_form(X, T.D_frame()[u(k)]));
            }
            dk += wedge(A->dx(t), acc);
        }
        D.push_back(dk);
        std::vector<RatFn> col;
        for (int i = 0; i < A->n(); ++i) col.push_back(Lp[u(n)][u(i)][u(k)]);
        l.push_back(A->section(col));
    }
    for (int s = 0; s < A->m(); ++s) r.push_back(MixedTensor::one_form(A->bundle(), Rp[u(n)][u(s)]));
    return IMTensor::make(A, 1, 1, std::move(D), std::move(l), std::move(r));
}

Report structure_conditions(const IMTensor& T, StructureKind kind) {
    require_11(T, "structure_conditions");
    const Algebroid& A = *T.algebroid();
    const char* kname = kind == StructureKind::projection ? "projection" : kind == StructureKind::product ? "product" : "complex";
    Report rep(std::string(kname) + " conditions on " + A.name());
    rep.declare("l^2");
    rep.declare("r^2");
    rep.declare("lD + Dr");
    Endo L = l_matrix(T), R = r_matrix(T);
    Endo L2 = endo_mul(L, L), R2 = endo_mul(R, R);
    auto target = [&](const Endo& P, std::size_t i, std::size_t j) -> RatFn {
        if (kind == StructureKind::projection) return P[i][j];
        RatFn id = i == j ? RatFn(1L) : RatFn();
        return kind == StructureKind::product ? id : -id;
    };
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = 0; j < L.size(); ++j)
            rep.record("l^2", "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", L2[i][j] - target(L, i, j));
    for (std::size_t i = 0; i < R.size(); ++i)
        for (std::size_t j = 0; j < R.size(); ++j)
            rep.record("r^2", "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", R2[i][j] - target(R, i, j));
    ProbeSet P = im_probes(A, true);
    for (const auto& a : P.sections)
        for (const auto& X : field_probes(A.chart(), false)) {
            MixedTensor dxa = D_along(T, X, a);
            MixedTensor res = apply_endo(L, dxa) + D_along(T, apply_endo(R, X), a);
            if (kind == StructureKind::projection) res -= dxa;
            rep.record("lD + Dr", lbl("a", a.to_string()) + ", " + lbl("X", X.to_string()), res);
        }
    return rep;
}

IMTensor nijenhuis_components(const IMTensor& T) {
    require_11(T, "nijenhuis_components");
    return imvv_bracket(T, T).scaled(RatFn(Rational(1, 2)));
}

MixedTensor d_squared_expansion(const IMTensor& T, const VectorField& X, const VectorField& Y, const MixedTensor& a) {
    require_11(T, "d_squared_expansion");
    VectorField rx = r_apply(T, X), ry = r_apply(T, Y), xy = lie_bracket(X, Y);
    return D_along(T, Y, D_along(T, X, a)) - D_along(T, X, D_along(T, Y, a)) - D_along(T, lie_bracket(rx, Y), a) +
           D_along(T, lie_bracket(ry, X), a) + T.l(D_along(T, xy, a)) + D_along(T, r_apply(T, xy), a);
}

Report d_squared_cross_check(const IMTensor& T) {
    require_11(T, "d_squared_cross_check");
    const Algebroid& A = *T.algebroid();
    Report rep("D^2 routes on " + A.name());
    rep.declare("D^2 routes");
    rep.declare("D^2 Leibniz");
    IMTensor N = nijenhuis_components(T);
    ProbeSet P = im_probes(A, true);
    auto F = field_probes(A.chart(), true);
    for (const auto& a : P.sections) {
        MixedTensor composed = imvv_extend_D(T, T.D(a));
        rep.record("D^2 Leibniz", lbl("a", a.to_string()), composed - N.D(a));
        for (std::size_t i = 0; i < F.size(); ++i)
            for (std::size_t j = i + 1; j < F.size(); ++j) {
                MixedTensor lhs = contract_form(F[j], contract_form(F[i], composed));
                rep.record("D^2 routes", lbl("a", a.to_string()) + ", " + lbl("X", F[i].to_string()) + ", " + lbl("Y", F[j].to_string()),
                           lhs - d_squared_expansion(T, F[i], F[j], a));
            }
    }
    return rep;
}

IMTensor product_to_projection(const IMTensor& Q) {
    require_11(Q, "product_to_projection");
    const AlgebroidPtr& A = Q.algebroid();
    const RatFn half(Rational(1, 2));
    std::vector<MixedTensor> D, l, r;
    for (int k = 0; k < A->n(); ++k) {
        D.push_back(Q.D_frame()[u(k)].scaled(half));
        l.push_back((Q.l_frame()[u(k)] + A->frame(k)).scaled(half));
    }
    for (int s = 0; s < A->m(); ++s) r.push_back((Q.r_frame()[u(s)] + A->dx(s)).scaled(half));
    return IMTensor::make(A, 1, 1, std::move(D), std::move(l), std::move(r));
}

// ------------------------------------------------------------ Poisson quasi-Nijenhuis

MixedTensor r_dual(const MixedTensor& r, const MixedTensor& alpha) {
    Endo M = vv_matrix(r);
    auto a = alpha.form_components();
    std::vector<RatFn> v(a.size());
    for (std::size_t t = 0; t < a.size(); ++t)
        for (std::size_t s = 0; s < a.size(); ++s)
            if (!a[s].is_zero() && !M[s][t].is_zero()) v[t] += a[s] * M[s][t];
    return MixedTensor::one_form(alpha.bundle(), v);
}

MixedTensor nijenhuis_dual(const MixedTensor& r, const MixedTensor& alpha) {
    MixedTensor N = nijenhuis_torsion(r);
    auto a = alpha.form_components();
    MixedTensor out(alpha.bundle(), 2, 0);
    for (int s = 0; s < r.m(); ++s)
        if (!a[u(s)].is_zero()) out += on_bundle(vv_component(N, s), alpha.bundle()).scaled(a[u(s)]);
    return out;
}

namespace {

MixedTensor bivector_from_sharp(const ChartPtr& chart, const Endo& N) {
    MixedTensor pi(tangent_bundle(chart), 0, 2);
    for (int i = 0; i < chart->dim(); ++i)
        for (int j = i + 1; j < chart->dim(); ++j) pi.add_term(0, set_of({i, j}), N[u(i)][u(j)]);
    return pi;
}

VectorField sharp_apply(const Endo& N, const ChartPtr& chart, const MixedTensor& alpha) {
    auto a = alpha.form_components();
    std::vector<RatFn> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (!a[i].is_zero() && !N[i][j].is_zero()) v[j] += a[i] * N[i][j];
    return VectorField(chart, v);
}

void require_poisson(const MixedTensor& pi) {
    auto TM = Algebroid::tangent(pi.chart());
    MixedTensor s = schouten(*TM, on_bundle(pi, TM->bundle()), on_bundle(pi, TM->bundle()));
    if (!s.is_zero()) throw std::invalid_argument("bivector is not Poisson: [pi,pi] = " + s.to_string());
}

}  // namespace

Report pqn_check(const MixedTensor& pi, const MixedTensor& r, const PqnMode& mode) {
    require_vv(r, "pqn_check");
    if (r.p() != 1) throw DegreeError("pqn_check: expected a (1,1) tensor");
    if (pi.chart() != r.chart()) throw BundleMismatch("pqn_check: different charts");
    require_poisson(pi);
    const ChartPtr& chart = pi.chart();
    const int m = chart->dim();
    BundlePtr TB = tangent_bundle(chart);
    auto TM = Algebroid::tangent(chart);
    Report rep("Poisson quasi-Nijenhuis conditions");
    rep.declare("sharp compat");
    rep.declare("C^r");
    rep.declare("[pi,pi_r]");

    Endo N = sharp_matrix(pi), R = vv_matrix(r);
    Endo Nr(u(m), std::vector<RatFn>(u(m)));
    for (int i = 0; i < m; ++i) {
        VectorField v = apply_endo(R, VectorField(chart, N[u(i)]));
        Nr[u(i)] = v.comps();
    }
    for (int s = 0; s < m; ++s) {
        MixedTensor dxs = MixedTensor::dx(TB, s);
        rep.record("sharp compat", lbl("alpha", dxs.to_string()),
                   section_of(sharp_apply(N, chart, r_dual(r, dxs)) - VectorField(chart, Nr[u(s)])));
    }
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            MixedTensor al = MixedTensor::dx(TB, a), be = MixedTensor::dx(TB, b);
            MixedTensor c = koszul_bracket(Nr, al, be) - koszul_bracket(N, r_dual(r, al), be) -
                            koszul_bracket(N, al, r_dual(r, be)) + r_dual(r, koszul_bracket(N, al, be));
            rep.record("C^r", lbl("alpha", al.to_string()) + ", " + lbl("beta", be.to_string()), c);
        }
    MixedTensor pir = bivector_from_sharp(chart, Nr);
    rep.record("[pi,pi_r]", "", schouten(*TM, on_bundle(pi, TM->bundle()), on_bundle(pir, TM->bundle())));

    if (mode.kind == PqnMode::full) {
        AlgebroidPtr cot = cotangent_algebroid(pi);
        IMForm F{cot, 3, {}, {}};
        for (int i = 0; i < m; ++i) {
            F.mu.push_back(nijenhuis_dual(r, cot->dx(i)));
            F.nu.push_back(cot->zero(3, 0));
        }
        rep.merge(imform_check(F), "N_r* ");
    } else if (mode.kind == PqnMode::relative) {
        const MixedTensor& phi = mode.phi;
        if (phi.p() != 3 || phi.q() != 0 || phi.chart() != chart) throw DegreeError("pqn_check: phi must be a 3-form");
        if (!d(phi).is_zero()) throw std::invalid_argument("pqn_check: phi is not closed");
        MixedTensor Nt = nijenhuis_torsion(r);
        rep.declare("relative");
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                VectorField X = VectorField::coordinate(chart, a), Y = VectorField::coordinate(chart, b);
                MixedTensor phixy = contract_form(Y, contract_form(X, phi));
                rep.record("relative", lbl("X", X.to_string()) + ", " + lbl("Y", Y.to_string()),
                           section_of(vv_apply(Nt, X, Y) - sharp_apply(N, chart, phixy)));
            }
    }
    return rep;
}

MixedTensor dr_apply(const AlgebroidPtr& cot, const MixedTensor& r, const MixedTensor& alpha) {
    const ChartPtr& chart = cot->chart();
    const int m = chart->dim();
    MixedTensor al = on_bundle(alpha, cot->bundle());
    MixedTensor da = d(al), lr = L_K(r, al);
    MixedTensor out(cot->bundle(), 1, 1);
    for (int t = 0; t < m; ++t)
        for (int w = 0; w < m; ++w) {
            VectorField X = VectorField::coordinate(chart, t), Y = VectorField::coordinate(chart, w);
            RatFn c = form_eval(da, X, vv_apply(r, Y)) - form_eval(lr, X, Y);
            if (!c.is_zero()) out.add_term(IndexSet{1} << t, IndexSet{1} << w, c);
        }
    return out;
}

IMTensor dr_operator(const MixedTensor& pi, const MixedTensor& r) {
    require_poisson(pi);
    return dr_operator(cotangent_algebroid(pi), r);
}

IMTensor dr_operator(const AlgebroidPtr& cot, const MixedTensor& r) {
    require_vv(r, "dr_operator");
    if (r.p() != 1) throw DegreeError("dr_operator: expected a (1,1) tensor");
    if (r.chart() != cot->chart()) throw BundleMismatch("dr_operator: different charts");
    Endo R = vv_matrix(r);
    std::vector<MixedTensor> D, l, rr;
    for (int i = 0; i < cot->m(); ++i) {
        D.push_back(dr_apply(cot, r, cot->dx(i)));
        l.push_back(cot->section(R[u(i)]));
        rr.push_back(MixedTensor::one_form(cot->bundle(), R[u(i)]));
    }
    return IMTensor::make(cot, 1, 1, std::move(D), std::move(l), std::move(rr));
}

Report dr_nijenhuis_identities(const MixedTensor& pi, const MixedTensor& r) {
    IMTensor T = dr_operator(pi, r);
    const AlgebroidPtr& A = T.algebroid();
    const ChartPtr& chart = A->chart();
    const int m = chart->dim();
    Report rep("D^r and the Nijenhuis torsion");
    rep.declare("[D^r,r*] + N_r*");
    rep.declare("(D^r)^2 pairing");
    IMTensor N = nijenhuis_components(T);
    MixedTensor Nt = nijenhuis_torsion(r);
    for (int i = 0; i < m; ++i) {
        MixedTensor ns = nijenhuis_dual(r, A->dx(i));
        MixedTensor expect(A->bundle(), 1, 1);
        for (int t = 0; t < m; ++t)
            for (int w = 0; w < m; ++w) {
                RatFn c = form_eval(ns, VectorField::coordinate(chart, t), VectorField::coordinate(chart, w));
                if (!c.is_zero()) expect.add_term(IndexSet{1} << t, IndexSet{1} << w, c);
            }
        rep.record("[D^r,r*] + N_r*", lbl("alpha", A->dx(i).to_string()), N.l_frame()[u(i)] + expect);
    }
    std::vector<MixedTensor> alphas;
    for (int i = 0; i < m; ++i) {
        alphas.push_back(A->dx(i));
        for (int s = 0; s < m; ++s) alphas.push_back(A->dx(i).scaled(var(chart, s)));
    }
    for (const auto& al : alphas) {
        MixedTensor a = A->section(al.form_components());
        MixedTensor d2 = imvv_extend_D(T, T.D(a));
        MixedTensor dns = d(nijenhuis_dual(r, al)), da = d(al);
        for (int x = 0; x < m; ++x)
            for (int y = x + 1; y < m; ++y) {
                VectorField X = VectorField::coordinate(chart, x), Y = VectorField::coordinate(chart, y);
                auto val = contract_form(Y, contract_form(X, d2)).section_components();
                VectorField nxy = vv_apply(Nt, X, Y);
                for (int z = 0; z < m; ++z) {
                    VectorField Z = VectorField::coordinate(chart, z);
                    RatFn rhs = -form_eval(dns, X, Y, Z) + form_eval(da, Z, nxy);
                    rep.record("(D^r)^2 pairing",
                               lbl("alpha", al.to_string()) + ", " + lbl("X", X.to_string()) + ", " + lbl("Y", Y.to_string()) +
                                   ", " + lbl("Z", Z.to_string()),
                               val[u(z)] - rhs);
                }
            }
    }
    return rep;
}

}  // namespace awb
