#include <stdexcept>

#include "awb/vvforms.hpp"

namespace awb {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

RatFn var(const ChartPtr& c, int s) { return RatFn::variable(c->vars[u(s)]); }

std::string lbl(const std::string& k, const std::string& v) { return k + "=" + v; }

std::vector<RatFn> unit(int n, int i) {
    std::vector<RatFn> v(u(n));
    v[u(i)] = RatFn(1L);
    return v;
}

RatFn pair_with(const MixedTensor& a, const std::vector<RatFn>& mu) {
    auto c = a.section_components();
    RatFn r;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c[i].is_zero() && !mu[i].is_zero()) r += c[i] * mu[i];
    return r;
}

// l^* mu, with (l^* mu)_c = <mu, l e_c>.
std::vector<RatFn> l_dual(const Endo& L, const std::vector<RatFn>& mu) {
    std::vector<RatFn> v(mu.size());
    for (std::size_t c = 0; c < mu.size(); ++c)
        for (std::size_t k = 0; k < mu.size(); ++k)
            if (!mu[k].is_zero() && !L[k][c].is_zero()) v[c] += mu[k] * L[k][c];
    return v;
}

std::vector<MixedTensor> frames_and_scaled(const Algebroid& A) { return im_probes(A, true).sections; }

std::vector<VectorField> coordinate_fields(const ChartPtr& chart) {
    std::vector<VectorField> F;
    for (int t = 0; t < chart->dim(); ++t) F.push_back(VectorField::coordinate(chart, t));
    return F;
}

void require_11(const IMTensor& T, const char* op) {
    if (T.q() != 1 || T.p() != 1) throw DegreeError(std::string(op) + ": expected an IM (1,1)-tensor");
}

bool all_frames_zero(const IMTensor& N) {
    for (const auto* v : {&N.D_frame(), &N.l_frame(), &N.r_frame()})
        for (const auto& t : *v)
            if (!t.is_zero()) return false;
    return true;
}

}  // namespace

// ------------------------------------------------------------ bialgebroids

BialgebroidData BialgebroidData::make(QDifferential delta) {
    if (delta.q != 2) throw DegreeError("bialgebroid data need a 2-differential");
    const Algebroid& A = *delta.A;
    for (int j = 0; j < A.m(); ++j) {
        MixedTensor s = delta.apply(delta.on_coordinates[u(j)]);
        if (!s.is_zero())
            throw std::invalid_argument("delta^2 does not vanish on " + A.chart()->vars[u(j)].name() + ": " + s.to_string());
    }
    for (int i = 0; i < A.n(); ++i) {
        MixedTensor s = delta.apply(delta.on_frame[u(i)]);
        if (!s.is_zero()) throw std::invalid_argument("delta^2 does not vanish on " + A.bundle()->frame[u(i)] + ": " + s.to_string());
    }
    BialgebroidData B;
    B.A = delta.A;
    B.delta = std::move(delta);
    return B;
}

BialgebroidData BialgebroidData::cotangent(const MixedTensor& pi) { return cotangent(cotangent_algebroid(pi)); }

BialgebroidData BialgebroidData::cotangent(const AlgebroidPtr& cot) {
    if (cot->n() != cot->m()) throw BundleMismatch("not a cotangent algebroid");
    QDifferential delta;
    delta.A = cot;
    delta.q = 2;
    for (int j = 0; j < delta.A->m(); ++j) delta.on_coordinates.push_back(delta.A->frame(j));
    for (int i = 0; i < delta.A->n(); ++i) delta.on_frame.push_back(delta.A->zero(0, 2));
    return make(std::move(delta));
}

VectorField BialgebroidData::rho_dual(const std::vector<RatFn>& mu) const {
    std::vector<RatFn> v;
    for (const auto& dx : delta.on_coordinates) v.push_back(pair_with(dx, mu));
    return VectorField(A->chart(), v);
}

namespace {

RatFn theta_value(const BialgebroidData& B, const IMTensor& T, const Endo& L, int k, int i, int j) {
    const Algebroid& A = *B.A;
    const int n = A.n();
    auto ei = unit(n, i), ej = unit(n, j);
    MixedTensor a = A.frame(k);
    return pair_with(D_along(T, B.rho_dual(ei), a), ej) + evaluate_bisection(B.delta.apply(a), l_dual(L, ei), ej) -
           evaluate_bisection(B.delta.apply(T.l(a)), ei, ej);
}

RatFn delta_K(const BialgebroidData& B, const IMTensor& T, const Endo& L, const MixedTensor& a,
              const std::vector<RatFn>& mu1, const std::vector<RatFn>& mu2) {
    return evaluate_bisection(B.delta.apply(a), mu1, l_dual(L, mu2)) - pair_with(D_along(T, B.rho_dual(mu1), a), mu2);
}

// i_Theta as a degree-1 derivation on multisections.
MixedTensor i_theta(const std::vector<MixedTensor>& theta, const MixedTensor& X) {
    const BundlePtr& b = X.bundle();
    MixedTensor out(b, 0, X.q() + 1);
    for (const auto& [k, c] : X.coeffs()) {
        auto idx = set_indices(k.second);
        for (std::size_t t = 0; t < idx.size(); ++t) {
            MixedTensor term = MixedTensor::scalar(b, c);
            for (std::size_t s = 0; s < idx.size(); ++s)
                term = wedge(term, s == t ? theta[u(idx[s])] : MixedTensor::frame(b, idx[s]));
            out = t % 2 ? out - term : out + term;
        }
    }
    return out;
}

}  // namespace

std::vector<MixedTensor> theta_components(const BialgebroidData& B, const IMTensor& T) {
    require_11(T, "theta_components");
    if (T.algebroid() != B.A) throw BundleMismatch("theta_components: different algebroids");
    const Algebroid& A = *B.A;
    Endo L = l_matrix(T);
    std::vector<MixedTensor> out;
    for (int k = 0; k < A.n(); ++k) {
        MixedTensor w = A.zero(0, 2);
        for (int i = 0; i < A.n(); ++i)
            for (int j = i + 1; j < A.n(); ++j) w.add_term(0, set_of({i, j}), theta_value(B, T, L, k, i, j));
        out.push_back(w);
    }
    return out;
}

Report deltaK_theta(const BialgebroidData& B, const IMTensor& T) {
    require_11(T, "deltaK_theta");
    if (T.algebroid() != B.A) throw BundleMismatch("deltaK_theta: different algebroids");
    const Algebroid& A = *B.A;
    const int n = A.n();
    Report rep("delta_K and Theta on " + A.name());
    for (const char* c : {"r rho_* = rho_* l^*", "delta_K skew", "Theta skew", "[delta,i_Theta] deg 0", "[delta,i_Theta] deg 1"})
        rep.declare(c);
    Endo L = l_matrix(T);
    for (int i = 0; i < n; ++i) {
        auto ei = unit(n, i);
        rep.record("r rho_* = rho_* l^*", "mu=" + std::to_string(i + 1),
                   section_of(r_apply(T, B.rho_dual(ei)) - B.rho_dual(l_dual(L, ei))));
    }
    for (const auto& a : frames_and_scaled(A))
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                auto ei = unit(n, i), ej = unit(n, j);
                rep.record("delta_K skew", lbl("a", a.to_string()) + ", mu=(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                           delta_K(B, T, L, a, ei, ej) + delta_K(B, T, L, a, ej, ei));
            }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                rep.record("Theta skew", "k=" + std::to_string(k + 1) + ", mu=(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                           theta_value(B, T, L, k, i, j) + theta_value(B, T, L, k, j, i));
    auto theta = theta_components(B, T);
    for (int s = 0; s < A.m(); ++s)
        rep.record("[delta,i_Theta] deg 0", "f=" + A.chart()->vars[u(s)].name(), i_theta(theta, B.delta.on_coordinates[u(s)]));
    for (int k = 0; k < n; ++k)
        rep.record("[delta,i_Theta] deg 1", lbl("a", A.frame(k).to_string()),
                   B.delta.apply(theta[u(k)]) + i_theta(theta, B.delta.apply(A.frame(k))));
    bool zero = true;
    for (const auto& t : theta) zero = zero && t.is_zero();
    rep.add_note(zero ? "Theta = 0" : "Theta != 0");
    return rep;
}

// ------------------------------------------------------------ complex structures

std::vector<std::vector<MixedTensor>> dolbeault_table(const IMTensor& T) {
    require_11(T, "dolbeault_table");
    const Algebroid& A = *T.algebroid();
    std::vector<std::vector<MixedTensor>> tab;
    for (const auto& X : coordinate_fields(A.chart())) {
        std::vector<MixedTensor> row;
        for (int k = 0; k < A.n(); ++k) row.push_back(-T.l(D_along(T, X, A.frame(k))));
        tab.push_back(row);
    }
    return tab;
}

Report holomorphic_check(const IMTensor& T) {
    require_11(T, "holomorphic_check");
    const Algebroid& A = *T.algebroid();
    Report rep("holomorphic structure on " + A.name());
    if (A.n() % 2 || A.m() % 2) {
        rep.declare("l^2");
        rep.declare("r^2");
        if (A.n() % 2) rep.record("l^2", "rank " + std::to_string(A.n()) + " is odd", RatFn(1L));
        if (A.m() % 2) rep.record("r^2", "dimension " + std::to_string(A.m()) + " is odd", RatFn(1L));
        rep.add_note("structurally unsatisfiable: a square root of -id needs even rank");
        return rep;
    }
    rep.merge(structure_conditions(T, StructureKind::complex));

    IMTensor N = nijenhuis_components(T);
    for (const char* c : {"D^2", "[D,l]", "N_r", "E_D", "E_l", "E_r", "IM6*"}) rep.declare(c);
    for (int k = 0; k < A.n(); ++k) {
        rep.record("D^2", lbl("a", A.frame(k).to_string()), N.D_frame()[u(k)]);
        rep.record("[D,l]", lbl("a", A.frame(k).to_string()), N.l_frame()[u(k)]);
    }
    for (int s = 0; s < A.m(); ++s) rep.record("N_r", "dx" + std::to_string(s + 1), N.r_frame()[u(s)]);

    // The defect operators are the residuals of the (1,1) equations.
    auto S = frames_and_scaled(A);
    auto F = coordinate_fields(A.chart());
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = i + 1; j < S.size(); ++j)
            for (const auto& X : F)
                rep.record("E_D", lbl("a", S[i].to_string()) + ", " + lbl("b", S[j].to_string()) + ", " + lbl("X", X.to_string()),
                           im1s_residual(T, S[i], S[j], X));
        for (const auto& b : S) rep.record("E_l", lbl("a", S[i].to_string()) + ", " + lbl("b", b.to_string()), im2s_residual(T, S[i], b));
        for (const auto& X : F) rep.record("E_r", lbl("a", S[i].to_string()) + ", " + lbl("X", X.to_string()), im3s_residual(T, S[i], X));
        rep.record("IM6*", lbl("a", S[i].to_string()), im6s_residual(T, S[i]));
    }
    if (!rep.passed()) return rep;

    // Flatness along X + i rX, Y + i rY; the bracket of these is V + i rV with V = [X,Y] - [rX,rY].
    rep.declare("Dolbeault flat");
    auto nabla = [&](const VectorField& X, const MixedTensor& a) { return -T.l(D_along(T, X, a)); };
    for (std::size_t s = 0; s < F.size(); ++s)
        for (std::size_t t = s + 1; t < F.size(); ++t) {
            VectorField V = lie_bracket(F[s], F[t]) - lie_bracket(r_apply(T, F[s]), r_apply(T, F[t]));
            for (int k = 0; k < A.n(); ++k) {
                MixedTensor a = A.frame(k);
                MixedTensor curv = nabla(F[s], nabla(F[t], a)) - nabla(F[t], nabla(F[s], a)) - nabla(V, a);
                rep.record("Dolbeault flat", lbl("X", F[s].to_string()) + ", " + lbl("Y", F[t].to_string()) + ", " + lbl("a", a.to_string()),
                           curv);
            }
        }
    for (int k = 0; k < A.n(); ++k)
        if (T.D_frame()[u(k)].is_zero()) rep.add_note(A.bundle()->frame[u(k)] + " is holomorphic");
    return rep;
}

// ------------------------------------------------------------ projections

MixedTensor lambda_plus(const IMTensor& T, const VectorField& X, const MixedTensor& a) {
    Endo L = l_matrix(T), R = r_matrix(T);
    return D_along(T, apply_endo(complement(R), X), apply_endo(complement(L), a));
}

MixedTensor lambda_minus(const IMTensor& T, const VectorField& Y, const MixedTensor& a) {
    Endo L = l_matrix(T), R = r_matrix(T);
    return D_along(T, apply_endo(R, Y), apply_endo(L, a));
}

MixedTensor nabla_plus(const IMTensor& T, const VectorField& X, const MixedTensor& b) {
    Endo L = l_matrix(T), R = r_matrix(T);
    return D_along(T, apply_endo(complement(R), X), apply_endo(L, b));
}

MixedTensor nabla_minus(const IMTensor& T, const VectorField& Y, const MixedTensor& b) {
    Endo L = l_matrix(T), R = r_matrix(T);
    return -D_along(T, apply_endo(R, Y), apply_endo(complement(L), b));
}

VectorField curvature(const Endo& r, const VectorField& X, const VectorField& Y) {
    Endo c = complement(r);
    return apply_endo(r, lie_bracket(apply_endo(c, X), apply_endo(c, Y)));
}

VectorField cocurvature(const Endo& r, const VectorField& X, const VectorField& Y) {
    return apply_endo(complement(r), lie_bracket(apply_endo(r, X), apply_endo(r, Y)));
}

Report projection_analysis(const IMTensor& T) {
    require_11(T, "projection_analysis");
    const Algebroid& A = *T.algebroid();
    const ChartPtr& chart = A.chart();
    Report rep("projection analysis on " + A.name());
    Report sc = structure_conditions(T, StructureKind::projection);
    rep.merge(sc, "projection ");
    if (!sc.passed()) {
        rep.add_note("not a projection; splitting skipped");
        return rep;
    }
    Endo L = l_matrix(T), R = r_matrix(T), Lc = complement(L), Rc = complement(R);
    auto F = coordinate_fields(chart);

    rep.declare("rho(A0) in T0");
    rep.declare("rho(A1) in T1");
    for (int k = 0; k < A.n(); ++k) {
        rep.record("rho(A0) in T0", "k=" + std::to_string(k + 1), section_of(apply_endo(R, A.anchor_of(apply_endo(Lc, A.frame(k))))));
        rep.record("rho(A1) in T1", "k=" + std::to_string(k + 1), section_of(apply_endo(Rc, A.anchor_of(apply_endo(L, A.frame(k))))));
    }

    for (const char* c : {"Lambda+ tensorial", "Lambda- tensorial", "nabla+ Leibniz", "nabla- Leibniz"}) rep.declare(c);
    for (const auto& X : F)
        for (int k = 0; k < A.n(); ++k)
            for (int s = 0; s < A.m(); ++s) {
                MixedTensor a = A.frame(k);
                RatFn f = var(chart, s);
                MixedTensor fa = a.scaled(f);
                VectorField fX = X.scaled(f);
                std::string p = lbl("X", X.to_string()) + ", " + lbl("a", a.to_string()) + ", f=" + f.to_string();
                rep.record("Lambda+ tensorial", p, lambda_plus(T, X, fa) - lambda_plus(T, X, a).scaled(f));
                rep.record("Lambda+ tensorial", p + " (on X)", lambda_plus(T, fX, a) - lambda_plus(T, X, a).scaled(f));
                rep.record("Lambda- tensorial", p, lambda_minus(T, X, fa) - lambda_minus(T, X, a).scaled(f));
                rep.record("Lambda- tensorial", p + " (on X)", lambda_minus(T, fX, a) - lambda_minus(T, X, a).scaled(f));
                rep.record("nabla+ Leibniz", p,
                           nabla_plus(T, X, fa) - nabla_plus(T, X, a).scaled(f) -
                               apply_endo(L, a).scaled(apply_endo(Rc, X).apply(f)));
                rep.record("nabla- Leibniz", p,
                           nabla_minus(T, X, fa) - nabla_minus(T, X, a).scaled(f) -
                               apply_endo(Lc, a).scaled(apply_endo(R, X).apply(f)));
            }

    const char* criteria[] = {"Lambda+ = 0", "Lambda- = 0", "T0 involutive", "T1 involutive", "nabla+ flat", "nabla- flat"};
    for (const char* c : criteria) rep.declare(c);
    for (const auto& X : F)
        for (int k = 0; k < A.n(); ++k) {
            std::string p = lbl("X", X.to_string()) + ", " + lbl("a", A.frame(k).to_string());
            rep.record("Lambda+ = 0", p, lambda_plus(T, X, A.frame(k)));
            rep.record("Lambda- = 0", p, lambda_minus(T, X, A.frame(k)));
        }
    for (std::size_t s = 0; s < F.size(); ++s)
        for (std::size_t t = s + 1; t < F.size(); ++t) {
            std::string p = lbl("X", F[s].to_string()) + ", " + lbl("Y", F[t].to_string());
            rep.record("T0 involutive", p, section_of(curvature(R, F[s], F[t])));
            rep.record("T1 involutive", p, section_of(cocurvature(R, F[s], F[t])));
            VectorField X0 = apply_endo(Rc, F[s]), Y0 = apply_endo(Rc, F[t]);
            VectorField X1 = apply_endo(R, F[s]), Y1 = apply_endo(R, F[t]);
            for (int k = 0; k < A.n(); ++k) {
                MixedTensor b1 = apply_endo(L, A.frame(k)), b0 = apply_endo(Lc, A.frame(k));
                rep.record("nabla+ flat", p + ", " + lbl("b", b1.to_string()),
                           nabla_plus(T, X0, nabla_plus(T, Y0, b1)) - nabla_plus(T, Y0, nabla_plus(T, X0, b1)) -
                               nabla_plus(T, lie_bracket(X0, Y0), b1));
                rep.record("nabla- flat", p + ", " + lbl("b", b0.to_string()),
                           nabla_minus(T, X1, nabla_minus(T, Y1, b0)) - nabla_minus(T, Y1, nabla_minus(T, X1, b0)) -
                               nabla_minus(T, lie_bracket(X1, Y1), b0));
            }
        }
    bool crit = true;
    for (const char* c : criteria) crit = crit && rep.passed(c);
    bool flat = all_frames_zero(nijenhuis_components(T));
    rep.declare("criteria vs Nijenhuis components");
    rep.record("criteria vs Nijenhuis components",
               std::string("criteria ") + (crit ? "hold" : "fail") + ", components " + (flat ? "vanish" : "nonzero"),
               RatFn(crit == flat ? 0L : 1L));
    rep.add_note(flat ? "flat projection" : "projection with nonzero Nijenhuis torsion");
    return rep;
}

// ------------------------------------------------------------ matched pairs

namespace {

std::vector<MixedTensor> with_scaled(const std::vector<MixedTensor>& gens) {
    std::vector<MixedTensor> out;
    for (const auto& g : gens)
        if (!g.is_zero()) out.push_back(g);
    const std::size_t base = out.size();
    if (base == 0) return out;
    const ChartPtr& chart = out[0].chart();
    for (int s = 0; s < chart->dim(); ++s)
        for (std::size_t i = 0; i < base; ++i) out.push_back(out[i].scaled(var(chart, s)));
    return out;
}

PairSide algebroid_side(const AlgebroidPtr& A, const std::string& name, const Endo& P) {
    PairSide S;
    S.name = name;
    for (int k = 0; k < A->n(); ++k) S.gens.push_back(apply_endo(P, A->frame(k)));
    S.bracket = [A](const MixedTensor& a, const MixedTensor& b) { return A->bracket(a, b); };
    S.anchor = [A](const MixedTensor& a) { return A->anchor_of(a); };
    return S;
}

PairSide tangent_side(const ChartPtr& chart, const std::string& name, const Endo& P) {
    PairSide S;
    S.name = name;
    for (const auto& X : coordinate_fields(chart)) S.gens.push_back(section_of(apply_endo(P, X)));
    S.bracket = [](const MixedTensor& a, const MixedTensor& b) { return section_of(lie_bracket(field_of(a), field_of(b))); };
    S.anchor = [](const MixedTensor& a) { return field_of(a); };
    return S;
}

struct Split {
    AlgebroidPtr A;
    Endo L, Lc, R, Rc;
    explicit Split(const IMTensor& T)
        : A(T.algebroid()), L(l_matrix(T)), Lc(complement(L)), R(r_matrix(T)), Rc(complement(R)) {}
};

}  // namespace

Report matched_pair_check(const MatchedPairData& M) {
    Report rep("matched pair (" + M.first.name + "," + M.second.name + ")");
    const std::string f = "rep of " + M.first.name + " flat", s = "rep of " + M.second.name + " flat";
    for (const std::string& c : {f, s, std::string("anchors"), std::string("first on brackets"), std::string("second on brackets")})
        rep.declare(c);
    auto A = with_scaled(M.first.gens), B = with_scaled(M.second.gens);
    const auto& on2 = M.first_on_second;
    const auto& on1 = M.second_on_first;
    auto br1 = M.first.bracket, br2 = M.second.bracket;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            for (const auto& b : B)
                rep.record(f, lbl("a1", A[i].to_string()) + ", " + lbl("a2", A[j].to_string()) + ", " + lbl("b", b.to_string()),
                           on2(A[i], on2(A[j], b)) - on2(A[j], on2(A[i], b)) - on2(br1(A[i], A[j]), b));
    for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = i + 1; j < B.size(); ++j)
            for (const auto& a : A)
                rep.record(s, lbl("b1", B[i].to_string()) + ", " + lbl("b2", B[j].to_string()) + ", " + lbl("a", a.to_string()),
                           on1(B[i], on1(B[j], a)) - on1(B[j], on1(B[i], a)) - on1(br2(B[i], B[j]), a));
    for (const auto& a : A)
        for (const auto& b : B)
            rep.record("anchors", lbl("a", a.to_string()) + ", " + lbl("b", b.to_string()),
                       section_of(lie_bracket(M.first.anchor(a), M.second.anchor(b)) + M.first.anchor(on1(b, a)) -
                                  M.second.anchor(on2(a, b))));
    for (const auto& a : A)
        for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = i + 1; j < B.size(); ++j) {
                const auto &b1 = B[i], &b2 = B[j];
                rep.record("first on brackets", lbl("a", a.to_string()) + ", " + lbl("b1", b1.to_string()) + ", " + lbl("b2", b2.to_string()),
                           on2(a, br2(b1, b2)) - br2(on2(a, b1), b2) - br2(b1, on2(a, b2)) - on2(on1(b2, a), b1) +
                               on2(on1(b1, a), b2));
            }
    for (const auto& b : B)
        for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = i + 1; j < A.size(); ++j) {
                const auto &a1 = A[i], &a2 = A[j];
                rep.record("second on brackets", lbl("b", b.to_string()) + ", " + lbl("a1", a1.to_string()) + ", " + lbl("a2", a2.to_string()),
                           on1(b, br1(a1, a2)) - br1(on1(b, a1), a2) - br1(a1, on1(b, a2)) - on1(on2(a2, b), a1) +
                               on1(on2(a1, b), a2));
            }
    return rep;
}

MatchedPairData pair_A0_A1(const IMTensor& T) {
    Split S(T);
    MatchedPairData M{algebroid_side(S.A, "A0", S.Lc), algebroid_side(S.A, "A1", S.L), {}, {}};
    M.first_on_second = [S](const MixedTensor& a, const MixedTensor& b) { return apply_endo(S.L, S.A->bracket(a, b)); };
    M.second_on_first = [S](const MixedTensor& b, const MixedTensor& a) { return apply_endo(S.Lc, S.A->bracket(b, a)); };
    return M;
}

MatchedPairData pair_T0_T1(const IMTensor& T) {
    Split S(T);
    const ChartPtr& chart = S.A->chart();
    MatchedPairData M{tangent_side(chart, "T0", S.Rc), tangent_side(chart, "T1", S.R), {}, {}};
    M.first_on_second = [S](const MixedTensor& X, const MixedTensor& Y) {
        return section_of(apply_endo(S.R, lie_bracket(field_of(X), field_of(Y))));
    };
    M.second_on_first = [S](const MixedTensor& Y, const MixedTensor& X) {
        return section_of(apply_endo(S.Rc, lie_bracket(field_of(Y), field_of(X))));
    };
    return M;
}

MatchedPairData pair_A0_T1(const IMTensor& T) {
    Split S(T);
    MatchedPairData M{algebroid_side(S.A, "A0", S.Lc), tangent_side(S.A->chart(), "T1", S.R), {}, {}};
    M.first_on_second = [S, T](const MixedTensor& a, const MixedTensor& Y) {
        VectorField y = field_of(Y);
        return section_of(lie_bracket(S.A->anchor_of(a), y) + S.A->anchor_of(nabla_minus(T, y, a)));
    };
    M.second_on_first = [T](const MixedTensor& Y, const MixedTensor& a) { return nabla_minus(T, field_of(Y), a); };
    return M;
}

MatchedPairData pair_T0_A1(const IMTensor& T) {
    Split S(T);
    MatchedPairData M{tangent_side(S.A->chart(), "T0", S.Rc), algebroid_side(S.A, "A1", S.L), {}, {}};
    M.first_on_second = [T](const MixedTensor& X, const MixedTensor& b) { return nabla_plus(T, field_of(X), b); };
    M.second_on_first = [S, T](const MixedTensor& b, const MixedTensor& X) {
        VectorField x = field_of(X);
        return section_of(lie_bracket(S.A->anchor_of(b), x) + S.A->anchor_of(nabla_plus(T, x, b)));
    };
    return M;
}

Report splitting_check(const IMTensor& T) {
    require_11(T, "splitting_check");
    Split S(T);
    const Algebroid& A = *S.A;
    const ChartPtr& chart = A.chart();
    Report rep("splitting of " + A.name() + " and TM");
    Report sc = structure_conditions(T, StructureKind::projection);
    rep.declare("l, r idempotent");
    rep.record("l, r idempotent", "", RatFn(sc.passed("l^2") && sc.passed("r^2") ? 0L : 1L));

    for (const char* c : {"A0 subalgebroid", "A1 subalgebroid", "T0 involutive", "T1 involutive"}) rep.declare(c);
    for (int i = 0; i < A.n(); ++i)
        for (int j = i + 1; j < A.n(); ++j) {
            MixedTensor a0 = apply_endo(S.Lc, A.frame(i)), b0 = apply_endo(S.Lc, A.frame(j));
            MixedTensor a1 = apply_endo(S.L, A.frame(i)), b1 = apply_endo(S.L, A.frame(j));
            rep.record("A0 subalgebroid", "[" + a0.to_string() + ", " + b0.to_string() + "]", apply_endo(S.L, A.bracket(a0, b0)));
            rep.record("A1 subalgebroid", "[" + a1.to_string() + ", " + b1.to_string() + "]", apply_endo(S.Lc, A.bracket(a1, b1)));
        }
    auto F = coordinate_fields(chart);
    for (std::size_t s = 0; s < F.size(); ++s)
        for (std::size_t t = s + 1; t < F.size(); ++t) {
            std::string p = lbl("X", F[s].to_string()) + ", " + lbl("Y", F[t].to_string());
            rep.record("T0 involutive", p, section_of(curvature(S.R, F[s], F[t])));
            rep.record("T1 involutive", p, section_of(cocurvature(S.R, F[s], F[t])));
        }

    MatchedPairData P00 = pair_A0_A1(T), P11 = pair_T0_T1(T), PA = pair_A0_T1(T), PT = pair_T0_A1(T);
    rep.merge(matched_pair_check(PA), "(A0,T1) ");
    rep.merge(matched_pair_check(PT), "(T0,A1) ");

    // The four sides of the square; each is a pair of maps that must intertwine the representations.
    rep.declare("rho(A0) in T0");
    rep.declare("rho(A1) in T1");
    for (int k = 0; k < A.n(); ++k) {
        rep.record("rho(A0) in T0", "k=" + std::to_string(k + 1), section_of(apply_endo(S.R, A.anchor_of(apply_endo(S.Lc, A.frame(k))))));
        rep.record("rho(A1) in T1", "k=" + std::to_string(k + 1), section_of(apply_endo(S.Rc, A.anchor_of(apply_endo(S.L, A.frame(k))))));
    }
    using Map = std::function<MixedTensor(const MixedTensor&)>;
    Map id = [](const MixedTensor& x) { return x; };
    Map rho = [&A](const MixedTensor& x) { return section_of(A.anchor_of(x)); };
    auto square = [&](const std::string& name, const MatchedPairData& src, const MatchedPairData& dst, const Map& FA, const Map& FB) {
        rep.declare(name);
        auto As = with_scaled(src.first.gens), Bs = with_scaled(src.second.gens);
        for (const auto& a : As)
            for (const auto& b : Bs) {
                std::string p = lbl("a", a.to_string()) + ", " + lbl("b", b.to_string());
                rep.record(name, p + " (first on second)", dst.first_on_second(FA(a), FB(b)) - FB(src.first_on_second(a, b)));
                rep.record(name, p + " (second on first)", dst.second_on_first(FB(b), FA(a)) - FA(src.second_on_first(b, a)));
            }
    };
    square("(id,rho): (A0,A1) -> (A0,T1)", P00, PA, id, rho);
    square("(rho,id): (A0,A1) -> (T0,A1)", P00, PT, rho, id);
    square("(rho,id): (A0,T1) -> (T0,T1)", PA, P11, rho, id);
    square("(id,rho): (T0,A1) -> (T0,T1)", PT, P11, id, rho);
    return rep;
}

}  // namespace awb
