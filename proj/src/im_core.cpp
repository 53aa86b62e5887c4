#include "awb/im_core.hpp"

#include <future>
#include <stdexcept>

namespace awb {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void check_degrees(const std::vector<MixedTensor>& v, std::size_t count, int p, int q, const char* what) {
    if (v.size() != count) throw std::invalid_argument(std::string(what) + ": wrong number of values");
    for (const auto& t : v)
        if (t.p() != p || t.q() != q)
            throw DegreeError(std::string(what) + ": value of degree (" + std::to_string(t.p()) + "," +
                              std::to_string(t.q()) + "), expected (" + std::to_string(p) + "," +
                              std::to_string(q) + ")");
}

MixedTensor combine(const std::vector<MixedTensor>& values, const std::vector<RatFn>& coeffs, const BundlePtr& b,
                    int p, int q) {
    MixedTensor r(b, p, q);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (!coeffs[k].is_zero()) r += values[k].scaled(coeffs[k]);
    return r;
}

}  // namespace

// ------------------------------------------------------------ IMTensor

IMTensor IMTensor::make(AlgebroidPtr A, int q, int p, std::vector<MixedTensor> d_frame,
                        std::vector<MixedTensor> l_frame, std::vector<MixedTensor> r_frame) {
    if (p < 0 || q < 0) throw DegreeError("negative degree");
    const std::size_t n = u(A->n()), m = u(A->m());
    for (auto* v : {&d_frame, &l_frame, &r_frame})
        for (const auto& t : *v)
            if (t.chart() != A->chart() || t.n() != A->n()) throw BundleMismatch("IM tensor value on another bundle");
    check_degrees(d_frame, n, p, q, "D");
    if (p >= 1)
        check_degrees(l_frame, n, p - 1, q, "l");
    else if (!l_frame.empty())
        throw DegreeError("l has no slot when p = 0");
    if (q >= 1)
        check_degrees(r_frame, m, p, q - 1, "r");
    else if (!r_frame.empty())
        throw DegreeError("r has no slot when q = 0");
    IMTensor T;
    T.A_ = std::move(A);
    T.q_ = q;
    T.p_ = p;
    T.D_ = std::move(d_frame);
    T.l_ = std::move(l_frame);
    T.r_ = std::move(r_frame);
    return T;
}

IMTensor IMTensor::zero(AlgebroidPtr A, int q, int p) {
    const auto& b = A->bundle();
    std::vector<MixedTensor> D(u(A->n()), MixedTensor(b, p, q)), l, r;
    if (p >= 1) l.assign(u(A->n()), MixedTensor(b, p - 1, q));
    if (q >= 1) r.assign(u(A->m()), MixedTensor(b, p, q - 1));
    return make(std::move(A), q, p, std::move(D), std::move(l), std::move(r));
}

MixedTensor IMTensor::l(const MixedTensor& a) const {
    if (!has_l()) throw DegreeError("l is absent for p = 0");
    require_section(*A_, a);
    return combine(l_, a.section_components(), A_->bundle(), p_ - 1, q_);
}

MixedTensor IMTensor::r(const MixedTensor& alpha) const {
    if (!has_r()) throw DegreeError("r is absent for q = 0");
    if (alpha.p() != 1 || alpha.q() != 0) throw DegreeError("r expects a 1-form");
    return combine(r_, alpha.form_components(), A_->bundle(), p_, q_ - 1);
}

MixedTensor IMTensor::D(const MixedTensor& a) const {
    require_section(*A_, a);
    const auto& b = A_->bundle();
    auto f = a.section_components();
    MixedTensor out(b, p_, q_);
    for (int i = 0; i < A_->n(); ++i) {
        const RatFn& fi = f[u(i)];
        if (fi.is_zero()) continue;
        out += D_[u(i)].scaled(fi);
        if (fi.is_constant()) continue;
        MixedTensor dfi = df(b, fi);
        if (has_l()) out += wedge(dfi, l_[u(i)]);
        if (has_r()) out -= wedge(A_->frame(i), r(dfi));
    }
    return out;
}

IMTensor IMTensor::operator+(const IMTensor& o) const {
    if (o.A_ != A_ || o.p_ != p_ || o.q_ != q_) throw BundleMismatch("IM tensors of different type");
    IMTensor r = *this;
    for (std::size_t k = 0; k < D_.size(); ++k) r.D_[k] += o.D_[k];
    for (std::size_t k = 0; k < l_.size(); ++k) r.l_[k] += o.l_[k];
    for (std::size_t k = 0; k < r_.size(); ++k) r.r_[k] += o.r_[k];
    return r;
}

IMTensor IMTensor::scaled(const RatFn& c) const {
    IMTensor r = *this;
    for (auto* v : {&r.D_, &r.l_, &r.r_})
        for (auto& t : *v) t = t.scaled(c);
    return r;
}

std::string IMTensor::to_string() const {
    const auto& frame = A_->bundle()->frame;
    const auto& vars = A_->chart()->vars;
    std::string s;
    for (std::size_t i = 0; i < D_.size(); ++i) s += "D(" + frame[i] + ") = " + D_[i].to_string() + "\n";
    for (std::size_t i = 0; i < l_.size(); ++i) s += "l(" + frame[i] + ") = " + l_[i].to_string() + "\n";
    for (std::size_t j = 0; j < r_.size(); ++j) s += "r(d" + vars[j].name() + ") = " + r_[j].to_string() + "\n";
    return s;
}

// ------------------------------------------------------------ IM equations

MixedTensor im1_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b) {
    const Algebroid& A = *T.algebroid();
    return T.D(A.bracket(a, b)) - action(A, a, T.D(b)) + action(A, b, T.D(a));
}

MixedTensor im2_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b) {
    const Algebroid& A = *T.algebroid();
    return T.l(A.bracket(a, b)) - action(A, a, T.l(b)) + contract_form(A.anchor_of(b), T.D(a));
}

MixedTensor im3_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& alpha) {
    const Algebroid& A = *T.algebroid();
    MixedTensor lie = lie_derivative(A.anchor_of(a), alpha);
    return T.r(lie) - action(A, a, T.r(alpha)) + contract_dual(A.rho_star(alpha), T.D(a));
}

MixedTensor im4_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b) {
    const Algebroid& A = *T.algebroid();
    return contract_form(A.anchor_of(a), T.l(b)) + contract_form(A.anchor_of(b), T.l(a));
}

MixedTensor im5_residual(const IMTensor& T, const MixedTensor& alpha, const MixedTensor& beta) {
    const Algebroid& A = *T.algebroid();
    return contract_dual(A.rho_star(alpha), T.r(beta)) + contract_dual(A.rho_star(beta), T.r(alpha));
}

MixedTensor im6_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& alpha) {
    const Algebroid& A = *T.algebroid();
    return contract_form(A.anchor_of(a), T.r(alpha)) - contract_dual(A.rho_star(alpha), T.l(a));
}

bool im_applicable(int equation, int q, int p) {
    switch (equation) {
        case 1: return true;
        case 2: return p >= 1;
        case 3: return q >= 1;
        case 4: return p >= 2;
        case 5: return q >= 2;
        case 6: return p >= 1 && q >= 1;
        default: throw std::invalid_argument("IM equations are numbered 1..6");
    }
}

namespace {

const char* applicability_note(int equation) {
    switch (equation) {
        case 2: return "l is absent (p = 0)";
        case 3: return "r is absent (q = 0)";
        case 4: return "i_rho l vanishes for p < 2";
        case 5: return "i_rho* r vanishes for q < 2";
        case 6: return "needs p >= 1 and q >= 1";
        default: return "";
    }
}

using Probe = std::pair<std::string, MixedTensor>;

std::string label(const char* name, const MixedTensor& t) { return std::string(name) + "=" + t.to_string(); }

std::vector<Probe> evaluate(const IMTensor& T, int eq, const ProbeSet& P) {
    std::vector<Probe> out;
    const auto& S = P.sections;
    const auto& F = P.forms;
    auto pair_label = [](const char* x, const MixedTensor& s, const char* y, const MixedTensor& t) {
        return label(x, s) + ", " + label(y, t);
    };
    switch (eq) {
        case 1:
            for (std::size_t i = 0; i < S.size(); ++i)
                for (std::size_t j = i + 1; j < S.size(); ++j)
                    out.emplace_back(pair_label("a", S[i], "b", S[j]), im1_residual(T, S[i], S[j]));
            break;
        case 2:
            for (const auto& a : S)
                for (const auto& b : S) out.emplace_back(pair_label("a", a, "b", b), im2_residual(T, a, b));
            break;
        case 3:
            for (const auto& a : S)
                for (const auto& al : F) out.emplace_back(pair_label("a", a, "alpha", al), im3_residual(T, a, al));
            break;
        case 4:
            for (std::size_t i = 0; i < S.size(); ++i)
                for (std::size_t j = i; j < S.size(); ++j)
                    out.emplace_back(pair_label("a", S[i], "b", S[j]), im4_residual(T, S[i], S[j]));
            break;
        case 5:
            for (std::size_t i = 0; i < F.size(); ++i)
                for (std::size_t j = i; j < F.size(); ++j)
                    out.emplace_back(pair_label("alpha", F[i], "beta", F[j]), im5_residual(T, F[i], F[j]));
            break;
        case 6:
            for (const auto& a : S)
                for (const auto& al : F) out.emplace_back(pair_label("a", a, "alpha", al), im6_residual(T, a, al));
            break;
    }
    return out;
}

}  // namespace

ProbeSet im_probes(const Algebroid& A, bool scaled) {
    ProbeSet P;
    for (int i = 0; i < A.n(); ++i) P.sections.push_back(A.frame(i));
    for (int j = 0; j < A.m(); ++j) P.forms.push_back(A.dx(j));
    if (scaled) {
        for (int s = 0; s < A.m(); ++s) {
            RatFn xs = RatFn::variable(A.chart()->vars[u(s)]);
            for (int i = 0; i < A.n(); ++i) P.sections.push_back(A.frame(i).scaled(xs));
            for (int j = 0; j < A.m(); ++j) P.forms.push_back(A.dx(j).scaled(xs));
        }
    }
    return P;
}

Report im_check(const IMTensor& T, bool scaled_probes) {
    Report rep("IM(" + std::to_string(T.q()) + "," + std::to_string(T.p()) + ") tensor on " + T.algebroid()->name());
    ProbeSet P = im_probes(*T.algebroid(), scaled_probes);
    std::vector<std::future<std::vector<Probe>>> jobs(6);
    for (int eq = 1; eq <= 6; ++eq)
        if (im_applicable(eq, T.q(), T.p()))
            jobs[u(eq - 1)] = std::async(std::launch::async, [&T, &P, eq] { return evaluate(T, eq, P); });
    for (int eq = 1; eq <= 6; ++eq) {
        std::string name = "IM" + std::to_string(eq);
        bool ok = im_applicable(eq, T.q(), T.p());
        rep.declare(name, ok, ok ? "" : applicability_note(eq));
        if (!ok) continue;
        for (auto& [probe, value] : jobs[u(eq - 1)].get()) rep.record(name, probe, value);
    }
    if (!scaled_probes) rep.add_note("frame probes only");
    return rep;
}

Report im_redundancy(const IMTensor& T, const std::set<int>& assumed) {
    const Algebroid& A = *T.algebroid();
    if (T.p() > A.m() || T.q() > A.n())
        throw DegreeError("redundancy claims need p <= dim M and q <= rank A");
    Report full = im_check(T);
    Report rep("IM redundancies");
    struct Implication {
        std::vector<int> premises;
        int conclusion;
    };
    const Implication rules[] = {{{1, 2}, 3}, {{1, 3}, 2}, {{2, 6}, 4}, {{3, 6}, 5}};
    for (const auto& rule : rules) {
        bool assumed_all = true;
        for (int e : rule.premises) assumed_all = assumed_all && assumed.count(e);
        if (!assumed_all) continue;
        std::string name = "IM" + std::to_string(rule.premises[0]) + "+IM" + std::to_string(rule.premises[1]) +
                           "=>IM" + std::to_string(rule.conclusion);
        if (!im_applicable(rule.conclusion, T.q(), T.p())) {
            rep.declare(name, false, "conclusion has no content in this degree");
            continue;
        }
        std::string failing;
        for (int e : rule.premises) {
            std::string pn = "IM" + std::to_string(e);
            if (!full.passed(pn)) failing += (failing.empty() ? "" : ", ") + pn;
        }
        if (!failing.empty()) {
            rep.declare(name, false, "vacuous: premise " + failing + " fails");
            continue;
        }
        rep.declare(name);
        std::string concl = "IM" + std::to_string(rule.conclusion);
        for (const auto& tally : full.checks())
            if (tally.name == concl && tally.applicable) {
                // Zero failures means every evaluated residual vanished.
                for (const auto& f : full.failures())
                    if (f.check == concl) rep.record(name, f.probe, f.value);
                if (tally.failed == 0) rep.record(name, std::to_string(tally.evaluated) + " probes", RatFn());
            }
    }
    return rep;
}

IMTensor coboundary(const AlgebroidPtr& A, const MixedTensor& phi) {
    if (phi.chart() != A->chart() || phi.n() != A->n()) throw BundleMismatch("coboundary of a tensor on another bundle");
    const int p = phi.p(), q = phi.q();
    std::vector<MixedTensor> D, l, r;
    for (int i = 0; i < A->n(); ++i) {
        D.push_back(action(*A, A->frame(i), phi));
        if (p >= 1) l.push_back(contract_form(A->anchor_of_frame(i), phi));
    }
    if (q >= 1)
        for (int j = 0; j < A->m(); ++j) r.push_back(contract_dual(A->rho_star(A->dx(j)), phi));
    return IMTensor::make(A, q, p, std::move(D), std::move(l), std::move(r));
}

// ------------------------------------------------------------ q-differentials

MixedTensor QDifferential::on_function(const RatFn& f) const {
    const auto& b = A->bundle();
    if (q == 0) return MixedTensor(b, 0, 0);
    MixedTensor r(b, 0, q - 1);
    for (int j = 0; j < A->m(); ++j) {
        RatFn pj = partial(A->chart(), f, j);
        if (!pj.is_zero()) r += on_coordinates[u(j)].scaled(pj);
    }
    return r;
}

MixedTensor QDifferential::apply(const MixedTensor& X) const {
    if (X.p() != 0) throw DegreeError("q-differentials act on multisections");
    const auto& b = A->bundle();
    const int out_deg = X.q() + q - 1;
    if (out_deg < 0) return MixedTensor(b, 0, 0);
    const int sign = (q - 1) % 2 ? -1 : 1;
    MixedTensor r(b, 0, out_deg);
    for (const auto& [k, c] : X.coeffs()) {
        auto idx = set_indices(k.second);
        // delta(c e_J) = delta(c) ^ e_J + c delta(e_J); delta(e_j ^ R) = delta(e_j) ^ R + sign e_j ^ delta(R)
        MixedTensor eJ = MixedTensor::basis(b, 0, k.second);
        if (q >= 1) r += wedge(on_function(c), eJ);
        MixedTensor acc(b, 0, out_deg);
        int s = 1;
        for (std::size_t t = 0; t < idx.size(); ++t) {
            IndexSet before = 0, after = 0;
            for (std::size_t v = 0; v < t; ++v) before |= IndexSet{1} << idx[v];
            for (std::size_t v = t + 1; v < idx.size(); ++v) after |= IndexSet{1} << idx[v];
            MixedTensor term = wedge(wedge(MixedTensor::basis(b, 0, before), on_frame[u(idx[t])]),
                                     MixedTensor::basis(b, 0, after));
            acc += s > 0 ? term : -term;
            s *= sign;
        }
        r += acc.scaled(c);
    }
    return r;
}

QDifferential qdiff_from_im(const IMTensor& T) {
    if (T.p() != 0) throw DegreeError("q-differentials correspond to IM (q,0)-tensors");
    QDifferential d;
    d.A = T.algebroid();
    d.q = T.q();
    d.on_frame = T.D_frame();
    // delta_0 = (-1)^q r o d
    for (const auto& r : T.r_frame()) d.on_coordinates.push_back(T.q() % 2 ? -r : r);
    return d;
}

IMTensor im_from_qdiff(const QDifferential& delta) {
    std::vector<MixedTensor> r;
    for (const auto& v : delta.on_coordinates) r.push_back(delta.q % 2 ? -v : v);
    return IMTensor::make(delta.A, delta.q, 0, delta.on_frame, {}, std::move(r));
}

namespace {

std::vector<MixedTensor> qdiff_probes(const Algebroid& A) {
    std::vector<MixedTensor> out;
    for (int s = 0; s < A.m(); ++s) out.push_back(MixedTensor::scalar(A.bundle(), RatFn::variable(A.chart()->vars[u(s)])));
    for (int i = 0; i < A.n(); ++i) out.push_back(A.frame(i));
    for (int s = 0; s < A.m(); ++s)
        for (int i = 0; i < A.n(); ++i) out.push_back(A.frame(i).scaled(RatFn::variable(A.chart()->vars[u(s)])));
    return out;
}

}  // namespace

Report qdiff_check(const QDifferential& delta) {
    const Algebroid& A = *delta.A;
    Report rep(std::to_string(delta.q) + "-differential on " + A.name());
    rep.declare("derivation");
    rep.declare("bracket derivation");
    auto probes = qdiff_probes(A);
    const int qm = delta.q - 1;
    for (const auto& X1 : probes)
        for (const auto& X2 : probes) {
            const int k1 = X1.q();
            std::string probe = "X1=" + X1.to_string() + ", X2=" + X2.to_string();
            MixedTensor lhs = delta.apply(wedge(X1, X2));
            MixedTensor second = wedge(X1, delta.apply(X2));
            MixedTensor res = lhs - wedge(delta.apply(X1), X2) - ((k1 * qm) % 2 ? -second : second);
            rep.record("derivation", probe, res);
            MixedTensor br = schouten(A, X1, X2);
            MixedTensor t2 = schouten(A, X1, delta.apply(X2));
            MixedTensor res2 = delta.apply(br) - schouten(A, delta.apply(X1), X2) - (((k1 - 1) * qm) % 2 ? -t2 : t2);
            rep.record("bracket derivation", probe, res2);
        }
    return rep;
}

Report qdiff_leibniz_against(const QDifferential& delta, const IMTensor& source) {
    const Algebroid& A = *delta.A;
    Report rep("q-differential against D");
    rep.declare("delta(f a) = D(f a)");
    for (int s = 0; s < A.m(); ++s)
        for (int i = 0; i < A.n(); ++i) {
            MixedTensor fa = A.frame(i).scaled(RatFn::variable(A.chart()->vars[u(s)]));
            rep.record("delta(f a) = D(f a)", "a=" + fa.to_string(), delta.apply(fa) - source.D(fa));
        }
    return rep;
}

// ------------------------------------------------------------ IM forms

MixedTensor IMForm::mu_of(const MixedTensor& a) const {
    require_section(*A, a);
    if (p == 0) return MixedTensor(A->bundle(), 0, 0);
    return combine(mu, a.section_components(), A->bundle(), p - 1, 0);
}

MixedTensor IMForm::nu_of(const MixedTensor& a) const {
    require_section(*A, a);
    return combine(nu, a.section_components(), A->bundle(), p, 0);
}

IMForm imform_from_im(const IMTensor& T) {
    if (T.q() != 0) throw DegreeError("IM forms correspond to IM (0,p)-tensors");
    IMForm F;
    F.A = T.algebroid();
    F.p = T.p();
    for (int i = 0; i < F.A->n(); ++i) {
        MixedTensor D = T.D_frame()[u(i)];
        if (T.has_l()) {
            F.mu.push_back(T.l_frame()[u(i)]);
            D -= d(T.l_frame()[u(i)]);
        }
        F.nu.push_back(D);
    }
    return F;
}

IMTensor im_from_imform(const IMForm& F) {
    std::vector<MixedTensor> D;
    for (int i = 0; i < F.A->n(); ++i) {
        MixedTensor v = F.nu[u(i)];
        if (F.p >= 1) v += d(F.mu[u(i)]);
        D.push_back(v);
    }
    return IMTensor::make(F.A, 0, F.p, std::move(D), F.p >= 1 ? F.mu : std::vector<MixedTensor>{}, {});
}

Report imform_check(const IMForm& F, bool scaled_probes) {
    const Algebroid& A = *F.A;
    Report rep("IM " + std::to_string(F.p) + "-form on " + A.name());
    rep.declare("nu bracket");
    rep.declare("mu bracket", F.p >= 1, F.p >= 1 ? "" : "mu is absent (p = 0)");
    rep.declare("mu skew", F.p >= 2, F.p >= 2 ? "" : "i_rho mu vanishes for p < 2");
    auto S = im_probes(A, scaled_probes).sections;
    for (const auto& a : S)
        for (const auto& b : S) {
            std::string probe = "a=" + a.to_string() + ", b=" + b.to_string();
            VectorField ra = A.anchor_of(a), rb = A.anchor_of(b);
            MixedTensor ab = A.bracket(a, b);
            rep.record("nu bracket", probe,
                       F.nu_of(ab) - lie_derivative(ra, F.nu_of(b)) + contract_form(rb, d(F.nu_of(a))));
            if (F.p >= 1)
                rep.record("mu bracket", probe,
                           F.mu_of(ab) - lie_derivative(ra, F.mu_of(b)) +
                               contract_form(rb, d(F.mu_of(a)) + F.nu_of(a)));
            if (F.p >= 2)
                rep.record("mu skew", probe, contract_form(ra, F.mu_of(b)) + contract_form(rb, F.mu_of(a)));
        }
    return rep;
}

IMForm imform_differential(const IMForm& F) {
    IMForm G;
    G.A = F.A;
    G.p = F.p + 1;
    G.mu = F.nu;
    G.nu.assign(u(F.A->n()), MixedTensor(F.A->bundle(), G.p, 0));
    return G;
}

// ------------------------------------------------------------ (2,0) tensors

RatFn evaluate_bisection(const MixedTensor& X, const std::vector<RatFn>& mu1, const std::vector<RatFn>& mu2) {
    if (X.p() != 0 || X.q() != 2) throw DegreeError("expected a bisection");
    RatFn r;
    for (const auto& [k, c] : X.coeffs()) {
        auto idx = set_indices(k.second);
        std::size_t a = u(idx[0]), b = u(idx[1]);
        r += c * (mu1[a] * mu2[b] - mu1[b] * mu2[a]);
    }
    return r;
}

AlgebroidPtr prelie_from_im20(const IMTensor& T, std::vector<std::string> dual_names) {
    if (T.q() != 2 || T.p() != 0) throw DegreeError("pre-Lie data come from IM (2,0)-tensors");
    const Algebroid& A = *T.algebroid();
    const int n = A.n(), m = A.m();
    if (dual_names.empty())
        for (const auto& f : A.bundle()->frame) dual_names.push_back(f + "_dual");
    BundlePtr dual = make_bundle(A.chart(), dual_names);
    Algebroid::Matrix anchor(u(n), std::vector<RatFn>(u(m)));
    for (int j = 0; j < m; ++j) {
        auto rj = T.r_frame()[u(j)].section_components();
        for (int k = 0; k < n; ++k) anchor[u(k)][u(j)] = rj[u(k)];
    }
    Algebroid::Table upper(u(n), std::vector<std::vector<RatFn>>(u(n), std::vector<RatFn>(u(n))));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c) upper[u(a)][u(b)][u(c)] = -T.D_frame()[u(c)].coeff(0, set_of({a, b}));
    return Algebroid::make(A.name() + "*", dual, std::move(anchor), upper);
}

}  // namespace awb
