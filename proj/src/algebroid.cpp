#include "awb/algebroid.hpp"

#include <stdexcept>

namespace awb {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

AlgebroidPtr Algebroid::make(std::string name, BundlePtr bundle, Matrix anchor, const Table& upper) {
    const int n = bundle->rank();
    Table full(u(n), std::vector<std::vector<RatFn>>(u(n), std::vector<RatFn>(u(n))));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const RatFn& c = upper[u(i)][u(j)][u(k)];
                full[u(i)][u(j)][u(k)] = c;
                full[u(j)][u(i)][u(k)] = -c;
            }
    return make_raw(std::move(name), std::move(bundle), std::move(anchor), std::move(full));
}

AlgebroidPtr Algebroid::make_raw(std::string name, BundlePtr bundle, Matrix anchor, Table full) {
    const int n = bundle->rank(), m = bundle->chart->dim();
    if (static_cast<int>(anchor.size()) != n) throw std::invalid_argument("anchor needs one row per frame element");
    for (const auto& row : anchor)
        if (static_cast<int>(row.size()) != m) throw std::invalid_argument("anchor row has wrong length");
    if (static_cast<int>(full.size()) != n) throw std::invalid_argument("structure table has wrong size");
    auto a = std::shared_ptr<Algebroid>(new Algebroid());
    a->name_ = std::move(name);
    a->bundle_ = std::move(bundle);
    a->anchor_ = std::move(anchor);
    a->c_ = std::move(full);
    return a;
}

AlgebroidPtr Algebroid::tangent(ChartPtr chart) {
    const int m = chart->dim();
    Matrix anchor(u(m), std::vector<RatFn>(u(m)));
    for (int i = 0; i < m; ++i) anchor[u(i)][u(i)] = RatFn(1L);
    Table zero(u(m), std::vector<std::vector<RatFn>>(u(m), std::vector<RatFn>(u(m))));
    return make_raw("T" + chart->name, tangent_bundle(chart), std::move(anchor), std::move(zero));
}

AlgebroidPtr Algebroid::vector_bundle(BundlePtr bundle) {
    const int n = bundle->rank(), m = bundle->chart->dim();
    Matrix anchor(u(n), std::vector<RatFn>(u(m)));
    Table zero(u(n), std::vector<std::vector<RatFn>>(u(n), std::vector<RatFn>(u(n))));
    return make_raw("E", std::move(bundle), std::move(anchor), std::move(zero));
}

void require_section(const Algebroid& A, const MixedTensor& a) {
    if (a.chart() != A.chart() || a.n() != A.n()) throw BundleMismatch("section of another bundle");
    if (a.p() != 0 || a.q() != 1) throw DegreeError("expected a section");
}

VectorField Algebroid::anchor_of_frame(int i) const { return VectorField(chart(), anchor_[u(i)]); }

VectorField Algebroid::anchor_of(const MixedTensor& a) const {
    require_section(*this, a);
    std::vector<RatFn> v(u(m()));
    auto f = a.section_components();
    for (int i = 0; i < n(); ++i) {
        if (f[u(i)].is_zero()) continue;
        for (int j = 0; j < m(); ++j) v[u(j)] += f[u(i)] * anchor_[u(i)][u(j)];
    }
    return VectorField(chart(), std::move(v));
}

MixedTensor Algebroid::bracket(const MixedTensor& a, const MixedTensor& b) const {
    require_section(*this, a);
    require_section(*this, b);
    auto f = a.section_components(), g = b.section_components();
    std::vector<RatFn> out(u(n()));
    for (int i = 0; i < n(); ++i) {
        if (f[u(i)].is_zero()) continue;
        for (int j = 0; j < n(); ++j) {
            if (g[u(j)].is_zero()) continue;
            RatFn fg = f[u(i)] * g[u(j)];
            for (int k = 0; k < n(); ++k)
                if (!c_[u(i)][u(j)][u(k)].is_zero()) out[u(k)] += fg * c_[u(i)][u(j)][u(k)];
        }
    }
    VectorField ra = anchor_of(a), rb = anchor_of(b);
    for (int j = 0; j < n(); ++j) out[u(j)] += ra.apply(g[u(j)]) - rb.apply(f[u(j)]);
    return section(out);
}

std::vector<RatFn> Algebroid::rho_star(const MixedTensor& alpha) const {
    auto a = alpha.form_components();
    std::vector<RatFn> out(u(n()));
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < m(); ++j)
            if (!a[u(j)].is_zero()) out[u(i)] += anchor_[u(i)][u(j)] * a[u(j)];
    return out;
}

std::string section_to_string(const MixedTensor& a) { return a.to_string(); }

Report check_algebroid(const Algebroid& A) {
    Report rep("algebroid " + A.name());
    const int n = A.n();
    const auto& names = A.bundle()->frame;
    rep.declare("skew");
    rep.declare("anchor");
    rep.declare("jacobi");
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::vector<RatFn> s(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) s[u(k)] = A.structure(i, j, k) + A.structure(j, i, k);
            rep.record("skew", "[" + names[u(i)] + "," + names[u(j)] + "] + [" + names[u(j)] + "," + names[u(i)] + "]",
                       A.section(s));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            VectorField lhs = A.anchor_of(A.bracket(A.frame(i), A.frame(j)));
            VectorField rhs = lie_bracket(A.anchor_of_frame(i), A.anchor_of_frame(j));
            rep.record("anchor", "(" + names[u(i)] + "," + names[u(j)] + ")", (lhs - rhs).as_tensor());
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                auto e = [&](int t) { return A.frame(t); };
                MixedTensor jac = A.bracket(e(i), A.bracket(e(j), e(k))) + A.bracket(e(j), A.bracket(e(k), e(i))) +
                                  A.bracket(e(k), A.bracket(e(i), e(j)));
                rep.record("jacobi", "(" + names[u(i)] + "," + names[u(j)] + "," + names[u(k)] + ")", jac);
            }
    if (n < 3) rep.add_note("rank < 3: Jacobi has no frame triples");
    return rep;
}

// ------------------------------------------------------------ cotangent algebroid

Algebroid::Matrix sharp_matrix(const MixedTensor& pi) {
    if (pi.p() != 0 || pi.q() != 2 || pi.n() != pi.m()) throw DegreeError("expected a bivector field");
    const int m = pi.m();
    Algebroid::Matrix N(u(m), std::vector<RatFn>(u(m)));
    for (const auto& [k, c] : pi.coeffs()) {
        auto idx = set_indices(k.second);
        N[u(idx[0])][u(idx[1])] = c;
        N[u(idx[1])][u(idx[0])] = -c;
    }
    return N;
}

namespace {

VectorField sharp_of(const Algebroid::Matrix& N, const ChartPtr& chart, const MixedTensor& alpha) {
    auto a = alpha.form_components();
    std::vector<RatFn> v(u(chart->dim()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += a[i] * N[i][j];
    }
    return VectorField(chart, std::move(v));
}

}  // namespace

MixedTensor koszul_bracket(const Algebroid::Matrix& N, const MixedTensor& alpha, const MixedTensor& beta) {
    VectorField pa = sharp_of(N, alpha.chart(), alpha), pb = sharp_of(N, beta.chart(), beta);
    MixedTensor pairing = contract_form(pa, beta);
    return lie_derivative(pa, beta) - lie_derivative(pb, alpha) - d(pairing);
}

AlgebroidPtr cotangent_algebroid(const MixedTensor& pi, std::vector<std::string> frame_names) {
    const ChartPtr& chart = pi.chart();
    const int m = chart->dim();
    if (frame_names.empty())
        for (Symbol v : chart->vars) frame_names.push_back("d" + v.name());
    BundlePtr bundle = make_bundle(chart, frame_names);
    Algebroid::Matrix N = sharp_matrix(pi);
    Algebroid::Table upper(u(m), std::vector<std::vector<RatFn>>(u(m), std::vector<RatFn>(u(m))));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            MixedTensor br = koszul_bracket(N, MixedTensor::dx(bundle, i), MixedTensor::dx(bundle, j));
            upper[u(i)][u(j)] = br.form_components();
        }
    return Algebroid::make("T*" + chart->name, bundle, N, upper);
}

// ------------------------------------------------------------ Schouten bracket

namespace {

// Factor of a decomposable multisection: a function (frame < 0) or a frame element.
struct Atom {
    int frame = -1;
    RatFn fn;
    int degree() const { return frame < 0 ? 0 : 1; }
};

using Atoms = std::vector<Atom>;

int degree_of(const Atoms& xs, std::size_t from, std::size_t to) {
    int d = 0;
    for (std::size_t k = from; k < to; ++k) d += xs[k].degree();
    return d;
}

MixedTensor atom_tensor(const Algebroid& A, const Atom& x) {
    return x.frame < 0 ? MixedTensor::scalar(A.bundle(), x.fn) : A.frame(x.frame);
}

MixedTensor product(const Algebroid& A, const Atoms& xs, std::size_t from, std::size_t to) {
    MixedTensor r = MixedTensor::scalar(A.bundle(), RatFn(1L));
    for (std::size_t k = from; k < to; ++k) r = wedge(r, atom_tensor(A, xs[k]));
    return r;
}

MixedTensor atom_bracket(const Algebroid& A, const Atom& x, const Atom& y) {
    if (x.frame < 0 && y.frame < 0) return MixedTensor(A.bundle(), 0, 0);
    if (x.frame >= 0 && y.frame < 0) return MixedTensor::scalar(A.bundle(), A.anchor_of_frame(x.frame).apply(y.fn));
    if (x.frame < 0) return MixedTensor::scalar(A.bundle(), -A.anchor_of_frame(y.frame).apply(x.fn));
    return A.bracket(A.frame(x.frame), A.frame(y.frame));
}

// [y, x_from ^ ... ^ x_to-1] for an atom y, by the graded Leibniz rule.
MixedTensor atom_left(const Algebroid& A, const Atom& y, const Atoms& xs, std::size_t from, std::size_t to) {
    if (to - from == 1) return atom_bracket(A, y, xs[from]);
    MixedTensor first = wedge(atom_bracket(A, y, xs[from]), product(A, xs, from + 1, to));
    int s = parity_sign(static_cast<long>(y.degree() - 1) * xs[from].degree());
    MixedTensor second = wedge(atom_tensor(A, xs[from]), atom_left(A, y, xs, from + 1, to));
    return s > 0 ? first + second : first - second;
}

// [X, y_from ^ ... ^ y_to-1] with X = product of xs.
MixedTensor general(const Algebroid& A, const Atoms& xs, const Atoms& ys, std::size_t from, std::size_t to) {
    int qx = degree_of(xs, 0, xs.size());
    if (to - from == 1) {
        // graded skewness: [X, y] = -(-1)^{(qx-1)(qy-1)} [y, X]
        int s = -parity_sign(static_cast<long>(qx - 1) * (ys[from].degree() - 1));
        MixedTensor r = atom_left(A, ys[from], xs, 0, xs.size());
        return s > 0 ? r : -r;
    }
    MixedTensor first = wedge(general(A, xs, ys, from, from + 1), product(A, ys, from + 1, to));
    int s = parity_sign(static_cast<long>(qx - 1) * ys[from].degree());
    MixedTensor second = wedge(atom_tensor(A, ys[from]), general(A, xs, ys, from + 1, to));
    return s > 0 ? first + second : first - second;
}

Atoms atoms_of(const RatFn& c, IndexSet J) {
    Atoms xs{Atom{-1, c}};
    for (int j : set_indices(J)) xs.push_back(Atom{j, RatFn()});
    return xs;
}

}  // namespace

MixedTensor schouten(const Algebroid& A, const MixedTensor& X, const MixedTensor& Y) {
    for (const MixedTensor* t : {&X, &Y}) {
        if (t->chart() != A.chart() || t->n() != A.n()) throw BundleMismatch("schouten: multisection of another bundle");
        if (t->p() != 0) throw DegreeError("schouten: expected multisections");
    }
    int qr = X.q() + Y.q() - 1;
    if (qr < 0) return MixedTensor(A.bundle(), 0, 0);
    MixedTensor r(A.bundle(), 0, qr);
    for (const auto& [kx, cx] : X.coeffs()) {
        Atoms xs = atoms_of(cx, kx.second);
        for (const auto& [ky, cy] : Y.coeffs()) {
            Atoms ys = atoms_of(cy, ky.second);
            r += general(A, xs, ys, 0, ys.size());
        }
    }
    return r;
}

MixedTensor action(const Algebroid& A, const MixedTensor& a, const MixedTensor& phi) {
    require_section(A, a);
    if (phi.chart() != A.chart() || phi.n() != A.n()) throw BundleMismatch("action on a tensor of another bundle");
    MixedTensor r = frame_lie_derivative(A.anchor_of(a), phi);
    for (const auto& [k, c] : phi.coeffs()) {
        if (k.second == 0) continue;
        MixedTensor beta = MixedTensor::basis(A.bundle(), k.first, 0, c);
        MixedTensor br = schouten(A, a, MixedTensor::basis(A.bundle(), 0, k.second));
        r += wedge(beta, br);
    }
    return r;
}

// ------------------------------------------------------------ lifts

Derivation base_part(const VectorField& Y) {
    Derivation D;
    for (int j = 0; j < Y.chart()->dim(); ++j) D.add(Y.chart()->vars[u(j)], Y[j]);
    return D;
}

Derivation tangent_lift_fiber(const VectorField& Y, const SlotLayout& L) {
    Derivation D;
    const auto& chart = Y.chart();
    const int m = chart->dim();
    for (const auto& block : L.tangent)
        for (int j = 0; j < m; ++j) {
            RatFn comp;
            for (int k = 0; k < m; ++k) {
                RatFn dj = partial(chart, Y[j], k);
                if (!dj.is_zero()) comp += dj * RatFn::variable(block[u(k)]);
            }
            D.add(block[u(j)], comp);
        }
    return D;
}

Derivation tangent_lift(const VectorField& Y, const SlotLayout& L) { return base_part(Y) + tangent_lift_fiber(Y, L); }

Derivation vertical_lift_tangent(const VectorField& Y, const SlotLayout& L, int i) {
    Derivation D;
    for (int j = 0; j < Y.chart()->dim(); ++j) D.add(L.tangent[u(i)][u(j)], Y[j]);
    return D;
}

Derivation hamiltonian_lift_fiber(const Algebroid& A, const MixedTensor& a, const SlotLayout& L) {
    Derivation D;
    const int n = A.n();
    std::vector<std::vector<RatFn>> br;  // br[k] = components of [a, e_k]
    for (int k = 0; k < n; ++k) br.push_back(A.bracket(a, A.frame(k)).section_components());
    for (const auto& block : L.dual)
        for (int k = 0; k < n; ++k) {
            RatFn comp;
            for (int l = 0; l < n; ++l)
                if (!br[u(k)][u(l)].is_zero()) comp += br[u(k)][u(l)] * RatFn::variable(block[u(l)]);
            D.add(block[u(k)], comp);
        }
    return D;
}

Derivation hamiltonian_lift(const Algebroid& A, const MixedTensor& a, const SlotLayout& L) {
    return base_part(A.anchor_of(a)) + hamiltonian_lift_fiber(A, a, L);
}

Derivation vertical_lift_dual(const std::vector<RatFn>& mu, const SlotLayout& L, int j) {
    Derivation D;
    for (std::size_t k = 0; k < mu.size(); ++k) D.add(L.dual[u(j)][k], mu[k]);
    return D;
}

Derivation vertical_lift(const MixedTensor& s, const std::vector<Symbol>& fiber) {
    Derivation D;
    auto c = s.section_components();
    for (std::size_t k = 0; k < c.size(); ++k) D.add(fiber[k], c[k]);
    return D;
}

Derivation prolonged_anchor(const Algebroid& A, const MixedTensor& a, const SlotLayout& L) {
    VectorField ra = A.anchor_of(a);
    return base_part(ra) + tangent_lift_fiber(ra, L) + hamiltonian_lift_fiber(A, a, L);
}

RatFn lie_identity_full(const Algebroid& A, const MixedTensor& tau, const MixedTensor& a) {
    SlotLayout L = SlotLayout::standard(A.m(), A.n(), tau.p(), tau.q());
    return prolonged_anchor(A, a, L).apply(to_cwl_value(tau, L)) - to_cwl_value(action(A, a, tau), L);
}

RatFn lie_identity_tangent(const Algebroid& A, const MixedTensor& tau, const VectorField& Y, int i) {
    SlotLayout L = SlotLayout::standard(A.m(), A.n(), tau.p(), tau.q());
    RatFn lhs = vertical_lift_tangent(Y, L, i).apply(to_cwl_value(tau, L));
    RatFn rhs = to_cwl_value(contract_form(Y, tau), L.drop_tangent(i));
    return i % 2 ? lhs + rhs : lhs - rhs;
}

RatFn lie_identity_dual(const Algebroid& A, const MixedTensor& tau, const std::vector<RatFn>& mu, int j) {
    SlotLayout L = SlotLayout::standard(A.m(), A.n(), tau.p(), tau.q());
    RatFn lhs = vertical_lift_dual(mu, L, j).apply(to_cwl_value(tau, L));
    RatFn rhs = to_cwl_value(contract_dual(mu, tau), L.drop_dual(j));
    return j % 2 ? lhs + rhs : lhs - rhs;
}

Report cwl_lie_derivative_identities(const Algebroid& A, const MixedTensor& tau, const MixedTensor& a,
                                     const VectorField& Y, const std::vector<RatFn>& mu) {
    Report rep("Lie derivative identities");
    rep.declare("full lift");
    rep.declare("tangent vertical", tau.p() > 0);
    rep.declare("dual vertical", tau.q() > 0);
    rep.record("full lift", "a = " + a.to_string(), lie_identity_full(A, tau, a));
    for (int i = 0; i < tau.p(); ++i)
        rep.record("tangent vertical", "slot " + std::to_string(i + 1), lie_identity_tangent(A, tau, Y, i));
    for (int j = 0; j < tau.q(); ++j)
        rep.record("dual vertical", "slot " + std::to_string(j + 1), lie_identity_dual(A, tau, mu, j));
    return rep;
}

}  // namespace awb
