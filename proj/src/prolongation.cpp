#include "awb/prolongation.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace awb {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

RatFn var(Symbol s) { return RatFn::variable(s); }

RatFn alternating(int i, const RatFn& f) { return i % 2 ? -f : f; }

const char* family_name(GenFamily f) {
    switch (f) {
        case GenFamily::full: return "full";
        case GenFamily::core_a: return "core_a";
        case GenFamily::core_f: return "core_f";
    }
    return "?";
}

void require_same_base(const GenSection& a, const GenSection& b) {
    if (a.base() && b.base() && a.base() != b.base()) throw BundleMismatch("generator sections over different bases");
}

Derivation generator_anchor(const BigBase& B, const Generator& g) {
    const Algebroid& A = *B.A;
    switch (g.family) {
        case GenFamily::full: return prolonged_anchor(A, A.frame(g.index), B.L);
        case GenFamily::core_a: return vertical_lift_tangent(A.anchor_of_frame(g.index), B.L, g.slot);
        case GenFamily::core_f: return vertical_lift_dual(A.rho_star(A.dx(g.index)), B.L, g.slot);
    }
    return {};
}

GenSection generator_bracket(const BigBasePtr& B, const Generator& g, const Generator& h) {
    const Algebroid& A = *B->A;
    if (g.family != GenFamily::full && h.family != GenFamily::full) return GenSection(B);
    if (g.family != GenFamily::full) return -generator_bracket(B, h, g);
    switch (h.family) {
        case GenFamily::full: return full_of(B, A.bracket(A.frame(g.index), A.frame(h.index)));
        case GenFamily::core_a: return core_a_of(B, h.slot, A.bracket(A.frame(g.index), A.frame(h.index)));
        case GenFamily::core_f:
            // L_{rho(e_g)} dx_s = d rho_{g s}
            return core_f_of(B, h.slot, df(A.bundle(), A.anchor(g.index, h.index)));
    }
    return GenSection(B);
}

}  // namespace

// ------------------------------------------------------------ big base

BigBasePtr BigBase::make(AlgebroidPtr A, int p, int q) {
    if (p < 0 || q < 0) throw DegreeError("negative degree");
    auto B = std::make_shared<BigBase>();
    B->L = SlotLayout::standard(A->m(), A->n(), p, q);
    B->A = std::move(A);
    B->p = p;
    B->q = q;
    return B;
}

std::vector<Symbol> BigBase::coordinates() const {
    std::vector<Symbol> out = A->chart()->vars;
    for (Symbol s : L.all_symbols()) out.push_back(s);
    return out;
}

std::string Generator::to_string() const {
    if (family == GenFamily::full) return "full_" + std::to_string(index + 1);
    return std::string(family_name(family)) + "(" + std::to_string(slot + 1) + "," + std::to_string(index + 1) + ")";
}

// ------------------------------------------------------------ generator sections

GenSection GenSection::single(const BigBasePtr& B, Generator g, const RatFn& c) {
    const int count = g.family == GenFamily::full ? 1 : g.family == GenFamily::core_a ? B->p : B->q;
    const int range = g.family == GenFamily::core_f ? B->A->m() : B->A->n();
    if (g.slot < 0 || g.slot >= count || g.index < 0 || g.index >= range)
        throw std::out_of_range("generator " + g.to_string() + " out of range");
    GenSection s(B);
    s.add(g, c);
    return s;
}

RatFn GenSection::coeff(const Generator& g) const {
    auto it = c_.find(g);
    return it == c_.end() ? RatFn() : it->second;
}

void GenSection::add(const Generator& g, const RatFn& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = c_.emplace(g, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
}

GenSection GenSection::operator+(const GenSection& o) const {
    require_same_base(*this, o);
    GenSection r = *this;
    if (!r.base_) r.base_ = o.base_;
    for (const auto& [g, c] : o.c_) r.add(g, c);
    return r;
}

GenSection GenSection::operator-(const GenSection& o) const { return *this + -o; }

GenSection GenSection::scaled(const RatFn& f) const {
    GenSection r(base_);
    if (f.is_zero()) return r;
    for (const auto& [g, c] : c_) r.add(g, c * f);
    return r;
}

bool operator==(const GenSection& a, const GenSection& b) { return (a - b).is_zero(); }

std::string GenSection::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (const auto& [g, c] : c_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string() + ")*" + g.to_string();
    }
    return out;
}

GenSection full_of(const BigBasePtr& B, const MixedTensor& a) {
    const Algebroid& A = *B->A;
    require_section(A, a);
    const auto& x = A.chart()->vars;
    GenSection G(B);
    auto f = a.section_components();
    for (int k = 0; k < A.n(); ++k) {
        if (f[u(k)].is_zero()) continue;
        G.add({GenFamily::full, 0, k}, f[u(k)]);
        std::vector<RatFn> grad;
        for (int s = 0; s < A.m(); ++s) grad.push_back(f[u(k)].partial(x[u(s)]));
        for (int i = 0; i < B->p; ++i) {
            RatFn c;
            for (int s = 0; s < A.m(); ++s) c += grad[u(s)] * var(B->L.tangent[u(i)][u(s)]);
            G.add({GenFamily::core_a, i, k}, c);
        }
        for (int j = 0; j < B->q; ++j) {
            RatFn minus_phi = -var(B->L.dual[u(j)][u(k)]);
            for (int s = 0; s < A.m(); ++s)
                if (!grad[u(s)].is_zero()) G.add({GenFamily::core_f, j, s}, minus_phi * grad[u(s)]);
        }
    }
    return G;
}

GenSection core_a_of(const BigBasePtr& B, int slot, const MixedTensor& a) {
    require_section(*B->A, a);
    GenSection G(B);
    auto c = a.section_components();
    for (std::size_t k = 0; k < c.size(); ++k) G.add({GenFamily::core_a, slot, static_cast<int>(k)}, c[k]);
    return G;
}

GenSection core_f_of(const BigBasePtr& B, int slot, const MixedTensor& alpha) {
    GenSection G(B);
    auto c = alpha.form_components();
    for (std::size_t s = 0; s < c.size(); ++s) G.add({GenFamily::core_f, slot, static_cast<int>(s)}, c[s]);
    return G;
}

Derivation gen_anchor(const GenSection& G) {
    Derivation D;
    for (const auto& [g, c] : G.coeffs()) D += generator_anchor(*G.base(), g).scaled(c);
    return D;
}

// [F g, H h] = F H [g,h] + F rho(g)(H) h - H rho(h)(F) g
GenSection gen_bracket(const GenSection& G, const GenSection& H) {
    require_same_base(G, H);
    const BigBasePtr& B = G.base() ? G.base() : H.base();
    GenSection out(B);
    if (G.is_zero() || H.is_zero()) return out;
    std::map<Generator, Derivation> anchors;
    auto anchor = [&](const Generator& g) -> const Derivation& {
        auto it = anchors.find(g);
        if (it == anchors.end()) it = anchors.emplace(g, generator_anchor(*B, g)).first;
        return it->second;
    };
    for (const auto& [g, F] : G.coeffs())
        for (const auto& [h, K] : H.coeffs()) {
            out = out + generator_bracket(B, g, h).scaled(F * K);
            out.add(h, F * anchor(g).apply(K));
            out.add(g, -(K * anchor(h).apply(F)));
        }
    return out;
}

// ------------------------------------------------------------ mu

MuSection::MuSection(const BigBasePtr& B, const IMTensor& T) : base_(B) {
    if (T.algebroid() != B->A && T.algebroid()->bundle() != B->A->bundle())
        throw BundleMismatch("IM tensor on another algebroid");
    if (T.p() != B->p || T.q() != B->q) throw DegreeError("IM tensor degree does not match the big base");
    const SlotLayout& L = B->L;
    for (const auto& t : T.D_frame()) full_.push_back(to_cwl_value(t, L));
    for (int i = 0; i < B->p; ++i) {
        std::vector<RatFn> row;
        for (const auto& t : T.l_frame()) row.push_back(alternating(i, to_cwl_value(t, L.drop_tangent(i))));
        core_a_.push_back(std::move(row));
    }
    for (int j = 0; j < B->q; ++j) {
        std::vector<RatFn> row;
        for (const auto& t : T.r_frame()) row.push_back(alternating(j, to_cwl_value(t, L.drop_dual(j))));
        core_f_.push_back(std::move(row));
    }
}

RatFn MuSection::on(const Generator& g) const {
    switch (g.family) {
        case GenFamily::full: return full_.at(u(g.index));
        case GenFamily::core_a: return core_a_.at(u(g.slot)).at(u(g.index));
        case GenFamily::core_f: return core_f_.at(u(g.slot)).at(u(g.index));
    }
    return {};
}

RatFn MuSection::pair(const GenSection& G) const {
    if (G.base() && G.base() != base_) throw BundleMismatch("pairing across big bases");
    RatFn out;
    for (const auto& [g, c] : G.coeffs()) out += c * on(g);
    return out;
}

MuSection build_mu(const BigBasePtr& B, const IMTensor& T) { return MuSection(B, T); }

RatFn cocycle_residual(const MuSection& mu, const GenSection& U, const GenSection& V) {
    return mu.pair(gen_bracket(U, V)) - gen_anchor(U).apply(mu.pair(V)) + gen_anchor(V).apply(mu.pair(U));
}

int family_equation(GenFamily f, GenFamily g) {
    if (f > g) std::swap(f, g);
    if (f == GenFamily::full) return g == GenFamily::full ? 1 : g == GenFamily::core_a ? 2 : 3;
    if (f == GenFamily::core_a) return g == GenFamily::core_a ? 4 : 6;
    return 5;
}

std::string family_check_name(GenFamily f, GenFamily g) {
    if (f > g) std::swap(f, g);
    return std::string(family_name(f)) + "/" + family_name(g) + " (IM" + std::to_string(family_equation(f, g)) + ")";
}

Report cocycle_check(const IMTensor& T, bool scaled_probes) {
    BigBasePtr B = BigBase::make(T.algebroid(), T.p(), T.q());
    MuSection mu(B, T);
    const Algebroid& A = *B->A;
    Report rep("cocycle equation on generators, degree (" + std::to_string(T.q()) + "," + std::to_string(T.p()) +
               ") over " + A.name());

    std::map<GenFamily, std::vector<Generator>> gens;
    for (int i = 0; i < A.n(); ++i) gens[GenFamily::full].push_back({GenFamily::full, 0, i});
    for (int i = 0; i < B->p; ++i)
        for (int k = 0; k < A.n(); ++k) gens[GenFamily::core_a].push_back({GenFamily::core_a, i, k});
    for (int j = 0; j < B->q; ++j)
        for (int s = 0; s < A.m(); ++s) gens[GenFamily::core_f].push_back({GenFamily::core_f, j, s});

    std::vector<RatFn> scalings;
    if (scaled_probes) {
        if (A.m() > 0) scalings.push_back(var(A.chart()->vars[0]));
        auto slots = B->L.all_symbols();
        if (!slots.empty()) scalings.push_back(var(slots[0]));
    }

    using Probe = std::pair<std::string, RatFn>;
    const std::pair<GenFamily, GenFamily> families[] = {
        {GenFamily::full, GenFamily::full},     {GenFamily::full, GenFamily::core_a},
        {GenFamily::full, GenFamily::core_f},   {GenFamily::core_a, GenFamily::core_a},
        {GenFamily::core_f, GenFamily::core_f}, {GenFamily::core_a, GenFamily::core_f}};
    std::vector<std::future<std::vector<Probe>>> jobs;
    for (const auto& [f, g] : families) {
        jobs.push_back(std::async(std::launch::async, [&, f, g] {
            std::vector<Probe> out;
            const auto& left = gens[f];
            const auto& right = gens[g];
            for (std::size_t a = 0; a < left.size(); ++a)
                for (std::size_t b = f == g ? a + 1 : 0; b < right.size(); ++b) {
                    GenSection U = GenSection::single(B, left[a]), V = GenSection::single(B, right[b]);
                    std::string probe = left[a].to_string() + ", " + right[b].to_string();
                    out.emplace_back(probe, cocycle_residual(mu, U, V));
                    for (const auto& F : scalings)
                        out.emplace_back("(" + F.to_string() + ")*" + probe, cocycle_residual(mu, U.scaled(F), V));
                }
            return out;
        }));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto [f, g] = families[k];
        std::string name = family_check_name(f, g);
        bool ok = im_applicable(family_equation(f, g), T.q(), T.p());
        auto probes = jobs[k].get();
        rep.declare(name, ok, ok ? "" : "no generator pairs carry content in this degree");
        if (!ok) continue;
        for (auto& [probe, value] : probes) rep.record(name, probe, value);
    }
    return rep;
}

// ------------------------------------------------------------ linear tensors

LinearLayout LinearLayout::make(const Bundle& E, int p, int q) {
    if (p < 0 || q < 0) throw DegreeError("negative degree");
    const int m = E.chart->dim(), n = E.rank();
    LinearLayout L;
    L.x = E.chart->vars;
    auto sym = [](const std::string& s) { return Symbol::intern(s); };
    for (int k = 1; k <= n; ++k) L.t.push_back(sym("t" + std::to_string(k)));
    auto block = [&](const std::string& prefix, int slot, int size) {
        std::vector<Symbol> b;
        for (int k = 1; k <= size; ++k) b.push_back(sym(prefix + std::to_string(slot) + "_" + std::to_string(k)));
        return b;
    };
    for (int i = 1; i <= p; ++i) {
        L.xd.push_back(block("xd", i, m));
        L.ud.push_back(block("ud", i, n));
    }
    for (int j = 1; j <= q; ++j) {
        L.px.push_back(block("px", j, m));
        L.pu.push_back(block("pu", j, n));
    }
    for (Symbol s : L.x)
        for (Symbol f : L.linear_fiber())
            if (s == f) throw std::invalid_argument("chart variable " + s.name() + " clashes with a fiber coordinate");
    return L;
}

SlotLayout LinearLayout::projected() const { return SlotLayout{xd, pu}; }

SlotLayout LinearLayout::joint() const {
    SlotLayout J;
    for (int i = 0; i < p(); ++i) {
        auto b = xd[u(i)];
        b.insert(b.end(), ud[u(i)].begin(), ud[u(i)].end());
        J.tangent.push_back(std::move(b));
    }
    for (int j = 0; j < q(); ++j) {
        auto b = px[u(j)];
        b.insert(b.end(), pu[u(j)].begin(), pu[u(j)].end());
        J.dual.push_back(std::move(b));
    }
    return J;
}

std::vector<Symbol> LinearLayout::linear_fiber() const {
    std::vector<Symbol> out = t;
    for (const auto& b : ud) out.insert(out.end(), b.begin(), b.end());
    for (const auto& b : px) out.insert(out.end(), b.begin(), b.end());
    return out;
}

LinearTensor LinearTensor::make(BundlePtr E, int p, int q, const RatFn& value) {
    LinearTensor t;
    t.layout = LinearLayout::make(*E, p, q);
    t.E = std::move(E);
    t.p = p;
    t.q = q;
    t.value = value;
    return t;
}

namespace {

void set_block(std::map<Symbol, RatFn>& sub, const std::vector<Symbol>& block, const std::vector<RatFn>& values) {
    for (std::size_t k = 0; k < block.size(); ++k) sub[block[k]] = values.empty() ? RatFn() : values[k];
}

void zero_blocks(std::map<Symbol, RatFn>& sub, const std::vector<std::vector<Symbol>>& blocks) {
    for (const auto& b : blocks) set_block(sub, b, {});
}

// Substitution that swaps joint blocks a and b.
RatFn swap_blocks(const RatFn& f, const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    std::map<Symbol, RatFn> sub;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sub.emplace(a[k], var(b[k]));
        sub.emplace(b[k], var(a[k]));
    }
    return f.substitute(sub);
}

MixedTensor read_slots(const BundlePtr& E, const SlotLayout& L, const RatFn& f) { return from_cwl(CwlFunction{E, L, f}); }

}  // namespace

std::string linear_tensor_violation(const LinearTensor& tau) {
    SlotLayout J = tau.layout.joint();
    std::vector<std::vector<Symbol>> blocks = J.tangent;
    blocks.insert(blocks.end(), J.dual.begin(), J.dual.end());
    if (auto w = linearity_witness(tau.value, blocks); !w.empty()) return "slot block not of degree 1 at " + w;
    if (auto w = linearity_witness(tau.value, {tau.layout.linear_fiber()}); !w.empty())
        return "not linear over the slot base at " + w;
    for (int i = 0; i + 1 < J.p(); ++i)
        if (swap_blocks(tau.value, J.tangent[u(i)], J.tangent[u(i + 1)]) != -tau.value)
            return "not skew in tangent slots " + std::to_string(i + 1) + "," + std::to_string(i + 2);
    for (int j = 0; j + 1 < J.q(); ++j)
        if (swap_blocks(tau.value, J.dual[u(j)], J.dual[u(j + 1)]) != -tau.value)
            return "not skew in cotangent slots " + std::to_string(j + 1) + "," + std::to_string(j + 2);
    return {};
}

LinearTensor reconstruct_linear(const IMTensor& T) {
    const BundlePtr& E = T.algebroid()->bundle();
    LinearTensor tau = LinearTensor::make(E, T.p(), T.q(), RatFn());
    const LinearLayout& L = tau.layout;
    SlotLayout P = L.projected();
    RatFn c;
    for (int k = 0; k < E->rank(); ++k) c += var(L.t[u(k)]) * to_cwl_value(T.D_frame()[u(k)], P);
    for (int i = 0; i < T.p(); ++i)
        for (int k = 0; k < E->rank(); ++k)
            c += alternating(i, var(L.ud[u(i)][u(k)]) * to_cwl_value(T.l_frame()[u(k)], P.drop_tangent(i)));
    for (int j = 0; j < T.q(); ++j)
        for (int s = 0; s < E->chart->dim(); ++s)
            c += alternating(j, var(L.px[u(j)][u(s)]) * to_cwl_value(T.r_frame()[u(s)], P.drop_dual(j)));
    tau.value = c;
    return tau;
}

LinearTensor reconstruct_linear_extended(const IMTensor& T, const std::vector<std::vector<Rational>>& w) {
    const BundlePtr& E = T.algebroid()->bundle();
    const int m = E->chart->dim(), n = E->rank();
    if (w.size() != u(n)) throw std::invalid_argument("extension matrix needs one row per frame element");
    for (const auto& row : w)
        if (row.size() != u(m)) throw std::invalid_argument("extension matrix needs one column per coordinate");
    LinearTensor tau = LinearTensor::make(E, T.p(), T.q(), RatFn());
    const LinearLayout& L = tau.layout;
    SlotLayout P = L.projected();

    // D(u) at the point: sum t_k D(e_k) + df_k ^ l(e_k) - e_k ^ r(df_k), df_k = sum_s w_ks dx_s
    MixedTensor Du(E, T.p(), T.q());
    for (int k = 0; k < n; ++k) {
        Du += T.D_frame()[u(k)].scaled(var(L.t[u(k)]));
        std::vector<RatFn> dfk;
        for (int s = 0; s < m; ++s) dfk.emplace_back(w[u(k)][u(s)]);
        MixedTensor dfk_form = MixedTensor::one_form(E, dfk);
        if (T.has_l()) Du += wedge(dfk_form, T.l_frame()[u(k)]);
        if (T.has_r()) Du -= wedge(MixedTensor::frame(E, k), T.r(dfk_form));
    }
    RatFn c = to_cwl_value(Du, P);
    // e_i = ud(i) - X_i(f), beta_j = px(j) + sum_k ph(j)_k df_k
    for (int i = 0; i < T.p(); ++i)
        for (int k = 0; k < n; ++k) {
            RatFn e = var(L.ud[u(i)][u(k)]);
            for (int s = 0; s < m; ++s) e -= RatFn(w[u(k)][u(s)]) * var(L.xd[u(i)][u(s)]);
            c += alternating(i, e * to_cwl_value(T.l_frame()[u(k)], P.drop_tangent(i)));
        }
    for (int j = 0; j < T.q(); ++j)
        for (int s = 0; s < m; ++s) {
            RatFn beta = var(L.px[u(j)][u(s)]);
            for (int k = 0; k < n; ++k) beta += RatFn(w[u(k)][u(s)]) * var(L.pu[u(j)][u(k)]);
            c += alternating(j, beta * to_cwl_value(T.r_frame()[u(s)], P.drop_dual(j)));
        }
    tau.value = c;
    return tau;
}

RatFn evaluate_prolonged_section(const LinearTensor& tau, const std::vector<RatFn>& uc) {
    const LinearLayout& L = tau.layout;
    std::map<Symbol, RatFn> sub;
    set_block(sub, L.t, uc);
    zero_blocks(sub, L.ud);
    zero_blocks(sub, L.px);
    return tau.value.substitute(sub);
}

RatFn evaluate_bar_vector(const LinearTensor& tau, int slot, const std::vector<RatFn>& ubar) {
    const LinearLayout& L = tau.layout;
    std::map<Symbol, RatFn> sub;
    set_block(sub, L.t, {});
    zero_blocks(sub, L.ud);
    zero_blocks(sub, L.px);
    set_block(sub, L.xd.at(u(slot)), {});
    set_block(sub, L.ud[u(slot)], ubar);
    return tau.value.substitute(sub);
}

RatFn evaluate_bar_covector(const LinearTensor& tau, int slot, const std::vector<RatFn>& alpha) {
    const LinearLayout& L = tau.layout;
    std::map<Symbol, RatFn> sub;
    set_block(sub, L.t, {});
    zero_blocks(sub, L.ud);
    zero_blocks(sub, L.px);
    set_block(sub, L.px.at(u(slot)), alpha);
    set_block(sub, L.pu[u(slot)], {});
    return tau.value.substitute(sub);
}

RatFn evaluate_bars(const LinearTensor& tau, const std::vector<int>& vec_slots, const std::vector<int>& cov_slots) {
    const LinearLayout& L = tau.layout;
    std::map<Symbol, RatFn> sub;
    set_block(sub, L.t, {});
    // bar slots keep their vertical variables symbolic
    for (int i = 0; i < L.p(); ++i) {
        bool bar = std::find(vec_slots.begin(), vec_slots.end(), i) != vec_slots.end();
        set_block(sub, bar ? L.xd[u(i)] : L.ud[u(i)], {});
    }
    for (int j = 0; j < L.q(); ++j) {
        bool bar = std::find(cov_slots.begin(), cov_slots.end(), j) != cov_slots.end();
        set_block(sub, bar ? L.pu[u(j)] : L.px[u(j)], {});
    }
    return tau.value.substitute(sub);
}

IMTensor extract_components(const LinearTensor& tau) {
    if (auto v = linear_tensor_violation(tau); !v.empty()) throw CwlError("not a linear tensor", v);
    const BundlePtr& E = tau.E;
    const int m = E->chart->dim(), n = E->rank();
    SlotLayout P = tau.layout.projected();
    auto unit = [](int size, int k) {
        std::vector<RatFn> v(u(size));
        v[u(k)] = RatFn(1L);
        return v;
    };
    std::vector<MixedTensor> D, l, r;
    for (int k = 0; k < n; ++k) D.push_back(read_slots(E, P, evaluate_prolonged_section(tau, unit(n, k))));
    if (tau.p >= 1)
        for (int k = 0; k < n; ++k)
            l.push_back(read_slots(E, P.drop_tangent(0), evaluate_bar_vector(tau, 0, unit(n, k))));
    if (tau.q >= 1)
        for (int s = 0; s < m; ++s)
            r.push_back(read_slots(E, P.drop_dual(0), evaluate_bar_covector(tau, 0, unit(m, s))));
    return IMTensor::make(Algebroid::vector_bundle(E), tau.q, tau.p, std::move(D), std::move(l), std::move(r));
}

Report homogeneity_check(const LinearTensor& tau) {
    Report rep("homogeneous structure, degree (" + std::to_string(tau.q) + "," + std::to_string(tau.p) + ")");
    SlotLayout J = tau.layout.joint();
    Symbol lambda = Symbol::intern("lambda");
    std::map<Symbol, RatFn> scale;
    for (Symbol s : J.all_symbols()) scale.emplace(s, var(lambda) * var(s));
    RatFn scaled = tau.value.substitute(scale);
    RatFn residual = scaled - var(lambda).pow(static_cast<unsigned>(tau.p + tau.q)) * tau.value;
    rep.declare("homogeneity");
    rep.record("homogeneity", "lambda-degree of F(lambda .) is " + std::to_string(scaled.degree_in(lambda)) +
                                  ", expected " + std::to_string(tau.p + tau.q),
               residual);
    rep.declare("zero insertion", tau.p + tau.q > 0, tau.p + tau.q > 0 ? "" : "no slots");
    auto insert_zero = [&](const std::vector<Symbol>& block, const std::string& probe) {
        std::map<Symbol, RatFn> sub;
        set_block(sub, block, {});
        rep.record("zero insertion", probe, tau.value.substitute(sub));
    };
    for (int i = 0; i < J.p(); ++i) insert_zero(J.tangent[u(i)], "tangent slot " + std::to_string(i + 1));
    for (int j = 0; j < J.q(); ++j) insert_zero(J.dual[u(j)], "cotangent slot " + std::to_string(j + 1));
    return rep;
}

}  // namespace awb
