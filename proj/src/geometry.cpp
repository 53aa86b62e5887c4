#include "awb/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace awb {

ChartPtr make_chart(const std::string& name, const std::vector<std::string>& var_names) {
    auto c = std::make_shared<Chart>();
    c->name = name;
    std::set<std::string> seen;
    for (const auto& v : var_names) {
        if (!seen.insert(v).second) throw std::invalid_argument("duplicate coordinate '" + v + "'");
        c->vars.push_back(Symbol::intern(v));
    }
    if (c->vars.size() > 31) throw std::invalid_argument("charts are limited to 31 coordinates");
    return c;
}

BundlePtr make_bundle(ChartPtr chart, const std::vector<std::string>& frame_names) {
    std::set<std::string> seen;
    for (const auto& f : frame_names) {
        if (!seen.insert(f).second) throw std::invalid_argument("duplicate frame name '" + f + "'");
        for (Symbol v : chart->vars)
            if (v.name() == f) throw std::invalid_argument("frame name '" + f + "' clashes with a coordinate");
    }
    if (frame_names.size() > 31) throw std::invalid_argument("bundles are limited to rank 31");
    auto b = std::make_shared<Bundle>();
    b->chart = std::move(chart);
    b->frame = frame_names;
    return b;
}

BundlePtr tangent_bundle(ChartPtr chart) {
    std::vector<std::string> names;
    for (Symbol v : chart->vars) names.push_back("D" + v.name());
    auto b = std::make_shared<Bundle>();
    b->chart = std::move(chart);
    b->frame = std::move(names);
    return b;
}

std::vector<int> set_indices(IndexSet s) {
    std::vector<int> out;
    while (s) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

int shuffle_sign(IndexSet I, IndexSet J) {
    if (I & J) return 0;
    int inversions = 0;
    for (int j : set_indices(J)) inversions += std::popcount(I >> (j + 1));
    return inversions % 2 ? -1 : 1;
}

std::vector<IndexSet> subsets(int n, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > n) return out;
    for (IndexSet s = 0; s < (IndexSet{1} << n); ++s)
        if (std::popcount(s) == k) out.push_back(s);
    return out;
}

namespace {

// Number of elements of s below index i.
int below(IndexSet s, int i) { return std::popcount(s & ((IndexSet{1} << i) - 1)); }

}  // namespace

// ------------------------------------------------------------ MixedTensor

MixedTensor::MixedTensor(BundlePtr bundle, int p, int q) : bundle_(std::move(bundle)), p_(p), q_(q) {
    if (!bundle_) throw std::invalid_argument("tensor without a bundle");
    if (p < 0 || q < 0) throw DegreeError("negative tensor degree");
}

MixedTensor MixedTensor::scalar(BundlePtr bundle, const RatFn& f) {
    MixedTensor t(std::move(bundle), 0, 0);
    t.add_term(0, 0, f);
    return t;
}

MixedTensor MixedTensor::basis(BundlePtr bundle, IndexSet I, IndexSet J, const RatFn& c) {
    MixedTensor t(std::move(bundle), set_size(I), set_size(J));
    t.add_term(I, J, c);
    return t;
}

MixedTensor MixedTensor::section(BundlePtr bundle, const std::vector<RatFn>& comps) {
    MixedTensor t(bundle, 0, 1);
    if (static_cast<int>(comps.size()) != bundle->rank()) throw std::invalid_argument("section has wrong length");
    for (std::size_t k = 0; k < comps.size(); ++k) t.add_term(0, IndexSet{1} << k, comps[k]);
    return t;
}

MixedTensor MixedTensor::one_form(BundlePtr bundle, const std::vector<RatFn>& comps) {
    MixedTensor t(bundle, 1, 0);
    if (static_cast<int>(comps.size()) != bundle->chart->dim()) throw std::invalid_argument("1-form has wrong length");
    for (std::size_t k = 0; k < comps.size(); ++k) t.add_term(IndexSet{1} << k, 0, comps[k]);
    return t;
}

RatFn MixedTensor::coeff(IndexSet I, IndexSet J) const {
    auto it = c_.find({I, J});
    return it == c_.end() ? RatFn() : it->second;
}

void MixedTensor::add_term(IndexSet I, IndexSet J, const RatFn& c) {
    if (c.is_zero()) return;
    if (set_size(I) != p_ || set_size(J) != q_) throw DegreeError("index set does not match tensor degree");
    if ((I >> m()) || (J >> n())) throw std::out_of_range("index beyond bundle dimensions");
    auto it = c_.find({I, J});
    if (it == c_.end()) {
        c_.emplace(Key{I, J}, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
}

std::vector<RatFn> MixedTensor::section_components() const {
    if (p_ != 0 || q_ != 1) throw DegreeError("not a section");
    std::vector<RatFn> out(static_cast<std::size_t>(n()));
    for (const auto& [k, c] : c_) out[static_cast<std::size_t>(std::countr_zero(k.second))] = c;
    return out;
}

std::vector<RatFn> MixedTensor::form_components() const {
    if (p_ != 1 || q_ != 0) throw DegreeError("not a 1-form");
    std::vector<RatFn> out(static_cast<std::size_t>(m()));
    for (const auto& [k, c] : c_) out[static_cast<std::size_t>(std::countr_zero(k.first))] = c;
    return out;
}

RatFn MixedTensor::scalar_value() const {
    if (p_ != 0 || q_ != 0) throw DegreeError("not a scalar");
    return coeff(0, 0);
}

MixedTensor MixedTensor::operator-() const { return map_coeffs([](const RatFn& c) { return -c; }); }

void require_same_bundle(const MixedTensor& a, const MixedTensor& b, const char* op) {
    if (a.chart() != b.chart() || a.n() != b.n())
        throw BundleMismatch(std::string(op) + ": tensors live on different bundles");
}

MixedTensor MixedTensor::operator+(const MixedTensor& o) const {
    if (!bundle_) return o;
    if (!o.bundle_) return *this;
    require_same_bundle(*this, o, "add");
    if (p_ != o.p_ || q_ != o.q_) {
        // Zero tensors of another degree are harmless.
        if (o.is_zero()) return *this;
        if (is_zero()) return o;
        throw DegreeError("adding tensors of degrees (" + std::to_string(p_) + "," + std::to_string(q_) + ") and (" +
                          std::to_string(o.p_) + "," + std::to_string(o.q_) + ")");
    }
    MixedTensor r = *this;
    for (const auto& [k, c] : o.c_) r.add_term(k.first, k.second, c);
    return r;
}

MixedTensor MixedTensor::operator-(const MixedTensor& o) const { return *this + (-o); }

MixedTensor MixedTensor::scaled(const RatFn& f) const {
    if (f.is_zero()) return MixedTensor(bundle_, p_, q_);
    return map_coeffs([&](const RatFn& c) { return c * f; });
}

bool operator==(const MixedTensor& a, const MixedTensor& b) { return (a - b).is_zero(); }

std::string MixedTensor::to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : c_) {
        std::string basis;
        for (int i : set_indices(k.first)) basis += (basis.empty() ? "" : "*") + ("d" + chart()->vars[static_cast<std::size_t>(i)].name());
        for (int j : set_indices(k.second)) basis += (basis.empty() ? "" : "*") + bundle_->frame[static_cast<std::size_t>(j)];
        std::string coef = c.to_string();
        bool simple = c.is_polynomial() && c.num().terms().size() == 1;
        bool negative = simple && coef[0] == '-';
        if (negative) coef = coef.substr(1);
        std::string term;
        if (basis.empty())
            term = simple ? coef : "(" + coef + ")";
        else if (coef == "1")
            term = basis;
        else
            term = (simple ? coef : "(" + coef + ")") + "*" + basis;
        if (out.empty())
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

// ------------------------------------------------------------ VectorField

VectorField::VectorField(ChartPtr chart, std::vector<RatFn> comps) : chart_(std::move(chart)), c_(std::move(comps)) {
    if (static_cast<int>(c_.size()) != chart_->dim()) throw std::invalid_argument("vector field has wrong length");
}

VectorField VectorField::zero(ChartPtr chart) {
    std::size_t m = static_cast<std::size_t>(chart->dim());
    return VectorField(std::move(chart), std::vector<RatFn>(m));
}

VectorField VectorField::coordinate(ChartPtr chart, int i) {
    VectorField v = zero(std::move(chart));
    v.c_[static_cast<std::size_t>(i)] = RatFn(1L);
    return v;
}

RatFn VectorField::apply(const RatFn& f) const {
    RatFn r;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero() && f.degree_in(chart_->vars[i]) > 0) r += c_[i] * f.partial(chart_->vars[i]);
    return r;
}

bool VectorField::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const RatFn& c) { return c.is_zero(); });
}

VectorField VectorField::operator+(const VectorField& o) const {
    VectorField r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
    VectorField r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

VectorField VectorField::scaled(const RatFn& f) const {
    VectorField r = *this;
    for (auto& c : r.c_) c *= f;
    return r;
}

MixedTensor VectorField::as_tensor() const { return MixedTensor::section(tangent_bundle(chart_), c_); }

std::string VectorField::to_string() const { return as_tensor().to_string(); }

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    std::vector<RatFn> out;
    for (int k = 0; k < X.chart()->dim(); ++k) out.push_back(X.apply(Y[k]) - Y.apply(X[k]));
    return VectorField(X.chart(), std::move(out));
}

// ------------------------------------------------------------ operations

MixedTensor wedge(const MixedTensor& a, const MixedTensor& b) {
    require_same_bundle(a, b, "wedge");
    MixedTensor r(a.bundle(), a.p() + b.p(), a.q() + b.q());
    if (r.degenerate()) return r;
    for (const auto& [ka, ca] : a.coeffs())
        for (const auto& [kb, cb] : b.coeffs()) {
            int s = shuffle_sign(ka.first, kb.first) * shuffle_sign(ka.second, kb.second);
            if (s == 0) continue;
            r.add_term(ka.first | kb.first, ka.second | kb.second, s > 0 ? ca * cb : -(ca * cb));
        }
    return r;
}

MixedTensor contract_form(const VectorField& U, const MixedTensor& t) {
    if (t.p() == 0) throw DegreeError("contraction with a vector field needs form degree >= 1");
    return contract_form_or_zero(U, t);
}

MixedTensor contract_form_or_zero(const VectorField& U, const MixedTensor& t) {
    if (U.chart() != t.chart()) throw BundleMismatch("contraction: vector field on another chart");
    if (t.p() == 0) return MixedTensor(t.bundle(), 0, t.q());
    MixedTensor r(t.bundle(), t.p() - 1, t.q());
    for (const auto& [k, c] : t.coeffs())
        for (int i : set_indices(k.first)) {
            if (U[i].is_zero()) continue;
            RatFn v = U[i] * c;
            r.add_term(k.first & ~(IndexSet{1} << i), k.second, below(k.first, i) % 2 ? -v : v);
        }
    return r;
}

MixedTensor contract_dual(const std::vector<RatFn>& xi, const MixedTensor& t) {
    if (t.q() == 0) throw DegreeError("contraction with a dual section needs multivector degree >= 1");
    return contract_dual_or_zero(xi, t);
}

MixedTensor contract_dual_or_zero(const std::vector<RatFn>& xi, const MixedTensor& t) {
    if (static_cast<int>(xi.size()) != t.n()) throw BundleMismatch("contraction: dual section has wrong rank");
    if (t.q() == 0) return MixedTensor(t.bundle(), t.p(), 0);
    MixedTensor r(t.bundle(), t.p(), t.q() - 1);
    for (const auto& [k, c] : t.coeffs())
        for (int j : set_indices(k.second)) {
            const RatFn& x = xi[static_cast<std::size_t>(j)];
            if (x.is_zero()) continue;
            RatFn v = x * c;
            r.add_term(k.first, k.second & ~(IndexSet{1} << j), below(k.second, j) % 2 ? -v : v);
        }
    return r;
}

RatFn partial(const ChartPtr& chart, const RatFn& f, int i) { return f.partial(chart->vars[static_cast<std::size_t>(i)]); }

MixedTensor frame_d(const MixedTensor& t) {
    MixedTensor r(t.bundle(), t.p() + 1, t.q());
    if (r.degenerate()) return r;
    const int m = t.m();
    for (const auto& [k, c] : t.coeffs())
        for (int i = 0; i < m; ++i) {
            if (k.first >> i & 1u) continue;
            Symbol x = t.chart()->vars[static_cast<std::size_t>(i)];
            if (c.degree_in(x) == 0) continue;
            RatFn v = c.partial(x);
            r.add_term(k.first | (IndexSet{1} << i), k.second, below(k.first, i) % 2 ? -v : v);
        }
    return r;
}

MixedTensor d(const MixedTensor& form) {
    if (form.q() != 0) throw DegreeError("exterior derivative of a tensor with multivector part");
    return frame_d(form);
}

MixedTensor df(BundlePtr bundle, const RatFn& f) { return frame_d(MixedTensor::scalar(std::move(bundle), f)); }

MixedTensor frame_lie_derivative(const VectorField& X, const MixedTensor& t) {
    MixedTensor r(t.bundle(), t.p(), t.q());
    const int m = t.m();
    std::vector<std::vector<RatFn>> jac(static_cast<std::size_t>(m));  // jac[i][k] = d_k X^i
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) jac[static_cast<std::size_t>(i)].push_back(partial(t.chart(), X[i], k));
    for (const auto& [key, c] : t.coeffs()) {
        r.add_term(key.first, key.second, X.apply(c));
        for (int i : set_indices(key.first)) {
            IndexSet rest = key.first & ~(IndexSet{1} << i);
            for (int k = 0; k < m; ++k) {
                if (rest >> k & 1u) continue;
                const RatFn& dk = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                if (dk.is_zero()) continue;
                int s = (below(rest, k) + below(rest, i)) % 2 ? -1 : 1;
                RatFn v = c * dk;
                r.add_term(rest | (IndexSet{1} << k), key.second, s > 0 ? v : -v);
            }
        }
    }
    return r;
}

MixedTensor lie_derivative(const VectorField& X, const MixedTensor& form) {
    if (form.q() != 0) throw DegreeError("Lie derivative expects a form");
    return frame_lie_derivative(X, form);
}

MixedTensor lie_derivative_cartan(const VectorField& X, const MixedTensor& form) {
    if (form.q() != 0) throw DegreeError("Lie derivative expects a form");
    MixedTensor a = contract_form_or_zero(X, d(form));
    if (form.p() == 0) return a;
    return a + d(contract_form(X, form));
}

// ------------------------------------------------------------ cwl functions

SlotLayout SlotLayout::named(const std::string& tp, const std::string& dp, int m, int n, int p, int q) {
    SlotLayout l;
    for (int i = 1; i <= p; ++i) {
        std::vector<Symbol> block;
        for (int k = 1; k <= m; ++k) block.push_back(Symbol::intern(tp + std::to_string(i) + "_" + std::to_string(k)));
        l.tangent.push_back(std::move(block));
    }
    for (int j = 1; j <= q; ++j) {
        std::vector<Symbol> block;
        for (int k = 1; k <= n; ++k) block.push_back(Symbol::intern(dp + std::to_string(j) + "_" + std::to_string(k)));
        l.dual.push_back(std::move(block));
    }
    return l;
}

SlotLayout SlotLayout::standard(int m, int n, int p, int q) { return named("X", "ph", m, n, p, q); }

SlotLayout SlotLayout::drop_tangent(int i) const {
    SlotLayout l = *this;
    l.tangent.erase(l.tangent.begin() + i);
    return l;
}

SlotLayout SlotLayout::drop_dual(int j) const {
    SlotLayout l = *this;
    l.dual.erase(l.dual.begin() + j);
    return l;
}

std::vector<Symbol> SlotLayout::all_symbols() const {
    std::vector<Symbol> out;
    for (const auto& b : tangent) out.insert(out.end(), b.begin(), b.end());
    for (const auto& b : dual) out.insert(out.end(), b.begin(), b.end());
    return out;
}

namespace {

int permutation_sign(const std::vector<int>& perm) {
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

}  // namespace

Poly slot_determinant(const std::vector<std::vector<Symbol>>& blocks, const std::vector<int>& idx) {
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Poly::Term> terms;
    do {
        std::vector<Monomial::Factor> f;
        for (std::size_t s = 0; s < perm.size(); ++s)
            f.emplace_back(blocks[s][static_cast<std::size_t>(idx[static_cast<std::size_t>(perm[s])])].id(), 1);
        terms.emplace_back(Monomial(std::move(f)), Rational(permutation_sign(perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Poly::from_terms(std::move(terms));
}

RatFn to_cwl_value(const MixedTensor& t, const SlotLayout& layout) {
    if (layout.p() != t.p() || layout.q() != t.q()) throw DegreeError("slot layout does not match tensor degree");
    std::map<IndexSet, Poly> tdet, ddet;
    auto det = [](std::map<IndexSet, Poly>& cache, const std::vector<std::vector<Symbol>>& blocks, IndexSet s) {
        auto it = cache.find(s);
        if (it == cache.end()) it = cache.emplace(s, slot_determinant(blocks, set_indices(s))).first;
        return it->second;
    };
    RatFn out;
    for (const auto& [k, c] : t.coeffs()) {
        Poly basis = det(tdet, layout.tangent, k.first) * det(ddet, layout.dual, k.second);
        out += c * RatFn(basis);
    }
    return out;
}

CwlFunction to_cwl(const MixedTensor& t) {
    return CwlFunction{t.bundle(), SlotLayout::standard(t.m(), t.n(), t.p(), t.q()), to_cwl_value(t, SlotLayout::standard(t.m(), t.n(), t.p(), t.q()))};
}

std::string linearity_witness(const RatFn& f, const std::vector<std::vector<Symbol>>& blocks) {
    std::map<std::uint32_t, std::size_t> owner;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (Symbol s : blocks[b]) owner[s.id()] = b;
    for (const auto& [m, c] : f.den().terms())
        for (const auto& fe : m.factors())
            if (owner.count(fe.first)) return "denominator " + f.den().to_string();
    for (const auto& [m, c] : f.num().terms()) {
        std::vector<std::uint32_t> deg(blocks.size(), 0);
        for (const auto& [v, e] : m.factors()) {
            auto it = owner.find(v);
            if (it != owner.end()) deg[it->second] += e;
        }
        for (auto d : deg)
            if (d != 1) return m.is_one() ? "1" : m.to_string();
    }
    return {};
}

MixedTensor from_cwl(const CwlFunction& f) {
    const SlotLayout& L = f.layout;
    std::vector<std::vector<Symbol>> blocks = L.tangent;
    blocks.insert(blocks.end(), L.dual.begin(), L.dual.end());
    std::string w = linearity_witness(f.value, blocks);
    if (!w.empty()) throw CwlError("not componentwise linear", w);

    // symbol -> (block, index within block)
    std::map<std::uint32_t, std::pair<int, int>> where;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t k = 0; k < blocks[b].size(); ++k) where[blocks[b][k].id()] = {static_cast<int>(b), static_cast<int>(k)};

    MixedTensor t(f.bundle, L.p(), L.q());
    RatFn den_inv = RatFn(Poly(1L), f.value.den());
    for (const auto& [m, c] : f.value.num().terms()) {
        std::vector<int> idx(blocks.size(), -1);
        std::vector<Monomial::Factor> base;
        for (const auto& fe : m.factors()) {
            auto it = where.find(fe.first);
            if (it == where.end())
                base.push_back(fe);
            else
                idx[static_cast<std::size_t>(it->second.first)] = it->second.second;
        }
        bool increasing = true;
        IndexSet I = 0, J = 0;
        for (int s = 0; s < L.p(); ++s) {
            if (s > 0 && idx[static_cast<std::size_t>(s)] <= idx[static_cast<std::size_t>(s - 1)]) increasing = false;
            I |= IndexSet{1} << idx[static_cast<std::size_t>(s)];
        }
        for (int s = 0; s < L.q(); ++s) {
            std::size_t b = static_cast<std::size_t>(L.p() + s);
            if (s > 0 && idx[b] <= idx[b - 1]) increasing = false;
            J |= IndexSet{1} << idx[b];
        }
        if (!increasing) continue;
        t.add_term(I, J, RatFn(Poly::monomial(Monomial(std::move(base)), c)) * den_inv);
    }
    RatFn residual = f.value - to_cwl_value(t, L);
    if (!residual.is_zero()) throw CwlError("not skew-symmetric", residual.num().leading().first.to_string());
    return t;
}

CwlFunction skew_project(const CwlFunction& f) {
    const SlotLayout& L = f.layout;
    std::vector<int> tp(static_cast<std::size_t>(L.p())), dp(static_cast<std::size_t>(L.q()));
    std::iota(tp.begin(), tp.end(), 0);
    std::iota(dp.begin(), dp.end(), 0);
    RatFn acc;
    long count = 0;
    do {
        std::vector<int> dq = dp;
        do {
            std::map<Symbol, RatFn> ren;
            for (std::size_t s = 0; s < tp.size(); ++s)
                for (std::size_t k = 0; k < L.tangent[s].size(); ++k)
                    ren.emplace(L.tangent[s][k], RatFn::variable(L.tangent[static_cast<std::size_t>(tp[s])][k]));
            for (std::size_t s = 0; s < dq.size(); ++s)
                for (std::size_t k = 0; k < L.dual[s].size(); ++k)
                    ren.emplace(L.dual[s][k], RatFn::variable(L.dual[static_cast<std::size_t>(dq[s])][k]));
            RatFn term = f.value.substitute(ren);
            acc += permutation_sign(tp) * permutation_sign(dq) > 0 ? term : -term;
            ++count;
        } while (std::next_permutation(dq.begin(), dq.end()));
    } while (std::next_permutation(tp.begin(), tp.end()));
    return CwlFunction{f.bundle, L, acc * RatFn(Rational(1, count))};
}

std::map<Symbol, RatFn> block_values(const std::vector<Symbol>& block, const std::vector<RatFn>& values) {
    std::map<Symbol, RatFn> out;
    for (std::size_t k = 0; k < block.size(); ++k) out.emplace(block[k], values[k]);
    return out;
}

}  // namespace awb
