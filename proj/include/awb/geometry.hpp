#pragma once

#include <bit>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "awb/ratfn.hpp"

namespace awb {

class DegreeError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
class BundleMismatch : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Chart {
    std::string name;
    std::vector<Symbol> vars;
    int dim() const { return static_cast<int>(vars.size()); }
};
using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(const std::string& name, const std::vector<std::string>& var_names);

// Trivialized vector bundle over a chart.
struct Bundle {
    ChartPtr chart;
    std::vector<std::string> frame;
    int rank() const { return static_cast<int>(frame.size()); }
};
using BundlePtr = std::shared_ptr<const Bundle>;

BundlePtr make_bundle(ChartPtr chart, const std::vector<std::string>& frame_names);
// Frame D<var> (coordinate vector fields).
BundlePtr tangent_bundle(ChartPtr chart);

// Subsets of {0..31} as bit masks; index sets are always increasing.
using IndexSet = std::uint32_t;
inline int set_size(IndexSet s) { return std::popcount(s); }
std::vector<int> set_indices(IndexSet s);
inline IndexSet set_of(std::initializer_list<int> idx) {
    IndexSet s = 0;
    for (int i : idx) s |= IndexSet{1} << i;
    return s;
}
// Sign of the permutation that sorts the concatenation (I, J); 0 if they meet.
int shuffle_sign(IndexSet I, IndexSet J);
// All subsets of {0..n-1} of size k, increasing in the colex sense.
std::vector<IndexSet> subsets(int n, int k);

// Element of Gamma(wedge^p T*M (x) wedge^q A): sum of coeff(I,J) dx^I (x) e_J.
class MixedTensor {
public:
    using Key = std::pair<IndexSet, IndexSet>;

    MixedTensor() = default;
    MixedTensor(BundlePtr bundle, int p, int q);
    static MixedTensor scalar(BundlePtr bundle, const RatFn& f);
    static MixedTensor basis(BundlePtr bundle, IndexSet I, IndexSet J, const RatFn& c = RatFn(1L));
    static MixedTensor dx(BundlePtr bundle, int i) { return basis(bundle, IndexSet{1} << i, 0); }
    static MixedTensor frame(BundlePtr bundle, int k) { return basis(bundle, 0, IndexSet{1} << k); }
    // Sections and 1-forms from component lists.
    static MixedTensor section(BundlePtr bundle, const std::vector<RatFn>& comps);
    static MixedTensor one_form(BundlePtr bundle, const std::vector<RatFn>& comps);

    const BundlePtr& bundle() const { return bundle_; }
    const ChartPtr& chart() const { return bundle_->chart; }
    int m() const { return bundle_->chart->dim(); }
    int n() const { return bundle_->rank(); }
    int p() const { return p_; }
    int q() const { return q_; }
    // True when the degree exceeds the available dimension, so the space is {0}.
    bool degenerate() const { return p_ > m() || q_ > n(); }

    const std::map<Key, RatFn>& coeffs() const { return c_; }
    RatFn coeff(IndexSet I, IndexSet J) const;
    void add_term(IndexSet I, IndexSet J, const RatFn& c);
    bool is_zero() const { return c_.empty(); }

    // Components of a section (p=0, q=1) or 1-form (p=1, q=0).
    std::vector<RatFn> section_components() const;
    std::vector<RatFn> form_components() const;
    RatFn scalar_value() const;  // p = q = 0

    MixedTensor operator-() const;
    MixedTensor operator+(const MixedTensor& o) const;
    MixedTensor operator-(const MixedTensor& o) const;
    MixedTensor& operator+=(const MixedTensor& o) { return *this = *this + o; }
    MixedTensor& operator-=(const MixedTensor& o) { return *this = *this - o; }
    MixedTensor scaled(const RatFn& f) const;
    MixedTensor scaled(long c) const { return scaled(RatFn(c)); }

    template <class F>
    MixedTensor map_coeffs(F f) const {
        MixedTensor r(bundle_, p_, q_);
        for (const auto& [k, c] : c_) r.add_term(k.first, k.second, f(c));
        return r;
    }

    friend bool operator==(const MixedTensor& a, const MixedTensor& b);
    friend bool operator!=(const MixedTensor& a, const MixedTensor& b) { return !(a == b); }

    // Same notation as the problem-file language: coefficient * dx.. * frame...
    std::string to_string() const;

private:
    BundlePtr bundle_;
    int p_ = 0, q_ = 0;
    std::map<Key, RatFn> c_;
};

void require_same_bundle(const MixedTensor& a, const MixedTensor& b, const char* op);

// Vector field on a chart: components along the coordinate fields.
class VectorField {
public:
    VectorField() = default;
    VectorField(ChartPtr chart, std::vector<RatFn> comps);
    static VectorField zero(ChartPtr chart);
    static VectorField coordinate(ChartPtr chart, int i);

    const ChartPtr& chart() const { return chart_; }
    const std::vector<RatFn>& comps() const { return c_; }
    const RatFn& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    RatFn apply(const RatFn& f) const;
    bool is_zero() const;
    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField scaled(const RatFn& f) const;
    friend bool operator==(const VectorField& a, const VectorField& b) { return a.c_ == b.c_; }
    std::string to_string() const;
    MixedTensor as_tensor() const;  // (p=0, q=1) on the tangent bundle

private:
    ChartPtr chart_;
    std::vector<RatFn> c_;
};

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// Module structures: forms act on the form side, multisections on the
// multivector side; in general (a (x) X) ^ (b (x) Y) = (a ^ b) (x) (X ^ Y).
MixedTensor wedge(const MixedTensor& a, const MixedTensor& b);

// i_U on the form side; DegreeError when p = 0.
MixedTensor contract_form(const VectorField& U, const MixedTensor& t);
// i_xi on the multivector side for xi in Gamma(A*); DegreeError when q = 0.
MixedTensor contract_dual(const std::vector<RatFn>& xi, const MixedTensor& t);
// Same, but return the zero tensor of degree -1 as an empty tensor with p (or q) = 0
// instead of raising; used where a term is vacuous.
MixedTensor contract_form_or_zero(const VectorField& U, const MixedTensor& t);
MixedTensor contract_dual_or_zero(const std::vector<RatFn>& xi, const MixedTensor& t);

// Exterior derivative of a form (q = 0).
MixedTensor d(const MixedTensor& form);
// Exterior derivative of the coefficients with the frame held constant; equals d when q = 0.
MixedTensor frame_d(const MixedTensor& t);
RatFn partial(const ChartPtr& chart, const RatFn& f, int i);
MixedTensor df(BundlePtr bundle, const RatFn& f);

// Lie derivative of a form (q = 0) by the direct coordinate formula.
MixedTensor lie_derivative(const VectorField& X, const MixedTensor& form);
// The same through i_X d + d i_X.
MixedTensor lie_derivative_cartan(const VectorField& X, const MixedTensor& form);
// Coefficient-wise version for q > 0 with the frame held constant.
MixedTensor frame_lie_derivative(const VectorField& X, const MixedTensor& t);

// ------------------------------------------------------------ cwl functions

// Variables carrying the slot arguments of a componentwise linear function.
struct SlotLayout {
    std::vector<std::vector<Symbol>> tangent;  // p blocks of m symbols
    std::vector<std::vector<Symbol>> dual;     // q blocks of n symbols
    int p() const { return static_cast<int>(tangent.size()); }
    int q() const { return static_cast<int>(dual.size()); }

    // X{i}_{k} and ph{j}_{k}, 1-based.
    static SlotLayout standard(int m, int n, int p, int q);
    static SlotLayout named(const std::string& tangent_prefix, const std::string& dual_prefix, int m, int n, int p,
                            int q);
    SlotLayout drop_tangent(int i) const;  // 0-based slot
    SlotLayout drop_dual(int j) const;
    std::vector<Symbol> all_symbols() const;
};

struct CwlFunction {
    BundlePtr bundle;
    SlotLayout layout;
    RatFn value;
};

class CwlError : public std::invalid_argument {
public:
    CwlError(const std::string& what, std::string witness)
        : std::invalid_argument(what + ": " + witness), witness_(std::move(witness)) {}
    const std::string& witness() const { return witness_; }

private:
    std::string witness_;
};

// Signed product expansion: dx^I contributes det[X^(s)_{i_t}], e_J det[ph^(s)_{j_t}].
RatFn to_cwl_value(const MixedTensor& t, const SlotLayout& layout);
CwlFunction to_cwl(const MixedTensor& t);
// Inverse; CwlError with a witness monomial if F is not linear in each slot or not skew.
MixedTensor from_cwl(const CwlFunction& f);
// (1/p!)(1/q!) sum of sgn * F over slot permutations in both families.
CwlFunction skew_project(const CwlFunction& f);
// Witness monomial of a block with degree != 1, or empty if componentwise linear.
std::string linearity_witness(const RatFn& f, const std::vector<std::vector<Symbol>>& blocks);

// Determinant det[blocks[s][idx[t]]] for the given column indices.
Poly slot_determinant(const std::vector<std::vector<Symbol>>& blocks, const std::vector<int>& idx);

// Substitutes the variables of one slot block by given values.
std::map<Symbol, RatFn> block_values(const std::vector<Symbol>& block, const std::vector<RatFn>& values);

}  // namespace awb
