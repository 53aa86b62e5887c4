#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "awb/im_core.hpp"

namespace awb {

struct BigBase;
using BigBasePtr = std::shared_ptr<const BigBase>;

// p tangent slots X{i}_{k} and q dual slots ph{j}_{k} over the chart of A.
struct BigBase {
    AlgebroidPtr A;
    int p = 0, q = 0;
    SlotLayout L;

    static BigBasePtr make(AlgebroidPtr A, int p, int q);
    // Chart coordinates followed by the slot variables.
    std::vector<Symbol> coordinates() const;
};

enum class GenFamily { full, core_a, core_f };

// full: index = frame element i. core_a: Be_index in tangent slot `slot`.
// core_f: B dx_index in dual slot `slot`. All 0-based.
struct Generator {
    GenFamily family = GenFamily::full;
    int slot = 0;
    int index = 0;

    friend auto operator<=>(const Generator&, const Generator&) = default;
    std::string to_string() const;
};

class GenSection {
public:
    GenSection() = default;
    explicit GenSection(BigBasePtr B) : base_(std::move(B)) {}
    static GenSection single(const BigBasePtr& B, Generator g, const RatFn& c = RatFn(1L));
    static GenSection full(const BigBasePtr& B, int i) { return single(B, {GenFamily::full, 0, i}); }
    static GenSection core_a(const BigBasePtr& B, int slot, int k) { return single(B, {GenFamily::core_a, slot, k}); }
    static GenSection core_f(const BigBasePtr& B, int slot, int s) { return single(B, {GenFamily::core_f, slot, s}); }

    const BigBasePtr& base() const { return base_; }
    const std::map<Generator, RatFn>& coeffs() const { return c_; }
    RatFn coeff(const Generator& g) const;
    void add(const Generator& g, const RatFn& c);
    bool is_zero() const { return c_.empty(); }

    GenSection operator+(const GenSection& o) const;
    GenSection operator-(const GenSection& o) const;
    GenSection operator-() const { return scaled(RatFn(-1L)); }
    GenSection scaled(const RatFn& f) const;

    friend bool operator==(const GenSection& a, const GenSection& b);
    std::string to_string() const;

private:
    BigBasePtr base_;
    std::map<Generator, RatFn> c_;
};

// The full generator of a non-frame section a = sum f_k e_k, expanded with the
// rescaling rules: f_k full_k + sum_i df_k(X(i)) core_a(i,k) - sum_j ph(j)_k core_f(j, df_k).
GenSection full_of(const BigBasePtr& B, const MixedTensor& a);
GenSection core_a_of(const BigBasePtr& B, int slot, const MixedTensor& a);
GenSection core_f_of(const BigBasePtr& B, int slot, const MixedTensor& alpha);

Derivation gen_anchor(const GenSection& G);
GenSection gen_bracket(const GenSection& G, const GenSection& H);

// Pairing values of mu on the generators, built from an IM tensor.
class MuSection {
public:
    MuSection(const BigBasePtr& B, const IMTensor& T);
    const BigBasePtr& base() const { return base_; }
    RatFn on(const Generator& g) const;
    RatFn pair(const GenSection& G) const;

private:
    BigBasePtr base_;
    std::vector<RatFn> full_;                 // [i]
    std::vector<std::vector<RatFn>> core_a_;  // [slot][k]
    std::vector<std::vector<RatFn>> core_f_;  // [slot][s]
};

MuSection build_mu(const BigBasePtr& B, const IMTensor& T);

// <mu,[U,V]> - L_{rho U}<mu,V> + L_{rho V}<mu,U>
RatFn cocycle_residual(const MuSection& mu, const GenSection& U, const GenSection& V);

// IM equation encoded by the pair family (f, g), f <= g.
int family_equation(GenFamily f, GenFamily g);
// One check per generator-pair family, named like "full/core_a (IM2)".
Report cocycle_check(const IMTensor& T, bool scaled_probes = true);
std::string family_check_name(GenFamily f, GenFamily g);

// ------------------------------------------------------------ linear tensors on a vector bundle

// Coordinates of p copies of TE and q copies of T*E over E: base x, fiber t,
// tangent slots (xd{i}, ud{i}) and cotangent slots (px{j}, pu{j}).
struct LinearLayout {
    std::vector<Symbol> x, t;
    std::vector<std::vector<Symbol>> xd, ud, px, pu;

    static LinearLayout make(const Bundle& E, int p, int q);
    int p() const { return static_cast<int>(xd.size()); }
    int q() const { return static_cast<int>(px.size()); }
    // Slots read by c_D: tangent blocks xd, dual blocks pu.
    SlotLayout projected() const;
    // Joint blocks (xd{i}, ud{i}) and (px{j}, pu{j}).
    SlotLayout joint() const;
    // t, ud and px: the fiber coordinates over the projected base.
    std::vector<Symbol> linear_fiber() const;
};

struct LinearTensor {
    BundlePtr E;
    int p = 0, q = 0;
    LinearLayout layout;
    RatFn value;

    static LinearTensor make(BundlePtr E, int p, int q, const RatFn& value);
};

// Empty when the invariants hold, otherwise a description with a witness.
std::string linear_tensor_violation(const LinearTensor& tau);

// Leibniz triple on the bare bundle; only the Leibniz rule is used.
LinearTensor reconstruct_linear(const IMTensor& T);
// Same with the section through each point extended as f_k = t_k + sum_s w[k][s] (y_s - x_s)
// instead of the constant one; agrees with reconstruct_linear.
LinearTensor reconstruct_linear_extended(const IMTensor& T, const std::vector<std::vector<Rational>>& w);
// Inverse by pointwise evaluation; CwlError with a witness if the invariants fail.
IMTensor extract_components(const LinearTensor& tau);

// Substitutions for the evaluation tuples.
// (T^p u, R^q_u) at constant u = sum c_k e_k.
RatFn evaluate_prolonged_section(const LinearTensor& tau, const std::vector<RatFn>& u);
// Vertical tangent vector ubar in slot i, T0 in the other tangent slots, 0~ in the dual slots.
RatFn evaluate_bar_vector(const LinearTensor& tau, int slot, const std::vector<RatFn>& ubar);
// Vertical covector alpha-bar in dual slot j.
RatFn evaluate_bar_covector(const LinearTensor& tau, int slot, const std::vector<RatFn>& alpha);
// Two bar-type insertions: tangent slots in `vec_slots`, dual slots in `cov_slots`.
RatFn evaluate_bars(const LinearTensor& tau, const std::vector<int>& vec_slots, const std::vector<int>& cov_slots);

// F(lambda .) = lambda^(p+q) F and F vanishes when any slot is zero.
Report homogeneity_check(const LinearTensor& tau);

}  // namespace awb
