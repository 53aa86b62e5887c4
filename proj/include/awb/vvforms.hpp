#pragma once

#include <functional>
#include <string>
#include <vector>

#include "awb/im_core.hpp"

namespace awb {

// ------------------------------------------------------------ vector-valued forms on TM
// A vector-valued p-form is a MixedTensor of degree (p, 1) on tangent_bundle(chart).
// Plain forms are (j, 0) tensors on any bundle over the same chart.

using Endo = Algebroid::Matrix;  // [row][col]; column k is the image of basis element k

// Copies a tensor onto another bundle over the same chart (q = 0, or equal rank).
MixedTensor on_bundle(const MixedTensor& t, const BundlePtr& b);

// The p-form K^s = <dx_s, K>.
MixedTensor vv_component(const MixedTensor& K, int s);
// sum_s comps[s] (x) d/dx_s; comps are p-forms on any bundle over the chart.
MixedTensor vv_from_components(const ChartPtr& chart, int p, const std::vector<MixedTensor>& comps);
// (1,1) tensor from its matrix: K(d/dx_t) = sum_s M[s][t] d/dx_s.
MixedTensor vv_from_matrix(const ChartPtr& chart, const Endo& M);
Endo vv_matrix(const MixedTensor& K);  // p = 1

// K(X) for p = 1 and K(X, Y) for p = 2.
VectorField vv_apply(const MixedTensor& K, const VectorField& X);
VectorField vv_apply(const MixedTensor& K, const VectorField& X, const VectorField& Y);
// omega(X, Y) = i_Y i_X omega, and the same for three arguments.
RatFn form_eval(const MixedTensor& omega, const VectorField& X, const VectorField& Y);
RatFn form_eval(const MixedTensor& omega, const VectorField& X, const VectorField& Y, const VectorField& Z);

// i_K omega = sum_s K^s ^ i_{d/dx_s} omega, a derivation of degree p - 1.
MixedTensor i_K(const MixedTensor& K, const MixedTensor& omega);
// L_K = i_K d - (-1)^(p-1) d i_K, a derivation of degree p.
MixedTensor L_K(const MixedTensor& K, const MixedTensor& omega);

// Component s of [K1, K2] is [L_K1, L_K2] x_s.
MixedTensor fn_bracket(const MixedTensor& K1, const MixedTensor& K2);
// Explicit formula for two (1,1) tensors, evaluated on coordinate fields.
MixedTensor fn_bracket_11(const MixedTensor& K1, const MixedTensor& K2);
// [KX,KY] - K([KX,Y] + [X,KY]) + K^2[X,Y]
MixedTensor nijenhuis_torsion(const MixedTensor& K);

// ------------------------------------------------------------ IM vector-valued forms (q = 1)

// r of a q = 1 tensor as the vector-valued p-form sum_s r(dx_s) (x) d/dx_s.
MixedTensor r_as_vv(const IMTensor& T);

// Extensions to eta in Omega^j(M, A) (a (j,1) tensor on A).
MixedTensor imvv_extend_D(const IMTensor& T, const MixedTensor& eta);
MixedTensor imvv_extend_l(const IMTensor& T, const MixedTensor& eta);
// D(alpha (x) a) for an arbitrary section a; the frame expansion above must agree.
MixedTensor imvv_extend_D(const IMTensor& T, const MixedTensor& alpha, const MixedTensor& a);

IMTensor imvv_bracket(const IMTensor& T1, const IMTensor& T2);

// ------------------------------------------------------------ IM (1,1) tensors

// D_X(a) = i_X D(a).
MixedTensor D_along(const IMTensor& T, const VectorField& X, const MixedTensor& a);
Endo l_matrix(const IMTensor& T);
Endo r_matrix(const IMTensor& T);  // r dualized to TM -> TM
VectorField r_apply(const IMTensor& T, const VectorField& X);
MixedTensor section_of(const VectorField& X);  // as a (0,1) tensor on tangent_bundle
VectorField field_of(const MixedTensor& s);    // inverse, for sections of tangent bundles

// Residuals of the (1,1) IM equations.
MixedTensor im1s_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b, const VectorField& X);
MixedTensor im2s_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b);
MixedTensor im3s_residual(const IMTensor& T, const MixedTensor& a, const VectorField& X);
MixedTensor im6s_residual(const IMTensor& T, const MixedTensor& a);

// Checks IM1*, IM2*, IM3*, IM6*.
Report im11_check(const IMTensor& T, bool scaled_probes = true);

IMTensor im11_power(const IMTensor& T, int n);

enum class StructureKind { projection, product, complex };
// Checks "l^2", "r^2", "lD + Dr".
Report structure_conditions(const IMTensor& T, StructureKind kind);

// (D^2, [D,l], N_r) with D^2 composed from the extended operators.
IMTensor nijenhuis_components(const IMTensor& T);
// D^2_(X,Y) a through the first-order expansion in D_X, l, r.
MixedTensor d_squared_expansion(const IMTensor& T, const VectorField& X, const VectorField& Y, const MixedTensor& a);
// Compares the expansion with the composed D^2 on coordinate and scaled fields.
Report d_squared_cross_check(const IMTensor& T);

// Product structure Q -> projection (Q + id)/2 on the components: D/2, (l+id)/2, (r+id)/2.
IMTensor product_to_projection(const IMTensor& Q);

// ------------------------------------------------------------ Poisson quasi-Nijenhuis

struct PqnMode {
    enum Kind { compat, full, relative } kind = compat;
    MixedTensor phi;  // closed 3-form for `relative`
};

// pi is a bivector (0,2) on tangent_bundle, r a (1,1) vector-valued form.
// Throws std::invalid_argument when pi is not Poisson or phi is not closed.
Report pqn_check(const MixedTensor& pi, const MixedTensor& r, const PqnMode& mode = {});
// <r^* alpha, X> = <alpha, r X>
MixedTensor r_dual(const MixedTensor& r, const MixedTensor& alpha);
// N_r^*(alpha)(X, Y) = <alpha, N_r(X, Y)>
MixedTensor nijenhuis_dual(const MixedTensor& r, const MixedTensor& alpha);

// (D^r, r^*, r) on cotangent_algebroid(pi).
IMTensor dr_operator(const MixedTensor& pi, const MixedTensor& r);
// Same, on an already built cotangent algebroid.
IMTensor dr_operator(const AlgebroidPtr& cot, const MixedTensor& r);
// D^r(alpha) straight from the defining pairing, for any 1-form alpha.
MixedTensor dr_apply(const AlgebroidPtr& cot, const MixedTensor& r, const MixedTensor& alpha);
// [D^r, r^*] + N_r^* = 0 and the pairing formula for (D^r)^2.
Report dr_nijenhuis_identities(const MixedTensor& pi, const MixedTensor& r);

// ------------------------------------------------------------ bialgebroids

struct BialgebroidData {
    AlgebroidPtr A;
    QDifferential delta;  // q = 2

    // Throws std::invalid_argument unless delta^2 vanishes on coordinates and frame.
    static BialgebroidData make(QDifferential delta);
    // (T*M, TM) of a Poisson bivector: delta = d.
    static BialgebroidData cotangent(const MixedTensor& pi);
    // Same on an algebroid built by cotangent_algebroid.
    static BialgebroidData cotangent(const AlgebroidPtr& cot);

    // rho_*(mu) in TM: component s is <delta(x_s), mu>.
    VectorField rho_dual(const std::vector<RatFn>& mu) const;
};

// <Theta(mu1, mu2), e_k> as bisections theta[k].
std::vector<MixedTensor> theta_components(const BialgebroidData& B, const IMTensor& T);
// Skewness of delta_K, r rho_* = rho_* l^*, and [delta, i_Theta] on degrees 0 and 1.
Report deltaK_theta(const BialgebroidData& B, const IMTensor& T);

// ------------------------------------------------------------ complex structures

// -l(D_{d/dx_t} e_k) as table[t][k]; the connection along d/dx_t + i r(d/dx_t).
std::vector<std::vector<MixedTensor>> dolbeault_table(const IMTensor& T);
Report holomorphic_check(const IMTensor& T);

// ------------------------------------------------------------ projections and matched pairs

MixedTensor apply_endo(const Endo& M, const MixedTensor& a);
VectorField apply_endo(const Endo& M, const VectorField& X);
Endo complement(const Endo& P);  // id - P
Endo endo_identity(int n);
Endo endo_mul(const Endo& A, const Endo& B);

// Lambda^+(X, a) = D_{(1-r)X}((1-l)a), Lambda^-(Y, a) = D_{rY}(l a),
// nabla^+_X b = D_{(1-r)X}(l b), nabla^-_Y b = -D_{rY}((1-l)b).
MixedTensor lambda_plus(const IMTensor& T, const VectorField& X, const MixedTensor& a);
MixedTensor lambda_minus(const IMTensor& T, const VectorField& Y, const MixedTensor& a);
MixedTensor nabla_plus(const IMTensor& T, const VectorField& X, const MixedTensor& b);
MixedTensor nabla_minus(const IMTensor& T, const VectorField& Y, const MixedTensor& b);
// r[(1-r)X, (1-r)Y] and (1-r)[rX, rY] for a projection r.
VectorField curvature(const Endo& r, const VectorField& X, const VectorField& Y);
VectorField cocurvature(const Endo& r, const VectorField& X, const VectorField& Y);

Report projection_analysis(const IMTensor& T);

// One side of a matched pair: a subalgebroid of A or of TM, spanned by generators.
// Sections of TM are (0,1) tensors on tangent_bundle.
struct PairSide {
    std::string name;
    std::vector<MixedTensor> gens;
    std::function<MixedTensor(const MixedTensor&, const MixedTensor&)> bracket;
    std::function<VectorField(const MixedTensor&)> anchor;
};

struct MatchedPairData {
    PairSide first, second;
    std::function<MixedTensor(const MixedTensor& a, const MixedTensor& b)> first_on_second;  // nabla_a b
    std::function<MixedTensor(const MixedTensor& b, const MixedTensor& a)> second_on_first;  // nabla_b a
};

// Flatness of both representations and the three compatibility equations.
Report matched_pair_check(const MatchedPairData& M);

// The four pairs built from an IM (1,1) projection.
MatchedPairData pair_A0_A1(const IMTensor& T);
MatchedPairData pair_T0_T1(const IMTensor& T);
MatchedPairData pair_A0_T1(const IMTensor& T);
MatchedPairData pair_T0_A1(const IMTensor& T);

// Subalgebroid conditions, the two matched pairs and the four morphism squares.
Report splitting_check(const IMTensor& T);

}  // namespace awb
