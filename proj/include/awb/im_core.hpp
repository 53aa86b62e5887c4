#pragma once

#include <set>
#include <string>
#include <vector>

#include "awb/algebroid.hpp"

namespace awb {

// IM (q,p)-tensor (D, l, r) recorded on the frame e_i and on the coordinate
// differentials dx_j. l is absent when p = 0 and r is absent when q = 0.
class IMTensor {
public:
    // d_frame[i] = D(e_i) of degree (p,q); l_frame[i] = l(e_i) of degree (p-1,q);
    // r_frame[j] = r(dx_j) of degree (p,q-1).
    static IMTensor make(AlgebroidPtr A, int q, int p, std::vector<MixedTensor> d_frame,
                         std::vector<MixedTensor> l_frame, std::vector<MixedTensor> r_frame);
    static IMTensor zero(AlgebroidPtr A, int q, int p);

    const AlgebroidPtr& algebroid() const { return A_; }
    int q() const { return q_; }
    int p() const { return p_; }
    bool has_l() const { return p_ >= 1; }
    bool has_r() const { return q_ >= 1; }

    const std::vector<MixedTensor>& D_frame() const { return D_; }
    const std::vector<MixedTensor>& l_frame() const { return l_; }
    const std::vector<MixedTensor>& r_frame() const { return r_; }

    // Leibniz extension D(sum f_i e_i) = sum f_i D(e_i) + df_i ^ l(e_i) - e_i ^ r(df_i).
    MixedTensor D(const MixedTensor& a) const;
    // Bundle-map extensions; DegreeError if the slot is absent.
    MixedTensor l(const MixedTensor& a) const;
    MixedTensor r(const MixedTensor& alpha) const;

    IMTensor operator+(const IMTensor& o) const;
    IMTensor scaled(const RatFn& c) const;

    std::string to_string() const;

private:
    AlgebroidPtr A_;
    int q_ = 0, p_ = 0;
    std::vector<MixedTensor> D_, l_, r_;
};

// Residuals of the six IM equations for one probe.
MixedTensor im1_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b);
MixedTensor im2_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b);
MixedTensor im3_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& alpha);
MixedTensor im4_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& b);
MixedTensor im5_residual(const IMTensor& T, const MixedTensor& alpha, const MixedTensor& beta);
MixedTensor im6_residual(const IMTensor& T, const MixedTensor& a, const MixedTensor& alpha);

// Which IM equations carry content for the given degrees.
bool im_applicable(int equation, int q, int p);

struct ProbeSet {
    std::vector<MixedTensor> sections;
    std::vector<MixedTensor> forms;
};
// Frames and coordinate differentials, optionally followed by x_s e_i and x_s dx_j.
ProbeSet im_probes(const Algebroid& A, bool scaled);

// Checks are named IM1..IM6; inapplicable ones are declared n/a.
Report im_check(const IMTensor& T, bool scaled_probes = true);

// Instance check of the implications between IM equations. `assumed` holds
// equation numbers 1..6. An implication whose premises fail is reported vacuous.
Report im_redundancy(const IMTensor& T, const std::set<int>& assumed);

// D(a) = a.Phi, l(a) = i_{rho a} Phi, r(alpha) = i_{rho* alpha} Phi.
IMTensor coboundary(const AlgebroidPtr& A, const MixedTensor& phi);

// ------------------------------------------------------------ q-differentials

struct QDifferential {
    AlgebroidPtr A;
    int q = 0;
    std::vector<MixedTensor> on_coordinates;  // delta(x_j), degree q-1; empty when q = 0
    std::vector<MixedTensor> on_frame;        // delta(e_i), degree q

    // delta(f) = sum_j (df/dx_j) delta(x_j)
    MixedTensor on_function(const RatFn& f) const;
    // Extension to all multisections as a derivation of degree q-1.
    MixedTensor apply(const MixedTensor& X) const;
};

QDifferential qdiff_from_im(const IMTensor& T);
IMTensor im_from_qdiff(const QDifferential& delta);
// The derivation rule on probe pairs and the bracket rule on probes
// {x_s, e_i, x_s e_i}.
Report qdiff_check(const QDifferential& delta);
// delta(f a) against the source's D(f a): fixes the sign relating delta and r.
Report qdiff_leibniz_against(const QDifferential& delta, const IMTensor& source);

// ------------------------------------------------------------ IM forms

struct IMForm {
    AlgebroidPtr A;
    int p = 0;
    std::vector<MixedTensor> mu;  // mu(e_i), degree p-1; empty when p = 0
    std::vector<MixedTensor> nu;  // nu(e_i), degree p

    MixedTensor mu_of(const MixedTensor& a) const;
    MixedTensor nu_of(const MixedTensor& a) const;
};

IMForm imform_from_im(const IMTensor& T);
IMTensor im_from_imform(const IMForm& F);
Report imform_check(const IMForm& F, bool scaled_probes = true);
// (mu, nu) -> (nu, 0)
IMForm imform_differential(const IMForm& F);

// ------------------------------------------------------------ (2,0) tensors

// Anchor dual to r and the Koszul bracket on the dual frame. Jacobi is not
// guaranteed; run check_algebroid on the result.
AlgebroidPtr prelie_from_im20(const IMTensor& T, std::vector<std::string> dual_names = {});
// X(mu1, mu2) for a bisection X.
RatFn evaluate_bisection(const MixedTensor& X, const std::vector<RatFn>& mu1, const std::vector<RatFn>& mu2);

}  // namespace awb
