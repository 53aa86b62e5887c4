#pragma once

#include <memory>
#include <vector>

#include "awb/derivation.hpp"
#include "awb/geometry.hpp"
#include "awb/report.hpp"

namespace awb {

class Algebroid;
using AlgebroidPtr = std::shared_ptr<const Algebroid>;

// Anchor and bracket on a trivialized bundle over one chart.
// Sections are MixedTensors of degree (p=0, q=1) on bundle().
class Algebroid {
public:
    using Matrix = std::vector<std::vector<RatFn>>;
    using Table = std::vector<std::vector<std::vector<RatFn>>>;  // [i][j][k]: coefficient of e_k in [e_i,e_j]

    // `upper` holds [e_i,e_j] for i < j; the rest is filled in skew-symmetrically.
    static AlgebroidPtr make(std::string name, BundlePtr bundle, Matrix anchor, const Table& upper);
    // Takes the full table as given (used to exercise the skewness check).
    static AlgebroidPtr make_raw(std::string name, BundlePtr bundle, Matrix anchor, Table full);
    static AlgebroidPtr tangent(ChartPtr chart);
    // A bare vector bundle: zero anchor and zero bracket.
    static AlgebroidPtr vector_bundle(BundlePtr bundle);

    const std::string& name() const { return name_; }
    const BundlePtr& bundle() const { return bundle_; }
    const ChartPtr& chart() const { return bundle_->chart; }
    int n() const { return bundle_->rank(); }
    int m() const { return bundle_->chart->dim(); }
    const RatFn& anchor(int i, int j) const { return anchor_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const Matrix& anchor_matrix() const { return anchor_; }
    const RatFn& structure(int i, int j, int k) const {
        return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    const Table& table() const { return c_; }

    MixedTensor frame(int i) const { return MixedTensor::frame(bundle_, i); }
    MixedTensor section(const std::vector<RatFn>& comps) const { return MixedTensor::section(bundle_, comps); }
    MixedTensor dx(int j) const { return MixedTensor::dx(bundle_, j); }
    MixedTensor zero(int p, int q) const { return MixedTensor(bundle_, p, q); }

    VectorField anchor_of(const MixedTensor& a) const;
    VectorField anchor_of_frame(int i) const;
    MixedTensor bracket(const MixedTensor& a, const MixedTensor& b) const;
    // rho^* alpha in Gamma(A*): components alpha(rho(e_i)).
    std::vector<RatFn> rho_star(const MixedTensor& alpha) const;

private:
    Algebroid() = default;
    std::string name_;
    BundlePtr bundle_;
    Matrix anchor_;
    Table c_;
};

void require_section(const Algebroid& A, const MixedTensor& a);

// Skewness, anchor morphism and Jacobi on the frame.
Report check_algebroid(const Algebroid& A);

// Bracket on 1-forms induced by a bivector with sharp map given by `sharp`
// (row i = components of sharp(dx_i)): L_{#a} b - L_{#b} a - d(i_{#a} b).
MixedTensor koszul_bracket(const Algebroid::Matrix& sharp, const MixedTensor& alpha, const MixedTensor& beta);
// Pi^#(dx_i) = sum_j Pi(dx_i, dx_j) d/dx_j.
Algebroid::Matrix sharp_matrix(const MixedTensor& bivector);
// Cotangent algebroid of a bivector. Frame names default to d<var>.
AlgebroidPtr cotangent_algebroid(const MixedTensor& bivector, std::vector<std::string> frame_names = {});

// Schouten bracket of multisections (p = 0 tensors), degree q1 + q2 - 1.
MixedTensor schouten(const Algebroid& A, const MixedTensor& X, const MixedTensor& Y);
// a . Phi = L_{rho(a)} beta (x) X + beta (x) [a, X].
MixedTensor action(const Algebroid& A, const MixedTensor& a, const MixedTensor& phi);

// ------------------------------------------------------------ lifts
// Big bases carry the chart coordinates plus the slot variables of a SlotLayout.

// Y as a derivation in the base variables only.
Derivation base_part(const VectorField& Y);
// Fiber part of the p-fold tangent lift: sum_i sum_jk (dY_j/dx_k) X(i)_k d/dX(i)_j.
Derivation tangent_lift_fiber(const VectorField& Y, const SlotLayout& L);
// Full p-fold tangent lift Y^{T,p}.
Derivation tangent_lift(const VectorField& Y, const SlotLayout& L);
// Vertical lift of Y into tangent slot i (0-based).
Derivation vertical_lift_tangent(const VectorField& Y, const SlotLayout& L, int i);
// Fiber part of the q-fold Hamiltonian lift, fixed by L_H l_b = l_[a,b].
Derivation hamiltonian_lift_fiber(const Algebroid& A, const MixedTensor& a, const SlotLayout& L);
// Full q-fold Hamiltonian lift H_a^q = rho(a) + fiber part.
Derivation hamiltonian_lift(const Algebroid& A, const MixedTensor& a, const SlotLayout& L);
// Vertical lift of mu in Gamma(A*) into dual slot j (0-based).
Derivation vertical_lift_dual(const std::vector<RatFn>& mu, const SlotLayout& L, int j);
// Vertical lift of a section of E onto fiber coordinates t.
Derivation vertical_lift(const MixedTensor& u, const std::vector<Symbol>& fiber);
// (rho(a)^{T,p}, H_a^q) as one vector field on the big base.
Derivation prolonged_anchor(const Algebroid& A, const MixedTensor& a, const SlotLayout& L);

// Residuals of the three Lie derivative identities for c_tau on the big base.
RatFn lie_identity_full(const Algebroid& A, const MixedTensor& tau, const MixedTensor& a);
RatFn lie_identity_tangent(const Algebroid& A, const MixedTensor& tau, const VectorField& Y, int i);
RatFn lie_identity_dual(const Algebroid& A, const MixedTensor& tau, const std::vector<RatFn>& mu, int j);
// Runs all three on the given probes and collects the residuals.
Report cwl_lie_derivative_identities(const Algebroid& A, const MixedTensor& tau, const MixedTensor& a,
                                     const VectorField& Y, const std::vector<RatFn>& mu);

std::string section_to_string(const MixedTensor& a);

}  // namespace awb
