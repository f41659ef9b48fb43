#pragma once

#include "spectra/lattice.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace spectra {

struct ZoneParameters {
    double rho_n = 1.0;
    std::vector<double> alpha;  // α_1 < … < α_d
    int ktilde = 1;
    double beta = 0.0;          // 0 selects α_1/2
    std::size_t closure_cap = 1000000;

    static ZoneParameters defaults(int d, double rho_n, int ktilde);
    int dim() const { return static_cast<int>(alpha.size()); }
    // L_j for j = 1..d.
    double L(int j) const;
    double effective_beta() const { return beta > 0.0 ? beta : alpha.front() / 2.0; }
    // Throws InvalidArgument describing the first broken invariant.
    void validate() const;
};

bool in_lambda(const FrequencyVector& theta, const Eigen::VectorXd& xi, const ZoneParameters& zp);

struct ZoneLabel {
    QuasiLatticeSubspace subspace;
    std::size_t index = 0;    // position in ResonanceGeometry::subspaces()
    bool sum_closed = true;   // false when the Ξ₁-membership set was not closed under sums
};

struct CongruenceClass {
    Eigen::VectorXd seed;
    std::vector<Eigen::VectorXd> points;       // points[0] is the seed
    std::vector<FrequencyVector> offsets;      // exact point − seed
    QuasiLatticeSubspace subspace;
    double diameter() const;
};

struct CylindricalCoords {
    Eigen::VectorXd X;            // coordinates of ξ_V in the orthonormal basis of V
    double r = 0.0;
    Eigen::VectorXd sin_phi;      // sin Φ_q
    Eigen::VectorXd phi;          // Φ_q in [−π/2, π/2]
    std::vector<int> component;   // sign vector over the candidate directions μ_j
    Eigen::VectorXd apex;         // a(p) as an ambient vector in V^⊥
    Eigen::MatrixXd mu_tilde;     // ambient columns μ̃_q(p)
    Eigen::MatrixXd frame;        // ambient columns e_j; the last one passes through M_p
    Eigen::MatrixXd a_matrix;     // e_j = Σ_l a_{jl} μ̃_l
    double odin_residual = 0.0;   // |Σ_j (Σ_q a_{jq} sin Φ_q)² − 1|
    double surface_denominator = 1.0;  // (1 − Σ_{j≤K} η′_j²)^{1/2}
};

struct InnerProductProfile {
    double constant = 0.0;
    double linear = 0.0;
    Eigen::VectorXd b;           // θ_{V⊥} = Σ b_q μ̃_q
    bool sign_coherent = true;
    double min_abs_b = 0.0;      // over nonzero b_q
    double max_abs_b = 0.0;
};

// Resonance structure for a fixed Θ̃ and zone parameters. Builds every quasi-lattice
// subspace with its flag edges once; point queries are then cheap.
class ResonanceGeometry {
public:
    ResonanceGeometry(FrequencySet theta_tilde, ZoneParameters zp);

    const FrequencySet& frequencies() const { return S_; }
    const ZoneParameters& params() const { return zp_; }
    const std::vector<QuasiLatticeSubspace>& subspaces() const { return subs_; }
    std::size_t index_of(const QuasiLatticeSubspace& V) const;

    // membership[i] is true iff ξ ∈ Ξ₁(subspaces()[i]).
    std::vector<bool> xi1_membership(const Eigen::VectorXd& xi) const;
    ZoneLabel classify(const Eigen::VectorXd& xi) const;
    // Number of V with ξ ∈ Ξ₁(V) \ ∪_{U ⊄ V} Ξ₁(U); one on a genuine partition.
    int region_count(const Eigen::VectorXd& xi) const;
    // Whether ξ ∈ Ξ₁(U) ∧ ξ ∈ Ξ₁(V) ⇒ ξ ∈ Ξ₁(U+V) holds at ξ for all pairs.
    bool sum_closed(const Eigen::VectorXd& xi) const;

    CongruenceClass congruence_class(const Eigen::VectorXd& xi) const;
    CylindricalCoords component_coordinates(const Eigen::VectorXd& xi, const ZoneLabel& label) const;
    Eigen::VectorXd reconstruct(const CylindricalCoords& c, const ZoneLabel& label) const;
    InnerProductProfile inner_product_profile(const Eigen::VectorXd& xi, const FrequencyVector& theta,
                                              const ZoneLabel& label) const;

private:
    struct Edge {
        std::size_t child;
        Eigen::VectorXd nu;
    };
    struct Step {
        FrequencyVector theta;
        Eigen::VectorXd real;
        Eigen::VectorXd normal;
        double length;
    };

    FrequencySet S_;
    ZoneParameters zp_;
    std::vector<QuasiLatticeSubspace> subs_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::vector<bool>> contains_;   // contains_[v][u]: u ⊂ v
    std::vector<std::vector<std::size_t>> sum_index_;
    std::vector<Eigen::MatrixXd> ortho_;
    std::vector<Step> steps_;
};

ZoneLabel classify_point(const Eigen::VectorXd& xi, const FrequencySet& S, const ZoneParameters& zp);
CongruenceClass congruence_class(const Eigen::VectorXd& xi, const FrequencySet& S, const ZoneParameters& zp);

}  // namespace spectra
