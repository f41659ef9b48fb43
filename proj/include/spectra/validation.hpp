#pragma once

#include "spectra/bloch.hpp"
#include "spectra/geometry.hpp"
#include "spectra/heat.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <vector>

namespace spectra {

// λ^{d/2} (C_d + Σ_{j≤L} a_j(x) λ^{−j}); a[j−1] holds a_j.
double expansion_eval(const std::vector<HeatCoefficient>& a, int d, double lambda, const Eigen::VectorXd& x, int L);

// Leading free off-diagonal term; throws CoincidingPoints for x = y.
double free_offdiagonal(double lambda, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int d);

std::vector<double> geometric_ladder(double lo, double hi, int n);

struct LadderBin {
    double lambda = 0.0;      // geometric centre of the members
    double level = 0.0;       // median (or max) |R| in the bin
    std::size_t members = 0;
    bool sign_change = false;
};

struct LadderFit {
    int L = 0;
    double slope = 0.0;
    double coefficient = 0.0;   // fitted λ^{d/2−L−1} coefficient of R_L
    std::size_t used_bins = 0;
    bool noise_floor = false;
    std::vector<LadderBin> bins;
    nlohmann::json to_json() const;
};

// Geometric bins of the given ratio; each bin reports the median |R| (or the max when
// `envelope`); bins whose residual changes sign are skipped unless `envelope`.
LadderFit fit_log_slope(const std::vector<double>& lambdas, const std::vector<double>& residual, double ratio = 1.3,
                        bool envelope = false);

struct ResidualLadder {
    std::vector<double> lambdas;
    Eigen::VectorXd x;
    std::vector<double> oracle;
    std::vector<std::vector<double>> expansion;   // [L][i]
    std::vector<std::vector<double>> residual;    // [L][i]
    std::vector<LadderFit> fits;                  // one per L
    nlohmann::json to_json() const;
};

// Ladders for several points sharing one oracle batch; residuals for every L' ≤ L.
std::vector<ResidualLadder> residual_ladders(const Potential& b, const std::vector<Eigen::VectorXd>& xs, int L,
                                             const std::vector<double>& ladder, const OracleConfig& cfg,
                                             const std::vector<HeatCoefficient>& coeffs);
ResidualLadder residual_ladder(const Potential& b, const Eigen::VectorXd& x, int L, const std::vector<double>& ladder,
                               const OracleConfig& cfg, const std::vector<HeatCoefficient>& coeffs);

struct OffDiagonalLadder {
    std::vector<double> lambdas;
    std::vector<double> oracle, free_term, error;
    double leading_exponent = 0.0;   // (d−1)/4
    LadderFit envelope;              // slope of max |error| / λ^{(d−1)/4}
    nlohmann::json to_json() const;
};

// One oracle batch for all pairs.
std::vector<OffDiagonalLadder> offdiagonal_ladders(const Potential& b, const std::vector<PointPair>& pairs,
                                                   const std::vector<double>& ladder, const OracleConfig& cfg);
OffDiagonalLadder offdiagonal_ladder(const Potential& b, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const std::vector<double>& ladder, const OracleConfig& cfg);

struct PerturbationReport {
    int n = 0;
    int s = 0;
    double eps = 0.0;
    double delta = 0.0;
    int trials = 0;
    int failures_first = 0;    // projection-product bound
    int failures_second = 0;   // three-term bound on E_λ(H₂)f − E_λ(H₁)f
    double max_ratio_first = 0.0;
    double max_ratio_second = 0.0;
    bool pass() const { return failures_first == 0 && failures_second == 0; }
    nlohmann::json to_json() const;
};

// Random GUE-like H₂ with spectrum in [a+1, a+10] and Hermitian E with ‖E(H₂−a+1)^s‖ < ε.
// delta ≤ 0 selects √ε; ε = 0 needs an explicit delta.
PerturbationReport check_projection_perturbation(int n, int s, double eps, int trials, std::uint64_t seed,
                                                 double delta = -1.0, double a = 0.0);

// S(r) = Σ_k coeffs[k] (r − center)^k with Hermitian coefficients; H₂(r) = r² I + S(r).
struct MatrixFamily {
    std::vector<Eigen::MatrixXcd> coeffs;
    double center = 0.0;

    int dim() const { return static_cast<int>(coeffs.front().rows()); }
    Eigen::MatrixXcd S(std::complex<double> z) const;
    Eigen::MatrixXcd dS(double r) const;
    Eigen::MatrixXcd H(std::complex<double> z) const;
    static MatrixFamily scalar_zero();
    // Coefficient k has operator norm norms[k].
    static MatrixFamily random(int n, const std::vector<double>& norms, double center, std::uint64_t seed);
};

struct VectorPoly {
    std::vector<Eigen::VectorXcd> coeffs;
    double center = 0.0;

    Eigen::VectorXcd at(std::complex<double> z) const;
    // Coefficients conjugated: conj(p(z̄)).
    VectorPoly conj_coeffs() const;
    static VectorPoly constant(const Eigen::VectorXcd& v);
    static VectorPoly random(int n, int degree, double center, std::uint64_t seed);
};

struct ContourConfig {
    double a = 0.0, b = 0.0;              // r-interval; the circle has diameter [a, b]
    double lambda1 = 0.0, lambda2 = 0.0;  // [λ′, λ″]
    int mu_panels = 2;
    int z_nodes = 64;
    int max_refine = 6;
    double tol = 1e-12;
    double margin = 1e-6;                 // smallest admissible σ_min(H₂(z) − μ) on the contour
};

struct ContourReport {
    std::complex<double> lhs, rhs;
    double difference = 0.0;
    double lhs_refinement = 0.0;          // change under doubling of the r-panels
    int z_nodes = 0;
    int mu_panels = 0;
    double min_sigma = 0.0;
    std::vector<double> history;          // |RHS_k − RHS_{k−1}| per refinement
    std::vector<double> breakpoints;
    nlohmann::json to_json() const;
};

// Throws ContourTooClose when the contour comes within `margin` of the eigenvalue loci and
// InvalidArgument when ‖S′(r)‖ ≥ 2a on [a, b].
ContourReport check_contour_identity(const MatrixFamily& family, const VectorPoly& f, const VectorPoly& g,
                                     const ContourConfig& cfg);

struct ResolventReport {
    double ratio = 0.0;                   // ‖S(z)‖ / |z² − μ|
    std::vector<double> errors;           // ‖R − P_L‖ for L = 0..terms−1
    double rate = 0.0;                    // geometric mean of successive error ratios
    nlohmann::json to_json() const;
};

// Throws DivergentSeries when ‖S(z)‖ ≥ |z² − μ|.
ResolventReport resolvent_series_check(const MatrixFamily& family, std::complex<double> z, double mu, int terms);

struct GeometrySuiteReport {
    std::size_t samples = 0;
    std::size_t partition_violations = 0;     // region_count ≠ 1
    std::size_t label_mismatches = 0;         // Ξ₁-membership not closed under sums, so classify fell back
    std::size_t nonresonant = 0;
    std::size_t singleton_violations = 0;     // non-resonant ξ with Υ(ξ) ≠ {ξ}
    std::size_t classes = 0;                  // resonant classes measured
    std::size_t class_label_splits = 0;       // members of Υ(ξ) labelled by another subspace
    std::size_t diameter_over_mL = 0;         // diam Υ > m·L_m
    std::size_t diameter_over_2mL = 0;        // diam Υ > 2m·L_m
    double max_diameter_ratio = 0.0;          // max diam Υ / (m·L_m)
    std::size_t annulus_resonant = 0;         // d = 1 only
    // All clauses including diam ≤ m·L_m.
    bool pass() const {
        return partition_violations == 0 && label_mismatches == 0 && singleton_violations == 0 &&
               diameter_over_mL == 0 && annulus_resonant == 0;
    }
    // Same with the diameter clause relaxed to 2m·L_m.
    bool pass_relaxed() const {
        return partition_violations == 0 && label_mismatches == 0 && singleton_violations == 0 &&
               diameter_over_2mL == 0 && annulus_resonant == 0;
    }
    nlohmann::json to_json() const;
};

// n points with |ξ|² uniform in [0.7, 17.5]ρ²; for d ≥ 2 every other point is pushed into a
// resonance slab.
std::vector<Eigen::VectorXd> annulus_samples(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed);

// Partition, singleton, diameter and d = 1 checks on annulus_samples(geo, n, seed).
GeometrySuiteReport geometry_suite(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed);

}  // namespace spectra
