#pragma once

#include "spectra/geometry.hpp"
#include "spectra/symbol.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace spectra {

enum class CutoffKind { E, Phi, Chi };

// Factories for e_θ, φ_θ and χ̃_θ at fixed ρ_n, β.
struct CutoffFamily {
    CutoffParams params;

    ExprPtr e(const FrequencyVector& theta) const;
    ExprPtr phi(const FrequencyVector& theta) const;
    // χ̃_0 ≡ 0.
    ExprPtr chi(const FrequencyVector& theta) const;
};

// Throws ZeroFrequency for θ = 0 with Phi or Chi.
double cutoff_eval(CutoffKind kind, const FrequencyVector& theta, const Eigen::VectorXd& xi, const CutoffFamily& cf);

// ψ̂₁(θ, ξ) = i b̂(θ) χ̃_θ(ξ). Throws NonMultiplicationInput for ξ-dependent b.
Symbol first_order_psi(const Symbol& b, const CutoffFamily& cf);

struct NormRow {
    int j = 0;
    double measured = 0.0;   // sampled ⦀ψ_j⦀^{(0)}_{0,0}
    double bound = 0.0;      // ρ_n^{β(1−2j)} ⦀b⦀^j with unit constant
};

struct GaugeOutput {
    std::vector<Symbol> psi;        // ψ_1..ψ_k̃
    std::vector<Symbol> psi_prime;  // order-m parts of e^{iΨ}
    std::vector<Symbol> y;          // order-n parts ŷ of the conjugated off-diagonal symbol
    Symbol w;                       // symbol of W = H₂ + Δ
    std::vector<NormRow> norms;
    int ktilde = 1;
    CutoffFamily cutoffs;
    std::string convention = "H1 = exp(-i Psi) H exp(i Psi)";
    nlohmann::json diagnostics() const;
};

struct GaugeOptions {
    bool check_condition_a = true;
    std::size_t norm_samples = 256;
    std::uint64_t seed = 1;
};

// Order-by-order gauge construction for a real multiplication symbol on frequency set S.
GaugeOutput run_gauge(const Symbol& b, int ktilde, const CutoffFamily& cf, const FrequencySet& S,
                      const GaugeOptions& opt = {});

// Sample grid used for norm diagnostics and symmetry checks: random annulus points plus
// lines crossing every φ_θ transition layer.
std::vector<Eigen::VectorXd> gauge_grid(const FrequencySet& S, const CutoffParams& p, std::size_t n,
                                        std::uint64_t seed);

// ξ ∈ 𝒜 iff some point of Υ(ξ) has |·|² ∈ [0.7, 17.5] ρ_n².
bool in_A(const ResonanceGeometry& geo, const Eigen::VectorXd& xi);
// n points of 𝒜: half uniform over the annulus, half pushed into resonance slabs, then a
// random member of the congruence class is taken.
std::vector<Eigen::VectorXd> sample_A(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed);

struct B3Violation {
    FrequencyVector theta;
    Eigen::VectorXd xi;
    double value = 0.0;
    std::string clause;
};

struct B3Report {
    std::size_t samples = 0;
    std::size_t outside_A = 0;
    std::size_t assertions = 0;
    bool support_ok = true;
    std::vector<FrequencyVector> support_outside;
    std::vector<B3Violation> violations;
    bool pass() const { return support_ok && violations.empty(); }
    nlohmann::json to_json(const GeneratorBasis& basis) const;
};

B3Report verify_b3(const GaugeOutput& out, const std::vector<Eigen::VectorXd>& samples, const FrequencySet& S,
                   const ResonanceGeometry& geo, double tol = 1e-12);

}  // namespace spectra
