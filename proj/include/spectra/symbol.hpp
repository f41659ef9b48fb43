#pragma once

#include "spectra/expr.hpp"
#include "spectra/potential.hpp"

#include <json.hpp>

#include <complex>
#include <map>
#include <vector>

namespace spectra {

// Quasi-periodic symbol b(x, ξ) = Σ_θ b̂(θ, ξ) e^{i⟨θ,x⟩} with tree-valued coefficients.
class Symbol {
public:
    Symbol() = default;
    Symbol(int d, GeneratorBasis basis, double order = 0.0) : d_(d), basis_(basis), order_(order) {}

    static Symbol constant(int d, std::complex<double> c);
    static Symbol identity(int d) { return constant(d, 1.0); }
    // |ξ|², the symbol of −Δ.
    static Symbol laplacian(int d);
    static Symbol multiplication(const Potential& b);

    int dim() const { return d_; }
    const GeneratorBasis& basis() const { return basis_; }
    double order() const { return order_; }
    void set_order(double a) { order_ = a; }
    const std::map<FrequencyVector, ExprPtr>& terms() const { return terms_; }
    // Adds to the coefficient at θ; zero trees are dropped.
    void add(const FrequencyVector& theta, const ExprPtr& coeff);
    ExprPtr coefficient(const FrequencyVector& theta) const;
    std::vector<FrequencyVector> support() const;
    bool empty() const { return terms_.empty(); }
    // Whether every coefficient is a constant tree.
    bool is_multiplication() const;

    std::complex<double> coefficient_value(const FrequencyVector& theta, const Eigen::VectorXd& xi) const;
    std::complex<double> evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const;

    Symbol scaled(std::complex<double> c) const;
    // Coefficient-wise map.
    template <class F>
    Symbol mapped(F&& f) const {
        Symbol r(d_, basis_, order_);
        for (const auto& [th, e] : terms_) r.add(th, f(th, e));
        return r;
    }

    friend Symbol operator+(const Symbol& a, const Symbol& b);
    friend Symbol operator-(const Symbol& a, const Symbol& b);

    nlohmann::json to_json() const;
    static Symbol from_json(const nlohmann::json& j);

private:
    int d_ = 0;
    GeneratorBasis basis_;
    double order_ = 0.0;
    std::map<FrequencyVector, ExprPtr> terms_;
};

// (b∘g)^(χ, ξ) = Σ_{θ+φ=χ} b̂(θ, ξ+φ) ĝ(φ, ξ).
Symbol compose(const Symbol& b, const Symbol& g);
Symbol commutator(const Symbol& a, const Symbol& b);

struct NormSpec {
    double alpha = 0.0;
    double l = 0.0;
    int s = 0;
    double beta = 1.0;
    std::vector<Eigen::VectorXd> grid;
};

// max_{|s|≤s} Σ_θ ⟨θ⟩^l sup_{ξ∈grid} ⟨ξ⟩^{(−α+|s|)β} |∂^s b̂(θ, ξ)|; a lower bound of the true norm.
double class_norm(const Symbol& sym, const NormSpec& spec);

// b̂(θ, ξ) = conj(b̂(−θ, ξ+θ)) on every grid point.
bool is_symmetric(const Symbol& sym, const std::vector<Eigen::VectorXd>& grid, double tol = 1e-12);

using Wave = std::map<FrequencyVector, std::complex<double>>;

// Op(b) Σ c_η e_η = Σ_η Σ_θ c_η b̂(θ, η) e_{η+θ}.
Wave apply_to_wave(const Symbol& sym, const Wave& wave);
double wave_norm(const Wave& wave);

// M[i][j] = b̂(η_i − η_j, ξ₀ + η_j): Op(b) on span{e_{ξ₀+η}} with η from the list.
Eigen::MatrixXcd finite_section(const Symbol& sym, const std::vector<FrequencyVector>& etas,
                                const Eigen::VectorXd& xi0);

nlohmann::json frequency_to_json(const FrequencyVector& v, const GeneratorBasis& basis);
FrequencyVector frequency_from_json(const nlohmann::json& j, const GeneratorBasis& basis);

}  // namespace spectra
