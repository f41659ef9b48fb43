#pragma once

#include "spectra/jet.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace spectra {

struct CutoffParams {
    double rho_n = 1.0;
    double beta = 0.1;
    friend bool operator==(const CutoffParams&, const CutoffParams&) = default;
};

enum class NodeKind {
    Constant,     // c
    Coordinate,   // ξ_axis + shift_axis
    NormSq,       // |ξ + shift|²
    CutoffE,      // e_θ(ξ + shift)
    CutoffPhi,    // φ_θ(ξ + shift)
    Chi,          // χ̃_θ(ξ + shift) with 0/0 = 0
    AffineRecip,  // 1 / (2⟨θ, ξ + shift + θ/2⟩)
    Step,         // ι(child)
    Recip,        // 1 / child
    Sum,
    Product,
    Derivative,   // ∂^multi child
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    NodeKind kind = NodeKind::Constant;
    std::complex<double> value = 0.0;
    int axis = 0;
    Eigen::VectorXd shift;
    Eigen::VectorXd theta;
    CutoffParams cutoff;
    MultiIndex multi;
    std::vector<ExprPtr> children;

    bool is_constant() const { return kind == NodeKind::Constant; }
    bool is_zero() const { return kind == NodeKind::Constant && value == 0.0; }
};

namespace expr {

ExprPtr constant(std::complex<double> c);
ExprPtr coordinate(int d, int axis);
ExprPtr norm_sq(const Eigen::VectorXd& shift);
ExprPtr cutoff_e(const Eigen::VectorXd& theta, const CutoffParams& p);
ExprPtr cutoff_phi(const Eigen::VectorXd& theta, const CutoffParams& p);
ExprPtr chi(const Eigen::VectorXd& theta, const CutoffParams& p);
ExprPtr affine_recip(const Eigen::VectorXd& theta);
ExprPtr step(ExprPtr child);
ExprPtr recip(ExprPtr child);
ExprPtr sum(std::vector<ExprPtr> terms);
ExprPtr product(std::vector<ExprPtr> factors);
ExprPtr scale(std::complex<double> c, ExprPtr e);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
// e(ξ + eta) as a new tree.
ExprPtr shifted(const ExprPtr& e, const Eigen::VectorXd& eta);
ExprPtr derivative(ExprPtr e, const MultiIndex& s);
// Complex conjugate of the tree's value for real ξ.
ExprPtr conjugate(const ExprPtr& e);

std::complex<double> evaluate(const ExprPtr& e, const Eigen::VectorXd& xi);
Jet evaluate_jet(const ExprPtr& e, const Eigen::VectorXd& xi, int order);

std::size_t node_count(const ExprPtr& e);
nlohmann::json to_json(const ExprPtr& e);
ExprPtr from_json(const nlohmann::json& j);
// FNV-1a over the canonical JSON dump.
std::uint64_t digest(const ExprPtr& e);

}  // namespace expr

// Cut-off functions evaluated directly.
double cutoff_e_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p);
double cutoff_phi_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p);
double chi_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p);

}  // namespace spectra
