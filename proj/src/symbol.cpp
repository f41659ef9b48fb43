#include "spectra/symbol.hpp"

#include "spectra/errors.hpp"

#include <cmath>

namespace spectra {

Symbol Symbol::constant(int d, std::complex<double> c) {
    Symbol s(d, {});
    s.add(FrequencyVector::zero(d), expr::constant(c));
    return s;
}

Symbol Symbol::laplacian(int d) {
    Symbol s(d, {}, 2.0);
    s.add(FrequencyVector::zero(d), expr::norm_sq(Eigen::VectorXd::Zero(d)));
    return s;
}

Symbol Symbol::multiplication(const Potential& b) {
    Symbol s(b.dim(), b.basis());
    for (const auto& [th, c] : b.coefficients()) s.add(th, expr::constant(c.value()));
    return s;
}

void Symbol::add(const FrequencyVector& theta, const ExprPtr& coeff) {
    if (coeff->is_zero()) return;
    auto it = terms_.find(theta);
    if (it == terms_.end()) {
        terms_.emplace(theta, coeff);
        return;
    }
    it->second = expr::add(it->second, coeff);
    if (it->second->is_zero()) terms_.erase(it);
}

ExprPtr Symbol::coefficient(const FrequencyVector& theta) const {
    auto it = terms_.find(theta);
    return it == terms_.end() ? expr::constant(0.0) : it->second;
}

std::vector<FrequencyVector> Symbol::support() const {
    std::vector<FrequencyVector> out;
    for (const auto& [th, e] : terms_) out.push_back(th);
    return out;
}

bool Symbol::is_multiplication() const {
    for (const auto& [th, e] : terms_)
        if (!e->is_constant()) return false;
    return true;
}

std::complex<double> Symbol::coefficient_value(const FrequencyVector& theta, const Eigen::VectorXd& xi) const {
    auto it = terms_.find(theta);
    return it == terms_.end() ? 0.0 : expr::evaluate(it->second, xi);
}

std::complex<double> Symbol::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const {
    std::complex<double> acc = 0.0;
    for (const auto& [th, e] : terms_) {
        const double phase = th.real().dot(x);
        acc += expr::evaluate(e, xi) * std::polar(1.0, phase);
    }
    return acc;
}

Symbol Symbol::scaled(std::complex<double> c) const {
    return mapped([c](const FrequencyVector&, const ExprPtr& e) { return expr::scale(c, e); });
}

namespace {

GeneratorBasis joint_basis(const GeneratorBasis& a, const GeneratorBasis& b) {
    if (a.surd != 0 && b.surd != 0 && a.surd != b.surd)
        throw Error(ErrorCode::UnsupportedGenerators, "symbols over different generator bases");
    return a.surd != 0 ? a : b;
}

int joint_dim(const Symbol& a, const Symbol& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::InvalidArgument, "symbol dimensions differ");
    return a.dim();
}

}  // namespace

Symbol operator+(const Symbol& a, const Symbol& b) {
    Symbol r(joint_dim(a, b), joint_basis(a.basis(), b.basis()), std::max(a.order(), b.order()));
    for (const auto& [th, e] : a.terms()) r.add(th, e);
    for (const auto& [th, e] : b.terms()) r.add(th, e);
    return r;
}

Symbol operator-(const Symbol& a, const Symbol& b) { return a + b.scaled(-1.0); }

Symbol compose(const Symbol& b, const Symbol& g) {
    Symbol r(joint_dim(b, g), joint_basis(b.basis(), g.basis()), b.order() + g.order());
    for (const auto& [phi, gc] : g.terms()) {
        const Eigen::VectorXd shift = phi.real();
        for (const auto& [theta, bc] : b.terms()) r.add(theta + phi, expr::mul(expr::shifted(bc, shift), gc));
    }
    return r;
}

Symbol commutator(const Symbol& a, const Symbol& b) { return compose(a, b) - compose(b, a); }

namespace {

// All multi-indices of total degree exactly n in d variables.
void degree_indices(int d, int n, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur[static_cast<std::size_t>(pos)] = n;
        out.push_back(cur);
        return;
    }
    for (int k = n; k >= 0; --k) {
        cur[static_cast<std::size_t>(pos)] = k;
        degree_indices(d, n - k, cur, pos + 1, out);
    }
}

}  // namespace

double class_norm(const Symbol& sym, const NormSpec& spec) {
    const int d = sym.dim();
    if (sym.empty() || spec.grid.empty()) return 0.0;
    double best = 0.0;
    for (int deg = 0; deg <= spec.s; ++deg) {
        std::vector<MultiIndex> idx;
        MultiIndex cur(static_cast<std::size_t>(d), 0);
        degree_indices(d, deg, cur, 0, idx);
        for (const auto& s : idx) {
            double total = 0.0;
            for (const auto& [th, e] : sym.terms()) {
                const double weight = std::pow(1.0 + th.real().squaredNorm(), spec.l / 2.0);
                double sup = 0.0;
                for (const auto& xi : spec.grid) {
                    const double bracket = std::sqrt(1.0 + xi.squaredNorm());
                    const std::complex<double> v =
                        deg == 0 ? expr::evaluate(e, xi) : expr::evaluate_jet(e, xi, deg).derivative(s);
                    sup = std::max(sup, std::pow(bracket, (-spec.alpha + deg) * spec.beta) * std::abs(v));
                }
                total += weight * sup;
            }
            best = std::max(best, total);
        }
    }
    return best;
}

bool is_symmetric(const Symbol& sym, const std::vector<Eigen::VectorXd>& grid, double tol) {
    for (const auto& [th, e] : sym.terms()) {
        const ExprPtr mirror = sym.coefficient(-th);
        const Eigen::VectorXd t = th.real();
        for (const auto& xi : grid) {
            const std::complex<double> lhs = expr::evaluate(e, xi);
            const std::complex<double> rhs = std::conj(expr::evaluate(mirror, xi + t));
            if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) return false;
        }
    }
    return true;
}

Wave apply_to_wave(const Symbol& sym, const Wave& wave) {
    Wave out;
    for (const auto& [eta, c] : wave) {
        const Eigen::VectorXd x = eta.real();
        for (const auto& [th, e] : sym.terms()) out[eta + th] += c * expr::evaluate(e, x);
    }
    return out;
}

double wave_norm(const Wave& wave) {
    double s = 0.0;
    for (const auto& [eta, c] : wave) s += std::norm(c);
    return std::sqrt(s);
}

Eigen::MatrixXcd finite_section(const Symbol& sym, const std::vector<FrequencyVector>& etas,
                                const Eigen::VectorXd& xi0) {
    const auto n = static_cast<Eigen::Index>(etas.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::VectorXd xi = xi0 + etas[static_cast<std::size_t>(j)].real();
        for (Eigen::Index i = 0; i < n; ++i) {
            const FrequencyVector diff = etas[static_cast<std::size_t>(i)] - etas[static_cast<std::size_t>(j)];
            M(i, j) = sym.coefficient_value(diff, xi);
        }
    }
    return M;
}

nlohmann::json frequency_to_json(const FrequencyVector& v, const GeneratorBasis& basis) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < v.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        row.push_back(format_rational(v[i].rational_part()));
        if (basis.surd != 0) row.push_back(format_rational(v[i].surd_part()));
        rows.push_back(std::move(row));
    }
    return rows;
}

FrequencyVector frequency_from_json(const nlohmann::json& j, const GeneratorBasis& basis) {
    if (!j.is_array()) throw Error(ErrorCode::Malformed, "frequency must be a d x g matrix");
    std::vector<Surd> coords;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(basis.size()))
            throw Error(ErrorCode::Malformed, "frequency row must have one entry per generator");
        const Rational a = parse_rational(row[0].get<std::string>());
        if (basis.surd == 0) {
            coords.emplace_back(a);
        } else {
            coords.emplace_back(a, parse_rational(row[1].get<std::string>()), basis.surd);
        }
    }
    return FrequencyVector(std::move(coords));
}

nlohmann::json Symbol::to_json() const {
    nlohmann::json j;
    j["dim"] = d_;
    j["surd"] = basis_.surd;
    j["order"] = order_;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [th, e] : terms_) terms.push_back({{"theta", frequency_to_json(th, basis_)}, {"coeff", expr::to_json(e)}});
    j["terms"] = std::move(terms);
    return j;
}

Symbol Symbol::from_json(const nlohmann::json& j) {
    Symbol s(j.at("dim").get<int>(), GeneratorBasis{j.value("surd", std::int64_t{0})}, j.value("order", 0.0));
    for (const auto& t : j.at("terms")) s.add(frequency_from_json(t.at("theta"), s.basis_), expr::from_json(t.at("coeff")));
    return s;
}

}  // namespace spectra
