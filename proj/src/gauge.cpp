#include "spectra/gauge.hpp"

#include "spectra/errors.hpp"

#include <cmath>
#include <random>

namespace spectra {

namespace {

const std::complex<double> I(0.0, 1.0);

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Ordered compositions of n into exactly l positive parts.
void compositions(int n, int l, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (l == 0) {
        if (n == 0) out.push_back(cur);
        return;
    }
    for (int first = 1; first <= n - (l - 1); ++first) {
        cur.push_back(first);
        compositions(n - first, l - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> compositions(int n, int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions(n, l, cur, out);
    return out;
}

// ad_{iΨ_{seq.back()}} ∘ … ∘ ad_{iΨ_{seq.front()}} applied to x, with ad_P(X) = [X, P].
Symbol nested(Symbol x, const std::vector<int>& seq, std::size_t from, const std::vector<Symbol>& ipsi) {
    for (std::size_t k = from; k < seq.size(); ++k) x = commutator(x, ipsi[static_cast<std::size_t>(seq[k] - 1)]);
    return x;
}

}  // namespace

ExprPtr CutoffFamily::e(const FrequencyVector& theta) const { return expr::cutoff_e(theta.real(), params); }

ExprPtr CutoffFamily::phi(const FrequencyVector& theta) const { return expr::cutoff_phi(theta.real(), params); }

ExprPtr CutoffFamily::chi(const FrequencyVector& theta) const {
    if (theta.is_zero()) return expr::constant(0.0);
    return expr::chi(theta.real(), params);
}

double cutoff_eval(CutoffKind kind, const FrequencyVector& theta, const Eigen::VectorXd& xi, const CutoffFamily& cf) {
    const Eigen::VectorXd t = theta.real();
    switch (kind) {
        case CutoffKind::E:
            return cutoff_e_value(t, xi, cf.params);
        case CutoffKind::Phi:
            if (theta.is_zero()) throw Error(ErrorCode::ZeroFrequency, "phi_0 is undefined");
            return cutoff_phi_value(t, xi, cf.params);
        case CutoffKind::Chi:
            if (theta.is_zero()) throw Error(ErrorCode::ZeroFrequency, "chi requires a nonzero frequency");
            return chi_value(t, xi, cf.params);
    }
    return 0.0;
}

namespace {

// i ŷ(θ) χ̃_θ: solves [H₀, iΨ] = −ŷ e φ off the diagonal.
Symbol solve_homological(const Symbol& y, const CutoffFamily& cf) {
    Symbol psi = y.mapped([&](const FrequencyVector& th, const ExprPtr& c) {
        if (th.is_zero()) return expr::constant(0.0);
        return expr::scale(I, expr::mul(c, cf.chi(th)));
    });
    psi.set_order(y.order());
    return psi;
}

// ŷ(θ) e_θ φ_θ off the diagonal, zero on it.
Symbol solvable_part(const Symbol& y, const CutoffFamily& cf) {
    return y.mapped([&](const FrequencyVector& th, const ExprPtr& c) {
        if (th.is_zero()) return expr::constant(0.0);
        return expr::product({c, cf.e(th), cf.phi(th)});
    });
}

Symbol residual_part(const Symbol& y, const CutoffFamily& cf) {
    return y.mapped([&](const FrequencyVector& th, const ExprPtr& c) {
        if (th.is_zero()) return c;
        return expr::mul(c, expr::sub(expr::constant(1.0), expr::mul(cf.e(th), cf.phi(th))));
    });
}

}  // namespace

Symbol first_order_psi(const Symbol& b, const CutoffFamily& cf) {
    if (!b.is_multiplication()) throw Error(ErrorCode::NonMultiplicationInput, "first-order gauge needs a multiplication symbol");
    return solve_homological(b, cf);
}

std::vector<Eigen::VectorXd> gauge_grid(const FrequencySet& S, const CutoffParams& p, std::size_t n,
                                        std::uint64_t seed) {
    const int d = S.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.25 * p.rho_n, 5.75 * p.rho_n);
    std::vector<Eigen::VectorXd> grid;
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::VectorXd u(d);
        for (int i = 0; i < d; ++i) u[i] = gauss(rng);
        grid.push_back(unif(rng) * u.normalized());
    }
    if (d < 2) return grid;
    const double width = std::pow(p.rho_n, p.beta);
    for (const auto& th : S.nonzero()) {
        const Eigen::VectorXd t = th.real();
        const Eigen::VectorXd hat = t.normalized();
        Eigen::VectorXd perp = Eigen::VectorXd::Zero(d);
        perp[hat.cwiseAbs().minCoeff() == std::abs(hat[0]) ? 0 : 1] = 1.0;
        perp = (perp - perp.dot(hat) * hat).normalized();
        for (int k = 0; k <= 16; ++k) {
            const double z = (0.25 + 0.25 * k / 16.0) * width;
            grid.push_back(3.0 * p.rho_n * perp - 0.5 * t + z * hat);
            grid.push_back(3.0 * p.rho_n * perp - 0.5 * t - z * hat);
        }
    }
    return grid;
}

GaugeOutput run_gauge(const Symbol& b, int ktilde, const CutoffFamily& cf, const FrequencySet& S,
                      const GaugeOptions& opt) {
    if (ktilde < 1) throw Error(ErrorCode::InvalidArgument, "ktilde must be at least 1");
    if (!b.is_multiplication()) throw Error(ErrorCode::NonMultiplicationInput, "gauge input must be a multiplication symbol");
    if (opt.check_condition_a) {
        const auto ca = check_condition_A(S, ktilde);
        if (!ca.pass) {
            std::string w;
            for (const auto& v : ca.witness) w += v.to_string() + " ";
            throw Error(ErrorCode::ConditionAViolation, "Condition A fails on " + w);
        }
    }

    GaugeOutput out;
    out.ktilde = ktilde;
    out.cutoffs = cf;
    std::vector<Symbol> ipsi;
    std::vector<Symbol> ys;   // solvable parts Y^s_j

    for (int n = 1; n <= ktilde; ++n) {
        Symbol y(b.dim(), b.basis());
        if (n == 1) {
            y = b;
        } else {
            for (int l = 1; l <= n - 1; ++l)
                for (const auto& seq : compositions(n - 1, l))
                    y = y + nested(b, seq, 0, ipsi).scaled(1.0 / factorial(l));
            // The innermost [H₀, iΨ_{j₁}] equals −Y^s_{j₁}.
            for (int l = 2; l <= n; ++l)
                for (const auto& seq : compositions(n, l))
                    y = y + nested(ys[static_cast<std::size_t>(seq[0] - 1)], seq, 1, ipsi).scaled(-1.0 / factorial(l));
        }
        Symbol psi = solve_homological(y, cf);
        ys.push_back(solvable_part(y, cf));
        ipsi.push_back(psi.scaled(I));
        out.psi.push_back(psi);
        out.y.push_back(y);
    }

    Symbol w(b.dim(), b.basis());
    for (const auto& y : out.y) w = w + residual_part(y, cf);
    out.w = w;

    for (int m = 1; m <= ktilde; ++m) {
        Symbol acc(b.dim(), b.basis());
        for (int l = 1; l <= m; ++l) {
            for (const auto& seq : compositions(m, l)) {
                Symbol prod = out.psi[static_cast<std::size_t>(seq[0] - 1)];
                for (std::size_t k = 1; k < seq.size(); ++k) prod = compose(prod, out.psi[static_cast<std::size_t>(seq[k] - 1)]);
                acc = acc + prod.scaled(std::pow(I, l) / factorial(l));
            }
        }
        out.psi_prime.push_back(acc);
    }

    NormSpec spec;
    spec.beta = cf.params.beta;
    spec.grid = gauge_grid(S, cf.params, opt.norm_samples, opt.seed);
    const double bnorm = class_norm(b, spec);
    for (int j = 1; j <= ktilde; ++j) {
        NormRow row;
        row.j = j;
        row.measured = class_norm(out.psi[static_cast<std::size_t>(j - 1)], spec);
        row.bound = std::pow(cf.params.rho_n, cf.params.beta * (1 - 2 * j)) * std::pow(bnorm, j);
        out.norms.push_back(row);
    }
    return out;
}

nlohmann::json GaugeOutput::diagnostics() const {
    nlohmann::json j;
    j["convention"] = convention;
    j["ktilde"] = ktilde;
    j["rho_n"] = cutoffs.params.rho_n;
    j["beta"] = cutoffs.params.beta;
    j["truncation"] = "commutator terms of total order above ktilde are not formed";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : norms) rows.push_back({{"j", r.j}, {"measured", r.measured}, {"bound", r.bound}});
    j["norms"] = rows;
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& p : psi) sizes.push_back(p.terms().size());
    j["psi_support_sizes"] = sizes;
    return j;
}

bool in_A(const ResonanceGeometry& geo, const Eigen::VectorXd& xi) {
    const double lam = geo.params().rho_n * geo.params().rho_n;
    for (const auto& p : geo.congruence_class(xi).points) {
        const double r2 = p.squaredNorm();
        if (r2 >= 0.7 * lam && r2 <= 17.5 * lam) return true;
    }
    return false;
}

std::vector<Eigen::VectorXd> sample_A(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed) {
    const int d = geo.frequencies().dim();
    const double rho = geo.params().rho_n;
    const double L1 = geo.params().L(1);
    const auto dirs = geo.frequencies().nonzero();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double r2 = rho * rho * (0.7 + (17.5 - 0.7) * unit(rng));
        Eigen::VectorXd u(d);
        for (int i = 0; i < d; ++i) u[i] = gauss(rng);
        Eigen::VectorXd z = std::sqrt(r2) * u.normalized();
        if (d >= 2 && k % 2 == 1 && !dirs.empty()) {
            const Eigen::VectorXd hat = dirs[static_cast<std::size_t>(unit(rng) * dirs.size()) % dirs.size()].real().normalized();
            const double along = (2.0 * unit(rng) - 1.0) * 1.5 * L1;
            Eigen::VectorXd perp = z - z.dot(hat) * hat;
            perp *= std::sqrt(std::max(r2 - along * along, 0.0)) / perp.norm();
            z = perp + along * hat;
        }
        const auto cls = geo.congruence_class(z);
        out.push_back(cls.points[static_cast<std::size_t>(unit(rng) * cls.points.size()) % cls.points.size()]);
    }
    return out;
}

B3Report verify_b3(const GaugeOutput& out, const std::vector<Eigen::VectorXd>& samples, const FrequencySet& S,
                   const ResonanceGeometry& geo, double tol) {
    B3Report rep;
    rep.samples = samples.size();
    const FrequencySet allowed = algebraic_sum(S, out.ktilde);
    for (const auto& th : out.w.support()) {
        if (!allowed.contains(th)) {
            rep.support_ok = false;
            rep.support_outside.push_back(th);
        }
    }
    const ZoneParameters& zp = geo.params();
    for (const auto& xi : samples) {
        if (!in_A(geo, xi)) {
            ++rep.outside_A;
            continue;
        }
        for (const auto& [th, c] : out.w.terms()) {
            if (th.is_zero()) continue;
            const Eigen::VectorXd t = th.real();
            const bool off_xi = !in_lambda(th, xi, zp);
            const bool off_shift = !in_lambda(th, xi + t, zp);
            if (!off_xi && !off_shift) continue;
            ++rep.assertions;
            const double v = std::abs(expr::evaluate(c, xi));
            if (v > tol) rep.violations.push_back({th, xi, v, off_xi ? "xi outside Lambda(theta)" : "xi+theta outside Lambda(theta)"});
        }
    }
    return rep;
}

nlohmann::json B3Report::to_json(const GeneratorBasis& basis) const {
    nlohmann::json j;
    j["samples"] = samples;
    j["outside_A"] = outside_A;
    j["assertions"] = assertions;
    j["support_ok"] = support_ok;
    j["pass"] = pass();
    nlohmann::json sup = nlohmann::json::array();
    for (const auto& th : support_outside) sup.push_back(frequency_to_json(th, basis));
    j["support_outside"] = sup;
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : violations) {
        std::vector<double> xi(x.xi.data(), x.xi.data() + x.xi.size());
        v.push_back({{"theta", frequency_to_json(x.theta, basis)}, {"xi", xi}, {"value", x.value}, {"clause", x.clause}});
    }
    j["violations"] = v;
    return j;
}

}  // namespace spectra
