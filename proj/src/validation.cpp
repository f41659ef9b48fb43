#include "spectra/validation.hpp"

#include "spectra/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace spectra {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double smallest_singular(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Eigen::MatrixXcd gaussian_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = cd(nd(rng), nd(rng));
    return x;
}

Eigen::MatrixXcd gue(int n, std::mt19937_64& rng) {
    Eigen::MatrixXcd x = gaussian_matrix(n, rng);
    return (x + x.adjoint()) * 0.5;
}

Eigen::VectorXcd gaussian_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(nd(rng), nd(rng));
    return v;
}

// Spectral projector of a Hermitian matrix onto eigenvalues selected by `keep`.
template <class Pred>
Eigen::MatrixXcd projector(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, Pred keep) {
    const auto& v = es.eigenvectors();
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
    for (int i = 0; i < v.cols(); ++i)
        if (keep(es.eigenvalues()(i))) p += v.col(i) * v.col(i).adjoint();
    return p;
}

Eigen::MatrixXcd spectral_power(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es, double shift,
                                double power) {
    Eigen::VectorXd w = (es.eigenvalues().array() + shift).pow(power);
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares fit y = c0 + c1 t.
std::pair<double, double> line_fit(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double den = n * stt - st * st;
    if (t.size() < 2 || den == 0.0) return {t.empty() ? 0.0 : sy / n, 0.0};
    const double c1 = (n * sty - st * sy) / den;
    return {(sy - c1 * st) / n, c1};
}

}  // namespace

double expansion_eval(const std::vector<HeatCoefficient>& a, int d, double lambda, const Eigen::VectorXd& x, int L) {
    if (L < 0 || static_cast<std::size_t>(L) > a.size())
        throw Error(ErrorCode::InvalidArgument, "expansion order exceeds the available coefficients");
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "λ must be positive");
    double s = weyl_constant(d).value();
    double lp = 1.0;
    for (int j = 1; j <= L; ++j) {
        lp /= lambda;
        s += a[static_cast<std::size_t>(j - 1)].value(x) * lp;
    }
    return std::pow(lambda, 0.5 * d) * s;
}

double free_offdiagonal(double lambda, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int d) {
    const double r = (x - y).norm();
    if (r == 0.0) throw Error(ErrorCode::CoincidingPoints, "off-diagonal term needs x ≠ y");
    const double sl = std::sqrt(lambda);
    return 2.0 / std::pow(2.0 * pi * r, 0.5 * (d + 1)) * std::pow(lambda, 0.25 * (d - 1)) *
           std::sin(sl * r - 0.25 * pi * (d - 1));
}

std::vector<double> geometric_ladder(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || hi < lo) throw Error(ErrorCode::InvalidArgument, "bad ladder range");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
    return out;
}

nlohmann::json LadderFit::to_json() const {
    nlohmann::json bj = nlohmann::json::array();
    for (const auto& b : bins)
        bj.push_back({{"lambda", b.lambda}, {"level", b.level}, {"members", b.members}, {"sign_change", b.sign_change}});
    return {{"L", L}, {"slope", slope}, {"coefficient", coefficient}, {"used_bins", used_bins},
            {"noise_floor", noise_floor}, {"bins", bj}};
}

LadderFit fit_log_slope(const std::vector<double>& lambdas, const std::vector<double>& residual, double ratio,
                        bool envelope) {
    LadderFit fit;
    if (lambdas.size() != residual.size() || lambdas.empty())
        throw Error(ErrorCode::InvalidArgument, "ladder sizes differ");
    std::vector<std::size_t> order(lambdas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto p, auto q) { return lambdas[p] < lambdas[q]; });

    std::size_t i = 0;
    while (i < order.size()) {
        const double start = lambdas[order[i]];
        std::vector<double> mags;
        double logsum = 0.0;
        bool pos = false, neg = false;
        std::size_t j = i;
        for (; j < order.size() && lambdas[order[j]] < start * ratio; ++j) {
            const double r = residual[order[j]];
            mags.push_back(std::abs(r));
            logsum += std::log(lambdas[order[j]]);
            pos |= r > 0;
            neg |= r < 0;
        }
        LadderBin bin;
        bin.members = mags.size();
        bin.lambda = std::exp(logsum / static_cast<double>(mags.size()));
        bin.level = envelope ? *std::max_element(mags.begin(), mags.end()) : median(mags);
        bin.sign_change = pos && neg;
        fit.bins.push_back(bin);
        i = j;
    }
    std::vector<double> t, y;
    for (const auto& b : fit.bins) {
        if (b.level <= 0.0) continue;
        if (!envelope && b.sign_change) continue;
        t.push_back(std::log(b.lambda));
        y.push_back(std::log(b.level));
    }
    fit.used_bins = t.size();
    fit.slope = t.size() >= 2 ? line_fit(t, y).second : std::nan("");
    return fit;
}

nlohmann::json ResidualLadder::to_json() const {
    nlohmann::json fj = nlohmann::json::array();
    for (const auto& f : fits) fj.push_back(f.to_json());
    return {{"x", std::vector<double>(x.data(), x.data() + x.size())},
            {"lambdas", lambdas},
            {"oracle", oracle},
            {"expansion", expansion},
            {"residual", residual},
            {"fits", fj}};
}

std::vector<ResidualLadder> residual_ladders(const Potential& b, const std::vector<Eigen::VectorXd>& xs, int L,
                                             const std::vector<double>& ladder, const OracleConfig& cfg,
                                             const std::vector<HeatCoefficient>& coeffs) {
    const int d = b.dim();
    std::vector<PointPair> pairs;
    for (const auto& x : xs) pairs.push_back({x, x});
    const auto values = spectral_function_batch(ladder, pairs, b, cfg);
    const double scale = std::abs(weyl_constant(d).value()) * std::pow(ladder.back(), 0.5 * d);

    std::vector<ResidualLadder> out;
    for (std::size_t p = 0; p < xs.size(); ++p) {
        ResidualLadder r;
        r.lambdas = ladder;
        r.x = xs[p];
        for (const auto& v : values[p]) r.oracle.push_back(v.real());
        for (int l = 0; l <= L; ++l) {
            std::vector<double> ex, res;
            for (std::size_t i = 0; i < ladder.size(); ++i) {
                ex.push_back(expansion_eval(coeffs, d, ladder[i], xs[p], l));
                res.push_back(r.oracle[i] - ex.back());
            }
            LadderFit fit = fit_log_slope(ladder, res);
            fit.L = l;
            // R_L λ^{−(d/2−L−1)} = c + c′/λ.
            std::vector<double> t, y;
            double peak = 0.0;
            for (std::size_t i = 0; i < ladder.size(); ++i) {
                t.push_back(1.0 / ladder[i]);
                y.push_back(res[i] * std::pow(ladder[i], -(0.5 * d - l - 1)));
                peak = std::max(peak, std::abs(res[i]));
            }
            fit.coefficient = line_fit(t, y).first;
            fit.noise_floor = fit.used_bins < 2 || peak <= 1e-11 * scale;
            r.expansion.push_back(std::move(ex));
            r.residual.push_back(std::move(res));
            r.fits.push_back(std::move(fit));
        }
        out.push_back(std::move(r));
    }
    return out;
}

ResidualLadder residual_ladder(const Potential& b, const Eigen::VectorXd& x, int L, const std::vector<double>& ladder,
                               const OracleConfig& cfg, const std::vector<HeatCoefficient>& coeffs) {
    return residual_ladders(b, {x}, L, ladder, cfg, coeffs).front();
}

nlohmann::json OffDiagonalLadder::to_json() const {
    return {{"lambdas", lambdas},   {"oracle", oracle},
            {"free", free_term},    {"error", error},
            {"leading_exponent", leading_exponent}, {"envelope", envelope.to_json()}};
}

std::vector<OffDiagonalLadder> offdiagonal_ladders(const Potential& b, const std::vector<PointPair>& pairs,
                                                   const std::vector<double>& ladder, const OracleConfig& cfg) {
    const int d = b.dim();
    std::vector<OffDiagonalLadder> out;
    for (const auto& p : pairs) {
        OffDiagonalLadder r;
        r.lambdas = ladder;
        r.leading_exponent = 0.25 * (d - 1);
        for (double l : ladder) r.free_term.push_back(free_offdiagonal(l, p.x, p.y, d));
        out.push_back(std::move(r));
    }
    const auto values = spectral_function_batch(ladder, pairs, b, cfg);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto& r = out[p];
        std::vector<double> scaled;
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            r.oracle.push_back(values[p][i].real());
            r.error.push_back(r.oracle[i] - r.free_term[i]);
            scaled.push_back(r.error[i] / std::pow(ladder[i], r.leading_exponent));
        }
        r.envelope = fit_log_slope(ladder, scaled, 1.3, true);
    }
    return out;
}

OffDiagonalLadder offdiagonal_ladder(const Potential& b, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const std::vector<double>& ladder, const OracleConfig& cfg) {
    return offdiagonal_ladders(b, {{x, y}}, ladder, cfg).front();
}

nlohmann::json PerturbationReport::to_json() const {
    return {{"n", n},
            {"s", s},
            {"eps", eps},
            {"delta", delta},
            {"trials", trials},
            {"failures_projection_product", failures_first},
            {"failures_projection_difference", failures_second},
            {"max_ratio_projection_product", max_ratio_first},
            {"max_ratio_projection_difference", max_ratio_second},
            {"pass", pass()}};
}

PerturbationReport check_projection_perturbation(int n, int s, double eps, int trials, std::uint64_t seed,
                                                 double delta, double a) {
    if (n < 1 || s < 0 || !(eps >= 0.0 && eps < 1.0) || trials < 1)
        throw Error(ErrorCode::InvalidArgument, "need n ≥ 1, s ≥ 0, 0 ≤ ε < 1, trials ≥ 1");
    if (eps == 0.0 && !(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "ε = 0 needs an explicit δ > 0");
    PerturbationReport rep;
    rep.n = n;
    rep.s = s;
    rep.eps = eps;
    rep.delta = delta > 0.0 ? delta : std::sqrt(eps);
    rep.trials = trials;
    const double dl = rep.delta;
    const int probes = 4;

    for (int t = 0; t < trials; ++t) {
        std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(sq);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        // GUE spectrum mapped affinely onto [a+1, a+10].
        Eigen::MatrixXcd g = gue(n, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ges(g, Eigen::EigenvaluesOnly);
        const double lo = ges.eigenvalues()(0), hi = ges.eigenvalues()(n - 1);
        Eigen::MatrixXcd h2 = Eigen::MatrixXcd::Identity(n, n) * (a + 1.0);
        if (hi > lo) h2 += (g - lo * Eigen::MatrixXcd::Identity(n, n)) * (9.0 / (hi - lo));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(h2);
        const Eigen::MatrixXcd weight = spectral_power(es2, 1.0 - a, s);
        const Eigen::MatrixXcd inv_weight = spectral_power(es2, 1.0 - a, -s);

        Eigen::MatrixXcd e = gue(n, rng);
        const double u = 0.5 + 0.49 * unif(rng);
        e *= eps * u / operator_norm(e * weight);
        const Eigen::MatrixXcd h1 = h2 + e;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(h1);

        const double lambda = a + 1.0 + 9.0 * unif(rng);
        const auto p1 = projector(es1, [&](double v) { return v <= lambda - dl; });
        const auto p2 = projector(es2, [&](double v) { return v >= lambda + dl; });
        // Roundoff allowance so that E = 0 is judged against an exact zero bound.
        const double slack = 1e-12 * (1.0 + operator_norm(weight));
        const double first = operator_norm(p1 * p2 * weight);
        const double first_bound = pi * eps / dl + slack;
        rep.max_ratio_first = std::max(rep.max_ratio_first, first / first_bound);
        if (first > first_bound) ++rep.failures_first;

        const auto q2 = projector(es2, [&](double v) { return v <= lambda; });
        const auto q1 = projector(es1, [&](double v) { return v <= lambda; });
        const auto band = projector(es2, [&](double v) { return v >= lambda - dl && v <= lambda + dl; });
        bool failed = false;
        for (int k = 0; k < probes; ++k) {
            Eigen::VectorXcd f = gaussian_vector(n, rng);
            f.normalize();
            const double lhs = (q2 * f - q1 * f).norm();
            const double rhs = 2.0 * (band * f).norm() + 2.0 * pi * eps / dl * (q2 * f).norm() +
                               2.0 * pi * eps / dl * (inv_weight * f).norm() + slack;
            rep.max_ratio_second = std::max(rep.max_ratio_second, lhs / rhs);
            failed |= lhs > rhs;
        }
        if (failed) ++rep.failures_second;
    }
    return rep;
}

Eigen::MatrixXcd MatrixFamily::S(cd z) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    cd p = 1.0;
    for (const auto& c : coeffs) {
        out += c * p;
        p *= z - center;
    }
    return out;
}

Eigen::MatrixXcd MatrixFamily::dS(double r) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    double p = 1.0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        out += coeffs[k] * (static_cast<double>(k) * p);
        p *= r - center;
    }
    return out;
}

Eigen::MatrixXcd MatrixFamily::H(cd z) const {
    return S(z) + Eigen::MatrixXcd::Identity(dim(), dim()) * (z * z);
}

MatrixFamily MatrixFamily::scalar_zero() { return {{Eigen::MatrixXcd::Zero(1, 1)}, 0.0}; }

MatrixFamily MatrixFamily::random(int n, const std::vector<double>& norms, double center, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MatrixFamily f;
    f.center = center;
    for (double nv : norms) {
        Eigen::MatrixXcd m = gue(n, rng);
        f.coeffs.push_back(m * (nv / operator_norm(m)));
    }
    if (f.coeffs.empty()) f.coeffs.push_back(Eigen::MatrixXcd::Zero(n, n));
    return f;
}

Eigen::VectorXcd VectorPoly::at(cd z) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(coeffs.front().size());
    cd p = 1.0;
    for (const auto& c : coeffs) {
        out += c * p;
        p *= z - center;
    }
    return out;
}

VectorPoly VectorPoly::conj_coeffs() const {
    VectorPoly out{{}, center};
    for (const auto& c : coeffs) out.coeffs.push_back(c.conjugate());
    return out;
}

VectorPoly VectorPoly::constant(const Eigen::VectorXcd& v) { return {{v}, 0.0}; }

VectorPoly VectorPoly::random(int n, int degree, double center, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VectorPoly p{{}, center};
    for (int k = 0; k <= degree; ++k) p.coeffs.push_back(gaussian_vector(n, rng) * (1.0 / (k + 1)));
    return p;
}

nlohmann::json ContourReport::to_json() const {
    return {{"lhs", {lhs.real(), lhs.imag()}},
            {"rhs", {rhs.real(), rhs.imag()}},
            {"difference", difference},
            {"lhs_refinement", lhs_refinement},
            {"z_nodes", z_nodes},
            {"mu_panels", mu_panels},
            {"min_sigma", min_sigma},
            {"history", history},
            {"breakpoints", breakpoints}};
}

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

template <class F>
cd gl_panels(F&& f, double lo, double hi, int panels) {
    cd total = 0.0;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double l = lo + p * h, r = l + h;
        const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
        const auto& x = GL::abscissa();
        const auto& w = GL::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                total += w[i] * half * f(mid);
            } else {
                total += w[i] * half * (f(mid - half * x[i]) + f(mid + half * x[i]));
            }
        }
    }
    return total;
}

double eigenvalue(const MatrixFamily& fam, double r, int j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fam.H(r), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(j);
}

}  // namespace

ContourReport check_contour_identity(const MatrixFamily& family, const VectorPoly& f, const VectorPoly& g,
                                     const ContourConfig& cfg) {
    if (!(cfg.a > 0.0 && cfg.b > cfg.a && cfg.lambda2 > cfg.lambda1))
        throw Error(ErrorCode::InvalidArgument, "need 0 < a < b and λ′ < λ″");
    const int n = family.dim();
    const int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double r = cfg.a + (cfg.b - cfg.a) * i / samples;
        if (operator_norm(family.dS(r)) >= 2.0 * cfg.a)
            throw Error(ErrorCode::InvalidArgument, "eigenvalue branches are not monotone on [a, b]");
    }

    ContourReport rep;
    // Left side: the projector jumps where a branch crosses λ′ or λ″.
    std::vector<double> cuts{cfg.a, cfg.b};
    std::vector<Eigen::VectorXd> ev;
    for (int i = 0; i <= samples; ++i) {
        const double r = cfg.a + (cfg.b - cfg.a) * i / samples;
        ev.push_back(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(family.H(r), Eigen::EigenvaluesOnly).eigenvalues());
    }
    for (double level : {cfg.lambda1, cfg.lambda2}) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < samples; ++i) {
                const double u = ev[i](j) - level, v = ev[i + 1](j) - level;
                if (u == 0.0) {
                    cuts.push_back(cfg.a + (cfg.b - cfg.a) * i / samples);
                    continue;
                }
                if (u * v >= 0.0) continue;
                boost::uintmax_t iters = 100;
                const auto root = boost::math::tools::toms748_solve(
                    [&](double r) { return eigenvalue(family, r, j) - level; },
                    cfg.a + (cfg.b - cfg.a) * i / samples, cfg.a + (cfg.b - cfg.a) * (i + 1) / samples, u, v,
                    boost::math::tools::eps_tolerance<double>(52), iters);
                cuts.push_back(0.5 * (root.first + root.second));
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    rep.breakpoints.assign(cuts.begin() + 1, cuts.end() - 1);

    auto lhs_integrand = [&](double r) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(family.H(r));
        const auto p = projector(es, [&](double v) { return v >= cfg.lambda1 && v <= cfg.lambda2; });
        return g.at(r).dot(p * f.at(r));
    };
    auto lhs_at = [&](int panels) {
        cd s = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += gl_panels(lhs_integrand, cuts[i], cuts[i + 1], panels);
        return s;
    };
    rep.lhs = lhs_at(4);
    rep.lhs_refinement = std::abs(lhs_at(8) - rep.lhs);

    // Right side: circle on the diameter [a, b], trapezoid in the angle, Gauss–Legendre in μ.
    const double c = 0.5 * (cfg.a + cfg.b), rad = 0.5 * (cfg.b - cfg.a);
    const VectorPoly gbar = g.conj_coeffs();
    auto rhs_at = [&](int nz, int panels, double* min_sigma) {
        std::vector<cd> zs, fz, gz;
        for (int k = 0; k < nz; ++k) zs.push_back(c + rad * std::polar(1.0, 2.0 * pi * k / nz));
        auto inner = [&](double mu) {
            cd s = 0.0;
            for (const cd& z : zs) {
                const Eigen::MatrixXcd m = family.H(z) - Eigen::MatrixXcd::Identity(n, n) * mu;
                if (min_sigma) *min_sigma = std::min(*min_sigma, smallest_singular(m));
                const Eigen::VectorXcd u = m.partialPivLu().solve(f.at(z));
                s += (gbar.at(z).transpose() * u)(0) * (z - c);
            }
            return s / static_cast<double>(nz);
        };
        return gl_panels(inner, cfg.lambda1, cfg.lambda2, panels);
    };

    rep.min_sigma = std::numeric_limits<double>::infinity();
    int nz = std::max(8, cfg.z_nodes + cfg.z_nodes % 2);
    int panels = std::max(1, cfg.mu_panels);
    rep.rhs = rhs_at(nz, panels, &rep.min_sigma);
    if (rep.min_sigma < cfg.margin)
        throw Error(ErrorCode::ContourTooClose,
                    "σ_min(H₂(z) − μ) = " + std::to_string(rep.min_sigma) + " on the contour");
    for (int k = 0; k < cfg.max_refine; ++k) {
        nz *= 2;
        panels *= 2;
        const cd next = rhs_at(nz, panels, nullptr);
        rep.history.push_back(std::abs(next - rep.rhs));
        rep.rhs = next;
        if (rep.history.back() < 0.1 * cfg.tol) break;
    }
    rep.z_nodes = nz;
    rep.mu_panels = panels;
    rep.difference = std::abs(rep.lhs - rep.rhs);
    return rep;
}

nlohmann::json ResolventReport::to_json() const {
    return {{"ratio", ratio}, {"errors", errors}, {"rate", rate}};
}

ResolventReport resolvent_series_check(const MatrixFamily& family, cd z, double mu, int terms) {
    if (terms < 2) throw Error(ErrorCode::InvalidArgument, "need at least two terms");
    const int n = family.dim();
    const Eigen::MatrixXcd s = family.S(z);
    const cd w = z * z - mu;
    ResolventReport rep;
    rep.ratio = operator_norm(s) / std::abs(w);
    if (!(rep.ratio < 1.0))
        throw Error(ErrorCode::DivergentSeries, "‖S(z)‖ ≥ |z² − μ|");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd exact = (s + id * w).inverse();
    Eigen::MatrixXcd partial = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd term = id / w;
    for (int l = 0; l < terms; ++l) {
        partial += term;
        rep.errors.push_back(operator_norm(exact - partial));
        term = -(s * term) / w;
    }
    double logsum = 0.0;
    int used = 0;
    for (std::size_t l = 1; l < rep.errors.size(); ++l) {
        if (rep.errors[l - 1] <= 0.0 || rep.errors[l] <= 1e-14 * rep.errors.front()) break;
        logsum += std::log(rep.errors[l] / rep.errors[l - 1]);
        ++used;
    }
    rep.rate = used ? std::exp(logsum / used) : 0.0;
    return rep;
}

nlohmann::json GeometrySuiteReport::to_json() const {
    return {{"samples", samples},
            {"partition_violations", partition_violations},
            {"label_mismatches", label_mismatches},
            {"nonresonant", nonresonant},
            {"singleton_violations", singleton_violations},
            {"classes", classes},
            {"class_label_splits", class_label_splits},
            {"diameter_over_mL", diameter_over_mL},
            {"diameter_over_2mL", diameter_over_2mL},
            {"max_diameter_ratio", max_diameter_ratio},
            {"annulus_resonant", annulus_resonant},
            {"pass", pass()},
            {"pass_relaxed", pass_relaxed()}};
}

std::vector<Eigen::VectorXd> annulus_samples(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed) {
    const int d = geo.frequencies().dim();
    const auto& zp = geo.params();
    const double rho = zp.rho_n;
    const auto dirs = geo.frequencies().nonzero();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    for (std::size_t k = 0; k < n; ++k) {
        const double r2 = rho * rho * (0.7 + (17.5 - 0.7) * unit(rng));
        Eigen::VectorXd u(d);
        for (int i = 0; i < d; ++i) u[i] = gauss(rng);
        Eigen::VectorXd xi = std::sqrt(r2) * u.normalized();
        if (d >= 2 && k % 2 == 1 && !dirs.empty()) {
            const Eigen::VectorXd hat =
                dirs[static_cast<std::size_t>(unit(rng) * dirs.size()) % dirs.size()].real().normalized();
            const double along = (2.0 * unit(rng) - 1.0) * 1.5 * zp.L(1);
            Eigen::VectorXd perp = xi - xi.dot(hat) * hat;
            perp *= std::sqrt(std::max(r2 - along * along, 0.0)) / perp.norm();
            xi = perp + along * hat;
        }
        out.push_back(std::move(xi));
    }
    return out;
}

GeometrySuiteReport geometry_suite(const ResonanceGeometry& geo, std::size_t n, std::uint64_t seed) {
    const int d = geo.frequencies().dim();
    const auto& zp = geo.params();
    GeometrySuiteReport rep;
    rep.samples = n;
    for (const auto& xi : annulus_samples(geo, n, seed)) {
        if (geo.region_count(xi) != 1) ++rep.partition_violations;
        const ZoneLabel label = geo.classify(xi);
        if (!label.sum_closed) ++rep.label_mismatches;
        const int m = label.subspace.dim();
        if (d == 1 && m > 0) ++rep.annulus_resonant;

        const CongruenceClass cls = geo.congruence_class(xi);
        if (m == 0) {
            ++rep.nonresonant;
            if (cls.points.size() != 1) ++rep.singleton_violations;
            continue;
        }
        ++rep.classes;
        for (const auto& p : cls.points)
            if (!(geo.classify(p).subspace == label.subspace)) {
                ++rep.class_label_splits;
                break;
            }
        const double bound = m * zp.L(m);
        const double diam = cls.diameter();
        rep.max_diameter_ratio = std::max(rep.max_diameter_ratio, diam / bound);
        if (diam > bound) ++rep.diameter_over_mL;
        if (diam > 2.0 * bound) ++rep.diameter_over_2mL;
    }
    return rep;
}

}  // namespace spectra
