#include "spectra/config.hpp"
#include "spectra/gauge.hpp"
#include "spectra/heat.hpp"
#include "spectra/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace spectra;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string point_text(const Eigen::VectorXd& x) {
    std::string s;
    for (int i = 0; i < x.size(); ++i) s += (i ? " " : "") + num(x[i]);
    return s;
}

// Secondary artifact next to the primary output; skipped when writing to stdout.
void emit_sidecar(const std::string& text, const std::string& out, const std::string& suffix) {
    if (!out.empty()) emit(text, out + suffix);
}

json point_json(const Eigen::VectorXd& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

ZoneParameters zone_parameters(const RunConfig& cfg) {
    ZoneParameters zp = ZoneParameters::defaults(cfg.d, cfg.rho0, cfg.ktilde);
    if (!cfg.alpha.empty()) zp.alpha = cfg.alpha;
    zp.beta = cfg.beta;
    zp.validate();
    return zp;
}

json zone_json(const ZoneParameters& zp) {
    json L = json::array();
    for (int j = 1; j <= zp.dim(); ++j) L.push_back(zp.L(j));
    return {{"rho_n", zp.rho_n}, {"alpha", zp.alpha}, {"beta", zp.effective_beta()}, {"ktilde", zp.ktilde}, {"L", L}};
}

json condition_a_json(const ConditionAResult& r, const GeneratorBasis& basis) {
    json w = json::array();
    for (const auto& v : r.witness) w.push_back(frequency_to_json(v, basis));
    return {{"pass", r.pass}, {"tuples_checked", r.tuples_checked}, {"witness", w}};
}

std::vector<HeatCoefficient> expansion_coefficients(const RunConfig& cfg, int L) {
    std::vector<HeatCoefficient> out;
    for (int j = 1; j <= L; ++j) out.push_back(closed_form_a(cfg.potential, j));
    return out;
}

struct Suite {
    json checks = json::array();
    bool ok = true;
    void add(const std::string& name, bool pass, json detail) {
        ok = ok && pass;
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    }
};

// --- zones ---------------------------------------------------------------

int run_zones(const RunConfig& cfg, const std::string& out) {
    const FrequencySet S = cfg.frequencies();
    const ZoneParameters zp = zone_parameters(cfg);
    const auto condA = check_condition_A(S, cfg.k_max);
    const FrequencySet tilde = algebraic_sum(S, cfg.ktilde);
    const ResonanceGeometry geo(tilde, zp);
    const auto samples = annulus_samples(geo, static_cast<std::size_t>(cfg.samples), cfg.seed);

    std::ostringstream csv;
    csv << "xi,dim_V,basis_V,class_size,diameter\n";
    for (const auto& xi : samples) {
        const auto cls = geo.congruence_class(xi);
        csv << point_text(xi) << ',' << cls.subspace.dim() << ',' << '"' << cls.subspace.to_string() << '"' << ','
            << cls.points.size() << ',' << num(cls.diameter()) << '\n';
    }
    emit(csv.str(), out);

    const auto suite = geometry_suite(geo, static_cast<std::size_t>(cfg.samples), cfg.seed);
    json subs = json::array();
    for (const auto& V : geo.subspaces()) subs.push_back(V.to_string());
    json summary = {{"frequencies", tilde.size()},
                    {"condition_A", condition_a_json(condA, cfg.basis)},
                    {"diophantine", diophantine_constants(tilde).to_json()},
                    {"zones", zone_json(zp)},
                    {"subspaces", subs},
                    {"geometry", suite.to_json()}};
    emit_sidecar(summary.dump(2) + "\n", out, ".summary.json");
    return condA.pass && suite.pass_relaxed() ? kOk : kCheckFailed;
}

// --- gauge ---------------------------------------------------------------

struct GaugeRun {
    GaugeOutput out;
    bool symmetric_psi = true;
    bool symmetric_w = true;
    B3Report b3;
};

GaugeRun gauge_pipeline(const RunConfig& cfg) {
    const FrequencySet S = cfg.frequencies();
    const ZoneParameters zp = zone_parameters(cfg);
    const CutoffFamily cf{{zp.rho_n, zp.effective_beta()}};
    GaugeOptions opt;
    opt.seed = cfg.seed;
    GaugeRun run{run_gauge(Symbol::multiplication(cfg.potential), cfg.ktilde, cf, S, opt), true, true, {}};
    const auto grid = gauge_grid(S, cf.params, 256, cfg.seed);
    for (const auto& p : run.out.psi) run.symmetric_psi = run.symmetric_psi && is_symmetric(p, grid);
    run.symmetric_w = is_symmetric(run.out.w, grid);
    const ResonanceGeometry geo(algebraic_sum(S, cfg.ktilde), zp);
    run.b3 = verify_b3(run.out, sample_A(geo, static_cast<std::size_t>(cfg.samples), cfg.seed), S, geo);
    return run;
}

int run_gauge_cmd(const RunConfig& cfg, const std::string& out) {
    const GaugeRun run = gauge_pipeline(cfg);
    json support = json::array();
    for (const auto& [th, c] : run.out.w.terms()) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(expr::digest(c)));
        support.push_back({{"theta", frequency_to_json(th, cfg.basis)}, {"digest", hex}});
    }
    json report = {{"diagnostics", run.out.diagnostics()},
                   {"symmetric_psi", run.symmetric_psi},
                   {"symmetric_w", run.symmetric_w},
                   {"w_support", support},
                   {"b3", run.b3.to_json(cfg.basis)}};
    emit(report.dump(2) + "\n", out);
    std::ostringstream csv;
    csv << "j,measured,bound\n";
    for (const auto& r : run.out.norms) csv << r.j << ',' << num(r.measured) << ',' << num(r.bound) << '\n';
    emit_sidecar(csv.str(), out, ".norms.csv");
    return run.symmetric_psi && run.symmetric_w && run.b3.pass() ? kOk : kCheckFailed;
}

// --- heat ----------------------------------------------------------------

struct HeatRun {
    json report = json::array();
    bool calibrated_matches = true;
};

HeatRun heat_pipeline(const RunConfig& cfg) {
    HeatRun run;
    for (int j = 1; j <= cfg.heat_order; ++j) {
        const HeatCoefficient closed = closed_form_a(cfg.potential, j);
        const HeatCoefficient cal = a_from_sigma(cfg.potential, j, true);
        const HeatCoefficient verb = a_from_sigma(cfg.potential, j, false);
        const bool match = same_coefficient(closed, cal);
        run.calibrated_matches = run.calibrated_matches && match;
        json values = json::array();
        for (const auto& x : cfg.x)
            values.push_back({{"x", point_json(x)},
                              {"closed_form", closed.value(x)},
                              {"calibrated_sigma", cal.value(x)},
                              {"verbatim_sigma", verb.value(x)}});
        run.report.push_back({{"j", j},
                              {"closed_form", closed.to_json()},
                              {"calibrated_sigma_matches", match},
                              {"verbatim_sigma_matches", same_coefficient(closed, verb)},
                              {"mean", closed.mean().real()},
                              {"values", values}});
    }
    return run;
}

int run_heat(const RunConfig& cfg, const std::string& out) {
    const HeatRun run = heat_pipeline(cfg);
    std::vector<Eigen::VectorXd> grid = cfg.x;
    if (grid.empty())
        for (int i = 0; i < 16; ++i) grid.push_back(Eigen::VectorXd::Constant(cfg.d, 2.0 * std::numbers::pi * i / 16));
    std::vector<HeatCoefficient> a;
    for (int j = 1; j <= cfg.heat_order; ++j) a.push_back(closed_form_a(cfg.potential, j));
    std::ostringstream csv;
    csv << "x";
    for (const auto& c : a) csv << ",a_" << c.j;
    csv << '\n';
    for (const auto& x : grid) {
        csv << point_text(x);
        for (const auto& c : a) csv << ',' << num(c.value(x));
        csv << '\n';
    }
    emit(csv.str(), out);
    json report = {{"weyl_constant", weyl_constant(cfg.d).to_string()}, {"coefficients", run.report}};
    emit_sidecar(report.dump(2) + "\n", out, ".json");
    return run.calibrated_matches ? kOk : kCheckFailed;
}

// --- bloch ---------------------------------------------------------------

int run_bloch(const RunConfig& cfg, const std::string& out) {
    require_oracle_support(cfg);
    const auto lambdas = cfg.ladder.values();
    std::vector<PointPair> pairs;
    for (const auto& x : cfg.x) pairs.push_back({x, x});
    for (std::size_t i = 0; i < cfg.y.size(); ++i) pairs.push_back({cfg.x[i], cfg.y[i]});
    if (pairs.empty()) pairs.push_back({Eigen::VectorXd::Zero(cfg.d), Eigen::VectorXd::Zero(cfg.d)});
    const auto values = spectral_function_batch(lambdas, pairs, cfg.potential, cfg.oracle());
    std::ostringstream csv;
    csv << "λ,x,y,e_λ,N_k,M_cut\n";
    for (std::size_t p = 0; p < pairs.size(); ++p)
        for (std::size_t l = 0; l < lambdas.size(); ++l)
            csv << num(lambdas[l]) << ',' << point_text(pairs[p].x) << ',' << point_text(pairs[p].y) << ','
                << num(values[p][l].real()) << ',' << cfg.N_k << ',' << cfg.M_cut << '\n';
    emit(csv.str(), out);
    return kOk;
}

// --- compare -------------------------------------------------------------

int run_compare(const RunConfig& cfg, const std::string& out) {
    require_oracle_support(cfg);
    if (cfg.x.empty()) throw Error(ErrorCode::Malformed, "compare needs at least one x point");
    const auto lambdas = cfg.ladder.values();
    const auto coeffs = expansion_coefficients(cfg, 1);
    const auto ladders = residual_ladders(cfg.potential, cfg.x, 1, lambdas, cfg.oracle(), coeffs);
    std::ostringstream csv;
    csv << "λ,x,N_oracle,N_expansion_L0,N_expansion_L1,R_0,R_1\n";
    for (const auto& l : ladders)
        for (std::size_t i = 0; i < l.lambdas.size(); ++i)
            csv << num(l.lambdas[i]) << ',' << point_text(l.x) << ',' << num(l.oracle[i]) << ','
                << num(l.expansion[0][i]) << ',' << num(l.expansion[1][i]) << ',' << num(l.residual[0][i]) << ','
                << num(l.residual[1][i]) << '\n';
    emit(csv.str(), out);
    return kOk;
}

// --- validate ------------------------------------------------------------

void validate_structure(const RunConfig& cfg, Suite& suite) {
    const FrequencySet S = cfg.frequencies();
    const auto condA = check_condition_A(S, cfg.k_max);
    suite.add("condition_A", condA.pass, condition_a_json(condA, cfg.basis));
    if (!condA.pass) return;

    const ZoneParameters zp = zone_parameters(cfg);
    const ResonanceGeometry geo(algebraic_sum(S, cfg.ktilde), zp);
    const auto geom = geometry_suite(geo, static_cast<std::size_t>(cfg.samples), cfg.seed);
    json gd = geom.to_json();
    gd["diameter_bound_checked"] = "2 m L_m";
    suite.add("geometry_partition_and_classes", geom.pass_relaxed(), gd);

    if (!cfg.potential.is_zero()) {
        const GaugeRun run = gauge_pipeline(cfg);
        suite.add("gauge_symmetry", run.symmetric_psi && run.symmetric_w,
                  {{"psi", run.symmetric_psi}, {"w", run.symmetric_w}});
        suite.add("gauge_off_zone_vanishing", run.b3.pass(), run.b3.to_json(cfg.basis));
    }
}

void validate_heat(const RunConfig& cfg, Suite& suite) {
    const HeatRun run = heat_pipeline(cfg);
    suite.add("heat_closed_form_matches_calibrated_sigma", run.calibrated_matches, run.report);
    bool weyl = true;
    for (double l : {10.0, 1000.0}) {
        const Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.d);
        const double w = weyl_constant(cfg.d).value() * std::pow(l, 0.5 * cfg.d);
        weyl = weyl && std::abs(expansion_eval({}, cfg.d, l, x, 0) - w) <= 1e-15 * w;
    }
    suite.add("expansion_order_zero_is_weyl", weyl, json::object());
}

void validate_finite(const RunConfig& cfg, Suite& suite) {
    json pert = json::array();
    bool pert_ok = true;
    for (int s : {0, 2})
        for (double eps : {1e-2, 1e-4}) {
            const auto r = check_projection_perturbation(20, s, eps, 20, cfg.seed);
            pert_ok = pert_ok && r.pass();
            pert.push_back(r.to_json());
        }
    suite.add("projection_perturbation_bounds", pert_ok, pert);

    json contour = json::array();
    bool contour_ok = true;
    {
        const auto one = VectorPoly::constant(Eigen::VectorXcd::Ones(1));
        const auto r = check_contour_identity(MatrixFamily::scalar_zero(), one, one, {0.5, 2.5, 1.0, 4.0});
        contour_ok = contour_ok && std::abs(r.rhs - 1.0) <= 1e-10 && r.difference <= 1e-10;
        contour.push_back(r.to_json());
    }
    for (int t = 0; t < 5; ++t) {
        const std::uint64_t base = cfg.seed * 1000 + static_cast<std::uint64_t>(t);
        const auto fam = MatrixFamily::random(4, {0.3, 0.1, 0.05}, 3.0, base);
        const auto f = VectorPoly::random(4, 1, 3.0, base + 101);
        const auto g = VectorPoly::random(4, 1, 3.0, base + 202);
        const auto r = check_contour_identity(fam, f, g, {2.0, 4.0, 2.6 * 2.6 + 0.5, 3.4 * 3.4 - 0.5});
        contour_ok = contour_ok && r.difference <= 1e-8;
        contour.push_back(r.to_json());
    }
    suite.add("contour_identity", contour_ok, contour);

    const auto fam = MatrixFamily::random(4, {1.0}, 0.0, cfg.seed);
    const auto rs = resolvent_series_check(fam, {3.0, 0.0}, 7.0, 12);
    bool diverges = false;
    try {
        resolvent_series_check(fam, {3.0, 0.0}, 8.5, 4);
    } catch (const Error& e) {
        diverges = e.code() == ErrorCode::DivergentSeries;
    }
    suite.add("resolvent_series", rs.rate <= rs.ratio * (1.0 + 1e-9) && diverges,
              {{"convergent", rs.to_json()}, {"divergent_case_rejected", diverges}});
}

void validate_oracle(const RunConfig& cfg, Suite& suite) {
    if ((cfg.d != 1 && cfg.d != 2) || !cfg.potential.is_periodic() || cfg.x.empty()) return;
    const auto lambdas = cfg.ladder.values();
    const int L = std::min(cfg.heat_order, 2);
    const auto ladders = residual_ladders(cfg.potential, cfg.x, L, lambdas, cfg.oracle(),
                                          expansion_coefficients(cfg, L));
    const double cd = weyl_constant(cfg.d).value();
    double worst = 0.0;
    json fits = json::array();
    for (const auto& l : ladders) {
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            worst = std::max(worst, l.oracle[i] / (cd * std::pow(lambdas[i], 0.5 * cfg.d)));
        json per = json::array();
        for (const auto& f : l.fits)
            per.push_back({{"L", f.L}, {"slope", f.slope}, {"coefficient", f.coefficient}, {"noise_floor", f.noise_floor}});
        fits.push_back({{"x", point_json(l.x)}, {"fits", per}});
    }
    suite.add("density_bounded_by_weyl_scale", worst <= 2.0, {{"max_ratio_to_weyl", worst}, {"ladders", fits}});

    if (cfg.y.empty()) return;
    std::vector<PointPair> pairs;
    for (std::size_t i = 0; i < cfg.y.size(); ++i)
        if ((cfg.x[i] - cfg.y[i]).norm() != 0.0) pairs.push_back({cfg.x[i], cfg.y[i]});
    if (pairs.empty()) return;
    const auto ladders_off = offdiagonal_ladders(cfg.potential, pairs, lambdas, cfg.oracle());
    json off = json::array();
    bool off_ok = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& r = ladders_off[i];
        double worst_rel = 0.0;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
            worst_rel = std::max(worst_rel, std::abs(r.error[k]) / std::pow(lambdas[k], r.leading_exponent));
        off_ok = off_ok && worst_rel <= 1.0;
        off.push_back({{"x", point_json(pairs[i].x)},
                       {"y", point_json(pairs[i].y)},
                       {"max_error_over_leading_scale", worst_rel},
                       {"envelope_slope", r.envelope.slope}});
    }
    suite.add("offdiagonal_leading_term", off_ok, off);
}

int run_validate(const RunConfig& cfg, const std::string& out) {
    Suite suite;
    validate_structure(cfg, suite);
    validate_heat(cfg, suite);
    validate_finite(cfg, suite);
    validate_oracle(cfg, suite);
    json report = {{"checks", suite.checks}, {"pass", suite.ok}};
    emit(report.dump(2) + "\n", out);
    return suite.ok ? kOk : kCheckFailed;
}

bool is_config_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::Malformed:
        case ErrorCode::NonHermitianPotential:
        case ErrorCode::UnsupportedDimension:
        case ErrorCode::UnsupportedGenerators:
        case ErrorCode::NonLatticeFrequencies:
        case ErrorCode::TruncationCeiling:
        case ErrorCode::InvalidArgument:
            return true;
        default:
            return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectra-lab: resonance zones, gauge transform, heat invariants and a Bloch oracle"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"zones", "Condition A, Diophantine constants and the resonance-zone geometry suite"},
        {"gauge", "Gauge transform with symmetry and off-zone vanishing checks"},
        {"heat", "Expansion coefficients a_j from closed forms and the heat-invariant engine"},
        {"bloch", "Bloch oracle values of e_λ on the configured ladder"},
        {"compare", "Residual ladders as CSV"},
        {"validate", "Full property suite as JSON"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_path, "Output file (stdout when absent)");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "Override the configured seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = parse_config(config_path);
        if (seed_given) cfg.seed = seed;
        const std::string out = out_path.empty() ? cfg.out : out_path;
        if (cmd == "zones") return run_zones(cfg, out);
        if (cmd == "gauge") return run_gauge_cmd(cfg, out);
        if (cmd == "heat") return run_heat(cfg, out);
        if (cmd == "bloch") return run_bloch(cfg, out);
        if (cmd == "compare") return run_compare(cfg, out);
        return run_validate(cfg, out);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return is_config_error(e.code()) ? kConfigError : kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}
