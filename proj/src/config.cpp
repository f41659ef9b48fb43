#include "spectra/config.hpp"

#include "spectra/symbol.hpp"

#include <fstream>
#include <sstream>

namespace spectra {

namespace {

using nlohmann::json;

const char* mode_name(OracleMode m) {
    switch (m) {
        case OracleMode::Midpoint: return "midpoint";
        case OracleMode::BandResolved: return "band";
        default: return "auto";
    }
}

json surd_to_json(const Surd& s, const GeneratorBasis& basis) {
    if (basis.surd == 0) return format_rational(s.rational_part());
    return json::array({format_rational(s.rational_part()), format_rational(s.surd_part())});
}

Surd surd_from_json(const json& j, const GeneratorBasis& basis) {
    if (j.is_string()) return Surd(parse_rational(j.get<std::string>()));
    if (j.is_array() && j.size() == 2 && basis.surd != 0)
        return Surd(parse_rational(j[0].get<std::string>()), parse_rational(j[1].get<std::string>()), basis.surd);
    throw Error(ErrorCode::Malformed, "coefficient part must be a \"p/q\" string or a [rational, surd] pair");
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Collects issues instead of stopping at the first one.
struct Reader {
    std::vector<ConfigIssue> issues;

    void fail(ErrorCode c, const std::string& field, const std::string& msg) { issues.push_back({c, field, msg}); }

    template <class T>
    void get(const json& obj, const char* key, T& dst, const std::string& prefix) {
        if (!obj.contains(key)) return;
        try {
            dst = obj.at(key).get<T>();
        } catch (const std::exception&) {
            fail(ErrorCode::Malformed, prefix + key, "wrong type");
        }
    }

    std::vector<Eigen::VectorXd> points(const json& obj, const char* key, int d) {
        std::vector<Eigen::VectorXd> out;
        if (!obj.contains(key)) return out;
        const json& arr = obj.at(key);
        if (!arr.is_array()) {
            fail(ErrorCode::Malformed, std::string("points.") + key, "must be a list of points");
            return out;
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string field = std::string("points.") + key + "[" + std::to_string(i) + "]";
            try {
                const auto v = arr[i].get<std::vector<double>>();
                if (static_cast<int>(v.size()) != d) {
                    fail(ErrorCode::Malformed, field, "point has wrong dimension");
                    continue;
                }
                out.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), d));
            } catch (const std::exception&) {
                fail(ErrorCode::Malformed, field, "point must be a list of numbers");
            }
        }
        return out;
    }
};

}  // namespace

std::vector<double> LadderSpec::values() const {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lambda_min : lambda_min * std::pow(lambda_max / lambda_min, double(i) / (count - 1)));
    return out;
}

OracleConfig RunConfig::oracle() const {
    OracleConfig c;
    c.M_cut = M_cut;
    c.N_k = N_k;
    c.mode = mode;
    return c;
}

FrequencySet RunConfig::frequencies() const {
    return potential.frequency_set();
}

json RunConfig::to_json() const {
    json terms = json::array();
    for (const auto& [th, c] : potential.coefficients())
        terms.push_back({{"theta", frequency_to_json(th, basis)},
                         {"coeff", json::array({surd_to_json(c.re, basis), surd_to_json(c.im, basis)})}});
    json xs = json::array(), ys = json::array();
    for (const auto& p : x) xs.push_back(vector_to_json(p));
    for (const auto& p : y) ys.push_back(vector_to_json(p));
    json zones = {{"rho0", rho0}, {"ktilde", ktilde}, {"k_max", k_max}};
    if (!alpha.empty()) zones["alpha"] = alpha;
    if (beta > 0.0) zones["beta"] = beta;
    json j = {{"dimension", d},
              {"surd", basis.surd},
              {"potential", terms},
              {"zones", zones},
              {"oracle", {{"M_cut", M_cut}, {"N_k", N_k}, {"mode", mode_name(mode)}}},
              {"ladder", {{"lambda_min", ladder.lambda_min}, {"lambda_max", ladder.lambda_max}, {"count", ladder.count}}},
              {"heat", {{"order", heat_order}}},
              {"points", {{"x", xs}, {"y", ys}}},
              {"seed", seed},
              {"samples", samples}};
    if (!out.empty()) j["out"] = out;
    return j;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    auto same_points = [](const std::vector<Eigen::VectorXd>& p, const std::vector<Eigen::VectorXd>& q) {
        if (p.size() != q.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i].size() != q[i].size() || p[i] != q[i]) return false;
        return true;
    };
    return a.d == b.d && a.basis == b.basis && a.potential.coefficients() == b.potential.coefficients() &&
           a.rho0 == b.rho0 && a.ktilde == b.ktilde && a.k_max == b.k_max && a.alpha == b.alpha && a.beta == b.beta &&
           a.M_cut == b.M_cut && a.N_k == b.N_k && a.mode == b.mode && a.ladder == b.ladder &&
           a.heat_order == b.heat_order && same_points(a.x, b.x) && same_points(a.y, b.y) && a.seed == b.seed &&
           a.samples == b.samples && a.out == b.out;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(issues.empty() ? ErrorCode::Malformed : issues.front().code,
            [&] {
                std::ostringstream os;
                os << issues.size() << " configuration problem(s)";
                for (const auto& i : issues) os << "\n  " << error_name(i.code) << " at " << i.field << ": " << i.message;
                return os.str();
            }()),
      issues_(std::move(issues)) {}

RunConfig parse_config_json(const json& j) {
    Reader rd;
    RunConfig cfg;
    if (!j.is_object()) throw ConfigError({{ErrorCode::Malformed, "", "top level must be an object"}});

    static const std::vector<std::string> known{"dimension", "surd", "potential", "zones", "oracle", "ladder",
                                                "heat", "points", "seed", "samples", "out"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) rd.fail(ErrorCode::Malformed, k, "unknown key");

    if (!j.contains("dimension")) rd.fail(ErrorCode::Malformed, "dimension", "missing");
    rd.get(j, "dimension", cfg.d, "");
    if (cfg.d < 1) rd.fail(ErrorCode::UnsupportedDimension, "dimension", "must be at least 1");

    std::int64_t surd = 0;
    rd.get(j, "surd", surd, "");
    try {
        cfg.basis = surd == 0 ? GeneratorBasis{} : GeneratorBasis::from_surds({surd});
    } catch (const Error& e) {
        rd.fail(ErrorCode::Malformed, "surd", e.what());
    }

    cfg.potential = Potential(std::max(cfg.d, 1), cfg.basis);
    if (!j.contains("potential") || !j.at("potential").is_array()) {
        rd.fail(ErrorCode::Malformed, "potential", "must be a list of {theta, coeff}");
    } else {
        const json& terms = j.at("potential");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string field = "potential[" + std::to_string(i) + "]";
            try {
                const FrequencyVector th = frequency_from_json(terms[i].at("theta"), cfg.basis);
                if (th.dim() != cfg.d) {
                    rd.fail(ErrorCode::Malformed, field + ".theta", "frequency has wrong dimension");
                    continue;
                }
                const json& c = terms[i].at("coeff");
                if (!c.is_array() || c.size() != 2) {
                    rd.fail(ErrorCode::Malformed, field + ".coeff", "complex coefficient must be [re, im]");
                    continue;
                }
                if (!cfg.potential.coefficient(th).is_zero()) {
                    rd.fail(ErrorCode::Malformed, field + ".theta", "frequency listed twice");
                    continue;
                }
                cfg.potential.set(th, ComplexSurd{surd_from_json(c[0], cfg.basis), surd_from_json(c[1], cfg.basis)});
            } catch (const Error& e) {
                rd.fail(e.code() == ErrorCode::Malformed ? ErrorCode::Malformed : e.code(), field, e.what());
            } catch (const std::exception& e) {
                rd.fail(ErrorCode::Malformed, field, e.what());
            }
        }
        // One report per ±θ pair.
        const auto& coeffs = cfg.potential.coefficients();
        for (const auto& [th, c] : coeffs)
            if (cfg.potential.coefficient(-th) != c.conj() && (!(-th < th) || !coeffs.count(-th)))
                rd.fail(ErrorCode::NonHermitianPotential, "potential",
                        "coefficient at " + th.to_string() + " is not the conjugate of the one at its negative");
    }

    if (j.contains("zones")) {
        const json& z = j.at("zones");
        rd.get(z, "rho0", cfg.rho0, "zones.");
        rd.get(z, "ktilde", cfg.ktilde, "zones.");
        rd.get(z, "k_max", cfg.k_max, "zones.");
        rd.get(z, "alpha", cfg.alpha, "zones.");
        rd.get(z, "beta", cfg.beta, "zones.");
        if (!(cfg.rho0 > 0.0)) rd.fail(ErrorCode::Malformed, "zones.rho0", "must be positive");
        if (cfg.ktilde < 1) rd.fail(ErrorCode::Malformed, "zones.ktilde", "must be at least 1");
        if (cfg.k_max < cfg.ktilde) rd.fail(ErrorCode::Malformed, "zones.k_max", "must be at least ktilde");
        if (!cfg.alpha.empty() && static_cast<int>(cfg.alpha.size()) != cfg.d)
            rd.fail(ErrorCode::Malformed, "zones.alpha", "needs one entry per dimension");
        if (cfg.beta < 0.0) rd.fail(ErrorCode::Malformed, "zones.beta", "must be non-negative");
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        rd.get(o, "M_cut", cfg.M_cut, "oracle.");
        rd.get(o, "N_k", cfg.N_k, "oracle.");
        std::string mode = "auto";
        rd.get(o, "mode", mode, "oracle.");
        if (mode == "auto") cfg.mode = OracleMode::Auto;
        else if (mode == "midpoint") cfg.mode = OracleMode::Midpoint;
        else if (mode == "band") cfg.mode = OracleMode::BandResolved;
        else rd.fail(ErrorCode::Malformed, "oracle.mode", "expected auto, midpoint or band");
        if (cfg.M_cut < 1) rd.fail(ErrorCode::Malformed, "oracle.M_cut", "must be positive");
        if (cfg.N_k < 1) rd.fail(ErrorCode::Malformed, "oracle.N_k", "must be positive");
    }
    if (j.contains("ladder")) {
        const json& l = j.at("ladder");
        rd.get(l, "lambda_min", cfg.ladder.lambda_min, "ladder.");
        rd.get(l, "lambda_max", cfg.ladder.lambda_max, "ladder.");
        rd.get(l, "count", cfg.ladder.count, "ladder.");
        if (!(cfg.ladder.lambda_min > 0.0 && cfg.ladder.lambda_max >= cfg.ladder.lambda_min))
            rd.fail(ErrorCode::Malformed, "ladder", "need 0 < lambda_min ≤ lambda_max");
        if (cfg.ladder.count < 1) rd.fail(ErrorCode::Malformed, "ladder.count", "must be positive");
    }
    if (j.contains("heat")) {
        rd.get(j.at("heat"), "order", cfg.heat_order, "heat.");
        if (cfg.heat_order < 0 || cfg.heat_order > 2)
            rd.fail(ErrorCode::Malformed, "heat.order", "supported orders are 0, 1 and 2");
    }
    if (j.contains("points")) {
        cfg.x = rd.points(j.at("points"), "x", cfg.d);
        cfg.y = rd.points(j.at("points"), "y", cfg.d);
        if (!cfg.y.empty() && cfg.y.size() != cfg.x.size())
            rd.fail(ErrorCode::Malformed, "points.y", "needs one y per x");
    }
    rd.get(j, "seed", cfg.seed, "");
    rd.get(j, "samples", cfg.samples, "");
    rd.get(j, "out", cfg.out, "");
    if (cfg.samples < 1) rd.fail(ErrorCode::Malformed, "samples", "must be positive");

    if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({{ErrorCode::Malformed, path, "cannot open file"}});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({{ErrorCode::Malformed, path, e.what()}});
    }
    return parse_config_json(j);
}

void require_oracle_support(const RunConfig& cfg) {
    if (cfg.d != 1 && cfg.d != 2)
        throw Error(ErrorCode::UnsupportedDimension, "the Bloch oracle handles d ∈ {1, 2}, got d = " + std::to_string(cfg.d));
    if (!cfg.potential.is_periodic())
        throw Error(ErrorCode::NonLatticeFrequencies, "the Bloch oracle needs frequencies on the integer lattice");
}

}  // namespace spectra
