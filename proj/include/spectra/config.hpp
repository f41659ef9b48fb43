#pragma once

#include "spectra/bloch.hpp"
#include "spectra/errors.hpp"
#include "spectra/lattice.hpp"
#include "spectra/potential.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace spectra {

struct LadderSpec {
    double lambda_min = 100.0;
    double lambda_max = 10000.0;
    int count = 40;
    std::vector<double> values() const;
    friend bool operator==(const LadderSpec&, const LadderSpec&) = default;
};

struct RunConfig {
    int d = 1;
    GeneratorBasis basis;
    Potential potential;
    // Resonance-zone and gauge parameters.
    double rho0 = 1000.0;
    int ktilde = 2;
    int k_max = 2;
    std::vector<double> alpha;   // empty selects the defaults
    double beta = 0.0;           // 0 selects α₁/2
    // Oracle.
    int M_cut = 64;
    int N_k = 256;
    OracleMode mode = OracleMode::Auto;
    LadderSpec ladder;
    int heat_order = 2;
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> y;
    std::uint64_t seed = 1;
    int samples = 1000;
    std::string out;

    OracleConfig oracle() const;
    FrequencySet frequencies() const;
    nlohmann::json to_json() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

struct ConfigIssue {
    ErrorCode code;
    std::string field;
    std::string message;
};

// Carries every violation found; code() is the code of the first one.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

RunConfig parse_config_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& path);

// Oracle-dependent commands need a periodic potential in d ∈ {1, 2}.
void require_oracle_support(const RunConfig& cfg);

}  // namespace spectra
