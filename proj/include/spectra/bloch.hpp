#pragma once

#include "spectra/potential.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace spectra {

// Dual-lattice points {m ∈ ℤ^d : |m| ≤ M_cut} in lexicographic order.
struct TruncationSet {
    int d = 1;
    int M_cut = 0;
    std::vector<std::vector<int>> points;
    std::vector<double> comp0, comp1;   // coordinates split by axis (comp1 empty for d = 1)

    static TruncationSet build(int d, int M_cut);
    std::size_t size() const { return points.size(); }
    // Position of m, or −1 when outside the set.
    long index_of(const std::vector<int>& m) const;

private:
    std::vector<long> lookup_;
};

struct FiberMatrix {
    Eigen::VectorXd k;
    Eigen::MatrixXcd M;   // M[m′, m] = |k+m|² δ + b̂(m′ − m)
};

struct BlochSpectrum {
    Eigen::VectorXd k;
    Eigen::VectorXd E;    // ascending
    Eigen::MatrixXcd C;   // column n holds c_{n, m}
};

// Throws NonLatticeFrequencies when b has non-integral frequencies.
FiberMatrix build_fiber(const Eigen::VectorXd& k, const Potential& b, int M_cut);
BlochSpectrum solve_fiber(const Eigen::VectorXd& k, const Potential& b, int M_cut);

enum class OracleMode {
    Auto,           // band-resolved in d = 1, midpoint otherwise
    Midpoint,       // uniform midpoint k-grid with the ≤ / < average
    BandResolved,   // d = 1 only: Gauss–Legendre per band on each half zone
};

struct OracleConfig {
    int M_cut = 64;
    int N_k = 256;
    OracleMode mode = OracleMode::Auto;
    int panels = 8;          // band-resolved: Gauss–Legendre panels per half zone
    int partial_panels = 4;  // band-resolved: panels on the occupied part of a crossing band
};

struct PointPair {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

// result[p][l] = e_{λ_l}(x_p, y_p). Throws TruncationCeiling when max λ > (M_cut/2)².
std::vector<std::vector<std::complex<double>>> spectral_function_batch(const std::vector<double>& lambdas,
                                                                       const std::vector<PointPair>& pairs,
                                                                       const Potential& b, const OracleConfig& cfg);

double spectral_function(double lambda, const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Potential& b,
                         const OracleConfig& cfg);
// N(λ; x) = e_λ(x, x).
double local_density(double lambda, const Eigen::VectorXd& x, const Potential& b, const OracleConfig& cfg);

}  // namespace spectra
