#pragma once

#include "spectra/frequency.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace spectra {

using SurdMatrix = std::vector<std::vector<Surd>>;

// Reduced row echelon form over Q(sqrt D); pivots are taken left to right,
// zero rows dropped, pivot entries scaled to one.
SurdMatrix rref(SurdMatrix rows);
int exact_rank(const std::vector<FrequencyVector>& vectors);
// Rank of the vectors regarded as rational vectors of length d*g (generator coordinates split).
int rational_rank(const std::vector<FrequencyVector>& vectors);
// Basis of {c : sum_i c_i rows_i = 0}.
SurdMatrix left_nullspace(const std::vector<FrequencyVector>& vectors);

FrequencySet algebraic_sum(const FrequencySet& S, int k);

struct ConditionAResult {
    bool pass = true;
    std::vector<FrequencyVector> witness;
    std::size_t tuples_checked = 0;
};

ConditionAResult check_condition_A(const FrequencySet& S, int k_max);

class QuasiLatticeSubspace {
public:
    QuasiLatticeSubspace() = default;
    // Span of the given vectors; dependent vectors are fine.
    QuasiLatticeSubspace(int d, const std::vector<FrequencyVector>& spanning);

    int ambient_dim() const { return d_; }
    int dim() const { return static_cast<int>(canon_.size()); }
    const SurdMatrix& canonical() const { return canon_; }
    // Canonical rows as frequency vectors (an exact basis).
    std::vector<FrequencyVector> basis() const;
    // Exact basis with pairwise orthogonal rows (no normalization).
    std::vector<FrequencyVector> orthogonal_basis() const;
    // d x m matrix whose columns are an orthonormal basis.
    Eigen::MatrixXd orthonormal() const;

    bool contains(const FrequencyVector& v) const;
    bool contains(const QuasiLatticeSubspace& other) const;
    QuasiLatticeSubspace intersect(const QuasiLatticeSubspace& other) const;
    QuasiLatticeSubspace sum(const QuasiLatticeSubspace& other) const;

    friend bool operator==(const QuasiLatticeSubspace& a, const QuasiLatticeSubspace& b) {
        return a.d_ == b.d_ && a.canon_ == b.canon_;
    }
    friend bool operator<(const QuasiLatticeSubspace& a, const QuasiLatticeSubspace& b);

    std::string to_string() const;

private:
    int d_ = 0;
    SurdMatrix canon_;
};

std::vector<QuasiLatticeSubspace> enumerate_subspaces(const FrequencySet& S, int m);
// All dimensions 0..d, ordered by dimension then canonical form.
std::vector<QuasiLatticeSubspace> enumerate_all_subspaces(const FrequencySet& S);

// Exact orthogonal projection of v onto the orthogonal complement of the span of `ortho`
// (pairwise orthogonal, nonzero rows).
FrequencyVector project_out(const FrequencyVector& v, const std::vector<FrequencyVector>& ortho);
// sin of the smallest principal angle between U and V after removing W = U ∩ V.
double subspace_sine(const QuasiLatticeSubspace& U, const QuasiLatticeSubspace& V);

struct DiophantineReport {
    double s = 1.0;
    double r = 0.0;
    double R = 0.0;
    nlohmann::json to_json() const { return {{"s", s}, {"r", r}, {"R", R}}; }
};

DiophantineReport diophantine_constants(const FrequencySet& S);

}  // namespace spectra
