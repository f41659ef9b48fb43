#pragma once

#include "spectra/surd.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace spectra {

// Generators 1 and optionally sqrt(surd). surd == 0 means the periodic case.
struct GeneratorBasis {
    std::int64_t surd = 0;

    int size() const { return surd == 0 ? 1 : 2; }
    // One entry per irrational generator requested; more than one is refused.
    static GeneratorBasis from_surds(const std::vector<std::int64_t>& surds);
    friend bool operator==(const GeneratorBasis&, const GeneratorBasis&) = default;
};

class FrequencyVector {
public:
    FrequencyVector() = default;
    explicit FrequencyVector(int d) : c_(static_cast<std::size_t>(d)) {}
    explicit FrequencyVector(std::vector<Surd> coords) : c_(std::move(coords)) {}

    static FrequencyVector zero(int d) { return FrequencyVector(d); }
    static FrequencyVector unit(int d, int axis);
    static FrequencyVector from_ints(const std::vector<long>& v);

    int dim() const { return static_cast<int>(c_.size()); }
    const Surd& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Surd& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<Surd>& coords() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    bool is_integral() const;

    FrequencyVector operator-() const;
    FrequencyVector& operator+=(const FrequencyVector& o);
    FrequencyVector& operator-=(const FrequencyVector& o);
    friend FrequencyVector operator+(FrequencyVector a, const FrequencyVector& b) { return a += b; }
    friend FrequencyVector operator-(FrequencyVector a, const FrequencyVector& b) { return a -= b; }
    friend FrequencyVector operator*(const Surd& s, FrequencyVector v);

    friend bool operator==(const FrequencyVector& a, const FrequencyVector& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FrequencyVector& a, const FrequencyVector& b) { return !(a == b); }
    friend bool operator<(const FrequencyVector& a, const FrequencyVector& b);

    Surd dot(const FrequencyVector& o) const;
    Surd norm_sq() const { return dot(*this); }
    Eigen::VectorXd real() const;
    double norm() const { return real().norm(); }

    std::string to_string() const;

private:
    std::vector<Surd> c_;
};

// Symmetric finite set containing 0, kept sorted and duplicate-free.
class FrequencySet {
public:
    FrequencySet() = default;
    FrequencySet(int d, GeneratorBasis basis, std::vector<FrequencyVector> elements);

    int dim() const { return d_; }
    const GeneratorBasis& basis() const { return basis_; }
    const std::vector<FrequencyVector>& elements() const { return elems_; }
    std::vector<FrequencyVector> nonzero() const;
    std::size_t size() const { return elems_.size(); }
    bool contains(const FrequencyVector& v) const;

    bool is_symmetric() const;
    bool spans() const;

private:
    int d_ = 0;
    GeneratorBasis basis_;
    std::vector<FrequencyVector> elems_;
};

}  // namespace spectra
