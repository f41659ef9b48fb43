#pragma once

#include "spectra/frequency.hpp"

#include <complex>
#include <map>

namespace spectra {

// Gaussian element re + i·im with re, im in Q(sqrt D).
struct ComplexSurd {
    Surd re;
    Surd im;

    ComplexSurd() = default;
    ComplexSurd(Surd r, Surd i = Surd()) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    ComplexSurd conj() const { return {re, -im}; }
    std::complex<double> value() const { return {re.to_double(), im.to_double()}; }

    ComplexSurd operator-() const { return {-re, -im}; }
    ComplexSurd& operator+=(const ComplexSurd& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexSurd& operator-=(const ComplexSurd& o) { return *this += -o; }
    friend ComplexSurd operator+(ComplexSurd a, const ComplexSurd& b) { return a += b; }
    friend ComplexSurd operator-(ComplexSurd a, const ComplexSurd& b) { return a -= b; }
    friend ComplexSurd operator*(const ComplexSurd& a, const ComplexSurd& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const ComplexSurd& a, const ComplexSurd& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const ComplexSurd& a, const ComplexSurd& b) { return !(a == b); }
};

// Finite Fourier series b(x) = Σ b̂(θ) e^{i⟨θ,x⟩} with exact coefficients.
class Potential {
public:
    Potential() = default;
    Potential(int d, GeneratorBasis basis) : d_(d), basis_(basis) {}

    static Potential zero(int d) { return Potential(d, {}); }
    // b(x) = 2v cos x in d = 1, so b̂(±1) = v.
    static Potential mathieu(const Rational& v);
    // b(x) = 2v Σ_i cos x_i, i.e. b̂(±e_i) = v.
    static Potential axes(int d, const Rational& v);

    int dim() const { return d_; }
    const GeneratorBasis& basis() const { return basis_; }
    const std::map<FrequencyVector, ComplexSurd>& coefficients() const { return coeffs_; }

    void set(const FrequencyVector& theta, const ComplexSurd& c);
    ComplexSurd coefficient(const FrequencyVector& theta) const;
    std::complex<double> coefficient_value(const FrequencyVector& theta) const { return coefficient(theta).value(); }

    // Support with 0 added, closed under negation.
    FrequencySet frequency_set() const;
    bool is_hermitian() const;
    bool is_zero() const { return coeffs_.empty(); }
    bool is_periodic() const;

    std::complex<double> value(const Eigen::VectorXd& x) const;
    Potential scaled(const ComplexSurd& c) const;

private:
    int d_ = 0;
    GeneratorBasis basis_;
    std::map<FrequencyVector, ComplexSurd> coeffs_;
};

}  // namespace spectra
