#include "spectra/potential.hpp"

#include "spectra/errors.hpp"

namespace spectra {

Potential Potential::mathieu(const Rational& v) { return axes(1, v); }

Potential Potential::axes(int d, const Rational& v) {
    Potential b(d, {});
    for (int i = 0; i < d; ++i) {
        b.set(FrequencyVector::unit(d, i), ComplexSurd(Surd(v)));
        b.set(-FrequencyVector::unit(d, i), ComplexSurd(Surd(v)));
    }
    return b;
}

void Potential::set(const FrequencyVector& theta, const ComplexSurd& c) {
    if (theta.dim() != d_) throw Error(ErrorCode::InvalidArgument, "potential frequency has wrong dimension");
    if (c.is_zero()) {
        coeffs_.erase(theta);
    } else {
        coeffs_[theta] = c;
    }
}

ComplexSurd Potential::coefficient(const FrequencyVector& theta) const {
    auto it = coeffs_.find(theta);
    return it == coeffs_.end() ? ComplexSurd() : it->second;
}

FrequencySet Potential::frequency_set() const {
    std::vector<FrequencyVector> el;
    for (const auto& [t, c] : coeffs_) {
        el.push_back(t);
        el.push_back(-t);
    }
    return FrequencySet(d_, basis_, el);
}

bool Potential::is_hermitian() const {
    for (const auto& [t, c] : coeffs_)
        if (coefficient(-t) != c.conj()) return false;
    return true;
}

bool Potential::is_periodic() const {
    for (const auto& [t, c] : coeffs_)
        if (!t.is_integral()) return false;
    return true;
}

std::complex<double> Potential::value(const Eigen::VectorXd& x) const {
    std::complex<double> acc = 0.0;
    for (const auto& [t, c] : coeffs_) acc += c.value() * std::polar(1.0, t.real().dot(x));
    return acc;
}

Potential Potential::scaled(const ComplexSurd& c) const {
    Potential r(d_, basis_);
    for (const auto& [t, v] : coeffs_) r.set(t, c * v);
    return r;
}

}  // namespace spectra
