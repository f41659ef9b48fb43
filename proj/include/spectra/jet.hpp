#pragma once

#include <complex>
#include <vector>

namespace spectra {

using MultiIndex = std::vector<int>;

// Truncated multivariate Taylor polynomial: coefficients of (ξ − ξ₀)^α / for |α| ≤ order.
class Jet {
public:
    struct Layout;

    Jet() = default;
    Jet(int nvars, int order);

    static Jet constant(int nvars, int order, std::complex<double> c);
    // The coordinate function ξ_axis expanded at x0.
    static Jet variable(int nvars, int order, int axis, double x0);

    int nvars() const;
    int order() const;
    std::complex<double> value() const { return c_.front(); }
    // Taylor coefficient of the monomial α.
    std::complex<double> coeff(const MultiIndex& alpha) const;
    // ∂^α at the expansion point (coefficient times α!).
    std::complex<double> derivative(const MultiIndex& alpha) const;
    // Every multi-index with |α| ≤ order, graded order.
    const std::vector<MultiIndex>& indices() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(std::complex<double> s);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, std::complex<double> s) { return a *= s; }

    // g(this) given derivs[k] = g^{(k)}(value()) for k = 0..order.
    Jet compose(const std::vector<std::complex<double>>& derivs) const;
    Jet reciprocal() const;
    Jet sqrt() const;
    Jet exp() const;
    // Sign-flipped copy when the value is negative; the kink at 0 is ignored.
    Jet abs() const;
    // ∂^s of the jet, truncated to new_order (needs new_order + |s| ≤ order()).
    Jet differentiate(const MultiIndex& s, int new_order) const;

private:
    const Layout* layout_ = nullptr;
    std::vector<std::complex<double>> c_;
};

// Derivatives ι^{(k)}(z), k = 0..order, of the fixed smooth step.
std::vector<double> smooth_step_derivatives(double z, int order);
double smooth_step(double z);

}  // namespace spectra
