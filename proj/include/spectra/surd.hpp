#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace spectra {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "p", "-p", "p/q". Throws Error(Malformed) on anything else.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);
double to_double(const Rational& q);

// Element a + b*sqrt(D) of Q(sqrt D). D == 0 means the element is rational.
class Surd {
public:
    Surd() = default;
    Surd(int v) : a_(v) {}
    Surd(const Rational& a) : a_(a) {}
    Surd(const Rational& a, const Rational& b, std::int64_t D);

    const Rational& rational_part() const { return a_; }
    const Rational& surd_part() const { return b_; }
    std::int64_t radicand() const { return D_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    double to_double() const;

    Surd operator-() const;
    Surd& operator+=(const Surd& o);
    Surd& operator-=(const Surd& o);
    Surd& operator*=(const Surd& o);
    Surd& operator/=(const Surd& o);
    friend Surd operator+(Surd x, const Surd& y) { return x += y; }
    friend Surd operator-(Surd x, const Surd& y) { return x -= y; }
    friend Surd operator*(Surd x, const Surd& y) { return x *= y; }
    friend Surd operator/(Surd x, const Surd& y) { return x /= y; }

    friend bool operator==(const Surd& x, const Surd& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const Surd& x, const Surd& y) { return !(x == y); }
    // Lexicographic key order on (a, b); not the numeric order.
    friend bool key_less(const Surd& x, const Surd& y);

    std::string to_string() const;

private:
    static std::int64_t merge(std::int64_t d1, std::int64_t d2);
    void normalize() {
        if (b_ == 0) D_ = 0;
    }

    Rational a_{0};
    Rational b_{0};
    std::int64_t D_ = 0;
};

inline bool key_less(const Surd& x, const Surd& y) {
    if (x.rational_part() != y.rational_part()) return x.rational_part() < y.rational_part();
    return x.surd_part() < y.surd_part();
}

}  // namespace spectra
