#include "spectra/surd.hpp"

#include "spectra/errors.hpp"

#include <cmath>
#include <regex>

namespace spectra {

Rational parse_rational(const std::string& text) {
    static const std::regex pattern(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw Error(ErrorCode::Malformed, "not a rational literal: '" + text + "'");
    }
    boost::multiprecision::cpp_int num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
    boost::multiprecision::cpp_int den(1);
    if (m[2].matched) {
        den = boost::multiprecision::cpp_int(m[2].str());
        if (den == 0) throw Error(ErrorCode::Malformed, "zero denominator in '" + text + "'");
    }
    return Rational(num, den);
}

std::string format_rational(const Rational& q) {
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Surd::Surd(const Rational& a, const Rational& b, std::int64_t D) : a_(a), b_(b), D_(D) {
    if (b_ != 0 && D_ <= 1) {
        throw Error(ErrorCode::UnsupportedGenerators, "surd part needs a radicand D > 1");
    }
    normalize();
}

std::int64_t Surd::merge(std::int64_t d1, std::int64_t d2) {
    if (d1 == 0) return d2;
    if (d2 == 0 || d1 == d2) return d1;
    throw Error(ErrorCode::UnsupportedGenerators, "arithmetic mixes two different surds");
}

double Surd::to_double() const {
    double v = spectra::to_double(a_);
    if (b_ != 0) v += spectra::to_double(b_) * std::sqrt(static_cast<double>(D_));
    return v;
}

Surd Surd::operator-() const {
    Surd r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

Surd& Surd::operator+=(const Surd& o) {
    std::int64_t D = merge(D_, o.D_);
    a_ += o.a_;
    b_ += o.b_;
    D_ = D;
    normalize();
    return *this;
}

Surd& Surd::operator-=(const Surd& o) { return *this += -o; }

Surd& Surd::operator*=(const Surd& o) {
    std::int64_t D = merge(D_, o.D_);
    Rational a = a_ * o.a_ + b_ * o.b_ * Rational(D);
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    D_ = D;
    normalize();
    return *this;
}

Surd& Surd::operator/=(const Surd& o) {
    if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero in Q(sqrt D)");
    // (a + b√D)^{-1} = (a − b√D)/(a² − D b²); the norm is nonzero since √D is irrational.
    Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(o.D_);
    Surd inv(o.a_ / norm, -o.b_ / norm, o.b_ == 0 ? 0 : o.D_);
    return *this *= inv;
}

std::string Surd::to_string() const {
    if (b_ == 0) return format_rational(a_);
    return format_rational(a_) + "+" + format_rational(b_) + "*sqrt(" + std::to_string(D_) + ")";
}

}  // namespace spectra
