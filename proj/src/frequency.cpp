#include "spectra/frequency.hpp"

#include "spectra/errors.hpp"
#include "spectra/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace spectra {

GeneratorBasis GeneratorBasis::from_surds(const std::vector<std::int64_t>& surds) {
    if (surds.size() > 1) {
        throw Error(ErrorCode::UnsupportedGenerators, "at most one quadratic surd is supported");
    }
    GeneratorBasis b;
    if (!surds.empty()) {
        std::int64_t D = surds.front();
        auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(D))));
        for (std::int64_t r = std::max<std::int64_t>(0, root - 1); r <= root + 1; ++r) {
            if (r * r == D) throw Error(ErrorCode::UnsupportedGenerators, "radicand is a perfect square");
        }
        if (D < 2) throw Error(ErrorCode::UnsupportedGenerators, "radicand must be at least 2");
        b.surd = D;
    }
    return b;
}

FrequencyVector FrequencyVector::unit(int d, int axis) {
    FrequencyVector v(d);
    v[axis] = Surd(1);
    return v;
}

FrequencyVector FrequencyVector::from_ints(const std::vector<long>& v) {
    FrequencyVector r(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) r.c_[i] = Surd(Rational(v[i]));
    return r;
}

bool FrequencyVector::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Surd& s) { return s.is_zero(); });
}

bool FrequencyVector::is_rational() const {
    return std::all_of(c_.begin(), c_.end(), [](const Surd& s) { return s.is_rational(); });
}

bool FrequencyVector::is_integral() const {
    return std::all_of(c_.begin(), c_.end(), [](const Surd& s) {
        return s.is_rational() && boost::multiprecision::denominator(s.rational_part()) == 1;
    });
}

FrequencyVector FrequencyVector::operator-() const {
    FrequencyVector r = *this;
    for (auto& s : r.c_) s = -s;
    return r;
}

FrequencyVector& FrequencyVector::operator+=(const FrequencyVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FrequencyVector& FrequencyVector::operator-=(const FrequencyVector& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FrequencyVector operator*(const Surd& s, FrequencyVector v) {
    for (auto& c : v.c_) c *= s;
    return v;
}

bool operator<(const FrequencyVector& a, const FrequencyVector& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end(), key_less);
}

Surd FrequencyVector::dot(const FrequencyVector& o) const {
    Surd acc;
    for (std::size_t i = 0; i < c_.size(); ++i) acc += c_[i] * o.c_[i];
    return acc;
}

Eigen::VectorXd FrequencyVector::real() const {
    Eigen::VectorXd v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = c_[static_cast<std::size_t>(i)].to_double();
    return v;
}

std::string FrequencyVector::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += c_[i].to_string();
    }
    return s + ")";
}

FrequencySet::FrequencySet(int d, GeneratorBasis basis, std::vector<FrequencyVector> elements)
    : d_(d), basis_(basis), elems_(std::move(elements)) {
    for (const auto& e : elems_) {
        if (e.dim() != d_) throw Error(ErrorCode::InvalidArgument, "frequency dimension mismatch");
        for (const auto& c : e.coords()) {
            if (c.radicand() != 0 && c.radicand() != basis_.surd) {
                throw Error(ErrorCode::UnsupportedGenerators, "frequency uses an undeclared surd");
            }
        }
    }
    elems_.push_back(FrequencyVector::zero(d_));
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

std::vector<FrequencyVector> FrequencySet::nonzero() const {
    std::vector<FrequencyVector> out;
    for (const auto& e : elems_)
        if (!e.is_zero()) out.push_back(e);
    return out;
}

bool FrequencySet::contains(const FrequencyVector& v) const {
    return std::binary_search(elems_.begin(), elems_.end(), v);
}

bool FrequencySet::is_symmetric() const {
    return std::all_of(elems_.begin(), elems_.end(), [this](const FrequencyVector& e) { return contains(-e); });
}

bool FrequencySet::spans() const { return exact_rank(elems_) == d_; }

}  // namespace spectra
