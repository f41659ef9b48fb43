#include "spectra/lattice.hpp"

#include "spectra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spectra {

SurdMatrix rref(SurdMatrix rows) {
    if (rows.empty()) return rows;
    const std::size_t ncols = rows.front().size();
    std::size_t lead = 0;
    for (std::size_t col = 0; col < ncols && lead < rows.size(); ++col) {
        std::size_t piv = lead;
        while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[lead]);
        Surd inv = Surd(1) / rows[lead][col];
        for (auto& x : rows[lead]) x *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == lead || rows[r][col].is_zero()) continue;
            Surd f = rows[r][col];
            for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[lead][c];
        }
        ++lead;
    }
    rows.resize(lead);
    return rows;
}

namespace {

SurdMatrix as_rows(const std::vector<FrequencyVector>& vs) {
    SurdMatrix m;
    m.reserve(vs.size());
    for (const auto& v : vs) m.push_back(v.coords());
    return m;
}

std::size_t pivot_col(const std::vector<Surd>& row) {
    for (std::size_t c = 0; c < row.size(); ++c)
        if (!row[c].is_zero()) return c;
    return row.size();
}

}  // namespace

int exact_rank(const std::vector<FrequencyVector>& vectors) {
    return static_cast<int>(rref(as_rows(vectors)).size());
}

int rational_rank(const std::vector<FrequencyVector>& vectors) {
    SurdMatrix m;
    for (const auto& v : vectors) {
        std::vector<Surd> row;
        for (const auto& c : v.coords()) {
            row.emplace_back(c.rational_part());
            row.emplace_back(c.surd_part());
        }
        m.push_back(std::move(row));
    }
    return static_cast<int>(rref(std::move(m)).size());
}

SurdMatrix left_nullspace(const std::vector<FrequencyVector>& vectors) {
    const std::size_t n = vectors.size();
    if (n == 0) return {};
    const std::size_t d = static_cast<std::size_t>(vectors.front().dim());
    SurdMatrix t(d, std::vector<Surd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) t[j][i] = vectors[i][static_cast<int>(j)];
    SurdMatrix red = rref(std::move(t));
    std::vector<bool> is_pivot(n, false);
    std::vector<std::size_t> pivots;
    for (const auto& row : red) {
        std::size_t p = pivot_col(row);
        pivots.push_back(p);
        is_pivot[p] = true;
    }
    SurdMatrix basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Surd> c(n);
        c[free] = Surd(1);
        for (std::size_t r = 0; r < red.size(); ++r) c[pivots[r]] = -red[r][free];
        basis.push_back(std::move(c));
    }
    return basis;
}

FrequencySet algebraic_sum(const FrequencySet& S, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "algebraic_sum needs k >= 1");
    std::set<FrequencyVector> cur(S.elements().begin(), S.elements().end());
    for (int step = 1; step < k; ++step) {
        std::set<FrequencyVector> next;
        for (const auto& a : cur)
            for (const auto& b : S.elements()) next.insert(a + b);
        cur = std::move(next);
    }
    return FrequencySet(S.dim(), S.basis(), std::vector<FrequencyVector>(cur.begin(), cur.end()));
}

namespace {

// Representatives of ± classes with first nonzero coordinate positive,
// ordered by their real values.
std::vector<FrequencyVector> sign_representatives(const std::vector<FrequencyVector>& vs) {
    std::vector<FrequencyVector> reps;
    for (const auto& v : vs) {
        Eigen::VectorXd x = v.real();
        int i = 0;
        while (i < x.size() && v[i].is_zero()) ++i;
        if (i == x.size()) continue;
        reps.push_back(x[i] > 0 ? v : -v);
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    std::stable_sort(reps.begin(), reps.end(), [](const FrequencyVector& a, const FrequencyVector& b) {
        Eigen::VectorXd x = a.real(), y = b.real();
        return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
    });
    return reps;
}

}  // namespace

ConditionAResult check_condition_A(const FrequencySet& S, int k_max) {
    ConditionAResult res;
    const int d = S.dim();
    const auto reps = sign_representatives(algebraic_sum(S, k_max).nonzero());
    if (d == 1) {
        res.tuples_checked = reps.size();
        return res;
    }
    const std::size_t n = reps.size();
    if (n < static_cast<std::size_t>(d)) return res;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
        std::vector<FrequencyVector> tuple;
        for (auto i : idx) tuple.push_back(reps[i]);
        ++res.tuples_checked;
        if (exact_rank(tuple) < d && rational_rank(tuple) == d) {
            res.pass = false;
            res.witness = tuple;
            return res;
        }
        int pos = d - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(d - pos)) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return res;
}

QuasiLatticeSubspace::QuasiLatticeSubspace(int d, const std::vector<FrequencyVector>& spanning) : d_(d) {
    canon_ = rref(as_rows(spanning));
}

std::vector<FrequencyVector> QuasiLatticeSubspace::basis() const {
    std::vector<FrequencyVector> out;
    for (const auto& row : canon_) out.emplace_back(row);
    return out;
}

FrequencyVector project_out(const FrequencyVector& v, const std::vector<FrequencyVector>& ortho) {
    FrequencyVector r = v;
    for (const auto& o : ortho) r -= (v.dot(o) / o.norm_sq()) * o;
    return r;
}

std::vector<FrequencyVector> QuasiLatticeSubspace::orthogonal_basis() const {
    std::vector<FrequencyVector> out;
    for (const auto& b : basis()) {
        FrequencyVector p = project_out(b, out);
        if (!p.is_zero()) out.push_back(std::move(p));
    }
    return out;
}

Eigen::MatrixXd QuasiLatticeSubspace::orthonormal() const {
    auto ob = orthogonal_basis();
    Eigen::MatrixXd q(d_, static_cast<Eigen::Index>(ob.size()));
    for (std::size_t j = 0; j < ob.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = ob[j].real().normalized();
    return q;
}

bool QuasiLatticeSubspace::contains(const FrequencyVector& v) const {
    FrequencyVector r = v;
    for (const auto& row : canon_) {
        std::size_t p = pivot_col(row);
        Surd f = r[static_cast<int>(p)];
        if (f.is_zero()) continue;
        for (std::size_t c = 0; c < row.size(); ++c) r[static_cast<int>(c)] -= f * row[c];
    }
    return r.is_zero();
}

bool QuasiLatticeSubspace::contains(const QuasiLatticeSubspace& other) const {
    for (const auto& b : other.basis())
        if (!contains(b)) return false;
    return true;
}

QuasiLatticeSubspace QuasiLatticeSubspace::intersect(const QuasiLatticeSubspace& other) const {
    auto a = basis();
    auto b = other.basis();
    std::vector<FrequencyVector> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::vector<FrequencyVector> w;
    for (const auto& c : left_nullspace(all)) {
        FrequencyVector v = FrequencyVector::zero(d_);
        for (std::size_t i = 0; i < a.size(); ++i) v += c[i] * a[i];
        w.push_back(std::move(v));
    }
    return QuasiLatticeSubspace(d_, w);
}

QuasiLatticeSubspace QuasiLatticeSubspace::sum(const QuasiLatticeSubspace& other) const {
    auto a = basis();
    auto b = other.basis();
    a.insert(a.end(), b.begin(), b.end());
    return QuasiLatticeSubspace(d_, a);
}

bool operator<(const QuasiLatticeSubspace& a, const QuasiLatticeSubspace& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t r = 0; r < a.canon_.size(); ++r) {
        const auto& x = a.canon_[r];
        const auto& y = b.canon_[r];
        if (std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), key_less)) return true;
        if (std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end(), key_less)) return false;
    }
    return false;
}

std::string QuasiLatticeSubspace::to_string() const {
    if (canon_.empty()) return "{0}";
    std::string s = "span[";
    auto b = basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ";";
        s += b[i].to_string();
    }
    return s + "]";
}

std::vector<QuasiLatticeSubspace> enumerate_subspaces(const FrequencySet& S, int m) {
    const int d = S.dim();
    if (m < 0 || m > d) throw Error(ErrorCode::InvalidArgument, "subspace dimension out of range");
    std::set<QuasiLatticeSubspace> level{QuasiLatticeSubspace(d, {})};
    const auto gens = S.nonzero();
    for (int j = 0; j < m; ++j) {
        std::set<QuasiLatticeSubspace> next;
        for (const auto& U : level) {
            for (const auto& v : gens) {
                if (U.contains(v)) continue;
                auto b = U.basis();
                b.push_back(v);
                next.insert(QuasiLatticeSubspace(d, b));
            }
        }
        level = std::move(next);
    }
    return {level.begin(), level.end()};
}

std::vector<QuasiLatticeSubspace> enumerate_all_subspaces(const FrequencySet& S) {
    std::vector<QuasiLatticeSubspace> all;
    for (int m = 0; m <= S.dim(); ++m) {
        auto lvl = enumerate_subspaces(S, m);
        all.insert(all.end(), lvl.begin(), lvl.end());
    }
    return all;
}

namespace {

std::vector<FrequencyVector> complement_in(const QuasiLatticeSubspace& U, const std::vector<FrequencyVector>& w_ortho) {
    std::vector<FrequencyVector> acc = w_ortho;
    std::vector<FrequencyVector> out;
    for (const auto& b : U.basis()) {
        FrequencyVector p = project_out(b, acc);
        if (p.is_zero()) continue;
        acc.push_back(p);
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

double subspace_sine(const QuasiLatticeSubspace& U, const QuasiLatticeSubspace& V) {
    const auto w = U.intersect(V).orthogonal_basis();
    const auto A = complement_in(U, w);
    const auto B = complement_in(V, w);
    if (A.empty() || B.empty()) return 1.0;
    const std::size_t na = A.size(), nb = B.size();
    std::vector<std::vector<Surd>> C(na, std::vector<Surd>(nb));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t k = 0; k < nb; ++k) C[i][k] = A[i].dot(B[k]);
    std::vector<Surd> nb2(nb);
    for (std::size_t k = 0; k < nb; ++k) nb2[k] = B[k].norm_sq();
    Eigen::MatrixXd M(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(na));
    for (std::size_t i = 0; i < na; ++i) {
        Surd na2 = A[i].norm_sq();
        for (std::size_t j = 0; j < na; ++j) {
            Surd acc;
            for (std::size_t k = 0; k < nb; ++k) acc += C[i][k] * C[j][k] / nb2[k];
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (acc / na2).to_double();
        }
    }
    double cos2 = Eigen::EigenSolver<Eigen::MatrixXd>(M, false).eigenvalues().real().maxCoeff();
    return std::sqrt(std::max(0.0, 1.0 - cos2));
}

DiophantineReport diophantine_constants(const FrequencySet& S) {
    DiophantineReport rep;
    const int d = S.dim();
    std::vector<QuasiLatticeSubspace> proper;
    for (int m = 1; m < d; ++m) {
        auto lvl = enumerate_subspaces(S, m);
        proper.insert(proper.end(), lvl.begin(), lvl.end());
    }
    for (std::size_t i = 0; i < proper.size(); ++i) {
        for (std::size_t j = i + 1; j < proper.size(); ++j) {
            const auto& U = proper[i];
            const auto& V = proper[j];
            if (U.contains(V) || V.contains(U)) continue;
            rep.s = std::min(rep.s, subspace_sine(U, V));
        }
    }
    bool first = true;
    for (const auto& t : S.nonzero()) {
        double n = t.norm();
        rep.r = first ? n : std::min(rep.r, n);
        rep.R = first ? n : std::max(rep.R, n);
        first = false;
    }
    return rep;
}

}  // namespace spectra
