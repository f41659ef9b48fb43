#include "spectra/geometry.hpp"

#include "spectra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace spectra {

ZoneParameters ZoneParameters::defaults(int d, double rho_n, int ktilde) {
    ZoneParameters zp;
    zp.rho_n = rho_n;
    zp.ktilde = ktilde;
    for (int j = 1; j <= d; ++j) zp.alpha.push_back((1.0 / (4.0 * d)) * (1.0 + j / (2.0 * d)));
    return zp;
}

double ZoneParameters::L(int j) const {
    return std::pow(rho_n, alpha.at(static_cast<std::size_t>(j - 1)));
}

void ZoneParameters::validate() const {
    const int d = dim();
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "alpha must have d entries");
    if (!(rho_n > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho_n must be positive");
    if (ktilde < 1) throw Error(ErrorCode::InvalidArgument, "ktilde must be at least 1");
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (!(alpha[j] > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha entries must be positive");
        if (j > 0 && !(alpha[j] > alpha[j - 1])) throw Error(ErrorCode::InvalidArgument, "alpha must increase");
    }
    if (!(alpha.back() < 1.0 / (2.0 * d))) throw Error(ErrorCode::InvalidArgument, "alpha_d must be below 1/(2d)");
    double b = effective_beta();
    if (!(b > 0.0 && b < alpha.front())) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0, alpha_1)");
}

bool in_lambda(const FrequencyVector& theta, const Eigen::VectorXd& xi, const ZoneParameters& zp) {
    if (theta.is_zero()) throw Error(ErrorCode::ZeroFrequency, "Lambda(0) is undefined");
    Eigen::VectorXd t = theta.real();
    return std::abs(xi.dot(t) / t.norm()) <= zp.L(1);
}

double CongruenceClass::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, (points[i] - points[j]).norm());
    return best;
}

namespace {

Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& q, int d) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) - q * q.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    const int k = d - static_cast<int>(q.cols());
    // Eigenvalues ascend; the last k belong to the complement.
    return es.eigenvectors().rightCols(k);
}

}  // namespace

ResonanceGeometry::ResonanceGeometry(FrequencySet theta_tilde, ZoneParameters zp)
    : S_(std::move(theta_tilde)), zp_(std::move(zp)) {
    if (zp_.dim() != S_.dim()) throw Error(ErrorCode::InvalidArgument, "zone parameters and frequencies disagree on d");
    zp_.validate();
    subs_ = enumerate_all_subspaces(S_);
    const std::size_t n = subs_.size();
    const int d = S_.dim();
    contains_.assign(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u = 0; u < n; ++u) contains_[v][u] = subs_[v].contains(subs_[u]);
    edges_.resize(n);
    ortho_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        ortho_[v] = subs_[v].orthonormal();
        if (ortho_[v].cols() == 0) ortho_[v].resize(d, 0);
        for (std::size_t u = 0; u < n; ++u) {
            if (subs_[u].dim() + 1 != subs_[v].dim() || !contains_[v][u]) continue;
            const auto u_ortho = subs_[u].orthogonal_basis();
            for (const auto& b : subs_[v].basis()) {
                FrequencyVector p = project_out(b, u_ortho);
                if (p.is_zero()) continue;
                edges_[v].push_back({u, p.real().normalized()});
                break;
            }
        }
    }
    sum_index_.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            std::size_t s = index_of(subs_[a].sum(subs_[b]));
            sum_index_[a][b] = sum_index_[b][a] = s;
        }
    for (const auto& t : S_.nonzero()) {
        // One representative per ± pair; step multiples cover both signs.
        if (t < -t) continue;
        Eigen::VectorXd r = t.real();
        steps_.push_back({t, r, r.normalized(), r.norm()});
    }
}

std::size_t ResonanceGeometry::index_of(const QuasiLatticeSubspace& V) const {
    auto it = std::lower_bound(subs_.begin(), subs_.end(), V);
    if (it == subs_.end() || !(*it == V)) throw Error(ErrorCode::InvalidArgument, "subspace not in the quasi-lattice");
    return static_cast<std::size_t>(it - subs_.begin());
}

std::vector<bool> ResonanceGeometry::xi1_membership(const Eigen::VectorXd& xi) const {
    // Subspaces are ordered by dimension, so children are settled before parents.
    std::vector<bool> member(subs_.size(), false);
    for (std::size_t v = 0; v < subs_.size(); ++v) {
        const int m = subs_[v].dim();
        if (m == 0) {
            member[v] = true;
            continue;
        }
        const double Lm = zp_.L(m);
        for (const auto& e : edges_[v]) {
            if (member[e.child] && std::abs(xi.dot(e.nu)) <= Lm) {
                member[v] = true;
                break;
            }
        }
    }
    return member;
}

ZoneLabel ResonanceGeometry::classify(const Eigen::VectorXd& xi) const {
    const auto member = xi1_membership(xi);
    const std::size_t n = subs_.size();
    for (std::size_t v = 0; v < n; ++v) {
        if (!member[v]) continue;
        bool ok = true;
        for (std::size_t u = 0; u < n && ok; ++u)
            if (member[u] && !contains_[v][u]) ok = false;
        if (ok) return {subs_[v], v, true};
    }
    // Membership set not closed under sums: label by the sum of every member.
    std::size_t acc = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (member[v]) acc = sum_index_[acc][v];
    return {subs_[acc], acc, false};
}

int ResonanceGeometry::region_count(const Eigen::VectorXd& xi) const {
    const auto member = xi1_membership(xi);
    int count = 0;
    for (std::size_t v = 0; v < subs_.size(); ++v) {
        if (!member[v]) continue;
        bool excluded = false;
        for (std::size_t u = 0; u < subs_.size() && !excluded; ++u)
            if (member[u] && !contains_[v][u]) excluded = true;
        if (!excluded) ++count;
    }
    return count;
}

bool ResonanceGeometry::sum_closed(const Eigen::VectorXd& xi) const {
    const auto member = xi1_membership(xi);
    for (std::size_t a = 0; a < subs_.size(); ++a) {
        if (!member[a]) continue;
        for (std::size_t b = a + 1; b < subs_.size(); ++b)
            if (member[b] && !member[sum_index_[a][b]]) return false;
    }
    return true;
}

CongruenceClass ResonanceGeometry::congruence_class(const Eigen::VectorXd& xi) const {
    CongruenceClass cls;
    cls.seed = xi;
    cls.subspace = classify(xi).subspace;
    const int d = S_.dim();
    const double L1 = zp_.L(1);
    std::map<FrequencyVector, std::size_t> seen;
    seen.emplace(FrequencyVector::zero(d), 0);
    cls.points.push_back(xi);
    cls.offsets.push_back(FrequencyVector::zero(d));
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        const Eigen::VectorXd p = cls.points[cur];
        const FrequencyVector off = cls.offsets[cur];
        for (const auto& st : steps_) {
            const double proj = p.dot(st.normal);
            if (std::abs(proj) > L1) continue;
            const long lo = static_cast<long>(std::ceil((-L1 - proj) / st.length));
            const long hi = static_cast<long>(std::floor((L1 - proj) / st.length));
            for (long l = lo; l <= hi; ++l) {
                if (l == 0) continue;
                FrequencyVector next = off + Surd(Rational(l)) * st.theta;
                if (seen.count(next)) continue;
                Eigen::VectorXd q = xi + next.real();
                if (std::abs(q.dot(st.normal)) > L1) continue;
                if (cls.points.size() >= zp_.closure_cap) {
                    throw Error(ErrorCode::CapExceeded, "congruence closure exceeded the node cap");
                }
                seen.emplace(next, cls.points.size());
                cls.points.push_back(q);
                cls.offsets.push_back(std::move(next));
                queue.push_back(cls.points.size() - 1);
            }
        }
    }
    return cls;
}

CylindricalCoords ResonanceGeometry::component_coordinates(const Eigen::VectorXd& xi, const ZoneLabel& label) const {
    const int d = S_.dim();
    const auto& V = subs_.at(label.index);
    const int m = V.dim();
    if (m >= d) throw Error(ErrorCode::InvalidArgument, "cylindrical coordinates need dim V < d");
    const int k1 = d - m;  // K + 1
    const double L = zp_.L(m + 1);
    const Eigen::MatrixXd& qv = ortho_[label.index];
    const Eigen::MatrixXd qp = complement_basis(qv, d);
    const Eigen::VectorXd xperp = qp.transpose() * xi;

    // Candidate directions n(θ_{V⊥}), deduplicated up to sign, oriented towards ξ.
    std::vector<Eigen::VectorXd> cand;
    CylindricalCoords c;
    for (const auto& t : S_.nonzero()) {
        if (V.contains(t)) continue;
        Eigen::VectorXd loc = qp.transpose() * t.real();
        loc.normalize();
        bool dup = false;
        for (const auto& u : cand)
            if (std::abs(std::abs(u.dot(loc)) - 1.0) < 1e-12) dup = true;
        if (dup) continue;
        const double proj = xperp.dot(loc);
        if (std::abs(proj) <= L) throw Error(ErrorCode::InvalidArgument, "point is not in the region of its label");
        c.component.push_back(proj > 0 ? 1 : -1);
        cand.push_back(proj > 0 ? loc : Eigen::VectorXd(-loc));
    }

    // Find K+1 independent directions whose cone contains every candidate.
    const std::size_t n = cand.size();
    std::vector<std::size_t> pick;
    if (n >= static_cast<std::size_t>(k1)) {
        std::vector<bool> sel(n, false);
        std::fill(sel.begin(), sel.begin() + k1, true);
        do {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (sel[i]) idx.push_back(i);
            Eigen::MatrixXd basis(k1, k1);
            for (int j = 0; j < k1; ++j) basis.col(j) = cand[idx[static_cast<std::size_t>(j)]];
            Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
            if (lu.rank() < k1) continue;
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                Eigen::VectorXd coef = lu.solve(cand[i]);
                if (coef.minCoeff() < -1e-12) ok = false;
            }
            if (ok) {
                pick = idx;
                break;
            }
        } while (std::prev_permutation(sel.begin(), sel.end()));
    }
    if (pick.empty()) throw Error(ErrorCode::NonSimplexComponent, "component has more than K+1 defining planes");

    Eigen::MatrixXd mu(k1, k1);  // rows μ̃_q in V⊥ coordinates
    for (int q = 0; q < k1; ++q) mu.row(q) = cand[pick[static_cast<std::size_t>(q)]].transpose();
    const Eigen::VectorXd a = mu.fullPivLu().solve(Eigen::VectorXd::Constant(k1, L));

    // Orthonormal frame of V⊥ whose last axis is n(a), which lies inside M_p.
    Eigen::MatrixXd seedm(k1, k1);
    seedm.col(0) = a.normalized();
    seedm.rightCols(k1 - 1) = Eigen::MatrixXd::Identity(k1, k1).leftCols(k1 - 1);
    Eigen::MatrixXd qr = Eigen::HouseholderQR<Eigen::MatrixXd>(seedm).householderQ();
    if (qr.col(0).dot(a) < 0) qr.col(0) = -qr.col(0);
    Eigen::MatrixXd frame(k1, k1);
    frame.leftCols(k1 - 1) = qr.rightCols(k1 - 1);
    frame.col(k1 - 1) = qr.col(0);

    const Eigen::MatrixXd amat = frame.transpose() * mu.inverse();
    const Eigen::VectorXd eta = xperp - a;
    c.r = eta.norm();
    const Eigen::VectorXd dir = c.r > 0 ? Eigen::VectorXd(eta / c.r) : Eigen::VectorXd(a.normalized());
    c.sin_phi = mu * dir;
    c.phi = c.sin_phi.unaryExpr([](double s) { return std::asin(std::clamp(s, -1.0, 1.0)); });
    const Eigen::VectorXd etap = amat * c.sin_phi;
    c.odin_residual = std::abs(etap.squaredNorm() - 1.0);
    c.surface_denominator = std::sqrt(std::max(0.0, 1.0 - etap.head(k1 - 1).squaredNorm()));
    c.X = qv.transpose() * xi;
    c.apex = qp * a;
    c.mu_tilde = qp * mu.transpose();
    c.frame = qp * frame;
    c.a_matrix = amat;
    return c;
}

Eigen::VectorXd ResonanceGeometry::reconstruct(const CylindricalCoords& c, const ZoneLabel& label) const {
    const Eigen::MatrixXd& qv = ortho_.at(label.index);
    Eigen::VectorXd etap = c.a_matrix * c.sin_phi;
    return qv * c.X + c.apex + c.r * (c.frame * etap);
}

InnerProductProfile ResonanceGeometry::inner_product_profile(const Eigen::VectorXd& xi, const FrequencyVector& theta,
                                                            const ZoneLabel& label) const {
    InnerProductProfile prof;
    const auto& V = subs_.at(label.index);
    const Eigen::MatrixXd& qv = ortho_[label.index];
    const Eigen::VectorXd t = theta.real();
    const auto c = component_coordinates(xi, label);
    prof.constant = c.X.dot(qv.transpose() * t);
    if (V.contains(theta)) {
        prof.b = Eigen::VectorXd::Zero(c.sin_phi.size());
        return prof;
    }
    const Eigen::VectorXd tperp = t - qv * (qv.transpose() * t);
    prof.b = c.mu_tilde.colPivHouseholderQr().solve(tperp);
    const double L = zp_.L(V.dim() + 1);
    prof.constant += L * prof.b.sum();
    prof.linear = prof.b.dot(c.sin_phi);
    const double scale = prof.b.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * std::max(1.0, scale);
    bool nonneg = (prof.b.array() >= -tol).all();
    bool nonpos = (prof.b.array() <= tol).all();
    prof.sign_coherent = nonneg || nonpos;
    prof.max_abs_b = scale;
    prof.min_abs_b = scale;
    for (int q = 0; q < prof.b.size(); ++q)
        if (std::abs(prof.b[q]) > tol) prof.min_abs_b = std::min(prof.min_abs_b, std::abs(prof.b[q]));
    return prof;
}

ZoneLabel classify_point(const Eigen::VectorXd& xi, const FrequencySet& S, const ZoneParameters& zp) {
    return ResonanceGeometry(S, zp).classify(xi);
}

CongruenceClass congruence_class(const Eigen::VectorXd& xi, const FrequencySet& S, const ZoneParameters& zp) {
    return ResonanceGeometry(S, zp).congruence_class(xi);
}

}  // namespace spectra
