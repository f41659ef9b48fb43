#include "spectra/bloch.hpp"

#include "spectra/errors.hpp"
#include "spectra/kernels.hpp"
#include "spectra/parallel.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectra {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

struct LatticeTerm {
    std::vector<int> theta;
    std::complex<double> c;
};

std::vector<LatticeTerm> lattice_terms(const Potential& b) {
    if (!b.is_periodic()) throw Error(ErrorCode::NonLatticeFrequencies, "the oracle needs integral frequencies");
    std::vector<LatticeTerm> out;
    for (const auto& [th, c] : b.coefficients()) {
        LatticeTerm t;
        for (int i = 0; i < th.dim(); ++i) t.theta.push_back(static_cast<int>(to_double(th[i].rational_part())));
        t.c = c.value();
        out.push_back(std::move(t));
    }
    return out;
}

void check_dimension(int d) {
    if (d != 1 && d != 2) throw Error(ErrorCode::UnsupportedDimension, "the Bloch oracle supports d = 1, 2");
}

}  // namespace

TruncationSet TruncationSet::build(int d, int M_cut) {
    check_dimension(d);
    if (M_cut < 1) throw Error(ErrorCode::InvalidArgument, "M_cut must be positive");
    TruncationSet s;
    s.d = d;
    s.M_cut = M_cut;
    const long side = 2L * M_cut + 1;
    s.lookup_.assign(static_cast<std::size_t>(d == 1 ? side : side * side), -1);
    const long r2 = static_cast<long>(M_cut) * M_cut;
    if (d == 1) {
        for (int m = -M_cut; m <= M_cut; ++m) {
            s.lookup_[static_cast<std::size_t>(m + M_cut)] = static_cast<long>(s.points.size());
            s.points.push_back({m});
            s.comp0.push_back(m);
        }
    } else {
        for (int a = -M_cut; a <= M_cut; ++a)
            for (int c = -M_cut; c <= M_cut; ++c) {
                if (static_cast<long>(a) * a + static_cast<long>(c) * c > r2) continue;
                s.lookup_[static_cast<std::size_t>((a + M_cut) * side + (c + M_cut))] = static_cast<long>(s.points.size());
                s.points.push_back({a, c});
                s.comp0.push_back(a);
                s.comp1.push_back(c);
            }
    }
    return s;
}

long TruncationSet::index_of(const std::vector<int>& m) const {
    const long side = 2L * M_cut + 1;
    long pos = 0;
    for (int i = 0; i < d; ++i) {
        const int v = m[static_cast<std::size_t>(i)];
        if (v < -M_cut || v > M_cut) return -1;
        pos = pos * side + (v + M_cut);
    }
    return lookup_[static_cast<std::size_t>(pos)];
}

FiberMatrix build_fiber(const Eigen::VectorXd& k, const Potential& b, int M_cut) {
    check_dimension(b.dim());
    const auto terms = lattice_terms(b);
    const TruncationSet set = TruncationSet::build(b.dim(), M_cut);
    const auto n = static_cast<Eigen::Index>(set.size());
    FiberMatrix f;
    f.k = k;
    f.M = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& m = set.points[static_cast<std::size_t>(j)];
        double e = 0.0;
        for (int i = 0; i < b.dim(); ++i) e += (k[i] + m[static_cast<std::size_t>(i)]) * (k[i] + m[static_cast<std::size_t>(i)]);
        f.M(j, j) += e;
        for (const auto& t : terms) {
            std::vector<int> mp = m;
            for (std::size_t i = 0; i < mp.size(); ++i) mp[i] += t.theta[i];
            const long row = set.index_of(mp);
            if (row >= 0) f.M(row, j) += t.c;
        }
    }
    return f;
}

BlochSpectrum solve_fiber(const Eigen::VectorXd& k, const Potential& b, int M_cut) {
    const FiberMatrix f = build_fiber(k, b, M_cut);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.M);
    return {k, es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Eigen-solves of H(k) on the truncation set. In d = 1 with b̂ supported on {0, ±1} the
// fiber is gauged to a real symmetric tridiagonal matrix and handed to LAPACK's MRRR.
class FiberSolver {
public:
    FiberSolver(const Potential& b, int M_cut)
        : b_(b), set_(TruncationSet::build(b.dim(), M_cut)), terms_(lattice_terms(b)) {
        tridiagonal_ = b.dim() == 1;
        for (const auto& t : terms_) {
            if (std::abs(t.theta[0]) > 1) tridiagonal_ = false;
            if (t.theta[0] == 0) diag_shift_ = t.c.real();
            if (t.theta[0] == 1) {
                off_ = std::abs(t.c);
                phase_ = std::arg(t.c);
            }
        }
        zero_ = terms_.empty();
    }

    const TruncationSet& set() const { return set_; }
    std::size_t size() const { return set_.size(); }
    bool free() const { return zero_; }

    // Eigenvalues (ascending) and, if wanted, eigenvectors as split re/im columns. With
    // vectors requested only the bands with E ≤ vmax are returned.
    void solve(const Eigen::VectorXd& k, std::vector<double>& E, std::vector<double>* re, std::vector<double>* im,
               double vmax = std::numeric_limits<double>::infinity()) const {
        const auto n = static_cast<lapack_int>(size());
        E.assign(static_cast<std::size_t>(n), 0.0);
        if (tridiagonal_) {
            std::vector<double> z;
            lapack_int found = 0;
            // Full-range MRRR beats the windowed bisection path here, so truncate afterwards.
            tridiagonal_solve(k[0], re ? 'V' : 'N', 'A', 0, 0, E.data(), re ? &z : nullptr, found);
            std::size_t keep = static_cast<std::size_t>(found);
            if (re)
                while (keep > 0 && E[keep - 1] > vmax) --keep;
            E.resize(keep);
            if (re) unphase(z, keep, *re, *im);
            return;
        }
        const FiberMatrix f = build_fiber(k, b_, set_.M_cut);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.M, re ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        lapack_int keep = 0;
        for (lapack_int i = 0; i < n; ++i) {
            E[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
            if (!re || es.eigenvalues()[i] <= vmax) keep = i + 1;
        }
        E.resize(static_cast<std::size_t>(keep));
        if (!re) return;
        re->resize(static_cast<std::size_t>(keep) * n);
        im->resize(static_cast<std::size_t>(keep) * n);
        const Eigen::MatrixXcd& C = es.eigenvectors();
        for (lapack_int c = 0; c < keep; ++c)
            for (lapack_int r = 0; r < n; ++r) {
                (*re)[static_cast<std::size_t>(c) * n + r] = C(r, c).real();
                (*im)[static_cast<std::size_t>(c) * n + r] = C(r, c).imag();
            }
    }

    // Band n (0-based) at quasimomentum k in d = 1.
    double eigenvalue(double k, int n) const {
        if (tridiagonal_) {
            double w = 0.0;
            lapack_int found = 0;
            tridiagonal_solve(k, 'N', 'I', n + 1, n + 1, &w, nullptr, found);
            return w;
        }
        std::vector<double> E;
        solve(Eigen::VectorXd::Constant(1, k), E, nullptr, nullptr);
        return E[static_cast<std::size_t>(n)];
    }

    void eigenpair(double k, int n, std::vector<double>& re, std::vector<double>& im) const {
        const std::size_t N = size();
        if (tridiagonal_) {
            double w = 0.0;
            std::vector<double> z;
            lapack_int found = 0;
            tridiagonal_solve(k, 'V', 'I', n + 1, n + 1, &w, &z, found);
            unphase(z, 1, re, im);
            return;
        }
        std::vector<double> E, R, I;
        solve(Eigen::VectorXd::Constant(1, k), E, &R, &I);
        re.assign(R.begin() + static_cast<long>(n * N), R.begin() + static_cast<long>((n + 1) * N));
        im.assign(I.begin() + static_cast<long>(n * N), I.begin() + static_cast<long>((n + 1) * N));
    }

private:
    void tridiagonal_solve(double k, char jobz, char range, lapack_int il, lapack_int iu, double* w,
                           std::vector<double>* z, lapack_int& found) const {
        const auto n = static_cast<lapack_int>(size());
        std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(std::max<lapack_int>(n, 1)), off_);
        for (lapack_int i = 0; i < n; ++i) {
            const double q = k + set_.comp0[static_cast<std::size_t>(i)];
            d[static_cast<std::size_t>(i)] = q * q + diag_shift_;
        }
        const lapack_int cols = range == 'I' ? iu - il + 1 : n;
        std::vector<double> wbuf(static_cast<std::size_t>(n));
        std::vector<lapack_int> isuppz(static_cast<std::size_t>(2 * n));
        if (z) z->assign(static_cast<std::size_t>(n) * cols, 0.0);
        const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, jobz, range, n, d.data(), e.data(), 0.0, 0.0, il, iu, 0.0,
                                               &found, wbuf.data(), z ? z->data() : nullptr, n, isuppz.data());
        if (info != 0) throw Error(ErrorCode::InvalidArgument, "tridiagonal eigensolver failed");
        std::copy(wbuf.begin(), wbuf.begin() + found, w);
    }

    // c_m = e^{i m α} c̃_m undoes the real gauge.
    void unphase(const std::vector<double>& z, std::size_t cols, std::vector<double>& re, std::vector<double>& im) const {
        const std::size_t n = size();
        re.resize(n * cols);
        im.resize(n * cols);
        for (std::size_t r = 0; r < n; ++r) {
            const double a = set_.comp0[r] * phase_;
            const double cr = std::cos(a), ci = std::sin(a);
            for (std::size_t c = 0; c < cols; ++c) {
                re[c * n + r] = z[c * n + r] * cr;
                im[c * n + r] = z[c * n + r] * ci;
            }
        }
    }

    Potential b_;
    TruncationSet set_;
    std::vector<LatticeTerm> terms_;
    bool tridiagonal_ = false;
    bool zero_ = false;
    double diag_shift_ = 0.0;
    double off_ = 0.0;
    double phase_ = 0.0;
};

// Per distinct point x: cos⟨m,x⟩ and sin⟨m,x⟩ over the truncation set.
struct PhaseTable {
    std::vector<Eigen::VectorXd> points;
    std::vector<std::vector<double>> cosv, sinv;
    std::vector<std::size_t> pair_x, pair_y;

    PhaseTable(const TruncationSet& set, const std::vector<PointPair>& pairs) {
        auto add = [&](const Eigen::VectorXd& p) {
            for (std::size_t i = 0; i < points.size(); ++i)
                if (points[i] == p) return i;
            points.push_back(p);
            std::vector<double> c(set.size()), s(set.size());
            for (std::size_t m = 0; m < set.size(); ++m) {
                double a = set.comp0[m] * p[0];
                if (set.d == 2) a += set.comp1[m] * p[1];
                c[m] = std::cos(a);
                s[m] = std::sin(a);
            }
            cosv.push_back(std::move(c));
            sinv.push_back(std::move(s));
            return points.size() - 1;
        };
        for (const auto& pr : pairs) {
            pair_x.push_back(add(pr.x));
            pair_y.push_back(add(pr.y));
        }
    }
};

// A_n(x) = Σ_m c_{n,m} e^{i⟨m,x⟩} for bands [0, nb) and every distinct point.
std::vector<std::vector<std::complex<double>>> amplitudes(const PhaseTable& ph, const std::vector<double>& re,
                                                          const std::vector<double>& im, std::size_t N, std::size_t nb) {
    const auto& K = kernels::active();
    std::vector<std::vector<std::complex<double>>> A(ph.points.size(), std::vector<std::complex<double>>(nb));
    for (std::size_t p = 0; p < ph.points.size(); ++p)
        for (std::size_t n = 0; n < nb; ++n)
            A[p][n] = K.complex_dot(re.data() + n * N, im.data() + n * N, ph.cosv[p].data(), ph.sinv[p].data(), N);
    return A;
}

double pair_phase(const PointPair& pr, const Eigen::VectorXd& k) { return k.dot(pr.x - pr.y); }

// ---- midpoint k-grid ----

std::vector<std::vector<std::complex<double>>> midpoint(const std::vector<double>& lambdas,
                                                        const std::vector<PointPair>& pairs, const FiberSolver& solver,
                                                        int d, int N_k) {
    const auto& K = kernels::active();
    const TruncationSet& set = solver.set();
    const std::size_t N = set.size();
    const PhaseTable ph(set, pairs);
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    const std::size_t nl = lambdas.size(), np = pairs.size();
    const std::size_t rows = d == 1 ? static_cast<std::size_t>((N_k + 63) / 64) : static_cast<std::size_t>(N_k);

    struct Partial {
        std::vector<std::uint64_t> counts;          // [p][l]
        std::vector<std::complex<double>> sums;     // [p][l]
    };
    std::vector<Partial> parts(rows);

    parallel_chunks(rows, [&](std::size_t row) {
        Partial& part = parts[row];
        part.counts.assign(np * nl, 0);
        part.sums.assign(np * nl, 0.0);
        std::vector<double> E(N), wr, wi, re, im;
        auto visit = [&](const Eigen::VectorXd& k) {
            if (solver.free()) {
                K.shifted_norm_sq(set.comp0.data(), d == 2 ? set.comp1.data() : nullptr, N, k[0], d == 2 ? k[1] : 0.0,
                                  E.data());
                for (std::size_t p = 0; p < np; ++p) {
                    const bool diag = pairs[p].x == pairs[p].y;
                    if (diag) {
                        for (std::size_t l = 0; l < nl; ++l) part.counts[p * nl + l] += K.count_le_lt(E.data(), N, lambdas[l]);
                        continue;
                    }
                    // e^{i⟨k+m, x−y⟩} = e^{i⟨k,x−y⟩} e^{i⟨m,x⟩} e^{−i⟨m,y⟩}.
                    const auto& cx = ph.cosv[ph.pair_x[p]];
                    const auto& sx = ph.sinv[ph.pair_x[p]];
                    const auto& cy = ph.cosv[ph.pair_y[p]];
                    const auto& sy = ph.sinv[ph.pair_y[p]];
                    wr.resize(N);
                    wi.resize(N);
                    for (std::size_t m = 0; m < N; ++m) {
                        wr[m] = cx[m] * cy[m] + sx[m] * sy[m];
                        wi[m] = sx[m] * cy[m] - cx[m] * sy[m];
                    }
                    const std::complex<double> rot = std::polar(1.0, pair_phase(pairs[p], k));
                    for (std::size_t l = 0; l < nl; ++l)
                        part.sums[p * nl + l] += rot * std::complex<double>(K.sum_weights_le_lt(E.data(), wr.data(), N, lambdas[l]),
                                                                            K.sum_weights_le_lt(E.data(), wi.data(), N, lambdas[l]));
                }
                return;
            }
            solver.solve(k, E, &re, &im, lmax);
            const std::size_t nb = E.size();
            const auto A = amplitudes(ph, re, im, N, nb);
            wr.resize(nb);
            wi.resize(nb);
            for (std::size_t p = 0; p < np; ++p) {
                const std::complex<double> rot = std::polar(1.0, pair_phase(pairs[p], k));
                for (std::size_t n = 0; n < nb; ++n) {
                    const std::complex<double> w = rot * A[ph.pair_x[p]][n] * std::conj(A[ph.pair_y[p]][n]);
                    wr[n] = w.real();
                    wi[n] = w.imag();
                }
                for (std::size_t l = 0; l < nl; ++l)
                    part.sums[p * nl + l] += std::complex<double>(K.sum_weights_le_lt(E.data(), wr.data(), nb, lambdas[l]),
                                                                  K.sum_weights_le_lt(E.data(), wi.data(), nb, lambdas[l]));
            }
        };
        Eigen::VectorXd k(d);
        if (d == 1) {
            const int lo = static_cast<int>(row) * 64, hi = std::min(N_k, lo + 64);
            for (int j = lo; j < hi; ++j) {
                k[0] = -0.5 + (j + 0.5) / N_k;
                visit(k);
            }
        } else {
            k[0] = -0.5 + (static_cast<double>(row) + 0.5) / N_k;
            for (int j = 0; j < N_k; ++j) {
                k[1] = -0.5 + (j + 0.5) / N_k;
                visit(k);
            }
        }
    });

    std::vector<std::vector<std::complex<double>>> out(np, std::vector<std::complex<double>>(nl, 0.0));
    std::vector<std::uint64_t> counts(np * nl, 0);
    std::vector<std::complex<double>> sums(np * nl, 0.0);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < np * nl; ++i) {
            counts[i] += part.counts[i];
            sums[i] += part.sums[i];
        }
    const double scale = 0.5 / (std::pow(static_cast<double>(N_k), d) * std::pow(2.0 * kPi, d));
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t l = 0; l < nl; ++l)
            out[p][l] = scale * (static_cast<double>(counts[p * nl + l]) + sums[p * nl + l]);
    return out;
}

// ---- band-resolved quadrature in d = 1 ----

struct GaussRule {
    std::vector<double> x, w;   // on [−1, 1]
};

const GaussRule& gauss20() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 20>;
        GaussRule r;
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            r.x.push_back(a[i]);
            r.w.push_back(w[i]);
            if (a[i] != 0.0) {
                r.x.push_back(-a[i]);
                r.w.push_back(w[i]);
            }
        }
        return r;
    }();
    return rule;
}

// Composite rule on [a, b].
void composite(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
    const GaussRule& g = gauss20();
    nodes.clear();
    weights.clear();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            nodes.push_back(lo + 0.5 * h * (g.x[i] + 1.0));
            weights.push_back(0.5 * h * g.w[i]);
        }
    }
}

std::vector<std::vector<std::complex<double>>> band_resolved(const std::vector<double>& lambdas,
                                                             const std::vector<PointPair>& pairs,
                                                             const FiberSolver& solver, const OracleConfig& cfg) {
    const TruncationSet& set = solver.set();
    const std::size_t N = set.size();
    const PhaseTable ph(set, pairs);
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    const std::size_t nl = lambdas.size(), np = pairs.size();
    std::vector<bool> diag(np);
    for (std::size_t p = 0; p < np; ++p) diag[p] = pairs[p].x == pairs[p].y;

    // On-diagonal pairs accumulate w − 1 and add the occupied k-measure separately, which
    // keeps the large free part exact.
    std::vector<std::vector<std::complex<double>>> dev(np, std::vector<std::complex<double>>(nl, 0.0));
    std::vector<std::vector<double>> measure(np, std::vector<double>(nl, 0.0));

    auto weight = [&](std::size_t p, double k, const std::complex<double>& ax, const std::complex<double>& ay) {
        if (diag[p]) return std::complex<double>(std::norm(ax) - 1.0, 0.0);
        return std::polar(1.0, k * (pairs[p].x[0] - pairs[p].y[0])) * ax * std::conj(ay);
    };

    const std::pair<double, double> halves[2] = {{-0.5, 0.0}, {0.0, 0.5}};
    for (const auto& [a, b] : halves) {
        std::vector<double> Ea, Eb;
        solver.solve(Eigen::VectorXd::Constant(1, a), Ea, nullptr, nullptr);
        solver.solve(Eigen::VectorXd::Constant(1, b), Eb, nullptr, nullptr);
        std::size_t nkeep = 0;
        while (nkeep < N && std::min(Ea[nkeep], Eb[nkeep]) <= lmax) ++nkeep;

        std::vector<double> nodes, gw;
        composite(a, b, cfg.panels, nodes, gw);
        // prefix[node][p][n] = Σ_{n' < n} weight.
        std::vector<std::vector<std::vector<std::complex<double>>>> prefix(nodes.size());
        parallel_chunks(nodes.size(), [&](std::size_t i) {
            std::vector<double> E, re, im;
            solver.solve(Eigen::VectorXd::Constant(1, nodes[i]), E, &re, &im, lmax);
            const std::size_t nb = std::min(nkeep, E.size());
            const auto A = amplitudes(ph, re, im, N, nb);
            prefix[i].assign(np, std::vector<std::complex<double>>(nkeep + 1, 0.0));
            for (std::size_t p = 0; p < np; ++p)
                for (std::size_t n = 0; n < nkeep; ++n)
                    prefix[i][p][n + 1] =
                        prefix[i][p][n] + (n < nb ? weight(p, nodes[i], A[ph.pair_x[p]][n], A[ph.pair_y[p]][n]) : 0.0);
        });

        for (std::size_t l = 0; l < nl; ++l) {
            const double lam = lambdas[l];
            std::size_t nfull = 0;
            while (nfull < nkeep && std::max(Ea[nfull], Eb[nfull]) <= lam) ++nfull;
            for (std::size_t p = 0; p < np; ++p) {
                std::complex<double> s = 0.0;
                for (std::size_t i = 0; i < nodes.size(); ++i) s += gw[i] * prefix[i][p][nfull];
                dev[p][l] += s;
                measure[p][l] += static_cast<double>(nfull) * (b - a);
            }
            for (std::size_t n = nfull; n < nkeep; ++n) {
                const double lo = std::min(Ea[n], Eb[n]);
                if (lo >= lam) continue;
                const int band = static_cast<int>(n);
                auto f = [&](double k) { return solver.eigenvalue(k, band) - lam; };
                boost::math::tools::eps_tolerance<double> tol(52);
                std::uintmax_t iters = 200;
                const double fa = Ea[n] - lam, fb = Eb[n] - lam;
                const auto root = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
                const double ks = 0.5 * (root.first + root.second);
                const double lo_k = Ea[n] < Eb[n] ? a : ks;
                const double hi_k = Ea[n] < Eb[n] ? ks : b;
                std::vector<double> pn, pw, re, im;
                composite(lo_k, hi_k, cfg.partial_panels, pn, pw);
                for (std::size_t i = 0; i < pn.size(); ++i) {
                    solver.eigenpair(pn[i], band, re, im);
                    const auto A = amplitudes(ph, re, im, N, 1);
                    for (std::size_t p = 0; p < np; ++p) dev[p][l] += pw[i] * weight(p, pn[i], A[ph.pair_x[p]][0], A[ph.pair_y[p]][0]);
                }
                for (std::size_t p = 0; p < np; ++p) measure[p][l] += hi_k - lo_k;
            }
        }
    }

    std::vector<std::vector<std::complex<double>>> out(np, std::vector<std::complex<double>>(nl));
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t l = 0; l < nl; ++l)
            out[p][l] = (dev[p][l] + (diag[p] ? measure[p][l] : 0.0)) / (2.0 * kPi);
    return out;
}

}  // namespace

std::vector<std::vector<std::complex<double>>> spectral_function_batch(const std::vector<double>& lambdas,
                                                                       const std::vector<PointPair>& pairs,
                                                                       const Potential& b, const OracleConfig& cfg) {
    check_dimension(b.dim());
    if (lambdas.empty() || pairs.empty()) return std::vector<std::vector<std::complex<double>>>(pairs.size());
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    const double ceiling = 0.25 * cfg.M_cut * cfg.M_cut;
    if (lmax > ceiling)
        throw Error(ErrorCode::TruncationCeiling, "lambda " + std::to_string(lmax) + " exceeds (M_cut/2)^2 = " + std::to_string(ceiling));
    for (const auto& pr : pairs)
        if (pr.x.size() != b.dim() || pr.y.size() != b.dim()) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
    const FiberSolver solver(b, cfg.M_cut);
    OracleMode mode = cfg.mode;
    if (mode == OracleMode::Auto) mode = b.dim() == 1 ? OracleMode::BandResolved : OracleMode::Midpoint;
    if (mode == OracleMode::BandResolved) {
        if (b.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "band-resolved quadrature is one-dimensional");
        return band_resolved(lambdas, pairs, solver, cfg);
    }
    if (cfg.N_k < 1) throw Error(ErrorCode::InvalidArgument, "N_k must be positive");
    return midpoint(lambdas, pairs, solver, b.dim(), cfg.N_k);
}

double spectral_function(double lambda, const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Potential& b,
                         const OracleConfig& cfg) {
    return spectral_function_batch({lambda}, {{x, y}}, b, cfg)[0][0].real();
}

double local_density(double lambda, const Eigen::VectorXd& x, const Potential& b, const OracleConfig& cfg) {
    return spectral_function(lambda, x, x, b, cfg);
}

}  // namespace spectra
