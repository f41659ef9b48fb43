#include "spectra/expr.hpp"

#include "spectra/errors.hpp"

#include <cmath>
#include <numeric>

namespace spectra {

double cutoff_e_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p) {
    const double z = std::abs(((xi + 0.5 * theta).norm() - 3.0 * p.rho_n) / (10.0 * p.rho_n));
    return smooth_step(z);
}

double cutoff_phi_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p) {
    const double z = std::abs(theta.dot(xi + 0.5 * theta)) / (std::pow(p.rho_n, p.beta) * theta.norm());
    return 1.0 - smooth_step(z);
}

double chi_value(const Eigen::VectorXd& theta, const Eigen::VectorXd& xi, const CutoffParams& p) {
    const double num = cutoff_e_value(theta, xi, p) * cutoff_phi_value(theta, xi, p);
    if (num == 0.0) return 0.0;
    return num / (2.0 * theta.dot(xi + 0.5 * theta));
}

namespace expr {

namespace {

std::shared_ptr<Expr> make(NodeKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

ExprPtr leaf(NodeKind k, const Eigen::VectorXd& theta, const CutoffParams& p) {
    auto e = make(k);
    e->theta = theta;
    e->shift = Eigen::VectorXd::Zero(theta.size());
    e->cutoff = p;
    return e;
}

}  // namespace

ExprPtr constant(std::complex<double> c) {
    auto e = make(NodeKind::Constant);
    e->value = c;
    return e;
}

ExprPtr coordinate(int d, int axis) {
    auto e = make(NodeKind::Coordinate);
    e->axis = axis;
    e->shift = Eigen::VectorXd::Zero(d);
    return e;
}

ExprPtr norm_sq(const Eigen::VectorXd& shift) {
    auto e = make(NodeKind::NormSq);
    e->shift = shift;
    return e;
}

ExprPtr cutoff_e(const Eigen::VectorXd& theta, const CutoffParams& p) { return leaf(NodeKind::CutoffE, theta, p); }

ExprPtr cutoff_phi(const Eigen::VectorXd& theta, const CutoffParams& p) {
    if (theta.norm() == 0.0) throw Error(ErrorCode::ZeroFrequency, "phi_0 is undefined");
    return leaf(NodeKind::CutoffPhi, theta, p);
}

ExprPtr chi(const Eigen::VectorXd& theta, const CutoffParams& p) {
    if (theta.norm() == 0.0) return constant(0.0);
    return leaf(NodeKind::Chi, theta, p);
}

ExprPtr affine_recip(const Eigen::VectorXd& theta) {
    if (theta.norm() == 0.0) throw Error(ErrorCode::ZeroFrequency, "affine form vanishes identically");
    return leaf(NodeKind::AffineRecip, theta, {});
}

ExprPtr step(ExprPtr child) {
    if (child->is_constant()) return constant(smooth_step(child->value.real()));
    auto e = make(NodeKind::Step);
    e->children = {std::move(child)};
    return e;
}

ExprPtr recip(ExprPtr child) {
    if (child->is_constant()) return constant(1.0 / child->value);
    auto e = make(NodeKind::Recip);
    e->children = {std::move(child)};
    return e;
}

ExprPtr sum(std::vector<ExprPtr> terms) {
    std::complex<double> c = 0.0;
    std::vector<ExprPtr> kept;
    for (auto& t : terms) {
        if (t->kind == NodeKind::Sum) {
            for (const auto& s : t->children) {
                if (s->is_constant()) {
                    c += s->value;
                } else {
                    kept.push_back(s);
                }
            }
        } else if (t->is_constant()) {
            c += t->value;
        } else {
            kept.push_back(std::move(t));
        }
    }
    if (c != 0.0) kept.insert(kept.begin(), constant(c));
    if (kept.empty()) return constant(0.0);
    if (kept.size() == 1) return kept.front();
    auto e = make(NodeKind::Sum);
    e->children = std::move(kept);
    return e;
}

ExprPtr product(std::vector<ExprPtr> factors) {
    std::complex<double> c = 1.0;
    std::vector<ExprPtr> kept;
    for (auto& f : factors) {
        if (f->is_constant()) {
            c *= f->value;
        } else if (f->kind == NodeKind::Product) {
            for (const auto& s : f->children) {
                if (s->is_constant()) {
                    c *= s->value;
                } else {
                    kept.push_back(s);
                }
            }
        } else {
            kept.push_back(std::move(f));
        }
    }
    if (c == 0.0) return constant(0.0);
    if (kept.empty()) return constant(c);
    if (c != 1.0) kept.insert(kept.begin(), constant(c));
    if (kept.size() == 1) return kept.front();
    auto e = make(NodeKind::Product);
    e->children = std::move(kept);
    return e;
}

ExprPtr scale(std::complex<double> c, ExprPtr e) { return product({constant(c), std::move(e)}); }
ExprPtr add(ExprPtr a, ExprPtr b) { return sum({std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return sum({std::move(a), scale(-1.0, std::move(b))}); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return product({std::move(a), std::move(b)}); }

ExprPtr shifted(const ExprPtr& e, const Eigen::VectorXd& eta) {
    switch (e->kind) {
        case NodeKind::Constant:
            return e;
        case NodeKind::Coordinate:
        case NodeKind::NormSq:
        case NodeKind::CutoffE:
        case NodeKind::CutoffPhi:
        case NodeKind::Chi:
        case NodeKind::AffineRecip: {
            auto c = std::make_shared<Expr>(*e);
            c->shift = e->shift + eta;
            return c;
        }
        default: {
            auto c = std::make_shared<Expr>(*e);
            for (auto& ch : c->children) ch = shifted(ch, eta);
            return c;
        }
    }
}

ExprPtr derivative(ExprPtr e, const MultiIndex& s) {
    if (std::accumulate(s.begin(), s.end(), 0) == 0) return e;
    if (e->is_constant()) return constant(0.0);
    auto d = make(NodeKind::Derivative);
    d->multi = s;
    d->children = {std::move(e)};
    return d;
}

ExprPtr conjugate(const ExprPtr& e) {
    if (e->is_constant()) return constant(std::conj(e->value));
    if (e->children.empty()) return e;
    auto c = std::make_shared<Expr>(*e);
    for (auto& ch : c->children) ch = conjugate(ch);
    return c;
}

std::complex<double> evaluate(const ExprPtr& e, const Eigen::VectorXd& xi) {
    switch (e->kind) {
        case NodeKind::Constant:
            return e->value;
        case NodeKind::Coordinate:
            return xi[e->axis] + e->shift[e->axis];
        case NodeKind::NormSq:
            return (xi + e->shift).squaredNorm();
        case NodeKind::CutoffE:
            return cutoff_e_value(e->theta, xi + e->shift, e->cutoff);
        case NodeKind::CutoffPhi:
            return cutoff_phi_value(e->theta, xi + e->shift, e->cutoff);
        case NodeKind::Chi:
            return chi_value(e->theta, xi + e->shift, e->cutoff);
        case NodeKind::AffineRecip:
            return 1.0 / (2.0 * e->theta.dot(xi + e->shift + 0.5 * e->theta));
        case NodeKind::Step:
            return smooth_step(evaluate(e->children[0], xi).real());
        case NodeKind::Recip:
            return 1.0 / evaluate(e->children[0], xi);
        case NodeKind::Sum: {
            std::complex<double> acc = 0.0;
            for (const auto& c : e->children) acc += evaluate(c, xi);
            return acc;
        }
        case NodeKind::Product: {
            std::complex<double> acc = 1.0;
            for (const auto& c : e->children) {
                acc *= evaluate(c, xi);
                if (acc == 0.0) break;
            }
            return acc;
        }
        case NodeKind::Derivative:
            return evaluate_jet(e, xi, 0).value();
    }
    return 0.0;
}

namespace {

std::vector<Jet> point_jets(const Eigen::VectorXd& p, int order) {
    std::vector<Jet> x;
    for (int i = 0; i < p.size(); ++i) x.push_back(Jet::variable(static_cast<int>(p.size()), order, i, p[i]));
    return x;
}

Jet step_jet(const Jet& z) {
    const auto d = smooth_step_derivatives(z.value().real(), z.order());
    return z.compose(std::vector<std::complex<double>>(d.begin(), d.end()));
}

// ⟨θ, p + θ/2⟩ as a jet.
Jet affine_jet(const std::vector<Jet>& x, const Eigen::VectorXd& theta) {
    const int n = static_cast<int>(theta.size());
    Jet s = Jet::constant(n, x.front().order(), 0.5 * theta.squaredNorm());
    for (int i = 0; i < n; ++i) s += x[static_cast<std::size_t>(i)] * theta[i];
    return s;
}

Jet e_jet(const std::vector<Jet>& x, const Eigen::VectorXd& theta, const CutoffParams& p) {
    const int n = static_cast<int>(theta.size());
    const int order = x.front().order();
    Jet r2 = Jet::constant(n, order, 0.0);
    for (int i = 0; i < n; ++i) {
        Jet y = x[static_cast<std::size_t>(i)] + Jet::constant(n, order, 0.5 * theta[i]);
        r2 += y * y;
    }
    Jet z = (r2.sqrt() - Jet::constant(n, order, 3.0 * p.rho_n)) * (1.0 / (10.0 * p.rho_n));
    return step_jet(z.abs());
}

Jet phi_jet(const std::vector<Jet>& x, const Eigen::VectorXd& theta, const CutoffParams& p) {
    const int n = static_cast<int>(theta.size());
    Jet z = affine_jet(x, theta).abs() * (1.0 / (std::pow(p.rho_n, p.beta) * theta.norm()));
    return Jet::constant(n, x.front().order(), 1.0) - step_jet(z);
}

}  // namespace

Jet evaluate_jet(const ExprPtr& e, const Eigen::VectorXd& xi, int order) {
    const int n = static_cast<int>(xi.size());
    switch (e->kind) {
        case NodeKind::Constant:
            return Jet::constant(n, order, e->value);
        case NodeKind::Coordinate:
            return Jet::variable(n, order, e->axis, xi[e->axis] + e->shift[e->axis]);
        case NodeKind::NormSq: {
            auto x = point_jets(xi + e->shift, order);
            Jet acc(n, order);
            for (const auto& xj : x) acc += xj * xj;
            return acc;
        }
        case NodeKind::CutoffE:
            return e_jet(point_jets(xi + e->shift, order), e->theta, e->cutoff);
        case NodeKind::CutoffPhi:
            return phi_jet(point_jets(xi + e->shift, order), e->theta, e->cutoff);
        case NodeKind::Chi: {
            auto x = point_jets(xi + e->shift, order);
            Jet num = e_jet(x, e->theta, e->cutoff) * phi_jet(x, e->theta, e->cutoff);
            // Zero value sits on a flat plateau of ι, so every derivative vanishes too.
            if (num.value() == 0.0) return Jet(n, order);
            return num * (affine_jet(x, e->theta) * 2.0).reciprocal();
        }
        case NodeKind::AffineRecip:
            return (affine_jet(point_jets(xi + e->shift, order), e->theta) * 2.0).reciprocal();
        case NodeKind::Step:
            return step_jet(evaluate_jet(e->children[0], xi, order));
        case NodeKind::Recip:
            return evaluate_jet(e->children[0], xi, order).reciprocal();
        case NodeKind::Sum: {
            Jet acc(n, order);
            for (const auto& c : e->children) acc += evaluate_jet(c, xi, order);
            return acc;
        }
        case NodeKind::Product: {
            Jet acc = Jet::constant(n, order, 1.0);
            for (const auto& c : e->children) acc = acc * evaluate_jet(c, xi, order);
            return acc;
        }
        case NodeKind::Derivative: {
            const int extra = std::accumulate(e->multi.begin(), e->multi.end(), 0);
            return evaluate_jet(e->children[0], xi, order + extra).differentiate(e->multi, order);
        }
    }
    return Jet(n, order);
}

std::size_t node_count(const ExprPtr& e) {
    std::size_t n = 1;
    for (const auto& c : e->children) n += node_count(c);
    return n;
}

namespace {

nlohmann::json vec_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd json_vec(const nlohmann::json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

const char* tag(NodeKind k) {
    switch (k) {
        case NodeKind::Constant: return "const";
        case NodeKind::Coordinate: return "coord";
        case NodeKind::NormSq: return "normsq";
        case NodeKind::CutoffE: return "e";
        case NodeKind::CutoffPhi: return "phi";
        case NodeKind::Chi: return "chi";
        case NodeKind::AffineRecip: return "arecip";
        case NodeKind::Step: return "step";
        case NodeKind::Recip: return "recip";
        case NodeKind::Sum: return "sum";
        case NodeKind::Product: return "prod";
        case NodeKind::Derivative: return "deriv";
    }
    return "?";
}

NodeKind kind_of(const std::string& t) {
    static const std::pair<const char*, NodeKind> table[] = {
        {"const", NodeKind::Constant}, {"coord", NodeKind::Coordinate}, {"normsq", NodeKind::NormSq},
        {"e", NodeKind::CutoffE},      {"phi", NodeKind::CutoffPhi},    {"chi", NodeKind::Chi},
        {"arecip", NodeKind::AffineRecip}, {"step", NodeKind::Step},    {"recip", NodeKind::Recip},
        {"sum", NodeKind::Sum},        {"prod", NodeKind::Product},     {"deriv", NodeKind::Derivative}};
    for (const auto& [name, k] : table)
        if (t == name) return k;
    throw Error(ErrorCode::Malformed, "unknown expression tag '" + t + "'");
}

}  // namespace

nlohmann::json to_json(const ExprPtr& e) {
    nlohmann::json j;
    j["k"] = tag(e->kind);
    switch (e->kind) {
        case NodeKind::Constant:
            j["v"] = {e->value.real(), e->value.imag()};
            break;
        case NodeKind::Coordinate:
            j["axis"] = e->axis;
            j["shift"] = vec_json(e->shift);
            break;
        case NodeKind::NormSq:
            j["shift"] = vec_json(e->shift);
            break;
        case NodeKind::CutoffE:
        case NodeKind::CutoffPhi:
        case NodeKind::Chi:
            j["rho"] = e->cutoff.rho_n;
            j["beta"] = e->cutoff.beta;
            [[fallthrough]];
        case NodeKind::AffineRecip:
            j["theta"] = vec_json(e->theta);
            j["shift"] = vec_json(e->shift);
            break;
        case NodeKind::Derivative:
            j["s"] = e->multi;
            break;
        default:
            break;
    }
    if (!e->children.empty()) {
        nlohmann::json c = nlohmann::json::array();
        for (const auto& ch : e->children) c.push_back(to_json(ch));
        j["c"] = std::move(c);
    }
    return j;
}

ExprPtr from_json(const nlohmann::json& j) {
    auto e = std::make_shared<Expr>();
    e->kind = kind_of(j.at("k").get<std::string>());
    switch (e->kind) {
        case NodeKind::Constant:
            e->value = {j.at("v")[0].get<double>(), j.at("v")[1].get<double>()};
            break;
        case NodeKind::Coordinate:
            e->axis = j.at("axis").get<int>();
            e->shift = json_vec(j.at("shift"));
            break;
        case NodeKind::NormSq:
            e->shift = json_vec(j.at("shift"));
            break;
        case NodeKind::CutoffE:
        case NodeKind::CutoffPhi:
        case NodeKind::Chi:
            e->cutoff = {j.at("rho").get<double>(), j.at("beta").get<double>()};
            [[fallthrough]];
        case NodeKind::AffineRecip:
            e->theta = json_vec(j.at("theta"));
            e->shift = json_vec(j.at("shift"));
            break;
        case NodeKind::Derivative:
            e->multi = j.at("s").get<MultiIndex>();
            break;
        default:
            break;
    }
    if (j.contains("c"))
        for (const auto& c : j.at("c")) e->children.push_back(from_json(c));
    return e;
}

std::uint64_t digest(const ExprPtr& e) {
    const std::string s = to_json(e).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace expr
}  // namespace spectra
