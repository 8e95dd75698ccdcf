#include "zigzag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace zigzag {

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != r * c) throw DimensionError("matrix data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("matrix product shape mismatch");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vec operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols != x.size()) throw DimensionError("matrix-vector shape mismatch");
    Vec y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double s, std::span<const double> b, std::span<double> a) {
    if (a.size() != b.size()) throw DimensionError("axpy: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

Vec scaled(std::span<const double> a, double s) {
    Vec r(a.begin(), a.end());
    for (double& v : r) v *= s;
    return r;
}

Vec added(std::span<const double> a, std::span<const double> b, double sb) {
    Vec r(a.begin(), a.end());
    axpy(sb, b, r);
    return r;
}

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

// ---------------------------------------------------------------------------

Norm Norm::lp(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("Lp norm requires p > 1");
    Norm n;
    n.kind = NormKind::Lp;
    n.p = p;
    return n;
}

Norm Norm::sup() {
    Norm n;
    n.kind = NormKind::Sup;
    return n;
}

Norm Norm::one() {
    Norm n;
    n.kind = NormKind::One;
    n.p = 1.0;
    return n;
}

Norm Norm::weighted_l2(Matrix a) {
    require_psd(a, "weighted l2 matrix");
    Norm n;
    n.kind = NormKind::WeightedL2;
    n.weight = std::move(a);
    return n;
}

Norm Norm::gram(Matrix g) {
    require_psd(g, "gram matrix");
    Norm n;
    n.kind = NormKind::Gram;
    n.weight = std::move(g);
    return n;
}

Norm Norm::group_p2(double p, std::size_t rows, std::size_t cols) {
    if (!(p > 1.0)) throw std::invalid_argument("group (p,2) norm requires p > 1");
    Norm n;
    n.kind = NormKind::GroupP2;
    n.p = p;
    n.rows = rows;
    n.cols = cols;
    return n;
}

Norm Norm::spectral(std::size_t rows, std::size_t cols) {
    Norm n;
    n.kind = NormKind::Spectral;
    n.rows = rows;
    n.cols = cols;
    return n;
}

Norm Norm::trace(std::size_t rows, std::size_t cols) {
    Norm n;
    n.kind = NormKind::Trace;
    n.rows = rows;
    n.cols = cols;
    return n;
}

std::size_t Norm::required_dim() const {
    switch (kind) {
        case NormKind::WeightedL2:
        case NormKind::Gram:
            return weight.rows;
        case NormKind::GroupP2:
        case NormKind::Spectral:
        case NormKind::Trace:
            return rows * cols;
        default:
            return 0;
    }
}

namespace {

std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string Norm::name() const {
    switch (kind) {
        case NormKind::Lp: return "l" + compact(p);
        case NormKind::WeightedL2: return "weighted-l2";
        case NormKind::GroupP2: return "group(" + compact(p) + ",2)";
        case NormKind::Spectral: return "spectral";
        case NormKind::Trace: return "trace";
        case NormKind::Sup: return "sup";
        case NormKind::One: return "one";
        case NormKind::Gram: return "gram";
    }
    return "?";
}

namespace {

void check_dim(std::span<const double> v, const Norm& tag) {
    const std::size_t need = tag.required_dim();
    if (need != 0 && v.size() != need)
        throw DimensionError("norm " + tag.name() + ": expected dimension " + std::to_string(need) +
                             ", got " + std::to_string(v.size()));
}

double lp_value(std::span<const double> v, double p) {
    if (p == 2.0) return std::sqrt(dot(v, v));
    // Scale by the max entry so large p does not overflow.
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double quad_form(const Matrix& a, std::span<const double> v) {
    return std::max(0.0, dot(v, a * v));
}

Matrix as_matrix(std::span<const double> v, const Norm& tag) {
    return Matrix(tag.rows, tag.cols, std::vector<double>(v.begin(), v.end()));
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

double norm(std::span<const double> v, const Norm& tag) {
    check_dim(v, tag);
    require_finite(v, "norm");
    switch (tag.kind) {
        case NormKind::Lp:
            if (!(tag.p > 1.0)) throw std::invalid_argument("Lp norm requires p > 1");
            return lp_value(v, tag.p);
        case NormKind::Sup: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
        case NormKind::One: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s;
        }
        case NormKind::WeightedL2:
        case NormKind::Gram:
            return std::sqrt(quad_form(tag.weight, v));
        case NormKind::GroupP2: {
            Vec rownorms(tag.rows);
            for (std::size_t i = 0; i < tag.rows; ++i) rownorms[i] = lp_value(v.subspan(i * tag.cols, tag.cols), 2.0);
            return lp_value(rownorms, tag.p);
        }
        case NormKind::Spectral: {
            const Vec s = singular_values(as_matrix(v, tag));
            return s.empty() ? 0.0 : s.front();
        }
        case NormKind::Trace: {
            const Vec s = singular_values(as_matrix(v, tag));
            return std::accumulate(s.begin(), s.end(), 0.0);
        }
    }
    return 0.0;
}

double norm(const Matrix& m, const Norm& tag) {
    if (tag.required_dim() != 0 && (m.rows != tag.rows || m.cols != tag.cols) &&
        tag.kind != NormKind::WeightedL2 && tag.kind != NormKind::Gram)
        throw DimensionError("norm: matrix shape does not match tag");
    return norm(std::span<const double>(m.data), tag);
}

double pairing(std::span<const double> w, std::span<const double> g, const Norm& tag) {
    if (tag.kind == NormKind::Gram) return dot(w, tag.weight * g);
    return dot(w, g);
}

Conjugate conjugate(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("conjugate exponent requires p > 1");
    const double pp = p / (p - 1.0);
    return {pp, std::max(p, pp)};
}

Vec dual_ball_lmo(std::span<const double> g, const Norm& tag) {
    check_dim(g, tag);
    require_finite(g, "dual_ball_lmo");
    Vec w(g.size(), 0.0);
    switch (tag.kind) {
        case NormKind::Lp: {
            const double gn = lp_value(g, tag.p);
            if (gn == 0.0) return w;
            for (std::size_t i = 0; i < g.size(); ++i)
                w[i] = -sgn(g[i]) * std::pow(std::abs(g[i]) / gn, tag.p - 1.0);
            return w;
        }
        case NormKind::Sup: {
            std::size_t best = 0;
            for (std::size_t i = 1; i < g.size(); ++i)
                if (std::abs(g[i]) > std::abs(g[best])) best = i;
            if (!g.empty()) w[best] = -sgn(g[best]);
            return w;
        }
        case NormKind::One:
            for (std::size_t i = 0; i < g.size(); ++i) w[i] = -sgn(g[i]);
            return w;
        case NormKind::WeightedL2: {
            const Vec ag = tag.weight * g;
            const double gn = std::sqrt(std::max(0.0, dot(g, ag)));
            if (gn == 0.0) return w;
            return scaled(ag, -1.0 / gn);
        }
        case NormKind::Gram: {
            const double gn = std::sqrt(quad_form(tag.weight, g));
            if (gn == 0.0) return w;
            return scaled(g, -1.0 / gn);
        }
        case NormKind::GroupP2: {
            const double gn = norm(g, tag);
            if (gn == 0.0) return w;
            for (std::size_t i = 0; i < tag.rows; ++i) {
                auto gi = g.subspan(i * tag.cols, tag.cols);
                const double ri = lp_value(gi, 2.0);
                if (ri == 0.0) continue;
                const double scale = -std::pow(ri / gn, tag.p - 1.0) / ri;
                for (std::size_t j = 0; j < tag.cols; ++j) w[i * tag.cols + j] = scale * gi[j];
            }
            return w;
        }
        case NormKind::Spectral:
        case NormKind::Trace:
            break;
    }
    throw std::invalid_argument("dual_ball_lmo: unsupported norm " + tag.name());
}

Vec vertex_lmo(std::span<const double> g, const std::vector<Vec>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("vertex_lmo: empty vertex list");
    std::size_t best = 0;
    double best_val = dot(vertices[0], g);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const double v = dot(vertices[i], g);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    return vertices[best];
}

double atomic_dual_norm(std::span<const double> g, const std::vector<Vec>& vertices) {
    return -dot(vertex_lmo(g, vertices), g);
}

double prefix_interval_sup(const std::vector<Vec>& prefixes, const Norm& tag) {
    if (prefixes.empty()) throw std::invalid_argument("prefix_interval_sup: empty prefix list");
    double best = 0.0;
    for (std::size_t b = 1; b < prefixes.size(); ++b)
        for (std::size_t a = 0; a < b; ++a) {
            const Vec diff = added(prefixes[b], prefixes[a], -1.0);
            best = std::max(best, norm(diff, tag));
        }
    return best;
}

void IntervalSupTracker::push(std::span<const double> increment) {
    if (prefixes_.empty()) prefixes_.emplace_back(increment.size(), 0.0);
    Vec next = added(prefixes_.back(), increment);
    for (const Vec& pa : prefixes_) best_ = std::max(best_, norm(added(next, pa, -1.0), tag_));
    prefixes_.push_back(std::move(next));
}

void IntervalSupTracker::reset() {
    prefixes_.clear();
    best_ = 0.0;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr int kMaxSweeps = 100;

// One-sided Jacobi on the columns of `w` (m × n, m ≥ n). On return the
// columns of w are U·Σ and v accumulates the right rotations.
void one_sided_jacobi(Matrix& w, Matrix& v) {
    const std::size_t m = w.rows, n = w.cols;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < v.rows; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        if (!rotated) break;
    }
}

}  // namespace

Svd svd(const Matrix& a) {
    require_finite(a.data, "svd");
    const bool flip = a.rows < a.cols;
    Matrix w = flip ? a.transpose() : a;
    const std::size_t m = w.rows, n = w.cols;
    Matrix v = Matrix::identity(n);
    one_sided_jacobi(w, v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Vec sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        sv[j] = std::max(0.0, std::sqrt(s));
    }
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sv[x] > sv[y]; });

    Svd out;
    out.s.resize(n);
    Matrix u(m, n), vv(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.s[k] = sv[j];
        for (std::size_t i = 0; i < m; ++i) u(i, k) = sv[j] > 0 ? w(i, j) / sv[j] : 0.0;
        for (std::size_t i = 0; i < n; ++i) vv(i, k) = v(i, j);
    }
    if (flip) {
        out.u = std::move(vv);
        out.v = std::move(u);
    } else {
        out.u = std::move(u);
        out.v = std::move(vv);
    }
    return out;
}

Vec singular_values(const Matrix& a) { return svd(a).s; }

SymEigen sym_eigen(const Matrix& a) {
    if (a.rows != a.cols) throw DimensionError("sym_eigen: matrix must be square");
    require_finite(a.data, "sym_eigen");
    const std::size_t n = a.rows;
    Matrix m = a;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) (i == j ? scale : off) += m(i, j) * m(i, j);
        if (off <= kJacobiTol * kJacobiTol * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m(p, q) == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return m(x, x) < m(y, y); });
    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

void require_psd(const Matrix& a, const char* what) {
    if (a.rows != a.cols || a.rows == 0) throw DimensionError(std::string(what) + ": must be square and nonempty");
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * (1.0 + std::abs(a(i, j))))
                throw std::invalid_argument(std::string(what) + ": not symmetric");
    const SymEigen e = sym_eigen(a);
    if (e.values.front() < kPsdTolerance)
        throw std::invalid_argument(std::string(what) + ": not PSD (min eigenvalue " +
                                    std::to_string(e.values.front()) + ")");
}

Matrix psd_sqrt(const Matrix& a) {
    const SymEigen e = sym_eigen(a);
    const std::size_t n = a.rows;
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(0.0, e.values[k]));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r(i, j) += s * e.vectors(i, k) * e.vectors(j, k);
    }
    return r;
}

}  // namespace zigzag
