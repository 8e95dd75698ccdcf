#include "zigzag/burkholder.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace zigzag {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double binom2(int n) { return 0.5 * n * (n - 1); }

// Scalar profile α(a − βb)(a + b)^{p−1} on a, b ≥ 0 and its partials.
struct Profile {
    double p, alpha, beta;

    double value(double a, double b) const {
        if (p == 2.0) return a * a - b * b;
        const double s = a + b;
        if (s == 0.0) return 0.0;
        return alpha * (a - beta * b) * std::pow(s, p - 1.0);
    }

    // (∂/∂a, ∂/∂b); zero at the origin where the map is o(|·|).
    std::pair<double, double> partials(double a, double b) const {
        if (p == 2.0) return {2.0 * a, -2.0 * b};
        const double s = a + b;
        if (s == 0.0) return {0.0, 0.0};
        const double sp1 = std::pow(s, p - 1.0);
        const double shared = (p - 1.0) * (a - beta * b) * sp1 / s;
        return {alpha * (sp1 + shared), alpha * (-beta * sp1 + shared)};
    }
};

double lp_pow(std::span<const double> v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return s;
}

// ---- ζ for ℓ1 -------------------------------------------------------------

double z_scalar(double p, double q, double a) {
    const double s = std::abs(p + q), t = std::abs(p - q);
    if (s + t <= 2.0 / a) return 0.5 * a * p * q - 0.5 / a;
    return 0.5 * s * std::log(0.5 * a * (s + t)) - 0.5 * t;
}

double z_scalar_dir(double p, double q, double dp, double dq, double a) {
    const double s_raw = p + q, t_raw = p - q;
    const double s = std::abs(s_raw), t = std::abs(t_raw);
    if (s + t <= 2.0 / a) return 0.5 * a * (dp * q + p * dq);
    const double ds = sgn(s_raw) * (dp + dq);
    const double dt = sgn(t_raw) * (dp - dq);
    return 0.5 * ds * std::log(0.5 * a * (s + t)) + 0.5 * s * (ds + dt) / (s + t) - 0.5 * dt;
}

double l1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double l1_sum(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] + b[i]);
    return s;
}

double l1_sum_dir(std::span<const double> a, std::span<const double> b, std::span<const double> da,
                  std::span<const double> db) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += sgn(a[i] + b[i]) * (da[i] + db[i]);
    return s;
}

double zeta_dir(std::span<const double> x, std::span<const double> y, std::span<const double> dx,
                std::span<const double> dy, const ZetaL1Params& params) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += z_scalar_dir(x[i], y[i], dx[i], dy[i], params.a);
    return 2.0 / std::log(3.0 * params.a) * s;
}

double canonical_u_dir(std::span<const double> x, std::span<const double> y, std::span<const double> dx,
                       std::span<const double> dy, const ZetaL1Params& params) {
    const double sum_norm = l1_sum(x, y);
    if (std::max(l1(x), l1(y)) >= 1.0) return l1_sum_dir(x, y, dx, dy);
    const double zv = zeta_l1(x, y, params);
    if (zv > sum_norm) return zeta_dir(x, y, dx, dy, params);
    if (zv < sum_norm) return l1_sum_dir(x, y, dx, dy);
    return 0.5 * (zeta_dir(x, y, dx, dy, params) + l1_sum_dir(x, y, dx, dy));
}

}  // namespace

// ---------------------------------------------------------------------------

std::string construction_name(Construction c) {
    switch (c) {
        case Construction::ScalarP: return "scalar";
        case Construction::LpSum: return "lp-sum";
        case Construction::WeightedL2: return "weighted-l2";
        case Construction::HilbertP: return "hilbert";
        case Construction::GroupP2: return "group-p2";
        case Construction::ElementaryScalarK: return "elementary";
        case Construction::ZetaL1Weak: return "zeta-l1-weak";
        case Construction::U1Composed: return "u1-composed";
    }
    return "?";
}

Construction parse_construction(std::string_view name) {
    for (auto c : {Construction::ScalarP, Construction::LpSum, Construction::WeightedL2, Construction::HilbertP,
                   Construction::GroupP2, Construction::ElementaryScalarK, Construction::ZetaL1Weak,
                   Construction::U1Composed})
        if (construction_name(c) == name) return c;
    throw std::invalid_argument("unknown Burkholder construction '" + std::string(name) + "'");
}

double burkholder_alpha(double p) {
    const double ps = conjugate(p).p_star;
    return p * std::pow(1.0 - 1.0 / ps, p - 1.0);
}

double burkholder_beta(double p) { return conjugate(p).p_star - 1.0; }

ElementaryParams elementary_scalar_params(int k) {
    if (k < 4 || k % 2 != 0) throw std::invalid_argument("elementary Burkholder function requires even k >= 4");
    ElementaryParams e;
    e.k = k;
    e.c = 2.0 * binom2(k);
    e.b = std::pow(2.0 * e.c * binom2(k - 2), k - 2) / ((k - 2) * binom2(k));
    e.majorant_coeff = std::pow(e.c, 0.5 * k) + 0.5 * k * e.b;
    return e;
}

bool ZetaL1Params::valid() const {
    const double dd = static_cast<double>(d);
    return d >= 1 && a > 0.0 && a >= dd * std::log(dd);
}

double zeta_l1(std::span<const double> x, std::span<const double> y, const ZetaL1Params& params) {
    if (x.size() != params.d || y.size() != params.d) throw DimensionError("zeta_l1: dimension mismatch");
    double s = 1.0;
    for (std::size_t i = 0; i < params.d; ++i) s += z_scalar(x[i], y[i], params.a);
    return 2.0 / std::log(3.0 * params.a) * s;
}

double zeta_canonical_u(std::span<const double> x, std::span<const double> y, const ZetaL1Params& params) {
    const double sum_norm = l1_sum(x, y);
    if (std::max(l1(x), l1(y)) >= 1.0) return sum_norm;
    return std::max(zeta_l1(x, y, params), sum_norm);
}

// ---------------------------------------------------------------------------

BurkholderSpec::BurkholderSpec(Construction c, double p, std::size_t dim, Norm norm, Data data)
    : construction_(c), p_(p), alpha_(0.0), beta_(1.0), dim_(dim), norm_(std::move(norm)), data_(std::move(data)) {
    if (p > 1.0) {
        alpha_ = burkholder_alpha(p);
        beta_ = burkholder_beta(p);
    }
}

BurkholderSpec BurkholderSpec::scalar(double p) {
    conjugate(p);
    return {Construction::ScalarP, p, 1, Norm::lp(p), ScalarData{}};
}

BurkholderSpec BurkholderSpec::lp_sum(double p, std::size_t d) {
    if (d == 0) throw DimensionError("lp_sum: dimension must be positive");
    return {Construction::LpSum, p, d, Norm::lp(p), LpData{}};
}

BurkholderSpec BurkholderSpec::weighted_l2(Matrix a) {
    Norm n = Norm::weighted_l2(a);
    const std::size_t d = a.rows;
    return {Construction::WeightedL2, 2.0, d, std::move(n), WeightedData{psd_sqrt(a)}};
}

BurkholderSpec BurkholderSpec::hilbert(double p, std::size_t d) {
    if (d == 0) throw DimensionError("hilbert: dimension must be positive");
    conjugate(p);
    return {Construction::HilbertP, p, d, Norm::l2(), HilbertData{}};
}

BurkholderSpec BurkholderSpec::hilbert_gram(double p, Matrix gram) {
    conjugate(p);
    Norm n = Norm::gram(gram);
    const std::size_t d = gram.rows;
    return {Construction::HilbertP, p, d, std::move(n), HilbertData{std::move(gram)}};
}

BurkholderSpec BurkholderSpec::group_p2(double p, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw DimensionError("group_p2: shape must be positive");
    return {Construction::GroupP2, p, rows * cols, Norm::group_p2(p, rows, cols), GroupData{rows, cols}};
}

BurkholderSpec BurkholderSpec::elementary_scalar(int k) {
    ElementaryParams e = elementary_scalar_params(k);
    BurkholderSpec s{Construction::ElementaryScalarK, static_cast<double>(k), 1, Norm::l2(), e};
    s.alpha_ = 0.5 * k;
    s.beta_ = std::pow(e.majorant_coeff, 1.0 / k);
    return s;
}

BurkholderSpec weak_type_from_zeta(const ZetaL1Params& params) {
    if (params.d == 0) throw DimensionError("zeta: dimension must be positive");
    const Vec zero(params.d, 0.0);
    const double u00 = zeta_canonical_u(zero, zero, params);
    if (!(u00 > 0.0)) throw std::invalid_argument("weak_type_from_zeta: u(0,0) <= 0 for these parameters");
    BurkholderSpec s{Construction::ZetaL1Weak, 1.0, params.d, Norm::one(), BurkholderSpec::WeakData{params, u00}};
    s.beta_ = 2.0 / u00;
    return s;
}

BurkholderSpec compose_u1(const BurkholderSpec& weak, double bound, double eps) {
    if (!(eps > 0.0) || !(bound > 0.0)) throw std::invalid_argument("compose_u1: B and eps must be positive");
    if (!(bound > eps)) throw std::invalid_argument("compose_u1: requires B > eps");
    if (weak.construction() != Construction::ZetaL1Weak)
        throw std::invalid_argument("compose_u1: base must be a weak-type function");
    BurkholderSpec::U1Data u;
    u.weak = std::make_shared<const BurkholderSpec>(weak);
    u.bound = bound;
    u.eps = eps;
    u.terms = static_cast<int>(std::ceil(bound / eps - 1e-9));
    double harmonic = 0.0;
    for (int k = 1; k <= u.terms; ++k) harmonic += 1.0 / k;
    BurkholderSpec s{Construction::U1Composed, 1.0, weak.dim(), weak.space_norm(), std::move(u)};
    // Constant from summing the weak-type bound over the dyadic levels: β·H_N.
    s.beta_ = weak.beta() * harmonic;
    return s;
}

std::string BurkholderSpec::name() const {
    std::string n = construction_name(construction_);
    if (construction_ == Construction::ElementaryScalarK) return n + "(k=" + std::to_string(static_cast<int>(p_)) + ")";
    if (p_ > 1.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "(p=%g)", p_);
        n += buf;
    }
    return n;
}

const ElementaryParams* BurkholderSpec::elementary() const { return std::get_if<ElementaryParams>(&data_); }

const ZetaL1Params* BurkholderSpec::zeta() const {
    if (auto w = std::get_if<WeakData>(&data_)) return &w->params;
    return nullptr;
}

double BurkholderSpec::weak_u00() const {
    if (auto w = std::get_if<WeakData>(&data_)) return w->u00;
    return 0.0;
}

const BurkholderSpec::U1Data* BurkholderSpec::u1() const { return std::get_if<U1Data>(&data_); }

void BurkholderSpec::check_dims(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != dim_ || y.size() != dim_)
        throw DimensionError(name() + ": expected points of dimension " + std::to_string(dim_));
}

double BurkholderSpec::hilbert_inner(std::span<const double> a, std::span<const double> b) const {
    const auto& h = std::get<HilbertData>(data_);
    if (h.gram.empty()) return dot(a, b);
    return dot(a, h.gram * b);
}

double BurkholderSpec::hilbert_norm(std::span<const double> v) const {
    return std::sqrt(std::max(0.0, hilbert_inner(v, v)));
}

double BurkholderSpec::evaluate(std::span<const double> x, std::span<const double> y) const {
    check_dims(x, y);
    const Profile prof{p_, alpha_, beta_};
    switch (construction_) {
        case Construction::ScalarP:
        case Construction::LpSum: {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) s += prof.value(std::abs(x[i]), std::abs(y[i]));
            return s;
        }
        case Construction::WeightedL2: {
            const auto& w = std::get<WeightedData>(data_);
            const Vec ax = w.sqrt_a * x, ay = w.sqrt_a * y;
            return dot(ax, ax) - dot(ay, ay);
        }
        case Construction::HilbertP:
            if (p_ == 2.0) return hilbert_inner(x, x) - hilbert_inner(y, y);
            return prof.value(hilbert_norm(x), hilbert_norm(y));
        case Construction::GroupP2: {
            const auto& g = std::get<GroupData>(data_);
            double s = 0.0;
            for (std::size_t i = 0; i < g.rows; ++i) {
                auto xi = x.subspan(i * g.cols, g.cols), yi = y.subspan(i * g.cols, g.cols);
                if (p_ == 2.0)
                    s += dot(xi, xi) - dot(yi, yi);
                else
                    s += prof.value(std::sqrt(dot(xi, xi)), std::sqrt(dot(yi, yi)));
            }
            return s;
        }
        case Construction::ElementaryScalarK: {
            const auto& e = std::get<ElementaryParams>(data_);
            const double a = x[0], b = y[0];
            const int k = e.k;
            return 0.5 * k * (std::pow(a, k) - e.c * std::pow(a, k - 2) * b * b - e.b * std::pow(b, k));
        }
        case Construction::ZetaL1Weak: {
            const auto& w = std::get<WeakData>(data_);
            const Vec sum = added(x, y), diff = added(y, x, -1.0);
            return 1.0 - zeta_canonical_u(sum, diff, w.params) / w.u00;
        }
        case Construction::U1Composed: {
            const auto& u = std::get<U1Data>(data_);
            double s = 0.0;
            for (int k = 1; k <= u.terms; ++k) {
                const double inv = 1.0 / u.lambda(k);
                s += u.weak->evaluate(scaled(x, inv), scaled(y, inv));
            }
            return u.eps * s;
        }
    }
    return 0.0;
}

double BurkholderSpec::zigzag_dirderiv(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> z, int sigma) const {
    check_dims(x, y);
    if (z.size() != dim_) throw DimensionError(name() + ": direction has wrong dimension");
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("zigzag_dirderiv: sigma must be +1 or -1");
    const double sg = sigma;
    const Profile prof{p_, alpha_, beta_};
    switch (construction_) {
        case Construction::ScalarP:
        case Construction::LpSum: {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                if (p_ == 2.0) {
                    s += 2.0 * x[i] * z[i] - 2.0 * sg * y[i] * z[i];
                    continue;
                }
                const auto [ua, ub] = prof.partials(std::abs(x[i]), std::abs(y[i]));
                s += ua * sgn(x[i]) * z[i] + ub * sgn(y[i]) * sg * z[i];
            }
            return s;
        }
        case Construction::WeightedL2: {
            const auto& w = std::get<WeightedData>(data_);
            const Vec ax = w.sqrt_a * x, ay = w.sqrt_a * y, az = w.sqrt_a * z;
            return 2.0 * dot(ax, az) - 2.0 * sg * dot(ay, az);
        }
        case Construction::HilbertP: {
            const double xz = hilbert_inner(x, z), yz = hilbert_inner(y, z);
            if (p_ == 2.0) return 2.0 * xz - 2.0 * sg * yz;
            const double a = hilbert_norm(x), b = hilbert_norm(y);
            const auto [ua, ub] = prof.partials(a, b);
            return (a > 0 ? ua * xz / a : 0.0) + (b > 0 ? ub * sg * yz / b : 0.0);
        }
        case Construction::GroupP2: {
            const auto& g = std::get<GroupData>(data_);
            double s = 0.0;
            for (std::size_t i = 0; i < g.rows; ++i) {
                auto xi = x.subspan(i * g.cols, g.cols), yi = y.subspan(i * g.cols, g.cols),
                     zi = z.subspan(i * g.cols, g.cols);
                const double xz = dot(xi, zi), yz = dot(yi, zi);
                if (p_ == 2.0) {
                    s += 2.0 * xz - 2.0 * sg * yz;
                    continue;
                }
                const double a = std::sqrt(dot(xi, xi)), b = std::sqrt(dot(yi, yi));
                const auto [ua, ub] = prof.partials(a, b);
                s += (a > 0 ? ua * xz / a : 0.0) + (b > 0 ? ub * sg * yz / b : 0.0);
            }
            return s;
        }
        case Construction::ElementaryScalarK: {
            const auto& e = std::get<ElementaryParams>(data_);
            const int k = e.k;
            const double a = x[0], b = y[0], dz = z[0], dy = sg * z[0];
            const double dx_term = k * std::pow(a, k - 1) * dz;
            const double mid = e.c * ((k - 2) * std::pow(a, k - 3) * dz * b * b + std::pow(a, k - 2) * 2.0 * b * dy);
            const double tail = e.b * k * std::pow(b, k - 1) * dy;
            return 0.5 * k * (dx_term - mid - tail);
        }
        case Construction::ZetaL1Weak: {
            const auto& w = std::get<WeakData>(data_);
            // Arguments (x+y, y−x) move along ((1+σ)z, (σ−1)z).
            const Vec sum = added(x, y), diff = added(y, x, -1.0);
            const Vec dsum = scaled(z, 1.0 + sg), ddiff = scaled(z, sg - 1.0);
            return -canonical_u_dir(sum, diff, dsum, ddiff, w.params) / w.u00;
        }
        case Construction::U1Composed: {
            const auto& u = std::get<U1Data>(data_);
            double s = 0.0;
            for (int k = 1; k <= u.terms; ++k) {
                const double inv = 1.0 / u.lambda(k);
                s += u.weak->zigzag_dirderiv(scaled(x, inv), scaled(y, inv), scaled(z, inv), sigma);
            }
            return u.eps * s;
        }
    }
    return 0.0;
}

double BurkholderSpec::majorant(std::span<const double> x, std::span<const double> y) const {
    return majorant_with_beta(x, y, beta_);
}

double BurkholderSpec::majorant_with_beta(std::span<const double> x, std::span<const double> y, double beta) const {
    check_dims(x, y);
    switch (construction_) {
        case Construction::ScalarP:
        case Construction::LpSum:
            return lp_pow(x, p_) - std::pow(beta, p_) * lp_pow(y, p_);
        case Construction::WeightedL2:
        case Construction::HilbertP: {
            const double a = norm(x, norm_), b = norm(y, norm_);
            return std::pow(a, p_) - std::pow(beta * b, p_);
        }
        case Construction::GroupP2: {
            const auto& g = std::get<GroupData>(data_);
            double s = 0.0;
            for (std::size_t i = 0; i < g.rows; ++i) {
                auto xi = x.subspan(i * g.cols, g.cols), yi = y.subspan(i * g.cols, g.cols);
                s += std::pow(std::sqrt(dot(xi, xi)), p_) - std::pow(beta * std::sqrt(dot(yi, yi)), p_);
            }
            return s;
        }
        case Construction::ElementaryScalarK:
            return std::pow(std::abs(x[0]), p_) - std::pow(beta, p_) * std::pow(std::abs(y[0]), p_);
        case Construction::ZetaL1Weak:
            return (l1(x) >= 1.0 ? 1.0 : 0.0) - beta * l1(y);
        case Construction::U1Composed:
            return l1(x) - beta * l1(y) - std::get<U1Data>(data_).eps;
    }
    return 0.0;
}

}  // namespace zigzag
