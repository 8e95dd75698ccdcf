#include <doctest.h>

#include <cmath>

#include "zigzag/burkholder.hpp"
#include "zigzag/probes.hpp"

using namespace zigzag;

namespace {

Vec random_vec(Rng& rng, std::size_t d, double r) {
    Vec v(d);
    for (auto& x : v) x = rng.uniform(-r, r);
    return v;
}

Vec random_l1_sphere(Rng& rng, std::size_t d) {
    Vec v = random_vec(rng, d, 1.0);
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    for (auto& x : v) x /= s;
    return v;
}

double l1(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

}  // namespace

TEST_CASE("evaluate examples") {
    const auto s2 = BurkholderSpec::scalar(2);
    CHECK(s2.evaluate(Vec{3}, Vec{2}) == 5.0);
    const auto s3 = BurkholderSpec::scalar(3);
    CHECK(s3.evaluate(Vec{1}, Vec{0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(burkholder_alpha(3) == doctest::Approx(4.0 / 3.0));
    CHECK(burkholder_beta(3) == doctest::Approx(2.0));
    CHECK(burkholder_beta(1.5) == doctest::Approx(2.0));
}

TEST_CASE("every construction vanishes at the origin") {
    std::vector<BurkholderSpec> specs{BurkholderSpec::scalar(1.5), BurkholderSpec::scalar(3),
                                      BurkholderSpec::lp_sum(3, 4), BurkholderSpec::weighted_l2(Matrix::diag(Vec{1, 2})),
                                      BurkholderSpec::hilbert(2, 3), BurkholderSpec::hilbert(3, 3),
                                      BurkholderSpec::group_p2(1.5, 2, 3), BurkholderSpec::elementary_scalar(4),
                                      weak_type_from_zeta({10.0, 2})};
    specs.push_back(compose_u1(specs.back(), 4.0, 0.5));
    for (const auto& s : specs) {
        const Vec zero(s.dim(), 0.0);
        CHECK(s.evaluate(zero, zero) == 0.0);
    }
}

TEST_CASE("directional derivative examples") {
    const auto s2 = BurkholderSpec::scalar(2);
    CHECK(s2.zigzag_dirderiv(Vec{3}, Vec{2}, Vec{1}, +1) == doctest::Approx(2.0));
    CHECK(s2.zigzag_dirderiv(Vec{3}, Vec{2}, Vec{1}, -1) == doctest::Approx(10.0));

    Rng rng(4);
    for (const auto& s : {BurkholderSpec::scalar(3), BurkholderSpec::lp_sum(1.5, 3), BurkholderSpec::hilbert(3, 3),
                          BurkholderSpec::group_p2(3, 3, 1)}) {
        const Vec zero(s.dim(), 0.0);
        const Vec z = random_vec(rng, s.dim(), 2.0);
        const double avg = 0.5 * (s.zigzag_dirderiv(zero, zero, z, 1) + s.zigzag_dirderiv(zero, zero, z, -1));
        CHECK(avg == doctest::Approx(0.0));
    }
}

TEST_CASE("elementary scalar constants") {
    const auto e4 = elementary_scalar_params(4);
    CHECK(e4.c == 12.0);
    CHECK(e4.b == doctest::Approx(0.5 * std::pow(2.0 * 12.0 * 1.0, 2) / 6.0));
    CHECK(e4.b == doctest::Approx(48.0));
    CHECK(e4.majorant_coeff == doctest::Approx(144.0 + 2.0 * 48.0));
    CHECK(elementary_scalar_params(6).c == 30.0);
    CHECK_THROWS(elementary_scalar_params(5));
    CHECK_THROWS(elementary_scalar_params(2));
}

TEST_CASE("zeta examples") {
    const ZetaL1Params params{10.0, 2};
    CHECK(zeta_l1(Vec{0, 0}, Vec{0, 0}, params) == doctest::Approx(2.0 / std::log(30.0) * 0.9).epsilon(1e-14));
    CHECK(params.valid());
    CHECK_FALSE(ZetaL1Params{1.0, 8}.valid());

    // Branch boundary |x+y| + |x−y| = 2/a: the two branches meet continuously.
    const ZetaL1Params one{10.0, 1};
    const double edge = 0.1;  // x = y = edge/2 ... |x+y| + |x−y| = edge = 2/a
    const double below = zeta_l1(Vec{edge / 2 - 1e-9}, Vec{edge / 2 - 1e-9}, one);
    const double above = zeta_l1(Vec{edge / 2 + 1e-9}, Vec{edge / 2 + 1e-9}, one);
    CHECK(below == doctest::Approx(above).epsilon(1e-6));
    CHECK(zeta_l1(Vec{0.4}, Vec{0.1}, one) != zeta_l1(Vec{0.01}, Vec{0.0}, one));

    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        const Vec x = random_vec(rng, 2, 0.6), y = random_vec(rng, 2, 0.6);
        CHECK(zeta_l1(x, y, params) == doctest::Approx(zeta_l1(y, x, params)).epsilon(1e-14));
    }
}

TEST_CASE("weak type examples") {
    const ZetaL1Params params{10.0, 2};
    const auto w = weak_type_from_zeta(params);
    CHECK(w.evaluate(Vec{0, 0}, Vec{0, 0}) == 0.0);
    CHECK(w.weak_u00() >= zeta_l1(Vec{0, 0}, Vec{0, 0}, params));
    CHECK(zeta_l1(Vec{0, 0}, Vec{0, 0}, params) > 0.0);
    Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        Vec x = random_l1_sphere(rng, 2);
        const double r = rng.uniform(1.0, 3.0);
        for (auto& v : x) v *= r;
        CHECK(w.evaluate(x, Vec{0, 0}) >= 1.0 - 1e-12);
    }
}

TEST_CASE("u1 composition") {
    const auto w = weak_type_from_zeta({10.0, 2});
    const auto u = compose_u1(w, 4.0, 0.5);
    REQUIRE(u.u1());
    CHECK(u.u1()->terms == 8);
    for (int k = 1; k <= 8; ++k) CHECK(u.u1()->lambda(k) == doctest::Approx(0.5 * k));
    CHECK(u.evaluate(Vec{0, 0}, Vec{0, 0}) == 0.0);
    const auto z = check_zigzag(u, 2000, 3, 1e-7);
    CHECK(z.midpoint_violations == 0);
    CHECK_THROWS(compose_u1(BurkholderSpec::scalar(2), 4.0, 0.5));
}

TEST_CASE("majorization probes") {
    const auto s3 = BurkholderSpec::scalar(3);
    const auto rep = check_majorization(s3, 10000, 1, 1e-9);
    CHECK(rep.probes == 10000);
    CHECK(rep.violations == 0);

    // Halving the constant must be caught.
    const PointFunction u = [&](auto x, auto y) { return s3.evaluate(x, y); };
    const PointFunction bad = [&](auto x, auto y) { return s3.majorant_with_beta(x, y, s3.beta() / 2); };
    CHECK(check_majorization(u, bad, default_sampler(s3), 10000, 1, 1e-9).violations > 0);

    for (const auto& s : {BurkholderSpec::lp_sum(3, 3), BurkholderSpec::hilbert(1.5, 3), BurkholderSpec::group_p2(3, 2, 2)})
        CHECK(check_majorization(s, 2000, 2, 1e-9).violations == 0);
}

TEST_CASE("zig-zag probes") {
    const auto s2 = BurkholderSpec::scalar(2);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-5, 5), y = rng.uniform(-5, 5), z = rng.uniform(-2, 2);
        // Along σ = +1 the p = 2 function is affine in α.
        const auto f = [&](double a) { return s2.evaluate(Vec{x + a * z}, Vec{y + a * z}); };
        CHECK(f(1) - 2 * f(0) + f(-1) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }
    const auto zz = check_zigzag(s2, 5000, 1, 1e-7);
    CHECK(zz.midpoint_violations == 0);
    CHECK(zz.worst_second_diff <= 1e-9);

    CHECK(check_zigzag(BurkholderSpec::lp_sum(3, 5), 10000, 2, 1e-7).midpoint_violations == 0);

    // Negative control: −U is zig-zag convex, so the probes must flag it.
    const auto s3 = BurkholderSpec::scalar(3);
    const PointFunction flipped = [&](auto x, auto y) { return -s3.evaluate(x, y); };
    CHECK(check_zigzag(flipped, default_sampler(s3), 2000, 3, 1e-7).midpoint_violations > 0);
}

TEST_CASE("sum closure and closed forms") {
    Rng rng(31);
    const auto lp = BurkholderSpec::lp_sum(3, 4);
    const auto sc = BurkholderSpec::scalar(3);
    const auto group = BurkholderSpec::group_p2(1.5, 3, 2);
    const auto row = BurkholderSpec::hilbert(1.5, 2);
    const auto h2 = BurkholderSpec::hilbert(2, 4);
    Rng arng(32);
    Matrix a(3, 3);
    for (auto& v : a.data) v = arng.normal();
    a = a * a.transpose();
    const auto weighted = BurkholderSpec::weighted_l2(a);
    const auto h3 = BurkholderSpec::hilbert(2, 3);
    const Matrix root = psd_sqrt(a);
    for (int i = 0; i < 300; ++i) {
        const Vec x = random_vec(rng, 4, 3), y = random_vec(rng, 4, 3);
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += sc.evaluate(Vec{x[k]}, Vec{y[k]});
        CHECK(lp.evaluate(x, y) == doctest::Approx(s).epsilon(1e-12));
        CHECK(h2.evaluate(x, y) == doctest::Approx(dot(x, x) - dot(y, y)).epsilon(1e-12));

        const Vec gx = random_vec(rng, 6, 3), gy = random_vec(rng, 6, 3);
        double g = 0.0;
        for (std::size_t r = 0; r < 3; ++r)
            g += row.evaluate(std::span<const double>(gx).subspan(2 * r, 2), std::span<const double>(gy).subspan(2 * r, 2));
        CHECK(group.evaluate(gx, gy) == doctest::Approx(g).epsilon(1e-12));

        const Vec wx = random_vec(rng, 3, 3), wy = random_vec(rng, 3, 3);
        CHECK(weighted.evaluate(wx, wy) == doctest::Approx(h3.evaluate(root * wx, root * wy)).epsilon(1e-10));
    }
}

TEST_CASE("gram representation matches the euclidean one") {
    Rng rng(41);
    Matrix b(4, 4);
    for (auto& v : b.data) v = rng.normal();
    const Matrix gram = b.transpose() * b;  // G = BᵀB so ‖Bc‖² = cᵀGc
    const auto hg = BurkholderSpec::hilbert_gram(3, gram);
    const auto he = BurkholderSpec::hilbert(3, 4);
    for (int i = 0; i < 200; ++i) {
        const Vec cx = random_vec(rng, 4, 2), cy = random_vec(rng, 4, 2);
        CHECK(hg.evaluate(cx, cy) == doctest::Approx(he.evaluate(b * cx, b * cy)).epsilon(1e-9));
    }
}

TEST_CASE("derivative matches finite differences") {
    for (const auto& s : {BurkholderSpec::scalar(1.5), BurkholderSpec::scalar(3), BurkholderSpec::lp_sum(3, 5),
                          BurkholderSpec::hilbert(2, 4), BurkholderSpec::group_p2(3, 2, 2),
                          BurkholderSpec::elementary_scalar(4)}) {
        const auto rep = check_derivative(s, 500, 7);
        CHECK(rep.probes == 500);
        CHECK(rep.max_abs_error <= 1e-5 * (s.construction() == Construction::ElementaryScalarK ? 1e4 : 1.0));
    }
}

TEST_CASE("zeta biconvexity and boundary inequality") {
    for (std::size_t d : {2u, 8u}) {
        const ZetaL1Params params{std::max(10.0, d * std::log(double(d))), d};
        Rng rng(50 + d);
        for (int i = 0; i < 2000; ++i) {
            const Vec x = random_vec(rng, d, 0.5 / d), y = random_vec(rng, d, 0.5 / d);
            const Vec x2 = random_vec(rng, d, 0.5 / d), y2 = random_vec(rng, d, 0.5 / d);
            const Vec xm = scaled(added(x, x2), 0.5), ym = scaled(added(y, y2), 0.5);
            const auto u = [&](const Vec& a, const Vec& b) { return zeta_canonical_u(a, b, params); };
            CHECK(0.5 * (u(x, y) + u(x2, y)) - u(xm, y) >= -1e-8);
            CHECK(0.5 * (u(x, y) + u(x, y2)) - u(x, ym) >= -1e-8);

            const Vec sx = random_l1_sphere(rng, d), sy = random_l1_sphere(rng, d);
            CHECK(zeta_l1(sx, sy, params) <= l1(added(sx, sy)) + 1e-12);
        }
    }
}

TEST_CASE("construction names round trip") {
    for (auto c : {Construction::ScalarP, Construction::LpSum, Construction::WeightedL2, Construction::HilbertP,
                   Construction::GroupP2, Construction::ElementaryScalarK, Construction::ZetaL1Weak,
                   Construction::U1Composed})
        CHECK(parse_construction(construction_name(c)) == c);
    CHECK_THROWS(parse_construction("schatten"));
    CHECK_THROWS_AS(BurkholderSpec::lp_sum(2, 3).evaluate(Vec{1, 2}, Vec{1, 2}), DimensionError);
}
