#include <doctest.h>

#include <cmath>
#include <random>

#include "dgauss/bessel.hpp"
#include "dgauss/errors.hpp"
#include "dgauss/graphs.hpp"
#include "dgauss/heat.hpp"

using namespace dgauss;
using namespace dgauss::heat;

TEST_CASE("kernel on Z") {
    CHECK(kernel_Z(0.0, 0) == 1.0);
    CHECK(kernel_Z(1.0, 0) == doctest::Approx(0.3085083225536710395).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_Z(-1.0, 0), DomainError);
    const long reach = bessel::tail_order(5.0, 1e-14);
    long double sum = 0.0L;
    for (long x = -reach; x <= reach; ++x) sum += kernel_Z(5.0, x);
    CHECK(std::fabs(static_cast<double>(sum) - 1.0) < 1e-12);
}

TEST_CASE("asymmetric kernel") {
    for (double t : {0.3, 2.0, 17.0})
        for (long x : {-4L, 0L, 9L}) CHECK(kernel_pq(WalkParams::make(1.0, 1.0, t), x) == doctest::Approx(kernel_Z(t, x)).epsilon(1e-14));
    CHECK_THROWS_AS(WalkParams::make(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(WalkParams::make(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(WalkParams::probability(0.6, 0.6, 1.0), DomainError);

    const auto w = WalkParams::probability(0.7, 0.3, 2.0);
    const long reach = pq_tail_order(w, 1e-16) + 1;
    long double mass = 0.0L, first = 0.0L;
    for (long x = -reach; x <= reach; ++x) {
        const double v = kernel_pq(w, x);
        mass += v;
        first += x * v;
    }
    CHECK(std::fabs(static_cast<double>(mass) - 1.0) < 1e-12);
    CHECK(std::fabs(static_cast<double>(first) - 0.8) < 1e-12);
}

TEST_CASE("asymmetric kernel: random normalized rates") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> prob(0.02, 0.98);
    std::uniform_real_distribution<double> time(0.0, 40.0);
    for (int i = 0; i < 40; ++i) {
        const double p = prob(rng);
        const auto w = WalkParams::probability(p, 1.0 - p, time(rng));
        const long reach = pq_tail_order(w, 1e-16) + 1;
        long double mass = 0.0L, first = 0.0L;
        for (long x = -reach; x <= reach; ++x) {
            const double v = kernel_pq(w, x);
            CHECK(v >= 0.0);
            mass += v;
            first += x * v;
        }
        INFO("p=" << p << " t=" << w.t);
        CHECK(std::fabs(static_cast<double>(mass) - 1.0) < 1e-12);
        CHECK(std::fabs(static_cast<double>(first) - (2.0 * p - 1.0) * w.t) < 1e-10 * (1.0 + w.t));
    }
}

TEST_CASE("circle: small cases") {
    for (double t : {0.0, 0.5, 7.0}) {
        CHECK(kernel_circle(1, t, 0, CircleSide::spectral) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(kernel_circle(1, t, 0, CircleSide::images) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(kernel_circle(2, t, 0, CircleSide::spectral) == doctest::Approx((1.0 + std::exp(-4.0 * t)) / 2.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(kernel_circle(0, 1.0, 0, CircleSide::spectral), DomainError);
    CHECK(kernel_circle(5, 1.0, 7, CircleSide::spectral) == kernel_circle(5, 1.0, 2, CircleSide::spectral));
    CHECK(kernel_circle(5, 1.0, -3, CircleSide::images) == kernel_circle(5, 1.0, 2, CircleSide::images));
}

TEST_CASE("circle: spectral and image sums agree, mass is conserved") {
    for (long n : {1L, 2L, 3L, 5L, 12L, 30L}) {
        for (double t : {0.25, 1.0, 4.0}) {
            long double spec_mass = 0.0L, img_mass = 0.0L;
            for (long x = 0; x < n; ++x) {
                const double a = kernel_circle(n, t, x, CircleSide::spectral);
                const double b = kernel_circle(n, t, x, CircleSide::images);
                INFO("n=" << n << " t=" << t << " x=" << x);
                CHECK(std::fabs(a - b) < 1e-12);
                spec_mass += a;
                img_mass += b;
            }
            CHECK(std::fabs(static_cast<double>(spec_mass) - 1.0) < 1e-12);
            CHECK(std::fabs(static_cast<double>(img_mass) - 1.0) < 1e-12);
        }
    }
    CHECK(std::fabs(kernel_circle(12, 1.5, 5, CircleSide::spectral) - kernel_circle(12, 1.5, 5, CircleSide::images)) < 1e-12);
}

TEST_CASE("tree kernel") {
    for (double t : {0.4, 3.0})
        for (long r : {0L, 2L, 5L}) CHECK(kernel_tree(TreeParams::make(1, t), r) == kernel_Z(t, r));
    CHECK(kernel_tree(TreeParams::make(2, 0.0), 0) == 1.0);
    CHECK(kernel_tree(TreeParams::make(2, 0.0), 3) == 0.0);
    CHECK_THROWS_AS(TreeParams::make(0, 1.0), DomainError);
    CHECK_THROWS_AS(TreeParams::make(2, 1.0, 1e-3), DomainError);
    CHECK_THROWS_AS(kernel_tree(TreeParams::make(2, 1.0), -1), DomainError);

    // Lumped radial matrix exponential of the radius-30 tree (Python/scipy reference).
    const double pinned[] = {0.16232220389079843, 0.10526854362705425, 0.04309048464764975, 0.01278817890825922};
    for (long r = 0; r < 4; ++r) CHECK(std::fabs(kernel_tree(TreeParams::make(2, 1.0), r) - pinned[r]) < 1e-12);
}

TEST_CASE("tree kernel against the truncated Bethe lattice") {
    const graphs::BetheLattice lattice{2, 30};
    for (double t : {0.3, 1.0}) {
        const auto col = lattice.matrix_exp_kernel(t);
        for (long r = 0; r <= 10; ++r) {
            INFO("t=" << t << " r=" << r);
            CHECK(std::fabs(kernel_tree(TreeParams::make(2, t), r) - col[static_cast<std::size_t>(r)]) < 1e-10);
        }
    }
    const graphs::BetheLattice wide{3, 30};
    const auto col = wide.matrix_exp_kernel(1.0);
    CHECK(std::fabs(kernel_tree(TreeParams::make(3, 1.0), 0) - col[0]) < 1e-10);
}

TEST_CASE("tree kernel conserves heat over spheres") {
    for (long q : {2L, 3L, 5L}) {
        for (double t : {0.5, 2.0}) {
            const auto tp = TreeParams::make(q, t, 1e-13);
            long double mass = 0.0L;
            long double last = 1.0L;
            // The radial walk has drift q-1 and rate q+1; stop once sphere mass is negligible.
            for (long r = 0; r < 400 && (r < 5 || last > 1e-18L); ++r) {
                const double k = kernel_tree(tp, r);
                CHECK(k >= 0.0);
                last = k * tree_sphere_size(q, r);
                mass += last;
            }
            INFO("q=" << q << " t=" << t);
            CHECK(std::fabs(static_cast<double>(mass) - 1.0) < 10.0 * 1e-13);
        }
    }
}

TEST_CASE("rescaled convergence to the Gaussian") {
    CHECK(round_half_even(2.5) == 2);
    CHECK(round_half_even(3.5) == 4);
    CHECK(round_half_even(-2.5) == -2);
    const std::pair<double, double> points[] = {{1.0, 0.0}, {0.5, 1.0}, {2.0, -0.5}};
    for (const auto& [t, x] : points) {
        double prev = rescaled_limit_error(t, x, 10);
        for (long n : {20L, 40L, 80L, 160L}) {
            const double e = rescaled_limit_error(t, x, n);
            INFO("t=" << t << " x=" << x << " n=" << n);
            CHECK(e < prev);
            prev = e;
        }
    }
    CHECK(rescaled_limit_error(1.0, 0.0, 100) < 1e-3);
    CHECK(rescaled_limit_error(0.5, 1.0, 160) < 5e-3);
    CHECK_THROWS_AS(rescaled_limit_error(0.0, 0.0, 10), DomainError);
}

TEST_CASE("parallel table matches the serial reference") {
    const auto a = kernel_Z_table(37.5, -300, 300);
    const auto b = serial::kernel_Z_table(37.5, -300, 300);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
