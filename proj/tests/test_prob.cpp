#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dgauss/errors.hpp"
#include "dgauss/heat.hpp"
#include "dgauss/prob.hpp"

using namespace dgauss;
using namespace dgauss::prob;
using heat::WalkParams;

namespace {

double total_mass(const WalkParams& w) {
    const long reach = heat::pq_tail_order(w, 1e-16) + 5;
    long double sum = 0.0L;
    for (long m = -reach; m <= reach; ++m) sum += pmf_Y(w, m);
    return static_cast<double>(sum);
}

} // namespace

TEST_CASE("pmf_Y") {
    CHECK(pmf_Y(WalkParams::make(0.5, 0.5, 0.0), 0) == 1.0);
    CHECK(pmf_Y(WalkParams::make(0.5, 0.5, 0.0), 3) == 0.0);
    const auto sym = WalkParams::make(0.5, 0.5, 1.0);
    CHECK(pmf_Y(sym, 1) == pmf_Y(sym, -1));
    CHECK(pmf_Y(sym, 7) == pmf_Y(sym, -7));
    for (auto w : {WalkParams::make(0.6, 0.4, 3.0), WalkParams::make(0.5, 0.5, 2.0), WalkParams::make(0.9, 0.1, 40.0)})
        CHECK(std::fabs(total_mass(w) - 1.0) < 1e-12);
    const auto drift = WalkParams::make(0.7, 0.3, 2.0);
    for (long m = -5; m <= 5; ++m) CHECK(pmf_Y(drift, m) == heat::kernel_pq(drift, m));
    CHECK_THROWS_AS(pmf_Y(WalkParams::make(0.6, 0.6, 1.0), 0), DomainError);
}

TEST_CASE("characteristic function") {
    CHECK(char_fn(WalkParams::make(0.7, 0.3, 2.0), 0.0) == std::complex<double>(1.0, 0.0));
    const auto at_pi = char_fn(WalkParams::make(0.5, 0.5, 1.0), std::numbers::pi);
    CHECK(std::fabs(at_pi.real() - std::exp(-2.0)) < 1e-15);
    CHECK(std::fabs(at_pi.imag()) < 1e-15);

    for (auto w : {WalkParams::make(0.5, 0.5, 1.0), WalkParams::make(0.7, 0.3, 3.0), WalkParams::make(0.2, 0.8, 5.5)}) {
        const long reach = heat::pq_tail_order(w, 1e-17) + 5;
        std::complex<long double> fourier = 0.0L;
        for (long m = -reach; m <= reach; ++m)
            fourier += static_cast<long double>(pmf_Y(w, m)) * std::polar(1.0L, 0.7L * static_cast<long double>(m));
        const auto phi = char_fn(w, 0.7);
        CHECK(std::abs(std::complex<double>(fourier) - phi) < 1e-10);
        for (double y : {-2.0, 0.3, 1.9, 3.1}) CHECK(std::abs(char_fn(w, y)) <= 1.0);
    }
}

TEST_CASE("moments") {
    const auto sym = moments(WalkParams::make(0.5, 0.5, 2.5));
    CHECK(sym.mean == 0.0);
    CHECK(sym.variance == doctest::Approx(2.5).epsilon(1e-15));
    const auto m = moments(WalkParams::make(0.7, 0.3, 2.0));
    CHECK(m.mean == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(m.variance == doctest::Approx(2.0).epsilon(1e-14));

    // second derivative of char_fn at 0 by central differences
    const auto w = WalkParams::make(0.7, 0.3, 2.0);
    const double h = 1e-4;
    const auto d1 = (char_fn(w, h) - char_fn(w, -h)) / (2.0 * h);
    const auto d2 = (char_fn(w, h) - 2.0 * char_fn(w, 0.0) + char_fn(w, -h)) / (h * h);
    CHECK(std::fabs(d1.imag() - m.mean) < 1e-7);
    CHECK(std::fabs(-d2.real() - (m.variance + m.mean * m.mean)) < 1e-5);
}

TEST_CASE("sampler, t = 0 and parity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) CHECK(sample_Y(WalkParams::make(0.5, 0.5, 0.0), rng) == 0);
    const auto w = WalkParams::make(0.5, 0.5, 3.0);
    bool parity_ok = true;
    for (int i = 0; i < 100000; ++i) {
        const Sample s = sample_Y_detailed(w, rng);
        if (((s.value - s.steps) % 2) != 0 || std::labs(s.value) > s.steps) parity_ok = false;
    }
    CHECK(parity_ok);
}

TEST_CASE("sampler matches pmf_Y (chi-square and moments, seed 20240611)") {
    const std::uint64_t seed = 20240611;
    for (auto w : {WalkParams::make(0.5, 0.5, 2.0), WalkParams::make(0.7, 0.3, 3.0)}) {
        const auto samples = sample_Y_many(w, 1'000'000, seed);
        const auto gof = chi_square_gof(samples, w, -12, 12);
        INFO("p=" << w.p << " stat=" << gof.statistic << " dof=" << gof.dof);
        CHECK(gof.p_value > 1e-4);
        CHECK(gof.dof >= 10);

        const auto m = moments(w);
        long double sum = 0.0L, sq = 0.0L;
        for (long v : samples) {
            sum += v;
            sq += static_cast<long double>(v) * v;
        }
        const double n = static_cast<double>(samples.size());
        const double mean = static_cast<double>(sum / n);
        const double var = static_cast<double>(sq / n) - mean * mean;
        const double sigma = std::sqrt(m.variance);
        CHECK(std::fabs(mean - m.mean) < 4.0 * sigma / 1e3);
        // Var of the sample variance is about mu4 - sigma^4 = 2 sigma^4 + t(p+q) for this law.
        const double var_sd = std::sqrt((2.0 * m.variance * m.variance + m.variance) / n);
        CHECK(std::fabs(var - m.variance) < 5.0 * var_sd);
    }
}

TEST_CASE("chi-square detects a wrong law") {
    const auto samples = sample_Y_many(WalkParams::make(0.5, 0.5, 2.2), 1'000'000, 5);
    CHECK(chi_square_gof(samples, WalkParams::make(0.5, 0.5, 2.0), -12, 12).p_value < 1e-6);
}

TEST_CASE("parallel sampler is bit-identical to the serial reference") {
    const auto w = WalkParams::make(0.6, 0.4, 4.0);
    for (std::size_t count : {std::size_t{0}, std::size_t{17}, std::size_t{65536}, std::size_t{300001}}) {
        CHECK(sample_Y_many(w, count, 99) == serial::sample_Y_many(w, count, 99));
        CHECK(sample_Y_many(w, count, 99).size() == count);
    }
    CHECK(sample_Y_many(w, 1000, 1) != sample_Y_many(w, 1000, 2));
}

TEST_CASE("convolution") {
    const auto u = Pmf::uniform({-1, 0, 1});
    const auto one = convolve_n(u, 1);
    CHECK(one.min_support() == -1);
    CHECK(one.probs() == u.probs());

    const auto two = convolve_n(u, 2);
    CHECK(two.min_support() == -2);
    const double want[] = {1, 2, 3, 2, 1};
    REQUIRE(two.probs().size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(std::fabs(two.probs()[static_cast<std::size_t>(i)] - want[i] / 9.0) < 1e-16);

    const auto big = convolve_n(u, 256);
    double sum = 0.0;
    for (double p : big.probs()) sum += p;
    CHECK(std::fabs(sum - 1.0) < 1e-10);
    CHECK(big.min_support() == -256);
    CHECK(big.max_support() == 256);
    CHECK(big.mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(big.variance() == doctest::Approx(256.0 * 2.0 / 3.0).epsilon(1e-10));

    // repeated squaring against plain iteration
    const auto skew = Pmf::make(-1, {0.2, 0.5, 0.0, 0.3});
    Pmf iter = skew;
    for (int i = 1; i < 13; ++i) iter = serial::convolve(iter, skew);
    const auto fast = convolve_n(skew, 13);
    REQUIRE(fast.probs().size() == iter.probs().size());
    for (std::size_t i = 0; i < fast.probs().size(); ++i) CHECK(std::fabs(fast.probs()[i] - iter.probs()[i]) < 1e-15);

    const auto a = Pmf::make(3, {0.1, 0.2, 0.3, 0.4});
    const auto b = Pmf::make(-7, {0.5, 0.25, 0.25});
    const auto pa = convolve(a, b), sa = serial::convolve(a, b);
    CHECK(pa.min_support() == sa.min_support());
    CHECK(pa.probs() == sa.probs());

    CHECK_THROWS_AS(convolve_n(u, 600'000), ResourceError);
    CHECK_THROWS_AS(convolve_n(u, 0), DomainError);
}

TEST_CASE("lattice span") {
    CHECK(lattice_span(Pmf::uniform({-1, 1})).span == 2);
    CHECK(lattice_span(Pmf::uniform({-1, 1})).offset == 1);
    CHECK(lattice_span(Pmf::uniform({-1, 0, 1})).span == 1);
    const auto s = lattice_span(Pmf::uniform({0, 3, 9}));
    CHECK(s.span == 3);
    CHECK(s.offset == 0);
    CHECK(lattice_span(Pmf::uniform({-4, 2, 8})).offset == 2);
    CHECK_THROWS_AS(lattice_span(Pmf::make(0, {1.0})), DegenerateError);
}

TEST_CASE("local limit discrepancy for uniform{-1,0,1}") {
    const auto u = Pmf::uniform({-1, 0, 1});
    const auto r16 = llt_discrepancy(u, 16);
    const auto r64 = llt_discrepancy(u, 64);
    const auto r256 = llt_discrepancy(u, 256);
    CHECK(r16.sup_discrepancy_discrete > r64.sup_discrepancy_discrete);
    CHECK(r64.sup_discrepancy_discrete > r256.sup_discrepancy_discrete);
    CHECK(r256.sup_discrepancy_discrete < 0.05);
    // regression pin for the realized value
    CHECK(r256.sup_discrepancy_discrete == doctest::Approx(7.1689803792e-4).epsilon(1e-6));
    CHECK(r16.gap > r64.gap);
    CHECK(r64.gap > r256.gap);
    for (const auto& r : {r16, r64, r256}) {
        CHECK(r.sup_discrepancy_discrete >= 0.0);
        CHECK(r.sup_discrepancy_continuous >= 0.0);
    }
    CHECK(r256.n == 256);

    // zero drift: the approximant is the plain discrete Gaussian
    const auto w = llt_walk(u, 64);
    CHECK(w.p == w.q_w);
    CHECK(std::fabs(w.t - 64.0 * 2.0 / 3.0) < 1e-12);
    for (long m : {0L, 3L, -11L}) CHECK(std::fabs(heat::kernel_pq(w, m) - heat::kernel_Z(w.t / 2.0, m)) < 1e-15);
}

TEST_CASE("local limit with drift") {
    const auto base = Pmf::make(-1, {0.2, 0.3, 0.5});
    const double mu = base.mean(), var = base.variance();
    const auto w = llt_walk(base, 100);
    CHECK(w.p + w.q_w == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((w.p - w.q_w) * w.t == doctest::Approx(100.0 * mu).epsilon(1e-12));
    CHECK(w.t == doctest::Approx(100.0 * var).epsilon(1e-12));
    const auto r1 = llt_discrepancy(base, 25);
    const auto r2 = llt_discrepancy(base, 100);
    CHECK(r2.sup_discrepancy_discrete < r1.sup_discrepancy_discrete);
}

TEST_CASE("local limit preconditions") {
    auto message = [](const Pmf& base) {
        try {
            (void)llt_discrepancy(base, 16);
        } catch (const PreconditionError& e) {
            return std::string(e.what());
        } catch (const DegenerateError& e) {
            return std::string("degenerate: ") + e.what();
        }
        return std::string();
    };
    CHECK_FALSE(message(Pmf::make(0, {1.0})).empty());
    CHECK(message(Pmf::uniform({-1, 1})).find("span") != std::string::npos);
    // mean 0.9, variance 0.09: sigma^2 <= |mu|
    CHECK(message(Pmf::make(0, {0.1, 0.9})).find("variance > |mean|") != std::string::npos);
}

TEST_CASE("Pmf construction and parsing") {
    CHECK_THROWS_AS(Pmf::make(0, {0.5, -0.1, 0.6}), DomainError);
    CHECK_THROWS_AS(Pmf::make(0, {0.5, 0.4}), DomainError);
    CHECK_THROWS_AS(Pmf::make(0, {}), DomainError);
    const auto trimmed = Pmf::make(-3, {0.0, 0.25, 0.75, 0.0});
    CHECK(trimmed.min_support() == -2);
    CHECK(trimmed.max_support() == -1);
    CHECK(trimmed.at(-2) == 0.25);
    CHECK(trimmed.at(5) == 0.0);

    const auto u = Pmf::parse("uniform:-1,0,1");
    CHECK(u.min_support() == -1);
    CHECK(u.at(0) == doctest::Approx(1.0 / 3.0));
    const auto p = Pmf::parse("points:-1=0.25,0=0.5,1=0.25");
    CHECK(p.at(0) == 0.5);
    CHECK(p.variance() == doctest::Approx(0.5));
    CHECK_THROWS_AS(Pmf::parse("uniform:1,1"), DomainError);
    CHECK_THROWS_AS(Pmf::parse("gauss:1"), DomainError);
    CHECK_THROWS_AS(Pmf::parse("points:0=0.5,1"), DomainError);

    std::istringstream in("# base law\n-1 0.25\n\n0 0.5\n1 0.25\n");
    const auto r = Pmf::read(in, "mem");
    CHECK(r.probs() == p.probs());
    std::istringstream bad("0 0.5\n1 x\n");
    try {
        (void)Pmf::read(bad, "mem");
        FAIL("bad pmf accepted");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
    }
    CHECK_THROWS(Pmf::load("/nonexistent/pmf.txt"));
}
