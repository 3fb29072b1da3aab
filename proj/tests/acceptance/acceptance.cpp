// Acceptance run: one PASS/FAIL line per criterion, with the measured values
// and the pinned tolerances. Exit status is the number of failing criteria
// that are not listed in kKnownRed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "dgauss/bessel.hpp"
#include "dgauss/graphs.hpp"
#include "dgauss/heat.hpp"
#include "dgauss/prob.hpp"
#include "dgauss/special.hpp"
#include "dgauss/tori.hpp"
#include "dgauss/trig.hpp"
#include "dgauss/zeta.hpp"
#include "oracles.hpp"

using namespace dgauss;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> body;
};

// Criterion 9 contains the check of the published tree determinant against
// the finite-difference derivative of the series. The two differ by exactly
// log q, so that sub-check cannot pass; see README.
const std::set<int> kKnownRed = {9};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void heat_conservation(Outcome& o) {
    double worst = 0.0;
    for (double t : {0.1, 1.0, 10.0, 100.0}) {
        const long reach = bessel::tail_order(t, 1e-14);
        long double sum = 0.0L;
        for (long x = -reach; x <= reach; ++x) sum += heat::kernel_Z(t, x);
        worst = std::max(worst, std::fabs(static_cast<double>(sum) - 1.0));
    }
    o.detail << "max |sum - 1| = " << sci(worst) << " (tol 1e-12)";
    o.require(worst <= 1e-12, "conservation");
}

void heat_equation(Outcome& o) {
    double worst = 0.0;
    for (long x : {0L, 1L, -1L, 7L, -7L})
        for (double t : {0.3, 3.0}) {
            const auto f = [x](double s) { return heat::kernel_Z(s, x); };
            const double fd = oracle::richardson_derivative(f, t, 1e-3);
            worst = std::max(worst, std::fabs(bessel::scaled_bessel_derivative(x, t) - fd));
        }
    o.detail << "max |recurrence - FD| = " << sci(worst) << " (tol 1e-8)";
    o.require(worst <= 1e-8, "heat equation");
}

void poisson_summation(Outcome& o) {
    double worst = 0.0;
    for (long n : {1L, 2L, 3L, 5L, 12L, 30L})
        for (double t : {0.25, 1.0, 4.0})
            for (long x = 0; x < n; ++x) {
                const double a = heat::kernel_circle(n, t, x, heat::CircleSide::spectral);
                const double b = heat::kernel_circle(n, t, x, heat::CircleSide::images);
                worst = std::max(worst, std::fabs(a - b));
            }
    o.detail << "max |spectral - images| = " << sci(worst) << " (tol 1e-12)";
    o.require(worst <= 1e-12, "duality");
}

void graph_expansion(Outcome& o) {
    using namespace graphs;
    const std::vector<std::pair<const char*, RegularGraph>> list = {
        {"C3", cycle(3)},    {"C4", cycle(4)},      {"C12", cycle(12)},      {"K4", complete(4)},
        {"K5", complete(5)}, {"Q3", hypercube(3)}, {"Petersen", petersen()}};
    double worst = 0.0;
    for (const auto& [name, g] : list)
        for (double t : {0.3, 1.0, 3.0})
            for (Vertex u = 0; u < g.vertex_count(); ++u) {
                const auto a = kernel_graph_column(g, u, t);
                const auto b = matrix_exp_kernel(g, u, t);
                for (Vertex v = 0; v < g.vertex_count(); ++v) worst = std::max(worst, std::fabs(a[v] - b[v]));
            }
    const BetheLattice tree{2, 30};
    double tree_worst = 0.0;
    for (double t : {0.3, 1.0, 3.0}) {
        const auto col = tree.matrix_exp_kernel(t);
        for (long r = 0; r <= 30; ++r)
            tree_worst = std::max(tree_worst, std::fabs(tree.kernel_graph(r, t) - col[static_cast<std::size_t>(r)]));
    }
    o.detail << "finite graphs max err = " << sci(worst) << ", Bethe(q=2,R=30) max err = " << sci(tree_worst)
             << " (tol 1e-9)";
    o.require(worst < 1e-9 && tree_worst < 1e-9, "expansion vs exp(-t L)");
}

void rescaled_limit(Outcome& o) {
    std::vector<double> errs;
    for (long n : {10L, 20L, 40L, 80L}) errs.push_back(heat::rescaled_limit_error(1.0, 0.0, n));
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
    const double at100 = heat::rescaled_limit_error(1.0, 0.0, 100);
    o.detail << "errors n=10..80: " << sci(errs[0]) << " " << sci(errs[1]) << " " << sci(errs[2]) << " "
             << sci(errs[3]) << "; n=100: " << sci(at100) << " (tol 1e-3)";
    o.require(decreasing, "strict decrease");
    o.require(at100 < 1e-3, "n=100 bound");
}

void local_limit(Outcome& o) {
    const auto base = prob::Pmf::uniform({-1, 0, 1});
    std::vector<double> d;
    for (long n : {16L, 64L, 256L}) d.push_back(prob::llt_discrepancy(base, n).sup_discrepancy_discrete);
    o.detail << "sqrt(n) sup discrepancy n=16,64,256: " << sci(d[0]) << " " << sci(d[1]) << " " << sci(d[2])
             << " (n=256 tol 0.05)";
    o.require(d[0] > d[1] && d[1] > d[2], "strict decrease");
    o.require(d[2] < 0.05, "n=256 bound");
}

void sampler(Outcome& o) {
    const std::uint64_t seed = 20240611;
    for (auto w : {heat::WalkParams::make(0.5, 0.5, 2.0), heat::WalkParams::make(0.7, 0.3, 3.0)}) {
        const auto draws = prob::sample_Y_many(w, 1'000'000, seed);
        const auto gof = prob::chi_square_gof(draws, w, -12, 12);
        const auto m = prob::moments(w);
        long double sum = 0.0L, sq = 0.0L;
        for (long v : draws) {
            sum += v;
            sq += static_cast<long double>(v) * v;
        }
        const double n = static_cast<double>(draws.size());
        const double mean = static_cast<double>(sum / n);
        const double var = static_cast<double>(sq / n) - mean * mean;
        const double mean_tol = 4.0 * std::sqrt(m.variance) / 1e3;
        const double var_tol = 5.0 * std::sqrt((2.0 * m.variance * m.variance + m.variance) / n);
        o.detail << "(" << w.p << "," << w.q_w << "," << w.t << "): p-value " << sci(gof.p_value) << ", mean err "
                 << sci(std::fabs(mean - m.mean)) << "/" << sci(mean_tol) << ", var err "
                 << sci(std::fabs(var - m.variance)) << "/" << sci(var_tol) << "; ";
        o.require(gof.p_value > 1e-4, "chi-square");
        o.require(std::fabs(mean - m.mean) < mean_tol, "mean");
        o.require(std::fabs(var - m.variance) < var_tol, "variance");
    }
    o.detail << "seed " << seed;
}

void zeta_special_values(Outcome& o) {
    bool exact = true;
    for (long m = 0; m <= 8; ++m)
        exact = exact && zeta::zeta_Z(static_cast<double>(-m)).real() ==
                             static_cast<double>(special::binomial(2 * m, m));
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> re(-2.0, 3.0), im(-2.0, 2.0);
    double fe = 0.0;
    for (int done = 0; done < 50;) {
        const zeta::cplx s(re(rng), im(rng));
        bool near_pole = false;
        for (double p = -7.0; p <= 8.0; p += 1.0)
            if (std::abs(s - p) < 0.1 || std::abs(1.0 - s - p) < 0.1) near_pole = true;
        if (near_pole) continue;
        ++done;
        const auto a = zeta::xi_Z(s);
        fe = std::max(fe, std::abs(a - zeta::xi_Z(1.0 - s)) / std::max(1.0, std::abs(a)));
    }
    const auto k = [](double t) { return heat::kernel_Z(t, 0); };
    const double mellin =
        std::abs(zeta::mellin_zeta_oracle(k, 0.25, {zeta::MellinTail::discrete_gauss, 400.0}) - zeta::zeta_Z(0.25));
    o.detail << "C(2m,m) exact m<=8: " << (exact ? "yes" : "no") << "; functional equation max residual "
             << sci(fe) << " (tol 1e-11); Mellin at 0.25 err " << sci(mellin) << " (tol 1e-8)";
    o.require(exact, "central binomials");
    o.require(fe < 1e-11, "functional equation");
    o.require(mellin < 1e-8, "Mellin quadrature");
}

void tree_zeta(Outcome& o) {
    bool values = true;
    for (long q : {1L, 2L, 3L, 5L}) {
        values = values && std::fabs(zeta::zeta_tree(q, 0.0).real() - 1.0) < 1e-12;
        values = values && std::fabs(zeta::zeta_tree(q, -1.0).real() - static_cast<double>(q + 1)) < 1e-12;
    }
    const bool pin = zeta::zeta_tree_neg_int(2, 2) == 12;
    double series = 0.0;
    for (long q : {2L, 3L})
        for (long m = 0; m <= 3; ++m)
            series = std::max(series, std::fabs(zeta::zeta_tree(q, static_cast<double>(-m)).real() -
                                                static_cast<double>(zeta::zeta_tree_neg_int(q, m))));
    bool q1 = true;
    for (long m = 0; m <= 10; ++m) q1 = q1 && zeta::zeta_tree_neg_int(1, m) == special::binomial(2 * m, m);

    double closed_err = 0.0, series_err = 0.0;
    for (long q : {2L, 3L}) {
        const auto f = [q](double s) { return zeta::zeta_tree(q, s).real(); };
        const double fd = oracle::richardson_derivative(f, 0.0, 1e-4);
        closed_err = std::max(closed_err, std::fabs(fd + std::log(zeta::tree_det(q))));
        series_err = std::max(series_err, std::fabs(fd + std::log(zeta::tree_det_series(q))));
    }
    o.detail << "zeta(0)=1, zeta(-1)=q+1 for q=1,2,3,5: " << (values ? "yes" : "no")
             << "; (2,2)=12: " << (pin ? "yes" : "no") << "; series vs exact max err " << sci(series)
             << " (tol 1e-9); q=1 central binomials: " << (q1 ? "yes" : "no")
             << "; det' closed form (1-q^-2)^((1-q)/2) vs FD: |log det + zeta'(0)| = " << sci(closed_err)
             << " (tol 1e-6; equals log q); q(1-q^-2)^((1-q)/2) vs FD: " << sci(series_err);
    o.require(values, "zeta(0), zeta(-1)");
    o.require(pin, "(2,2)");
    o.require(series < 1e-9, "series path");
    o.require(q1, "q=1 reduction");
    o.require(closed_err < 1e-6, "closed-form determinant vs finite difference");
}

void generating_function(Outcome& o) {
    double worst = 0.0;
    const trig::Beta betas[] = {trig::Beta::from_fraction(1, 4), trig::Beta::from_fraction(1, 3),
                                trig::Beta::from_value(0.4142)};
    for (long m = 1; m <= 12; ++m)
        for (long r = 0; r < m; ++r)
            for (const auto& b : betas) {
                const auto coeffs = trig::generating_coeffs(m, r, b, 6);
                for (long n = 1; n <= 6; ++n) {
                    trig::TrigSumSpec s;
                    s.m = m;
                    s.r = r;
                    s.beta = b;
                    s.n = n;
                    const auto d = trig::trig_sum_direct(s);
                    worst = std::max(worst, std::abs(coeffs[static_cast<std::size_t>(n - 1)] - d) / std::abs(d));
                }
            }
    o.detail << "max relative error = " << sci(worst) << " (tol 1e-9)";
    o.require(worst <= 1e-9, "coefficients");
}

void sin4(Outcome& o) {
    double worst = 0.0;
    for (long k = 1; k <= 6; ++k) {
        const auto v = trig::sin4_identity(k);
        const double kd = static_cast<double>(k);
        const double formula = -(39.0 * kd * kd * kd * kd + 30.0 * kd * kd + 11.0) / 45.0;
        worst = std::max(worst, std::fabs(v.lhs - formula));
    }
    const double k1 = std::fabs(trig::sin4_identity(1).lhs + 16.0 / 9.0);
    o.detail << "max |lhs - formula| k=1..6 = " << sci(worst) << " (tol 1e-8); k=1 vs -16/9: " << sci(k1);
    o.require(worst <= 1e-8, "identity");
    o.require(k1 <= 1e-14, "k=1");
}

void torus_asymptotics(Outcome& o) {
    double d1 = 0.0;
    for (long n = 2; n <= 64; ++n) d1 = std::max(d1, std::fabs(tori::asymptotic_remainder(1, n)));
    std::vector<double> diffs;
    for (long n : {8L, 16L, 32L, 64L})
        diffs.push_back(std::fabs(tori::asymptotic_remainder(2, 2 * n) - tori::asymptotic_remainder(2, n)));
    bool d2 = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) d2 = d2 && diffs[i] < diffs[i - 1];
    const double density = std::fabs(tori::lattice_density(2) - 4.0 * boost::math::constants::catalan<double>() /
                                                                     std::numbers::pi);
    const double r4 = tori::asymptotic_remainder(3, 4), r8 = tori::asymptotic_remainder(3, 8),
                 r16 = tori::asymptotic_remainder(3, 16);
    const bool d3 = std::fabs(r16 - r8) < std::fabs(r8 - r4);
    o.detail << "d=1 max |remainder| n=2..64 = " << sci(d1) << " (zero up to round-off, tol 1e-12); d=2 diffs "
             << sci(diffs[0]) << " " << sci(diffs[1]) << " " << sci(diffs[2]) << " " << sci(diffs[3])
             << "; |density(2) - 4G/pi| = " << sci(density) << " (tol 1e-6); d=3 remainders " << r4 << " " << r8
             << " " << r16;
    o.require(d1 <= 1e-12, "d=1");
    o.require(d2, "d=2 differences decrease");
    o.require(density <= 1e-6, "density(2)");
    o.require(d3, "d=3 Cauchy");
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "heat conservation", 1.0, heat_conservation},
        {2, "heat equation", 1.0, heat_equation},
        {3, "discrete Poisson summation", 5.0, poisson_summation},
        {4, "graph kernel expansion vs matrix exponential", 60.0, graph_expansion},
        {5, "rescaled limit", 5.0, rescaled_limit},
        {6, "local limit theorem", 30.0, local_limit},
        {7, "sampler", 30.0, sampler},
        {8, "zeta_Z special values", 10.0, zeta_special_values},
        {9, "tree zeta special values", 30.0, tree_zeta},
        {10, "Chebyshev generating function", 30.0, generating_function},
        {11, "sin^4 evaluation", 1.0, sin4},
        {12, "torus asymptotics", 120.0, torus_asymptotics},
    };
    int unexpected = 0, passed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail << " [over time budget]";
        }
        const bool known = kKnownRed.count(c.id) > 0;
        std::printf("%s %2d %s: %s; %.2f s (budget %g s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.str().c_str(), secs, c.budget_s, (!o.pass && known) ? " [known]" : "");
        if (o.pass) {
            ++passed;
        } else if (!known) {
            ++unexpected;
        }
    }
    std::printf("%d/%zu criteria pass; %d unexpected failure(s)\n", passed, criteria.size(), unexpected);
    return unexpected;
}
