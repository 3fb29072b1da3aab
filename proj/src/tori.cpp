#include "dgauss/tori.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dgauss/errors.hpp"
#include "dgauss/special.hpp"

namespace dgauss::tori {

namespace {

constexpr double kVolumeCap = 1e7;
constexpr long kTreeCountCap = 400;
constexpr long kChunk = 4096;

// Neumaier compensated sum.
struct Compensated {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

std::vector<std::vector<double>> eigen_tables(const TorusSpec& spec) {
    std::vector<std::vector<double>> tables;
    for (long n : spec.dims) {
        std::vector<double> t(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k) {
            const double s = special::sinpi(static_cast<double>(k) / static_cast<double>(n));
            t[static_cast<std::size_t>(k)] = 4.0 * s * s;
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

double eigenvalue(const std::vector<std::vector<double>>& tables, const TorusSpec& spec, long index) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const long n = spec.dims[i];
        lambda += tables[i][static_cast<std::size_t>(index % n)];
        index /= n;
    }
    return lambda;
}

void check_nondegenerate(const TorusSpec& spec) {
    if (spec.volume() == 1) throw DegenerateError("log_det_prime: every dimension is 1, no nonzero eigenvalues");
}

// Chunk sums over [lo, hi) of the flat index, skipping index 0 (the zero mode).
Compensated chunk_sum(const std::vector<std::vector<double>>& tables, const TorusSpec& spec, long lo, long hi) {
    Compensated c;
    for (long i = std::max(lo, 1L); i < hi; ++i) c.add(std::log(eigenvalue(tables, spec, i)));
    return c;
}

// Double-exponential nodes cluster at the endpoints, where the only
// non-smooth point (theta = 0) sits.
double integrate(const std::function<double(double)>& f, double a, double b) {
    static thread_local boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate(f, a, b, 1e-12);
}

} // namespace

TorusSpec TorusSpec::make(std::vector<long> dims) {
    if (dims.empty() || dims.size() > 4) throw DomainError("TorusSpec: dimension must lie in [1, 4]");
    double volume = 1.0;
    for (long n : dims) {
        if (n < 1) throw DomainError("TorusSpec: every side must be >= 1");
        volume *= static_cast<double>(n);
    }
    if (volume > kVolumeCap) {
        throw ResourceError("TorusSpec: " + std::to_string(volume) + " vertices exceeds cap 10^7");
    }
    return TorusSpec{std::move(dims)};
}

TorusSpec TorusSpec::cube(int d, long n) {
    if (d < 1 || d > 4) throw DomainError("TorusSpec: dimension must lie in [1, 4]");
    return make(std::vector<long>(static_cast<std::size_t>(d), n));
}

long TorusSpec::volume() const {
    long v = 1;
    for (long n : dims) v *= n;
    return v;
}

double log_det_prime(const TorusSpec& spec) {
    const TorusSpec s = TorusSpec::make(spec.dims);
    check_nondegenerate(s);
    const auto tables = eigen_tables(s);
    const long volume = s.volume();
    const long chunks = (volume + kChunk - 1) / kChunk;
    std::vector<Compensated> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (long c = 0; c < chunks; ++c) {
        partial[static_cast<std::size_t>(c)] = chunk_sum(tables, s, c * kChunk, std::min(volume, (c + 1) * kChunk));
    }
    // Fixed combination order keeps the result independent of the thread count.
    Compensated total;
    for (const auto& p : partial) {
        total.add(p.sum);
        total.add(p.carry);
    }
    return total.value();
}

namespace serial {

double log_det_prime(const TorusSpec& spec) {
    const TorusSpec s = TorusSpec::make(spec.dims);
    check_nondegenerate(s);
    const auto tables = eigen_tables(s);
    return chunk_sum(tables, s, 0, s.volume()).value();
}

} // namespace serial

double lattice_density(int d) {
    if (d < 1 || d > 4) throw DomainError("lattice_density: d must lie in [1, 4]");
    if (d == 1) return 0.0;
    // (1/2pi) int_0^{2pi} log(a + 2 - 2 cos t) dt = 2 asinh(sqrt(a)/2); the
    // remaining angles are even and 2pi-periodic, so average over [0, pi].
    std::function<double(int, double)> level = [&](int remaining, double a) -> double {
        if (remaining == 0) return 2.0 * std::asinh(0.5 * std::sqrt(a));
        return integrate(
                   [&](double theta) {
                       const double s = std::sin(0.5 * theta);
                       return level(remaining - 1, a + 4.0 * s * s);
                   },
                   0.0, std::numbers::pi) /
               std::numbers::pi;
    };
    return level(d - 1, 0.0);
}

double asymptotic_remainder(int d, long n) {
    if (d < 1 || d > 4) throw DomainError("asymptotic_remainder: d must lie in [1, 4]");
    if (n < 2) throw DomainError("asymptotic_remainder: n must be >= 2");
    const TorusSpec spec = TorusSpec::cube(d, n);
    const double volume = static_cast<double>(spec.volume());
    return log_det_prime(spec) - volume * lattice_density(d) - 2.0 * std::log(static_cast<double>(n));
}

BigInt spanning_tree_count(const TorusSpec& spec) {
    const TorusSpec s = TorusSpec::make(spec.dims);
    const long volume = s.volume();
    if (volume > kTreeCountCap) {
        throw DomainError("spanning_tree_count: " + std::to_string(volume) + " vertices exceeds cap 400");
    }
    if (volume == 1) return 1;
    const auto size = static_cast<std::size_t>(volume);
    std::vector<std::vector<BigInt>> lap(size, std::vector<BigInt>(size, 0));
    for (long v = 0; v < volume; ++v) {
        long stride = 1;
        for (long n : s.dims) {
            const long coord = (v / stride) % n;
            if (n > 1) {
                for (long step : {1L, -1L}) {
                    const long w = v + (((coord + step + n) % n) - coord) * stride;
                    lap[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] += 1;
                    lap[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] -= 1;
                }
            }
            stride *= n;
        }
    }
    // Bareiss elimination on the minor without row/column 0.
    const std::size_t m = size - 1;
    std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i][j] = lap[i + 1][j + 1];
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < m; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < m && a[p][k] == 0) ++p;
            if (p == m) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            for (std::size_t j = k + 1; j < m; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[m - 1][m - 1];
}

} // namespace dgauss::tori
