#include "dgauss/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "dgauss/errors.hpp"

namespace dgauss::special {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        x += kLanczos[i] / (z + static_cast<double>(i));
    }
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

double sinpi(double x) {
    if (!std::isfinite(x)) return std::nan("");
    double r = std::remainder(x, 2.0);
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r > 0.5) {
        r = 1.0 - r;
    } else if (r < -0.5) {
        r = -1.0 - r;
    }
    return std::sin(kPi * r);
}

double cospi(double x) {
    if (!std::isfinite(x)) return std::nan("");
    const double r = std::fabs(std::remainder(x, 2.0));
    if (r == 0.5) return 0.0;
    return sinpi(0.5 - r);
}

cplx sinpi(cplx z) {
    const double y = kPi * z.imag();
    return {sinpi(z.real()) * std::cosh(y), cospi(z.real()) * std::sinh(y)};
}

cplx cospi(cplx z) {
    const double y = kPi * z.imag();
    return {cospi(z.real()) * std::cosh(y), -sinpi(z.real()) * std::sinh(y)};
}

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lgamma(cplx z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("lgamma: pole at non-positive integer");
    }
    if (z.real() < 0.5) {
        return std::log(kPi) - std::log(sinpi(z)) - lgamma_right(1.0 - z);
    }
    return lgamma_right(z);
}

cplx gamma(cplx z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("gamma: pole at non-positive integer");
    }
    if (z.real() < 0.5) {
        return kPi / (sinpi(z) * std::exp(lgamma_right(1.0 - z)));
    }
    return std::exp(lgamma_right(z));
}

cplx rgamma(cplx z) {
    if (z.real() < 0.5) {
        return sinpi(z) * std::exp(lgamma_right(1.0 - z)) / kPi;
    }
    return std::exp(-lgamma_right(z));
}

BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

} // namespace dgauss::special
