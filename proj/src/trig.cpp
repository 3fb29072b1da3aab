#include "dgauss/trig.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dgauss/errors.hpp"

namespace dgauss::trig {

namespace {

using boost::multiprecision::cpp_rational;
using cld = std::complex<long double>;

constexpr long kMaxCoeffs = 64;
constexpr long double kPi = std::numbers::pi_v<long double>;

// Fractional part in [0, 2) of x, then cos/sin of pi x, exact on quarter turns.
cld cis_pi(long double x) {
    x = std::fmod(x, 2.0L);
    if (x < 0) x += 2.0L;
    if (x == 0.0L) return {1.0L, 0.0L};
    if (x == 0.5L) return {0.0L, 1.0L};
    if (x == 1.0L) return {-1.0L, 0.0L};
    if (x == 1.5L) return {0.0L, -1.0L};
    return {std::cos(kPi * x), std::sin(kPi * x)};
}

// sin(pi (j + beta) / m), with the argument reduced exactly when beta is a fraction.
long double sin_term(long j, long m, const Beta& beta) {
    if (beta.fraction) {
        const auto [a, b] = *beta.fraction;
        // (j + a/b) / m = (j b + a) / (m b), reduced mod 2.
        const long num = j * b + a;
        const long den = m * b;
        const long red = ((num % (2 * den)) + 2 * den) % (2 * den);
        if (red == 0 || red == den) return 0.0L;
        return std::sin(kPi * static_cast<long double>(red) / static_cast<long double>(den));
    }
    return std::sin(kPi * (static_cast<long double>(j) + beta.value) / static_cast<long double>(m));
}

// Coefficients in s of P(1 - 2s) for P with integer monomial coefficients.
std::vector<BigInt> compose_one_minus_two_s(const ChebPoly& p) {
    std::vector<BigInt> out(p.coeffs.size(), 0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        if (p.coeffs[i] == 0) continue;
        // (1 - 2s)^i = sum_k C(i,k) (-2)^k s^k
        BigInt pow2 = 1;
        for (std::size_t k = 0; k <= i; ++k) {
            out[k] += p.coeffs[i] * special::binomial(static_cast<long>(i), static_cast<long>(k)) * pow2;
            pow2 *= -2;
        }
    }
    return out;
}

// cos(2 pi beta) when it is rational, i.e. beta = a/b with b in {1, 2, 3, 4, 6}.
std::optional<cpp_rational> rational_cos(const Beta& beta) {
    if (!beta.fraction) return std::nullopt;
    const auto [a, b] = *beta.fraction;
    const long turn = ((a % b) + b) % b;  // cos(2 pi a/b) depends on a mod b
    switch (b) {
        case 1: return cpp_rational(1);
        case 2: return cpp_rational(-1);
        case 3: return cpp_rational(-1, 2);
        case 4: return cpp_rational(0);
        case 6: return (turn == 1 || turn == 5) ? cpp_rational(1, 2) : cpp_rational(-1, 2);
        default: return std::nullopt;
    }
}

} // namespace

Beta Beta::from_fraction(long num, long den) {
    if (den == 0) throw DomainError("Beta: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num, den);
    num /= g;
    den /= g;
    Beta b;
    b.value = static_cast<long double>(num) / static_cast<long double>(den);
    b.fraction = std::make_pair(num, den);
    return b;
}

Beta Beta::from_value(double value) {
    if (!std::isfinite(value)) throw DomainError("Beta: value must be finite");
    Beta b;
    b.value = value;
    if (std::nearbyint(value) == value) b.fraction = std::make_pair(static_cast<long>(value), 1L);
    return b;
}

bool Beta::is_integer() const {
    if (fraction) return fraction->second == 1;
    return std::nearbyint(value) == value;
}

std::complex<double> trig_sum_direct(const TrigSumSpec& spec) {
    if (spec.m < 1) throw DomainError("trig_sum_direct: m must be >= 1");
    if (spec.r < 0 || spec.r >= spec.m) throw DomainError("trig_sum_direct: r must lie in [0, m)");
    if (spec.n < 1) throw DomainError("trig_sum_direct: n must be >= 1");
    cld sum = 0.0L;
    for (long j = 0; j < spec.m; ++j) {
        const long double s = sin_term(j, spec.m, spec.beta);
        if (s == 0.0L) {
            if (spec.exclude_singular) continue;
            throw DomainError("trig_sum_direct: singular term at j = " + std::to_string(j) +
                              " (sin vanishes); set exclude_singular to drop it");
        }
        const long phase = (2 * spec.r * j) % (2 * spec.m);
        const cld twist = cis_pi(static_cast<long double>(phase) / static_cast<long double>(spec.m));
        sum += twist / std::pow(s * s, static_cast<long double>(spec.n));
    }
    sum /= static_cast<long double>(spec.m);
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

long double ChebPoly::operator()(long double x) const {
    long double acc = 0.0L;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i].convert_to<long double>();
    return acc;
}

ChebPoly cheb_poly(ChebKind kind, long degree) {
    if (degree < -1 || (degree == -1 && kind == ChebKind::T)) {
        throw DomainError("cheb_poly: degree must be >= 0 (U also allows -1)");
    }
    ChebPoly p{kind, degree, {}};
    if (degree == -1) return p;
    std::vector<BigInt> prev{1};  // degree 0
    std::vector<BigInt> cur = (kind == ChebKind::T) ? std::vector<BigInt>{0, 1} : std::vector<BigInt>{0, 2};
    if (degree == 0) {
        p.coeffs = prev;
        return p;
    }
    for (long k = 1; k < degree; ++k) {
        std::vector<BigInt> next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    p.coeffs = cur;
    return p;
}

std::vector<std::complex<double>> generating_coeffs(long m, long r, const Beta& beta, long count) {
    if (m < 1) throw DomainError("generating_coeffs: m must be >= 1");
    if (r < 0 || r >= m) throw DomainError("generating_coeffs: r must lie in [0, m)");
    if (count < 0 || count > kMaxCoeffs) throw DomainError("generating_coeffs: count must lie in [0, 64]");
    if (beta.is_integer()) {
        throw DomainError("generating_coeffs: beta is an integer, so T_m(1) - cos(2 pi beta) = 0");
    }
    const auto n = static_cast<std::size_t>(count);
    std::vector<std::complex<double>> out(n);
    if (count == 0) return out;

    const auto den_poly = compose_one_minus_two_s(cheb_poly(ChebKind::T, m));
    const auto u_hi = compose_one_minus_two_s(cheb_poly(ChebKind::U, m - r - 1));
    const auto u_lo = compose_one_minus_two_s(cheb_poly(ChebKind::U, r - 1));

    // 1 / (T_m(1-2s) - cos 2 pi beta) as a power series.
    std::vector<long double> inv(n, 0.0L);
    auto den_at = [&](std::size_t k) { return k < den_poly.size() ? den_poly[k] : BigInt(0); };
    if (const auto c = rational_cos(beta)) {
        std::vector<cpp_rational> d(n), e(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = cpp_rational(den_at(k));
        d[0] -= *c;
        e[0] = 1 / d[0];
        for (std::size_t k = 1; k < n; ++k) {
            cpp_rational acc = 0;
            for (std::size_t i = 1; i <= k; ++i) acc += d[i] * e[k - i];
            e[k] = -acc / d[0];
        }
        for (std::size_t k = 0; k < n; ++k) inv[k] = e[k].convert_to<long double>();
    } else {
        std::vector<long double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = den_at(k).convert_to<long double>();
        d[0] -= std::cos(2.0L * kPi * beta.value);
        inv[0] = 1.0L / d[0];
        for (std::size_t k = 1; k < n; ++k) {
            long double acc = 0.0L;
            for (std::size_t i = 1; i <= k; ++i) acc += d[i] * inv[k - i];
            inv[k] = -acc / d[0];
        }
    }

    const cld twist = cis_pi(2.0L * beta.value);
    const cld front = 2.0L * cis_pi(-2.0L * beta.value * static_cast<long double>(r) / static_cast<long double>(m));
    std::vector<cld> num(n, 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < u_hi.size()) num[k] += u_hi[k].convert_to<long double>();
        if (k < u_lo.size()) num[k] += twist * u_lo[k].convert_to<long double>();
        num[k] *= front;
    }
    for (std::size_t k = 0; k < n; ++k) {
        cld acc = 0.0L;
        for (std::size_t i = 0; i <= k; ++i) acc += num[i] * inv[k - i];
        out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
    return out;
}

Sin4Identity sin4_identity(long k) {
    if (k < 1) throw DomainError("sin4_identity: k must be >= 1");
    const long m = 3 * k;
    long double lhs = 0.0L;
    for (long j = 1; j < m; ++j) {
        const long double s = std::sin(kPi * static_cast<long double>(j) / static_cast<long double>(m));
        const long double c = (j % 3 == 0) ? 1.0L : -0.5L;  // cos(2 pi j / 3)
        lhs += c / (s * s * s * s);
    }
    const long double k2 = static_cast<long double>(k) * static_cast<long double>(k);
    const long double rhs = -(39.0L * k2 * k2 + 30.0L * k2 + 11.0L) / 45.0L;
    return Sin4Identity{static_cast<double>(lhs), static_cast<double>(rhs)};
}

} // namespace dgauss::trig
