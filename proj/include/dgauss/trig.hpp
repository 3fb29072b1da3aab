#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dgauss/special.hpp"

namespace dgauss::trig {

/// Twist parameter. A fraction num/den is kept exactly when supplied, which
/// lets the generating function run in rational arithmetic.
struct Beta {
    long double value = 0.0L;
    std::optional<std::pair<long, long>> fraction;  // reduced, den > 0

    static Beta from_fraction(long num, long den);
    static Beta from_value(double value);
    bool is_integer() const;
};

/// C_{m,r}(beta, n) = (1/m) sum_j e^{2 pi i r j/m} / sin^{2n}((j + beta) pi / m).
struct TrigSumSpec {
    long m = 1;
    long r = 0;
    Beta beta;
    long n = 1;
    bool exclude_singular = false;  // drop terms with sin((j + beta) pi / m) = 0
};

/// Direct summation in long double. DomainError on a singular term unless excluded.
std::complex<double> trig_sum_direct(const TrigSumSpec& spec);

enum class ChebKind { T, U };

struct ChebPoly {
    ChebKind kind = ChebKind::T;
    long degree = 0;             // -1 for U_{-1} = 0
    std::vector<BigInt> coeffs;  // monomial basis, coeffs[i] multiplies x^i

    long double operator()(long double x) const;
};

/// Chebyshev polynomials from T_{k+1} = 2x T_k - T_{k-1} (same recurrence for U).
ChebPoly cheb_poly(ChebKind kind, long degree);

/// First count Maclaurin coefficients of
///   2 e^{-2 pi i beta r/m} (U_{m-r-1}(1-2s) + e^{2 pi i beta} U_{r-1}(1-2s)) / (T_m(1-2s) - cos 2 pi beta);
/// coefficient k equals C_{m,r}(beta, k+1). count <= 64.
std::vector<std::complex<double>> generating_coeffs(long m, long r, const Beta& beta, long count);

struct Sin4Identity {
    double lhs = 0.0;  // sum_{j=1}^{3k-1} cos(2 pi j/3) / sin^4(j pi / 3k)
    double rhs = 0.0;  // -(39 k^4 + 30 k^2 + 11) / 45
};

Sin4Identity sin4_identity(long k);

} // namespace dgauss::trig
