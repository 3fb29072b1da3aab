#pragma once

#include <complex>
#include <functional>

#include "dgauss/special.hpp"

namespace dgauss::zeta {

using cplx = std::complex<double>;

enum class Method { closed_form, series, quadrature, polynomial };

struct ZetaPoint {
    cplx s;
    cplx value;
    Method method = Method::closed_form;
};

/// Spectral zeta function of Z: Gamma(1/2 - s) / (sqrt(pi) 4^s Gamma(1 - s)).
/// Exact C(2m, m) at s = -m; PoleError at s = 1/2, 3/2, 5/2, ...
cplx zeta_Z(cplx s);

/// 2^s cos(pi s / 2) zeta_Z(s / 2). The product is entire; at odd positive
/// integers it is evaluated as sqrt(pi) / (Gamma((1+s)/2) Gamma(1 - s/2)).
cplx xi_Z(cplx s);

/// Gauss hypergeometric series. Terminating cases are summed in full; for
/// 0 <= z < 1 the series stops once a term drops below 1e-17 |sum|. z = 1 is
/// accepted when Re(c - a - b) > 0, via Gauss's summation theorem.
cplx gauss_2f1(cplx a, cplx b, cplx c, double z);

/// Spectral zeta function of the (q+1)-regular tree from its hypergeometric
/// series in j. q = 1 returns zeta_Z(s).
cplx zeta_tree(long q, cplx s, double tol = 1e-14);
ZetaPoint zeta_tree_point(long q, cplx s, double tol = 1e-14);

/// Exact value at s = -m.
BigInt zeta_tree_neg_int(long q, long m);

/// Closed form (1 - q^{-2})^{(1-q)/2}; 1 for q = 1.
double tree_det(long q);

/// (q-1)/2 log(1 - q^{-2}). This closed form leaves out the -s log q
/// carried by the factor q^{-s} of the leading series term, so it is not the
/// derivative of zeta_tree at 0 for q > 1; see the _series variants.
double tree_zeta_derivative_at_zero(long q);

/// Derivative at 0 of the series: (q-1)/2 log(1 - q^{-2}) - log q. Agrees with
/// int log(lambda) dmu over the spectral measure at the root.
double tree_zeta_derivative_at_zero_series(long q);

/// exp(-tree_zeta_derivative_at_zero_series(q)) = q tree_det(q).
double tree_det_series(long q);

/// Large-time behavior of the kernel, used to close the Mellin integral.
enum class MellinTail {
    decaying,        // negligible beyond the horizon
    discrete_gauss,  // e^{-2t} I_0(2t): asymptotic series beyond the horizon
};

struct MellinOptions {
    MellinTail tail = MellinTail::decaying;
    double horizon = 400.0;
};

/// (1/Gamma(s)) int_0^inf k(t) t^{s-1} dt for 0 < Re(s) < 1/2, split at t = 1.
/// On [0, 1] the substitution t = u^{1/Re s} removes the endpoint singularity.
cplx mellin_zeta_oracle(const std::function<double(double)>& kernel_at_origin, cplx s,
                        const MellinOptions& options = {});

/// int_T^inf (4 pi t)^{-1/2} sum_k a_k (2t)^{-k} t^{s-1} dt, the large-time
/// tail of the Mellin integral of e^{-2t} I_0(2t).
cplx discrete_gauss_mellin_tail(double horizon, cplx s);

} // namespace dgauss::zeta
