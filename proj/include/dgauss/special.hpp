#pragma once

#include <complex>

#include <boost/multiprecision/cpp_int.hpp>

namespace dgauss {

using BigInt = boost::multiprecision::cpp_int;

namespace special {

using cplx = std::complex<double>;

// sin(pi x) and cos(pi x) with exact zeros at integers / half-integers.
double sinpi(double x);
double cospi(double x);
cplx sinpi(cplx z);
cplx cospi(cplx z);

// Complex log-gamma (Lanczos, reflection for Re z < 1/2). Principal branch is
// not guaranteed; only differences followed by exp() are meaningful.
cplx lgamma(cplx z);
cplx gamma(cplx z);

// 1/Gamma(z): entire, exact zeros at non-positive integers.
cplx rgamma(cplx z);

// True when z is (numerically exactly) a non-positive integer.
bool is_nonpositive_integer(cplx z);

BigInt binomial(long n, long k);

} // namespace special
} // namespace dgauss
