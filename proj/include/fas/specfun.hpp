#pragma once

#include <cstdint>

namespace fas::specfun {

// Bessel functions of the first kind, |x| <= 50 guaranteed to 1e-12 absolute.
double bessel_j0(double x);
double bessel_j1(double x);

// Integral of J0 from 0 to z (z >= 0). Backs the hypergeometric identity below.
double bessel_j0_integral(double z);

// 1F2(1/2; 1; 3/2; x) for x <= 0. Power series for moderate |x|, the
// J0-integral identity 1F2(1/2;1;3/2;-a^2) = (1/(2a)) * Int_0^{2a} J0(t) dt
// (a = sqrt(-x)) for large |x|. Throws std::invalid_argument for x > 0.
double hyp1f2_half(double x);

// Series and integral routes exposed separately so they can be cross-checked.
double hyp1f2_half_series(double x);
double hyp1f2_half_integral(double x);

// Gaussian Q-function, Q(x) = erfc(x/sqrt(2))/2.
double gaussian_q(double x);

// Lower incomplete beta function at upper limit 1/2:
//   B_{1/2}(a, b) = Int_0^{1/2} t^(a-1) (1-t)^(b-1) dt,  a, b > 0.
double incomplete_beta_half(double a, double b);

// Closed form of Int_0^Theta sin^(2N) theta dtheta for integer N >= 1,
// Theta in [0, pi].
double sin_power_integral(int n, double theta);

double log_factorial(int n);

// Binomial coefficient as a double; exact while the result fits 2^53,
// log-domain beyond. Zero when k < 0 or k > n; callers rely on that
// convention for vanishing composition terms.
double binomial(long n, long k);

// p! / prod(parts!). Rejects parts that do not sum to p.
double multinomial(int p, const int* parts, int count);

} // namespace fas::specfun
