#pragma once

namespace ndi {

// Modified Bessel functions of the second kind, integer order.
// Series expansion below x = 2, rational approximation above.
double bessel_k0(double x);
double bessel_k1(double x);

// Exponentially scaled variants e^x K_n(x); safe for large x.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

// log K_n(x), usable where K_n itself would underflow.
double log_bessel_k0(double x);
double log_bessel_k1(double x);

// K_nu for nu = n + 1/2 (closed forms via the half-integer recurrence)
// and for small integer nu (upward recurrence from K_0, K_1).
// Orders outside that set are rejected with DomainError.
double bessel_k(double nu, double x);
double log_bessel_k(double nu, double x);

// Regularized lower incomplete gamma P(a, x); 1e-13 stopping target.
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with k dof.
double chi_square_sf(double x, double dof);

double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace ndi
