#ifndef PVCOMP_DISTRIBUTIONS_HPP
#define PVCOMP_DISTRIBUTIONS_HPP

namespace pvcomp {

enum class Dist { std_normal_two_sided, chi2, f_dist, t_two_sided };

/// Upper-tail probability (two-sided for the normal and t cases).
/// Degrees of freedom may be fractional; df2 is ignored except for f_dist.
/// chi-square with df = 2 is the closed form exp(-x/2); the rest go
/// through the regularized incomplete beta/gamma functions.
double tail_prob(Dist dist, double df1, double df2, double x);

// building blocks, exposed for tests and report code
double chi2_tail(double df, double x);
double f_tail(double df1, double df2, double x);
double t_two_sided(double df, double x);
double normal_two_sided(double z);

/// Regularized incomplete beta I_x(a, b), Lentz continued fraction.
double incomplete_beta(double a, double b, double x);
/// Regularized upper incomplete gamma Q(a, x).
double upper_gamma(double a, double x);

/// Standard normal quantile (inverse CDF), accurate to ~1e-14.
double normal_quantile(double p);
/// Two-sided t critical value: t such that t_two_sided(df, t) = 1 - level.
double t_critical(double df, double level);

}  // namespace pvcomp

#endif
