#ifndef DEPHASIM_SPECIAL_FUNCTIONS_HPP
#define DEPHASIM_SPECIAL_FUNCTIONS_HPP

namespace dephasim::sf {

/// Euler Gamma function, Lanczos approximation (g=7, 9 terms).
/// Relative error below 1e-12 over the domain used here (|x| in [1e-3, 30]).
double gamma_fn(double x);

/// log |Gamma(x)| for x > 0.
double log_gamma(double x);

/// Digamma (psi) function for x > 0.
double digamma(double x);

/// Location x* in (1, 2) of the minimum of Gamma, i.e. the root of digamma.
double gamma_minimum_location();

/// coth(u) for u > 0 with guarded branches: returns 1 exactly for u > 30,
/// Laurent expansion 1/u + u/3 for u < 1e-4.
double coth_stable(double u);

} // namespace dephasim::sf

#endif
