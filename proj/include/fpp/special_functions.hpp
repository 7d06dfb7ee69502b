#pragma once

namespace fpp {

/// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula below 0.5. Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// ln B(alpha, beta), evaluated in log space.
double log_beta_function(double alpha, double beta);

/// B(alpha, beta) = Gamma(alpha) Gamma(beta) / Gamma(alpha + beta).
double beta_function(double alpha, double beta);

/// E[Z^gamma] for Z ~ Beta(alpha, beta).
double beta_moment(double alpha, double beta, double gamma);

/// E[exp(t Z)] for Z ~ Beta(alpha, beta), summed as
/// sum_k t^k / k! * B(alpha + k, beta) / B(alpha, beta). Stops once the
/// current term drops below 1e-15 of the partial sum; at most 200 terms.
/// Requires |t| <= 50.
double beta_mgf(double alpha, double beta, double t);

}  // namespace fpp
