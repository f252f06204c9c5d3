#pragma once

namespace isofokker {

/// One-parameter Mittag-Leffler function E_alpha(z) for 0 < alpha <= 1 and
/// real z <= 0, accurate to about 1e-10 * max(1, |E|).
///
/// Small |z| uses the Taylor series summed in quad precision. Beyond the
/// switch point the function is evaluated from its spectral integral
///
///     E_a(-x) = x sin(a pi)/(a pi) * Int_0^inf exp(-u^(1/a)) / (u^2 + 2 u x cos(a pi) + x^2) du
///
/// and, where the asymptotic expansion has converged, cross-checked against it.
/// Throws std::invalid_argument for alpha outside (0, 1] or z > 0, and
/// NumericalError if the integral and asymptotic values disagree by more than 1e-8.
double mittag_leffler(double alpha, double z);

/// Temporal factor of the fractional relaxation, E_alpha(-eps t^alpha).
double ml_relaxation(double alpha, double eps, double t);

namespace ml_detail {

/// Largest |z| for which the quad-precision series keeps ~1e-15 accuracy
/// (capped at the default switch point 5).
double series_switch(double alpha);

double series(double alpha, double z);
double integral(double alpha, double z);
/// Optimally truncated asymptotic sum and the size of its first omitted term.
struct Asymptotic {
    double value;
    double error;
};
Asymptotic asymptotic(double alpha, double z);

/// 1 / Gamma(y), zero at the poles of Gamma.
double rgamma(double y);

} // namespace ml_detail

} // namespace isofokker
