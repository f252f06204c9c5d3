#include "isofokker/mittag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "isofokker/error.hpp"

namespace isofokker {

namespace {

constexpr double kDefaultSwitch = 5.0;
// Largest series term the quad-precision sum may carry (absolute error ~1e-18).
constexpr double kMaxSeriesTerm = 1e16;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "mittag_leffler: alpha must lie in (0, 1], got " << alpha;
        throw std::invalid_argument(os.str());
    }
}

// log of the largest |z|^k / Gamma(alpha k + 1) over k.
double log_max_term(double alpha, double x) {
    if (x <= 0.0) return 0.0;
    const double lx = std::log(x);
    double best = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double v = k * lx - std::lgamma(alpha * k + 1.0);
        best = std::max(best, v);
        if (v < best - 50.0) break;
    }
    return best;
}

double compute_switch(double alpha) {
    const double limit = std::log(kMaxSeriesTerm);
    if (log_max_term(alpha, kDefaultSwitch) <= limit) return kDefaultSwitch;
    double lo = 0.0, hi = kDefaultSwitch;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (log_max_term(alpha, mid) <= limit ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

namespace ml_detail {

double rgamma(double y) {
    if (y <= 0.0 && y == std::floor(y)) return 0.0;
    if (y < 0.5) return std::sin(std::numbers::pi * y) * std::tgamma(1.0 - y) / std::numbers::pi;
    return 1.0 / std::tgamma(y);
}

double series_switch(double alpha) {
    thread_local double cached_alpha = -1.0;
    thread_local double cached_switch = 0.0;
    if (alpha != cached_alpha) {
        cached_alpha = alpha;
        cached_switch = compute_switch(alpha);
    }
    return cached_switch;
}

double series(double alpha, double z) {
    using quad = boost::multiprecision::cpp_bin_float_quad;
    if (z == 0.0) return 1.0;
    // 1/Gamma(alpha k + 1) is reused across calls with the same alpha.
    thread_local double cached_alpha = -1.0;
    thread_local std::vector<quad> rg;
    if (cached_alpha != alpha) {
        cached_alpha = alpha;
        rg.clear();
    }
    const quad qa(alpha);
    const quad qz(z);
    quad power = 1;
    quad sum = 1;
    quad peak = 1;
    for (std::size_t k = 1; k < 20000; ++k) {
        if (rg.size() <= k) {
            if (rg.empty()) rg.push_back(quad(1));
            rg.push_back(exp(-boost::math::lgamma(qa * static_cast<unsigned>(k) + 1)));
        }
        power *= qz;
        const quad term = power * rg[k];
        const quad mag = abs(term);
        peak = std::max(peak, mag);
        sum += term;
        // Past the peak the terms decrease monotonically.
        if (mag < peak && mag < 1e-24 * std::max(quad(1), abs(sum))) break;
    }
    return static_cast<double>(sum);
}

double integral(double alpha, double z) {
    const double x = -z;
    if (x == 0.0) return 1.0;
    const double pi = std::numbers::pi;
    const double c = std::cos(alpha * pi);
    const double inv = 1.0 / alpha;
    auto f = [&](double u) {
        const double den = u * u + 2.0 * u * x * c + x * x;
        return std::exp(-std::pow(u, inv)) / den;
    };
    // Split at u = x where the kernel peaks when alpha is close to 1.
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double tol = 1e-15;
    const double left = ts.integrate(f, 0.0, x, tol);
    const double right = es.integrate([&](double v) { return f(x + v); }, tol);
    return x * std::sin(alpha * pi) / (alpha * pi) * (left + right);
}

Asymptotic asymptotic(double alpha, double z) {
    const double x = -z;
    double sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    double xm = 1.0;
    for (int m = 1; m <= 60; ++m) {
        xm /= x;
        const double term = (m % 2 ? 1.0 : -1.0) * xm * rgamma(1.0 - alpha * m);
        const double a = std::abs(term);
        if (a > last && a != 0.0) return {sum, a};
        sum += term;
        if (a != 0.0) last = a;
    }
    return {sum, last};
}

} // namespace ml_detail

double mittag_leffler(double alpha, double z) {
    check_alpha(alpha);
    if (std::isnan(z) || z > 0.0) {
        std::ostringstream os;
        os << "mittag_leffler: only z <= 0 is supported, got " << z;
        throw std::invalid_argument(os.str());
    }
    if (z == 0.0) return 1.0;
    if (alpha == 1.0) return std::exp(z);
    if (std::isinf(z)) return 0.0;
    if (-z <= ml_detail::series_switch(alpha)) return ml_detail::series(alpha, z);

    const double value = ml_detail::integral(alpha, z);
    const auto asym = ml_detail::asymptotic(alpha, z);
    if (asym.error <= 1e-10 && std::abs(asym.value - value) > 1e-8) {
        std::ostringstream os;
        os.precision(17);
        os << "mittag_leffler: integral (" << value << ") and asymptotic (" << asym.value
           << ") branches disagree at alpha = " << alpha << ", z = " << z;
        throw NumericalError(os.str());
    }
    return value;
}

double ml_relaxation(double alpha, double eps, double t) {
    if (!(eps >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("ml_relaxation: need eps >= 0 and t >= 0");
    check_alpha(alpha);
    if (eps == 0.0 || t == 0.0) return 1.0;
    return mittag_leffler(alpha, -eps * std::pow(t, alpha));
}

} // namespace isofokker
