#include "srp/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace srp {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;
constexpr double kTiny = 1e-300;

// γ(s,x) for s > 0 by the series x^s e^{-x} Σ x^n / (s (s+1) ... (s+n)).
double lower_gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + s * std::log(x));
}

// Γ(s,x) by modified Lentz on the Legendre continued fraction.
double upper_gamma_continued_fraction(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + s * std::log(x)) * h;
}

}  // namespace

double exponential_integral_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("E1: x must be positive");
    if (x >= 1.0) return upper_gamma_continued_fraction(0.0, x);
    // -γ - ln x - Σ (-x)^n / (n n!)
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= -x / n;
        const double add = term / n;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

double upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be positive");
    if (s > 0.0) {
        if (x < s + 1.0) return std::tgamma(s) - lower_gamma_series(s, x);
        return upper_gamma_continued_fraction(s, x);
    }
    if (x >= 1.0) return upper_gamma_continued_fraction(s, x);

    const double steps = std::ceil(-s);
    const double start = s + steps;  // in [0, 1)
    double value = start == 0.0 ? exponential_integral_e1(x) : std::tgamma(start) - lower_gamma_series(start, x);
    const double e = std::exp(-x);
    for (int j = 1; j <= static_cast<int>(steps); ++j) {
        const double sj = start - j;
        value = (value - std::pow(x, sj) * e) / sj;
    }
    return value;
}

double partial_zeta(std::size_t n, double z) {
    double sum = 0.0;
    for (std::size_t i = n; i >= 1; --i) sum += std::pow(static_cast<double>(i), -z);
    return sum;
}

double riemann_zeta(double z) {
    if (!(z > 1.0)) throw std::domain_error("riemann_zeta: z must exceed 1");
    constexpr std::size_t kCut = 16;
    // B_{2k} / (2k)!
    constexpr double kBernoulliOverFactorial[] = {
        1.0 / 12.0,              // B2/2!
        -1.0 / 720.0,            // B4/4!
        1.0 / 30240.0,           // B6/6!
        -1.0 / 1209600.0,        // B8/8!
        1.0 / 47900160.0,        // B10/10!
        -691.0 / 1307674368000.0,  // B12/12!
    };
    const double m = static_cast<double>(kCut);
    double sum = partial_zeta(kCut - 1, z);
    sum += std::pow(m, 1.0 - z) / (z - 1.0) + 0.5 * std::pow(m, -z);
    // rising factorial z (z+1) ... (z+2k-2)
    double rising = z;
    double power = std::pow(m, -z - 1.0);
    for (int k = 1; k <= 6; ++k) {
        sum += kBernoulliOverFactorial[k - 1] * rising * power;
        rising *= (z + 2 * k - 1) * (z + 2 * k);
        power /= m * m;
    }
    return sum;
}

}  // namespace srp
