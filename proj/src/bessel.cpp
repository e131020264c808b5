#include "flm/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "flm/error.hpp"

namespace flm {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Abramowitz & Stegun 9.6.11 with n = 1:
// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
double k1_series(double x) {
    const double y = 0.25 * x * x;
    double term = 1.0;  // (x^2/4)^k / (k! (k+1)!)
    double psi_a = -std::numbers::egamma;        // psi(k+1)
    double psi_b = 1.0 - std::numbers::egamma;   // psi(k+2)
    double i1_sum = 0.0;
    double psi_sum = 0.0;
    for (int k = 0; k < kMaxIter; ++k) {
        i1_sum += term;
        psi_sum += (psi_a + psi_b) * term;
        const double next = term * y / ((k + 1.0) * (k + 2.0));
        if (next < kEps * i1_sum && k > 2) break;
        term = next;
        psi_a += 1.0 / (k + 1.0);
        psi_b += 1.0 / (k + 2.0);
    }
    const double i1 = 0.5 * x * i1_sum;
    return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

// Steed's method on the continued fraction for K_1 / K_0 together with the
// Temme normalization sum (Numerical Recipes, bessik, order mu = 0).
double k1_continued_fraction(double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;  // 0.25 - mu^2
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < kMaxIter; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    return k0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1 needs x > 0, got " + std::to_string(x));
    return x <= 2.0 ? k1_series(x) : k1_continued_fraction(x);
}

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k needs x > 0");
    if (!(nu >= 0.0)) throw DomainError("bessel_k needs nu >= 0");
    const double half = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    if (nu == 0.5) return half;
    if (nu == 1.5) return half * (1.0 + 1.0 / x);
    if (nu == 2.5) return half * (1.0 + 3.0 / x + 3.0 / (x * x));
    if (nu == 1.0) return bessel_k1(x);
    return std::cyl_bessel_k(nu, x);
}

}  // namespace flm
