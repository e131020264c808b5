#pragma once

namespace flm {

/// Modified Bessel function of the second kind, order 1, for x > 0.
/// Power series for x <= 2, Steed's continued fraction (via K_0) above.
double bessel_k1(double x);

/// K_nu(x) for nu >= 0, x > 0. Orders 1/2, 3/2, 5/2 use closed forms and
/// order 1 uses bessel_k1; other orders defer to std::cyl_bessel_k.
double bessel_k(double nu, double x);

}  // namespace flm
