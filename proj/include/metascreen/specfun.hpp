#pragma once

#include <complex>

namespace metascreen {

using Complex = std::complex<double>;

// Bessel functions of the first/second kind for real positive argument.
// Power series below z = 16.5 (accumulated in long double), Hankel asymptotic
// expansion above; both branches agree to ~1e-13 relative at the seam.
double bessel_j0(double z);
double bessel_y0(double z);
double bessel_j1(double z);

// Hankel function H0^(1)(z) = J0(z) + i Y0(z). Requires z >= 1e-8; the
// logarithmic singularity at the origin is treated as a domain error.
Complex hankel1_0(double z);

// Exponential integral E_n(x) = \int_1^\infty e^{-x t} t^{-n} dt for n >= 1,
// x > 0. Series for x <= 1, Lentz continued fraction for x > 1, each evaluated
// at the requested order directly so large-x accuracy does not degrade with n.
double expint_en(int n, double x);

// Faddeeva function w(z) = e^{-z^2} erfc(-iz), valid for Im z >= 0.
Complex faddeeva_w(Complex z);

// Scaled complementary error function erfcx(z) = e^{z^2} erfc(z), Re z >= 0.
Complex erfcx_complex(Complex z);

// Real-argument erfcx for x >= 0 (direct product below 2.5, Laplace continued
// fraction above).
double erfcx_real(double x);

// e^{p} * erfc(w) for real p, w without intermediate overflow.
double scaled_erfc_real(double p, double w);

// Complementary error function of complex argument. Conjugate symmetry and
// the reflection identity erfc(-z) = 2 - erfc(z) hold by construction.
Complex erfc_complex(Complex z);

// e^{p} * erfc(w) evaluated without intermediate overflow (the exponential
// growth of e^p is cancelled against the Gaussian decay of erfc).
Complex scaled_erfc(Complex p, Complex w);

// Imaginary error function for real argument, used on the imaginary axis
// where erfc(iy) = 1 - i erfi(y) exactly.
double erfi_real(double y);

}  // namespace metascreen
