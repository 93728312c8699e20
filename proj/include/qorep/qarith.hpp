#pragma once
// Scalar kernels: q-numbers, q-factorials, Pochhammer symbols, terminating
// 4phi3 series, and q-Racah polynomials. All functions are pure.

#include <array>

#include "qorep/common.hpp"

namespace qorep {

// [z] = sinh(h z)/sinh(h); entire in z, equals (q^z - q^-z)/(q - q^-1).
Complex q_number(Complex z, const QContext& ctx);
double q_number(double z, const QContext& ctx);

// q^z for complex z (convenience used throughout the representation kernels).
Complex q_pow(Complex z, const QContext& ctx);

// [n]! = [n][n-1]...[1]; [0]! = 1.
double q_factorial(int n, const QContext& ctx);

// [n]!! = [n][n-2]...([1] or [2]); [0]!! = 1.
double q_double_factorial(int n, const QContext& ctx);

// (a;Q)_n = (1-a)(1-aQ)...(1-aQ^{n-1}); (a;Q)_0 = 1.
Complex q_pochhammer(Complex a, double Q, int n);

// Terminating 4phi3. At least one numerator parameter must equal Q^{-N}
// for a nonnegative integer N (the series is summed up to the smallest
// such N). Throws DivergentSeries / PoleInDenominator.
Complex phi43(const std::array<Complex, 4>& numerator,
              const std::array<Complex, 3>& denominator, double Q, Complex z);

struct RacahParams {
  Complex alpha, beta, gamma_p, delta_p;
  double Q = 0.0;  // Q = q^2
  int n = 0;       // polynomial degree
  int y = 0;       // lattice argument
};

// R_n(mu(y); alpha, beta, gamma, delta | Q) as the 4phi3 with argument Q.
Complex racah_poly(const RacahParams& p);

}  // namespace qorep
