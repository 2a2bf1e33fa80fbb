#pragma once

#include <complex>

#include "dsmetric/angle_class.hpp"

namespace dsmetric {

using cplx = std::complex<double>;

// Closed-form A_1 for a pair of disk rotations z -> alpha z observed through
// the Szego kernel, by the modulus/angle branch table:
//   both unit, rational relative angle p/q: (1-|z|^2)(1-|w|^2)/|1-(z conj w)^q|^2
//   both unit, irrational:                  (1-|z|^2)(1-|w|^2)
//   only alpha unit:                        1-|z|^2
//   only beta unit:                         1-|w|^2
//   both contracting:                       1
double analytic_A1(double alpha_mod, double beta_mod, const AngleClass& relative_angle,
                   cplx z, cplx w);

struct MuValue {
    bool infinite = false;
    long long value = 0;
};

// order of A_2's vanishing in |zw| for unit-modulus rotation pairs with
// angles a, b (in turns):
//   rational difference p/q (at least one angle irrational): q
//   irrational difference: infinity
//   both rational: min{ p+q : p,q >= 0, (p,q) != (0,0), a p - b q integral }
MuValue mu(const AngleClass& a, const AngleClass& b);

struct RotationSystem {
    double modulus = 1.0;
    AngleClass angle = AngleClass::rational(0, 1);
};

struct A2Branch {
    enum class Kind { zero, leading_term, order_bound };
    Kind kind = Kind::zero;
    double value = 0.0;          // leading_term: the |zw|->0 limit
    int remainder_exponent = 0;  // leading_term: remainder is O(|z conj w|^k)
    MuValue order;               // order_bound: A_2 = O(|zw|^{2 mu})
};

// exact branches of A_2 for the two-point rotation systems:
//   mixed unit/contracting: exactly zero
//   both contracting: leading term
//     (1-|a|^2)(1-|b|^2)/|1-a conj b|^2 * |1+a conj b|^2/((1+|a|^2)(1+|b|^2))
//     with an O(|z conj w|^2) remainder
//   both unit: order bound O(|zw|^{2 mu(alpha,beta)})
A2Branch analytic_A2_exact_branches(const RotationSystem& alpha, const RotationSystem& beta,
                                    cplx z, cplx w);

}  // namespace dsmetric
