#include "dsmetric/rotation_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsmetric {

namespace {

void check_disk(cplx z, cplx w) {
    if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
        throw std::invalid_argument("rotation oracle: initial values must lie inside the open unit disk");
}

void check_modulus(double m, const char* which) {
    if (!(m > 0.0) || m > 1.0)
        throw std::invalid_argument(std::string("rotation oracle: |") + which + "| must lie in (0,1]");
}

cplx from_polar_turns(double modulus, double turns) {
    return std::polar(modulus, 2.0 * std::numbers::pi * turns);
}

}  // namespace

double analytic_A1(double alpha_mod, double beta_mod, const AngleClass& relative_angle,
                   cplx z, cplx w) {
    check_disk(z, w);
    check_modulus(alpha_mod, "alpha");
    check_modulus(beta_mod, "beta");
    const bool unit_a = alpha_mod == 1.0, unit_b = beta_mod == 1.0;
    const double fz = 1.0 - std::norm(z), fw = 1.0 - std::norm(w);
    if (unit_a && unit_b) {
        if (relative_angle.is_rational()) {
            cplx pw = 1.0;
            const cplx zw = z * std::conj(w);
            for (long long i = 0; i < relative_angle.q; ++i) pw *= zw;
            return fz * fw / std::norm(1.0 - pw);
        }
        return fz * fw;
    }
    if (unit_a) return fz;
    if (unit_b) return fw;
    return 1.0;
}

namespace {

// reduced fraction difference of two exact rationals
void fraction_diff(long long p1, long long q1, long long p2, long long q2, long long& p, long long& q) {
    const AngleClass d = AngleClass::rational(p1 * q2 - p2 * q1, q1 * q2);
    p = d.p;
    q = d.q;
}

bool same_irrational_base(const AngleClass& a, const AngleClass& b) {
    if (!a.family.empty() && a.family == b.family) return true;
    // exactly identical irrationals count as the same angle
    return a.base == b.base && a.family == b.family;
}

}  // namespace

MuValue mu(const AngleClass& a, const AngleClass& b) {
    if (a.is_rational() && b.is_rational()) {
        // min{p+q : p,q >= 0, (p,q) != (0,0), a p - b q in Z}; p = q_a (q = 0)
        // is always a member, so the search is bounded
        const long long bound = std::min(a.q, b.q);
        for (long long s = 1; s <= bound; ++s)
            for (long long p = 0; p <= s; ++p) {
                const long long q = s - p;
                // a.p/a.q * p - b.p/b.q * q integral <=> a.q*b.q | a.p*p*b.q - b.p*q*a.q
                const __int128 num = static_cast<__int128>(a.p) * p * b.q -
                                     static_cast<__int128>(b.p) * q * a.q;
                const __int128 den = static_cast<__int128>(a.q) * b.q;
                if (num % den == 0) return {false, s};
            }
        return {false, bound};  // unreachable: s = min(qa,qb) always hits
    }
    if (!a.is_rational() && !b.is_rational() && same_irrational_base(a, b)) {
        long long p, q;
        fraction_diff(a.p, a.q, b.p, b.q, p, q);
        return {false, q};
    }
    // rational-vs-irrational, or unrelated irrationals: irrational difference
    return {true, 0};
}

A2Branch analytic_A2_exact_branches(const RotationSystem& alpha, const RotationSystem& beta,
                                    cplx z, cplx w) {
    check_disk(z, w);
    check_modulus(alpha.modulus, "alpha");
    check_modulus(beta.modulus, "beta");
    const bool unit_a = alpha.modulus == 1.0, unit_b = beta.modulus == 1.0;
    A2Branch out;
    if (unit_a != unit_b) {
        out.kind = A2Branch::Kind::zero;
        return out;
    }
    if (unit_a && unit_b) {
        out.kind = A2Branch::Kind::order_bound;
        out.order = mu(alpha.angle, beta.angle);
        return out;
    }
    const cplx a = from_polar_turns(alpha.modulus, alpha.angle.turns());
    const cplx b = from_polar_turns(beta.modulus, beta.angle.turns());
    const cplx ab = a * std::conj(b);
    out.kind = A2Branch::Kind::leading_term;
    out.value = (1.0 - std::norm(a)) * (1.0 - std::norm(b)) / std::norm(1.0 - ab) *
                std::norm(1.0 + ab) / ((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
    out.remainder_exponent = 2;
    return out;
}

}  // namespace dsmetric
