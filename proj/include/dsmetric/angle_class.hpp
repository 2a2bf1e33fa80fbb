#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsmetric {

// Exact tag for a rotation angle measured in turns (fractions of 2*pi).
// Rationality is always supplied by the caller, never detected from floats.
//
// An irrational angle may carry a family tag plus an exact rational offset:
// two irrationals of the same family differ by the rational offset_p/offset_q
// difference, which is what the order computation mu() needs. Irrationals of
// different (or empty) families are treated as having irrational difference.
struct AngleClass {
    bool rational_ = true;
    long long p = 0;          // rational value, or rational offset of an irrational
    long long q = 1;
    double base = 0.0;        // irrational base value in turns
    std::string family;       // irrationals sharing a family share the base

    static AngleClass rational(long long p, long long q) {
        if (q == 0) throw std::invalid_argument("AngleClass: zero denominator");
        if (q < 0) { p = -p; q = -q; }
        const long long g = std::gcd(p < 0 ? -p : p, q);
        AngleClass a;
        a.rational_ = true;
        a.p = g ? p / g : 0;
        a.q = g ? q / g : 1;
        return a;
    }

    static AngleClass irrational(double value, std::string family = "",
                                 long long offset_p = 0, long long offset_q = 1) {
        AngleClass a = rational(offset_p, offset_q);
        a.rational_ = false;
        a.base = value;
        a.family = std::move(family);
        return a;
    }

    bool is_rational() const { return rational_; }

    // angle in turns as a double (irrational: base + offset)
    double turns() const {
        const double frac = static_cast<double>(p) / static_cast<double>(q);
        return rational_ ? frac : base + frac;
    }
};

// a - b with exact rationality bookkeeping: rational when both are rational or
// when two irrationals share a base (the bases cancel), irrational otherwise
inline AngleClass angle_difference(const AngleClass& a, const AngleClass& b) {
    const bool same_base = !a.is_rational() && !b.is_rational() &&
                           ((!a.family.empty() && a.family == b.family) ||
                            (a.base == b.base && a.family == b.family));
    if ((a.is_rational() && b.is_rational()) || same_base)
        return AngleClass::rational(a.p * b.q - b.p * a.q, a.q * b.q);
    return AngleClass::irrational(a.turns() - b.turns());
}

}  // namespace dsmetric
