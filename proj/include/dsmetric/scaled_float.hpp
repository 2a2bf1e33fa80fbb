#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace dsmetric {

// Complex value carried as mant * 2^exp so that long products and sums of
// kernel terms survive far beyond double range (unstable systems at large T).
// Every rescaling is by a power of two, which binary floating point performs
// exactly; inputs that never leave double range therefore produce results
// bit-identical to plain std::complex<double> arithmetic.
struct ScaledComplex {
    std::complex<double> mant{0.0, 0.0};
    std::int64_t exp = 0;

    static constexpr int renorm_bits = 256;

    ScaledComplex() = default;
    ScaledComplex(std::complex<double> m, std::int64_t e = 0) : mant(m), exp(e) { renorm(); }

    bool is_zero() const { return mant.real() == 0.0 && mant.imag() == 0.0; }

    // Keep max(|re|,|im|) within 2^±renorm_bits; shifts are exact.
    void renorm() {
        if (is_zero()) { exp = 0; return; }
        const double a = std::max(std::abs(mant.real()), std::abs(mant.imag()));
        if (!std::isfinite(a))
            throw std::runtime_error("ScaledComplex: non-finite value (input data out of double range)");
        const int k = std::ilogb(a);
        if (k > renorm_bits || k < -renorm_bits) {
            mant = {std::ldexp(mant.real(), -k), std::ldexp(mant.imag(), -k)};
            exp += k;
        }
    }

    ScaledComplex& operator+=(ScaledComplex o) {
        if (o.is_zero()) return *this;
        if (is_zero()) { *this = o; return *this; }
        if (o.exp > exp) std::swap(*this, o);
        const std::int64_t d = o.exp - exp;  // <= 0
        if (d < -1200) return *this;         // below half-ulp of *this, drops exactly as a plain add would
        mant += std::complex<double>(std::ldexp(o.mant.real(), static_cast<int>(d)),
                                     std::ldexp(o.mant.imag(), static_cast<int>(d)));
        renorm();
        return *this;
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return {a.mant * b.mant, a.exp + b.exp};
    }

    ScaledComplex conj() const { return {std::conj(mant), exp}; }

    // Folds back to a plain double pair; overflows to inf, underflows to 0.
    std::complex<double> fold() const {
        if (is_zero()) return {0.0, 0.0};
        const int e = static_cast<int>(std::clamp<std::int64_t>(exp, -5000, 5000));
        return {std::ldexp(mant.real(), e), std::ldexp(mant.imag(), e)};
    }
};

// Real companion, normalized so |mant| is in [1,2) (or exactly zero): with a
// canonical mantissa, ordering is a plain (sign, exp, mant) comparison.
struct ScaledReal {
    double mant = 0.0;
    std::int64_t exp = 0;

    ScaledReal() = default;
    ScaledReal(double m, std::int64_t e = 0) : mant(m), exp(e) { canon(); }

    bool is_zero() const { return mant == 0.0; }

    void canon() {
        if (mant == 0.0) { exp = 0; return; }
        if (!std::isfinite(mant)) throw std::runtime_error("ScaledReal: non-finite mantissa");
        const int k = std::ilogb(mant);
        if (k != 0) {
            mant = std::ldexp(mant, -k);
            exp += k;
        }
    }

    static ScaledReal abs_sq(const ScaledComplex& z) {
        if (z.is_zero()) return {};
        return {std::norm(z.mant), 2 * z.exp};
    }
    static ScaledReal real_part(const ScaledComplex& z) { return {z.mant.real(), z.exp}; }
    static ScaledReal modulus(const ScaledComplex& z) {
        if (z.is_zero()) return {};
        return {std::abs(z.mant), z.exp};
    }

    ScaledReal abs() const { return {std::abs(mant), exp}; }

    friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return {a.mant * b.mant, a.exp + b.exp};
    }
    friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
        if (b.is_zero()) throw std::runtime_error("ScaledReal: division by zero");
        if (a.is_zero()) return {};
        return {a.mant / b.mant, a.exp - b.exp};
    }
    friend ScaledReal operator+(ScaledReal a, ScaledReal b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (b.exp > a.exp) std::swap(a, b);
        const std::int64_t d = b.exp - a.exp;
        if (d < -1200) return a;
        return {a.mant + std::ldexp(b.mant, static_cast<int>(d)), a.exp};
    }

    friend bool operator<(const ScaledReal& a, const ScaledReal& b) {
        const int sa = a.is_zero() ? 0 : (a.mant > 0 ? 1 : -1);
        const int sb = b.is_zero() ? 0 : (b.mant > 0 ? 1 : -1);
        if (sa != sb) return sa < sb;
        if (sa == 0) return false;
        if (a.exp != b.exp) return sa > 0 ? a.exp < b.exp : a.exp > b.exp;
        return a.mant < b.mant;
    }
    friend bool operator<=(const ScaledReal& a, const ScaledReal& b) { return !(b < a); }

    double fold() const {
        if (is_zero()) return 0.0;
        const int e = static_cast<int>(std::clamp<std::int64_t>(exp, -5000, 5000));
        return std::ldexp(mant, e);
    }
};

}  // namespace dsmetric
