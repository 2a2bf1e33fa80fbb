#pragma once

// Internal pieces shared by the parallel and serial K_m^T evaluators.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmetric/kernels.hpp"
#include "dsmetric/metric_core.hpp"
#include "dsmetric/trajectories.hpp"

namespace dsmetric::detail {

inline std::vector<std::array<int, 3>> combinations(int N, int m) {
    std::vector<std::array<int, 3>> out;
    std::array<int, 3> c{0, 0, 0};
    if (m == 1) {
        for (int a = 0; a < N; ++a) { c[0] = a; out.push_back(c); }
    } else if (m == 2) {
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b) { c[0] = a; c[1] = b; out.push_back(c); }
    } else {
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b)
                for (int d = b + 1; d < N; ++d) { c[0] = a; c[1] = b; c[2] = d; out.push_back(c); }
    }
    return out;
}

inline cplx det_small(const cplx* M, int m) {
    switch (m) {
        case 1: return M[0];
        case 2: return M[0] * M[3] - M[1] * M[2];
        default:
            return M[0] * (M[4] * M[8] - M[5] * M[7]) - M[1] * (M[3] * M[8] - M[5] * M[6]) +
                   M[2] * (M[3] * M[7] - M[4] * M[6]);
    }
}

inline ScaledComplex det_small_wide(const ScaledComplex* M, int m) {
    switch (m) {
        case 1: return M[0];
        case 2: {
            ScaledComplex d = M[0] * M[3];
            ScaledComplex od = M[1] * M[2];
            od.mant = -od.mant;
            d += od;
            return d;
        }
        default: {
            auto minor2 = [&](int a, int b, int c, int d) {
                ScaledComplex r = M[a] * M[d];
                ScaledComplex o = M[b] * M[c];
                o.mant = -o.mant;
                r += o;
                return r;
            };
            ScaledComplex d = M[0] * minor2(4, 5, 7, 8);
            ScaledComplex t1 = M[1] * minor2(3, 5, 6, 8);
            t1.mant = -t1.mant;
            d += t1;
            d += M[2] * minor2(3, 4, 6, 7);
            return d;
        }
    }
}

// precondition checks shared by the public entry points
inline void validate_pair(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                          const KernelSpec& spec) {
    D1.validate();
    D2.validate();
    if (D1.n_sequences() != D2.n_sequences())
        throw std::invalid_argument("K_m^T: sequence-count mismatch (N=" + std::to_string(D1.n_sequences()) +
                                    " vs " + std::to_string(D2.n_sequences()) + ")");
    if (m < 1 || m > 3)
        throw std::invalid_argument("K_m^T: m must be in 1..3 (cost grows as T^m)");
    if (m > D1.n_sequences())
        throw std::invalid_argument("K_m^T: m=" + std::to_string(m) + " exceeds the sequence count N=" +
                                    std::to_string(D1.n_sequences()));
    if (T < 1) throw std::invalid_argument("K_m^T: horizon T must be >= 1");
    if (T > D1.length() || T > D2.length())
        throw std::invalid_argument("K_m^T: horizon T=" + std::to_string(T) +
                                    " exceeds the available data (" + std::to_string(D1.length()) +
                                    ", " + std::to_string(D2.length()) + ")");
    if (D1.dim() != D2.dim())
        throw std::invalid_argument("K_m^T: observable dimension mismatch");
    // bounded kernels must be able to see every point as a plain double
    if (spec.kind != KernelKind::linear) {
        for (const TrajectorySet* D : {&D1, &D2})
            for (const auto& seq : D->sequences)
                for (long t = 0; t < T; ++t) {
                    const Observable& ob = seq[static_cast<size_t>(t)];
                    for (int i = 0; i < ob.dim(); ++i) {
                        const cplx v = ob.folded(i);  // throws on scale overflow
                        if (spec.kind == KernelKind::szego && !(std::abs(v) < 1.0))
                            throw std::invalid_argument("szego kernel: trajectory point on or outside the unit disk");
                    }
                }
    }
    if (spec.kind == KernelKind::szego && D1.dim() != 1)
        throw std::invalid_argument("szego kernel is defined on one-dimensional observables");
    if (spec.kind == KernelKind::gaussian && !(spec.bandwidth > 0.0))
        throw std::invalid_argument("gaussian kernel: bandwidth must be positive");
}

// one grid term: det over the subset rows/cols at times t[0..m-1]
inline ScaledComplex grid_term(const TrajectorySet& D1, const TrajectorySet& D2,
                               const KernelSpec& spec, int m, const long* t,
                               const std::array<int, 3>& sub) {
    cplx M[9];
    std::int64_t e = 0;
    if (spec.kind == KernelKind::linear) {
        for (int a = 0; a < m; ++a) {
            const Observable& xa = D1.at(sub[static_cast<size_t>(a)], t[a]);
            e += xa.scale2;
            for (int b = 0; b < m; ++b)
                M[a * m + b] = linear_mantissa_inner(xa, D2.at(sub[static_cast<size_t>(b)], t[b]));
        }
        for (int b = 0; b < m; ++b) e += D2.at(sub[static_cast<size_t>(b)], t[b]).scale2;
    } else {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                M[a * m + b] = eval_kernel(spec, D1.at(sub[static_cast<size_t>(a)], t[a]),
                                           D2.at(sub[static_cast<size_t>(b)], t[b]));
    }
    return {det_small(M, m), e};
}

inline void decode_tuple(unsigned long long flat, long T, int m, long* t) {
    for (int i = m - 1; i >= 0; --i) {
        t[i] = static_cast<long>(flat % static_cast<unsigned long long>(T));
        flat /= static_cast<unsigned long long>(T);
    }
}

// odometer in lexicographic order, last coordinate fastest
inline bool advance_tuple(long* t, long T, int m) {
    for (int i = m - 1; i >= 0; --i) {
        if (++t[i] < T) return true;
        t[i] = 0;
    }
    return false;
}

// all tuples in {0..tau}^m with at least one coordinate equal to tau,
// lexicographic; visits exactly (tau+1)^m - tau^m tuples
template <typename F>
void for_each_shell_tuple(int m, long tau, F&& f) {
    long t[3] = {0, 0, 0};
    auto rec = [&](auto&& self, int pos, bool seen) -> void {
        if (pos == m) {
            f(static_cast<const long*>(t));
            return;
        }
        if (!seen && pos == m - 1) {
            t[pos] = tau;
            self(self, pos + 1, true);
            return;
        }
        for (long v = 0; v <= tau; ++v) {
            t[pos] = v;
            self(self, pos + 1, seen || v == tau);
        }
    };
    rec(rec, 0, false);
}

// pairwise reduction over the fixed block order; deterministic
inline ScaledComplex tree_sum(std::vector<ScaledComplex>& v) {
    if (v.empty()) return {};
    for (size_t step = 1; step < v.size(); step *= 2)
        for (size_t i = 0; i + step < v.size(); i += 2 * step) v[i] += v[i + step];
    return v[0];
}

}  // namespace dsmetric::detail
