#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsmetric/metric_core.hpp"
#include "metric_terms.hpp"

// Reference evaluators: a plain single-threaded running sum for K_m^T, and the
// brute-force wedge oracle that expands every determinant over permutations.
// Kept deliberately simple; the parallel kernel is tested against these.

namespace dsmetric {

ScaledComplex kernel_KmT_serial_wide(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                                     const KernelSpec& spec, TimeCoupling coupling) {
    detail::validate_pair(D1, D2, m, T, spec);
    const auto subsets = detail::combinations(D1.n_sequences(), m);
    ScaledComplex acc;
    if (coupling == TimeCoupling::synchronous) {
        const int N = D1.n_sequences();
        std::vector<ScaledComplex> S(static_cast<size_t>(N) * N);
        for (long t = 0; t < T; ++t)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    S[static_cast<size_t>(a) * N + b] += eval_kernel_wide(spec, D1.at(a, t), D2.at(b, t));
        ScaledComplex M[9];
        for (const auto& sub : subsets) {
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    M[a * m + b] =
                        S[static_cast<size_t>(sub[static_cast<size_t>(a)]) * N + sub[static_cast<size_t>(b)]];
            acc += detail::det_small_wide(M, m);
        }
        return acc;
    }
    long t[3] = {0, 0, 0};
    do {
        for (const auto& sub : subsets) acc += detail::grid_term(D1, D2, spec, m, t, sub);
    } while (detail::advance_tuple(t, T, m));
    return acc;
}

cplx kernel_KmT_serial(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                       const KernelSpec& spec, TimeCoupling coupling) {
    const cplx k = kernel_KmT_serial_wide(D1, D2, m, T, spec, coupling).fold();
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw std::runtime_error("K_m^T overflows double range; use kernel_KmT_serial_wide");
    return k;
}

cplx wedge_oracle_KmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                      const KernelSpec& spec) {
    detail::validate_pair(D1, D2, m, T, spec);
    if (m > 3 || T > 6 || D1.n_sequences() > 4)
        throw std::invalid_argument("wedge_oracle_KmT: size guard (m<=3, T<=6, N<=4) violated");
    const int N = D1.n_sequences();

    // own enumeration of increasing sequence subsets
    std::vector<std::array<int, 3>> subs;
    std::array<int, 3> cur{0, 0, 0};
    auto gen = [&](auto&& self, int start, int depth) -> void {
        if (depth == m) {
            subs.push_back(cur);
            return;
        }
        for (int s = start; s < N; ++s) {
            cur[static_cast<size_t>(depth)] = s;
            self(self, s + 1, depth + 1);
        }
    };
    gen(gen, 0, 0);

    // permutations of {0..m-1} with parity by inversion count
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::pair<std::array<int, 3>, double>> perms;
    do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
        perms.emplace_back(perm, inv % 2 == 0 ? 1.0 : -1.0);
    } while (std::next_permutation(perm.begin(), perm.begin() + m));

    cplx total = 0.0;
    long t[3] = {0, 0, 0};
    bool more = true;
    while (more) {
        for (const auto& sub : subs)
            for (const auto& [sigma, sign] : perms) {
                cplx prod = sign;
                for (int a = 0; a < m; ++a) {
                    const int b = sigma[static_cast<size_t>(a)];
                    prod *= eval_kernel(spec, D1.at(sub[static_cast<size_t>(a)], t[a]),
                                        D2.at(sub[static_cast<size_t>(b)], t[b]));
                }
                total += prod;
            }
        more = false;
        for (int i = m - 1; i >= 0; --i) {
            if (++t[i] < T) {
                more = true;
                break;
            }
            t[i] = 0;
        }
    }
    return total;
}

}  // namespace dsmetric
