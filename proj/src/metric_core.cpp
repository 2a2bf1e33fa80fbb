#include "dsmetric/metric_core.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "metric_terms.hpp"

namespace dsmetric {

using detail::combinations;
using detail::det_small_wide;
using detail::grid_term;
using detail::tree_sum;
using detail::validate_pair;

std::string time_coupling_name(TimeCoupling c) {
    return c == TimeCoupling::grid ? "grid" : "sync";
}

TimeCoupling time_coupling_from_name(const std::string& name) {
    if (name == "grid") return TimeCoupling::grid;
    if (name == "sync" || name == "synchronous") return TimeCoupling::synchronous;
    throw std::invalid_argument("unknown time coupling '" + name + "' (expected grid or sync)");
}

void set_worker_count(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

int max_worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

AngleSchedule AngleSchedule::geometric(long T0, long Tmax, Mode mode) {
    if (T0 < 1 || Tmax < T0) throw std::invalid_argument("AngleSchedule::geometric: need 1 <= T0 <= Tmax");
    AngleSchedule s;
    s.mode = mode;
    for (long t = T0; t < Tmax; t *= 2) s.T_values.push_back(t);
    s.T_values.push_back(Tmax);
    return s;
}

void AngleSchedule::validate() const {
    if (T_values.empty()) throw std::invalid_argument("AngleSchedule: empty horizon list");
    long prev = 0;
    for (long t : T_values) {
        if (t <= prev) throw std::invalid_argument("AngleSchedule: horizons must be strictly increasing and positive");
        prev = t;
    }
    if (!(rel_tol > 0.0) || !(zero_tol > 0.0))
        throw std::invalid_argument("AngleSchedule: tolerances must be positive");
}

namespace {

constexpr unsigned long long kBlockTuples = 4096;

unsigned long long grid_size(long T, int m) {
    unsigned long long total = 1;
    for (int i = 0; i < m; ++i) {
        if (total > (1ULL << 62) / static_cast<unsigned long long>(T))
            throw std::invalid_argument("K_m^T: T^m grid too large");
        total *= static_cast<unsigned long long>(T);
    }
    return total;
}

// synchronous coupling: accumulate the N x N time-summed Gram, then sum the
// principal m-minors over sequence subsets
ScaledComplex sync_eval(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                        const KernelSpec& spec) {
    const int N = D1.n_sequences();
    std::vector<ScaledComplex> S(static_cast<size_t>(N) * N);
    for (long t = 0; t < T; ++t)
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                S[static_cast<size_t>(a) * N + b] +=
                    eval_kernel_wide(spec, D1.at(a, t), D2.at(b, t));
    ScaledComplex total;
    ScaledComplex M[9];
    for (const auto& sub : combinations(N, m)) {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                M[a * m + b] = S[static_cast<size_t>(sub[static_cast<size_t>(a)]) * N +
                                 sub[static_cast<size_t>(b)]];
        total += det_small_wide(M, m);
    }
    return total;
}

ScaledComplex grid_eval_parallel(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                                 const KernelSpec& spec) {
    const auto subsets = combinations(D1.n_sequences(), m);
    const unsigned long long total = grid_size(T, m);
    const unsigned long long nblocks = (total + kBlockTuples - 1) / kBlockTuples;
    std::vector<ScaledComplex> partial(static_cast<size_t>(nblocks));

    std::atomic<bool> failed{false};
    std::string error;

#pragma omp parallel for schedule(dynamic)
    for (long long blk = 0; blk < static_cast<long long>(nblocks); ++blk) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const unsigned long long begin = static_cast<unsigned long long>(blk) * kBlockTuples;
            const unsigned long long end = std::min(begin + kBlockTuples, total);
            long t[3] = {0, 0, 0};
            detail::decode_tuple(begin, T, m, t);
            ScaledComplex acc;
            for (unsigned long long i = begin; i < end; ++i) {
                for (const auto& sub : subsets) acc += grid_term(D1, D2, spec, m, t, sub);
                detail::advance_tuple(t, T, m);
            }
            partial[static_cast<size_t>(blk)] = acc;
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed.store(true);
                if (error.empty()) error = e.what();
            }
        }
    }
    if (failed.load()) throw std::runtime_error("K_m^T evaluation failed: " + error);
    return tree_sum(partial);
}

double fold_angle(const ScaledComplex& K12, const ScaledComplex& K11, const ScaledComplex& K22,
                  double zero_tol) {
    const ScaledReal a11 = ScaledReal::modulus(K11);
    const ScaledReal a22 = ScaledReal::modulus(K22);
    const ScaledReal scale = ScaledReal(1.0) + (a11 < a22 ? a22 : a11);
    const ScaledReal threshold = ScaledReal(zero_tol) * scale;
    const bool z1 = a11 <= threshold, z2 = a22 <= threshold;
    if (z1 && z2) return 1.0;  // eps->0 limit of the 0/0 form
    if (z1 || z2) return 0.0;  // Cauchy-Schwarz forces K12 -> 0 with the vanishing diagonal
    const ScaledReal re11 = ScaledReal::real_part(K11);
    const ScaledReal re22 = ScaledReal::real_part(K22);
    if (!(ScaledReal(0.0) < re11) || !(ScaledReal(0.0) < re22))
        throw std::runtime_error("A_m^T: diagonal kernel term has non-positive real part");
    const double a = (ScaledReal::abs_sq(K12) / (re11 * re22)).fold();
    if (a > 1.0 + 1e-9)
        throw std::runtime_error("A_m^T: value " + std::to_string(a) + " exceeds 1 beyond rounding slack");
    return std::min(std::max(a, 0.0), 1.0);
}

// incremental K^T series for one ordered pair, advanced one horizon at a time
class KmtSeries {
public:
    KmtSeries(const TrajectorySet& a, const TrajectorySet& b, int m, const KernelSpec& spec,
              TimeCoupling coupling)
        : a_(a), b_(b), m_(m), spec_(spec), coupling_(coupling),
          subsets_(combinations(a.n_sequences(), m)) {
        if (coupling_ == TimeCoupling::synchronous) {
            const int N = a.n_sequences();
            gram_.resize(static_cast<size_t>(N) * N);
        }
    }

    // extend from horizon cur to cur+1
    void advance() {
        const long tau = cur_++;
        if (coupling_ == TimeCoupling::grid) {
            detail::for_each_shell_tuple(m_, tau, [&](const long* t) {
                for (const auto& sub : subsets_) k_ += grid_term(a_, b_, spec_, m_, t, sub);
            });
        } else {
            const int N = a_.n_sequences();
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    gram_[static_cast<size_t>(i) * N + j] +=
                        eval_kernel_wide(spec_, a_.at(i, tau), b_.at(j, tau));
            k_ = ScaledComplex{};
            ScaledComplex M[9];
            for (const auto& sub : subsets_) {
                for (int x = 0; x < m_; ++x)
                    for (int y = 0; y < m_; ++y)
                        M[x * m_ + y] = gram_[static_cast<size_t>(sub[static_cast<size_t>(x)]) * N +
                                              sub[static_cast<size_t>(y)]];
                k_ += det_small_wide(M, m_);
            }
        }
    }

    const ScaledComplex& value() const { return k_; }

private:
    const TrajectorySet& a_;
    const TrajectorySet& b_;
    int m_;
    KernelSpec spec_;
    TimeCoupling coupling_;
    std::vector<std::array<int, 3>> subsets_;
    std::vector<ScaledComplex> gram_;
    ScaledComplex k_;
    long cur_ = 0;
};

}  // namespace

ScaledComplex kernel_KmT_wide(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                              const KernelSpec& spec, TimeCoupling coupling) {
    validate_pair(D1, D2, m, T, spec);
    if (coupling == TimeCoupling::synchronous) return sync_eval(D1, D2, m, T, spec);
    return grid_eval_parallel(D1, D2, m, T, spec);
}

cplx kernel_KmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                const KernelSpec& spec, TimeCoupling coupling) {
    const cplx k = kernel_KmT_wide(D1, D2, m, T, spec, coupling).fold();
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw std::runtime_error("K_m^T overflows double range; use kernel_KmT_wide");
    return k;
}

double angle_AmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                 const KernelSpec& spec, TimeCoupling coupling, double zero_tol) {
    if (!(zero_tol > 0.0)) throw std::invalid_argument("angle_AmT: zero_tol must be positive");
    const ScaledComplex k12 = kernel_KmT_wide(D1, D2, m, T, spec, coupling);
    const ScaledComplex k11 = kernel_KmT_wide(D1, D1, m, T, spec, coupling);
    const ScaledComplex k22 = kernel_KmT_wide(D2, D2, m, T, spec, coupling);
    return fold_angle(k12, k11, k22, zero_tol);
}

AngleResult estimate_Am(const TrajectorySet& D1, const TrajectorySet& D2, int m,
                        const AngleSchedule& schedule, const KernelSpec& spec,
                        TimeCoupling coupling) {
    schedule.validate();
    const long t_max = schedule.t_max();
    validate_pair(D1, D2, m, t_max, spec);

    KmtSeries s12(D1, D2, m, spec, coupling);
    KmtSeries s11(D1, D1, m, spec, coupling);
    KmtSeries s22(D2, D2, m, spec, coupling);

    AngleResult result;
    result.m = m;
    double cesaro_sum = 0.0;
    size_t next = 0;
    for (long T = 1; T <= t_max; ++T) {
        s12.advance();
        s11.advance();
        s22.advance();
        const double a = fold_angle(s12.value(), s11.value(), s22.value(), schedule.zero_tol);
        cesaro_sum += a;
        if (next < schedule.T_values.size() && T == schedule.T_values[next]) {
            const double traced =
                schedule.mode == AngleSchedule::Mode::cesaro ? cesaro_sum / static_cast<double>(T) : a;
            result.trace.emplace_back(T, traced);
            ++next;
        }
    }
    result.final_value = result.trace.back().second;
    if (result.trace.size() >= 2) {
        const double last = result.trace.back().second;
        const double prev = result.trace[result.trace.size() - 2].second;
        result.converged = std::abs(last - prev) <= schedule.rel_tol * std::max(1.0, std::abs(last));
    }
    return result;
}

double metric_distance(double a_value) {
    if (!(a_value >= -1e-9) || !(a_value <= 1.0 + 1e-9))
        throw std::invalid_argument("metric_distance: input " + std::to_string(a_value) +
                                    " outside [0,1] beyond rounding slack");
    const double a = std::min(std::max(a_value, 0.0), 1.0);
    return std::sqrt(1.0 - a);
}

namespace {

template <typename T, typename F>
std::vector<std::vector<T>> pairwise_table(size_t n, F&& entry) {
    std::vector<std::vector<T>> out(n, std::vector<T>(n));
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));

    std::atomic<bool> failed{false};
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const auto [i, j] = pairs[static_cast<size_t>(p)];
        try {
            entry(i, j, out);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed.store(true);
                if (error.empty())
                    error = "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what();
            }
        }
    }
    if (failed.load()) throw std::runtime_error(error);
    return out;
}

}  // namespace

std::vector<std::vector<cplx>> pairwise_gram(const std::vector<TrajectorySet>& datasets, int m,
                                             long T, const KernelSpec& spec, TimeCoupling coupling) {
    return pairwise_table<cplx>(datasets.size(), [&](int i, int j, auto& out) {
        const cplx k = kernel_KmT(datasets[static_cast<size_t>(i)], datasets[static_cast<size_t>(j)],
                                  m, T, spec, coupling);
        out[static_cast<size_t>(i)][static_cast<size_t>(j)] = k;
        out[static_cast<size_t>(j)][static_cast<size_t>(i)] = std::conj(k);
    });
}

std::vector<std::vector<double>> pairwise_angles(const std::vector<TrajectorySet>& datasets, int m,
                                                 long T, const KernelSpec& spec,
                                                 TimeCoupling coupling) {
    return pairwise_table<double>(datasets.size(), [&](int i, int j, auto& out) {
        const double a = angle_AmT(datasets[static_cast<size_t>(i)], datasets[static_cast<size_t>(j)],
                                   m, T, spec, coupling);
        out[static_cast<size_t>(i)][static_cast<size_t>(j)] = a;
        out[static_cast<size_t>(j)][static_cast<size_t>(i)] = a;
    });
}

}  // namespace dsmetric
