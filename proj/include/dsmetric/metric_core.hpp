#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsmetric/kernels.hpp"
#include "dsmetric/scaled_float.hpp"
#include "dsmetric/trajectories.hpp"

namespace dsmetric {

// Time pairing of the Gram-determinant entries of K_m^T. The two conventions
// coincide for m = 1 and differ for m >= 2; both are positive definite.
//
//   grid:        entry (a,b) = k(y1[s_a][t_a], y2[s_b][t_b]) summed over the
//                full (t_1..t_m) grid. This is the estimation formula the
//                rotation closed forms (analytic_A2_exact_branches) satisfy.
//   synchronous: entry (a,b) = k(y1[s_a][t], y2[s_b][t]) accumulated over t,
//                i.e. the determinant of the time-summed Gram matrix. For
//                linear systems this reproduces the subspace-angle values
//                (angle_vs_closed_form_check), grid does not.
enum class TimeCoupling { grid, synchronous };

std::string time_coupling_name(TimeCoupling c);
TimeCoupling time_coupling_from_name(const std::string& name);

struct AngleSchedule {
    enum class Mode { direct, cesaro };

    std::vector<long> T_values;  // strictly increasing horizons
    Mode mode = Mode::direct;
    double rel_tol = 1e-4;
    double zero_tol = 1e-12;

    // T0, 2*T0, 4*T0, ... capped and terminated at Tmax
    static AngleSchedule geometric(long T0, long Tmax, Mode mode = Mode::direct);
    long t_max() const { return T_values.empty() ? 0 : T_values.back(); }
    void validate() const;
};

struct AngleResult {
    int m = 1;
    std::vector<std::pair<long, double>> trace;  // (T, A_m^T or running Cesaro mean)
    double final_value = 0.0;
    bool converged = false;
};

// forwards to the OpenMP runtime; 0 leaves the default
void set_worker_count(int jobs);
int max_worker_count();

// K_m^T: sum over time tuples and sequence subsets s_1<...<s_m of m x m
// kernel Gram determinants. Deterministic: fixed lexicographic enumeration,
// fixed block tree reduction, results independent of worker count.
cplx kernel_KmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                const KernelSpec& spec, TimeCoupling coupling = TimeCoupling::grid);

// same value in mantissa*2^exp form (never overflows on unstable systems)
ScaledComplex kernel_KmT_wide(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                              const KernelSpec& spec, TimeCoupling coupling = TimeCoupling::grid);

// single-threaded reference evaluator, plain running sum
cplx kernel_KmT_serial(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                       const KernelSpec& spec, TimeCoupling coupling = TimeCoupling::grid);
ScaledComplex kernel_KmT_serial_wide(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                                     const KernelSpec& spec, TimeCoupling coupling = TimeCoupling::grid);

// brute-force oracle: every determinant expanded as a signed sum over all m!
// permutations of kernel products; small sizes only (m<=3, T<=6, N<=4)
cplx wedge_oracle_KmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                      const KernelSpec& spec);

// A_m^T = |K12|^2 / (Re K11 * Re K22) in [0,1], with the eps->0 limit of the
// 0/0 forms: both diagonals vanishing -> 1, exactly one vanishing -> 0.
double angle_AmT(const TrajectorySet& D1, const TrajectorySet& D2, int m, long T,
                 const KernelSpec& spec, TimeCoupling coupling = TimeCoupling::grid,
                 double zero_tol = 1e-12);

// runs A_m^T over the schedule; direct mode traces A_m^T itself, cesaro mode
// traces the running Cesaro mean of (A_m^T)_{T=1..}; converged when the last
// two trace values differ by < rel_tol * max(1, |last|)
AngleResult estimate_Am(const TrajectorySet& D1, const TrajectorySet& D2, int m,
                        const AngleSchedule& schedule, const KernelSpec& spec,
                        TimeCoupling coupling = TimeCoupling::grid);

// sqrt(1 - A); input clamped into [0,1], beyond 1e-9 outside is an error
double metric_distance(double a_value);

// gram[i][j] = K_m^T(D_i, D_j), Hermitian by construction (upper triangle
// computed, mirrored); pairs run in parallel
std::vector<std::vector<cplx>> pairwise_gram(const std::vector<TrajectorySet>& datasets, int m,
                                             long T, const KernelSpec& spec,
                                             TimeCoupling coupling = TimeCoupling::grid);

// angles[i][j] = A_m^T(D_i, D_j), symmetric, unit diagonal
std::vector<std::vector<double>> pairwise_angles(const std::vector<TrajectorySet>& datasets, int m,
                                                 long T, const KernelSpec& spec,
                                                 TimeCoupling coupling = TimeCoupling::grid);

}  // namespace dsmetric
