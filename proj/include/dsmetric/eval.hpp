#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsmetric/metric_core.hpp"
#include "dsmetric/trajectories.hpp"

namespace dsmetric {

struct DistanceMatrix {
    std::vector<std::string> names;
    std::vector<int> labels;
    std::vector<std::vector<double>> d;  // symmetric, zero diagonal

    size_t size() const { return d.size(); }
    void validate() const;
};

struct PairEstimate {
    int i = 0, j = 0;
    double a_value = 0.0;
    bool converged = true;
};

struct DistanceResult {
    DistanceMatrix matrix;
    std::vector<PairEstimate> pairs;  // upper triangle, i < j
    bool all_converged = true;
};

// d[i][j] = sqrt(1 - estimate_Am(D_i, D_j).final); pairs run in parallel,
// convergence flags are carried per pair
DistanceResult distance_matrix(const std::vector<TrajectorySet>& datasets, int m,
                               const AngleSchedule& schedule, const KernelSpec& spec,
                               TimeCoupling coupling = TimeCoupling::grid);

// majority vote over the k nearest train rows; ties broken by the smaller
// summed distance among tied labels, then by the smaller label
std::vector<int> knn_classify(const DistanceMatrix& dm, const std::vector<int>& train_idx,
                              const std::vector<int>& test_idx, int k = 3);

struct CvResult {
    double mean_error = 0.0;
    double sd = 0.0;
    std::vector<double> per_trial;
};

// stratified random fold assignment from the seeded Lcg64; error is the
// misclassification fraction, reported per trial and as mean +- sd
CvResult cross_validate(const DistanceMatrix& dm, int folds = 10, int trials = 10,
                        std::uint64_t seed = 0, int k = 3);

// header row of names, then one row of 17-significant-digit values per entry
std::string distance_matrix_csv(const DistanceMatrix& dm);

}  // namespace dsmetric
