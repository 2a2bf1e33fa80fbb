#include "dsmetric/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "dsmetric/rng.hpp"
#include "dsmetric/traj_io.hpp"

namespace dsmetric {

void DistanceMatrix::validate() const {
    const size_t n = d.size();
    if (names.size() != n || labels.size() != n)
        throw std::invalid_argument("distance matrix: name/label count mismatch");
    for (size_t i = 0; i < n; ++i) {
        if (d[i].size() != n) throw std::invalid_argument("distance matrix: not square");
        if (d[i][i] != 0.0) throw std::invalid_argument("distance matrix: nonzero diagonal");
        for (size_t j = 0; j < n; ++j) {
            if (!std::isfinite(d[i][j]) || d[i][j] < 0.0)
                throw std::invalid_argument("distance matrix: invalid entry");
            if (std::abs(d[i][j] - d[j][i]) > 1e-10)
                throw std::invalid_argument("distance matrix: asymmetric beyond tolerance");
        }
    }
}

DistanceResult distance_matrix(const std::vector<TrajectorySet>& datasets, int m,
                               const AngleSchedule& schedule, const KernelSpec& spec,
                               TimeCoupling coupling) {
    const size_t n = datasets.size();
    if (n == 0) throw std::invalid_argument("distance_matrix: no datasets");
    schedule.validate();

    DistanceResult out;
    out.matrix.d.assign(n, std::vector<double>(n, 0.0));
    for (const TrajectorySet& ts : datasets) {
        out.matrix.names.push_back(ts.name);
        out.matrix.labels.push_back(ts.label.value_or(0));
    }

    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    out.pairs.resize(pairs.size());

    std::atomic<bool> failed{false};
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (long long p = 0; p < static_cast<long long>(pairs.size()); ++p) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const auto [i, j] = pairs[static_cast<size_t>(p)];
        try {
            const AngleResult r = estimate_Am(datasets[static_cast<size_t>(i)],
                                              datasets[static_cast<size_t>(j)], m, schedule, spec, coupling);
            const double dist = metric_distance(r.final_value);
            out.matrix.d[static_cast<size_t>(i)][static_cast<size_t>(j)] = dist;
            out.matrix.d[static_cast<size_t>(j)][static_cast<size_t>(i)] = dist;
            out.pairs[static_cast<size_t>(p)] = {i, j, r.final_value, r.converged};
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed.store(true);
                if (error.empty())
                    error = "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what();
            }
        }
    }
    if (failed.load()) throw std::runtime_error("distance_matrix: " + error);

    for (const PairEstimate& pe : out.pairs) out.all_converged = out.all_converged && pe.converged;
    out.matrix.validate();
    return out;
}

std::vector<int> knn_classify(const DistanceMatrix& dm, const std::vector<int>& train_idx,
                              const std::vector<int>& test_idx, int k) {
    dm.validate();
    const int n = static_cast<int>(dm.size());
    if (train_idx.empty() || test_idx.empty())
        throw std::invalid_argument("knn_classify: empty train or test set");
    if (k < 1) throw std::invalid_argument("knn_classify: k must be >= 1");
    if (static_cast<int>(train_idx.size()) < k)
        throw std::invalid_argument("knn_classify: fewer than k train points");
    std::vector<char> in_train(static_cast<size_t>(n), 0);
    for (int i : train_idx) {
        if (i < 0 || i >= n) throw std::invalid_argument("knn_classify: train index out of range");
        in_train[static_cast<size_t>(i)] = 1;
    }
    for (int i : test_idx) {
        if (i < 0 || i >= n) throw std::invalid_argument("knn_classify: test index out of range");
        if (in_train[static_cast<size_t>(i)]) throw std::invalid_argument("knn_classify: train/test overlap");
    }

    std::vector<int> predicted;
    predicted.reserve(test_idx.size());
    for (int q : test_idx) {
        // k nearest train rows; equal distances resolved by index order
        std::vector<std::pair<double, int>> near;
        near.reserve(train_idx.size());
        for (int t : train_idx) near.emplace_back(dm.d[static_cast<size_t>(q)][static_cast<size_t>(t)], t);
        std::sort(near.begin(), near.end());
        near.resize(static_cast<size_t>(k));

        std::map<int, std::pair<int, double>> votes;  // label -> (count, summed distance)
        for (const auto& [dist, t] : near) {
            auto& v = votes[dm.labels[static_cast<size_t>(t)]];
            v.first += 1;
            v.second += dist;
        }
        int best_label = 0;
        std::pair<int, double> best{-1, 0.0};
        for (const auto& [label, v] : votes) {
            const bool better = v.first > best.first ||
                                (v.first == best.first && v.second < best.second);
            // map iteration is label-ascending, so equal (count, sum) keeps the smaller label
            if (better) {
                best = v;
                best_label = label;
            }
        }
        predicted.push_back(best_label);
    }
    return predicted;
}

CvResult cross_validate(const DistanceMatrix& dm, int folds, int trials, std::uint64_t seed, int k) {
    dm.validate();
    const int n = static_cast<int>(dm.size());
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (trials < 1) throw std::invalid_argument("cross_validate: trials must be >= 1");
    if (folds > n) throw std::invalid_argument("cross_validate: more folds than points");

    std::map<int, std::vector<int>> by_label;
    for (int i = 0; i < n; ++i) by_label[dm.labels[static_cast<size_t>(i)]].push_back(i);
    if (by_label.size() < 2) throw std::invalid_argument("cross_validate: need at least two classes");

    Lcg64 rng(seed);
    CvResult out;
    for (int trial = 0; trial < trials; ++trial) {
        // stratified fold assignment: shuffle within each class, deal round-robin
        std::vector<int> fold_of(static_cast<size_t>(n), 0);
        for (auto& [label, idx] : by_label) {
            std::vector<int> order = idx;
            for (size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[rng.below(i)]);
            for (size_t i = 0; i < order.size(); ++i)
                fold_of[static_cast<size_t>(order[i])] = static_cast<int>(i % static_cast<size_t>(folds));
        }
        long wrong = 0, total = 0;
        for (int f = 0; f < folds; ++f) {
            std::vector<int> train, test;
            for (int i = 0; i < n; ++i) (fold_of[static_cast<size_t>(i)] == f ? test : train).push_back(i);
            if (test.empty()) continue;
            if (static_cast<int>(train.size()) < k)
                throw std::invalid_argument("cross_validate: fold leaves fewer than k train points");
            const std::vector<int> pred = knn_classify(dm, train, test, k);
            for (size_t t = 0; t < test.size(); ++t) {
                wrong += pred[t] != dm.labels[static_cast<size_t>(test[t])] ? 1 : 0;
                ++total;
            }
        }
        out.per_trial.push_back(static_cast<double>(wrong) / static_cast<double>(total));
    }
    double mean = 0.0;
    for (double e : out.per_trial) mean += e;
    mean /= static_cast<double>(out.per_trial.size());
    double var = 0.0;
    for (double e : out.per_trial) var += (e - mean) * (e - mean);
    var /= static_cast<double>(out.per_trial.size());
    out.mean_error = mean;
    out.sd = std::sqrt(var);
    return out;
}

std::string distance_matrix_csv(const DistanceMatrix& dm) {
    std::string out;
    for (size_t i = 0; i < dm.names.size(); ++i) {
        if (i) out += ',';
        out += dm.names[i];
    }
    out += '\n';
    for (const auto& row : dm.d) {
        for (size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_g17(row[j]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace dsmetric
