#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsmetric/angle_class.hpp"
#include "dsmetric/complex_linalg.hpp"
#include "dsmetric/kernels.hpp"

namespace dsmetric {

// N observed sequences of length T from one system; the finite-data stand-in
// for a (dynamics, observable, initial values) triple.
struct TrajectorySet {
    std::string name;
    std::optional<int> label;
    std::vector<std::vector<Observable>> sequences;  // [sequence][time]

    int n_sequences() const { return static_cast<int>(sequences.size()); }
    long length() const { return sequences.empty() ? 0 : static_cast<long>(sequences[0].size()); }
    int dim() const { return sequences.empty() || sequences[0].empty() ? 0 : sequences[0][0].dim(); }
    const Observable& at(int s, long t) const {
        return sequences[static_cast<size_t>(s)][static_cast<size_t>(t)];
    }

    // rectangular, N >= 1, T >= 1, uniform dimension, finite entries
    void validate() const;
};

// z -> alpha z on the unit disk; alpha = alpha_modulus * e^{2 pi i angle}
struct RotationSpec {
    double alpha_modulus = 1.0;              // in (0, 1]
    AngleClass alpha_angle = AngleClass::rational(0, 1);
    cplx z0{0.0, 0.0};                       // |z0| < 1
    std::vector<long> shifts{0};             // orbit starting offsets
};

struct ARModel {
    std::vector<double> coeffs;  // y_t = a_1 y_{t-1} + ... + a_q y_{t-q}
    int order() const { return static_cast<int>(coeffs.size()); }
};

// sequence l has entries alpha^(t + shifts[l]) * z0, one-dimensional complex
TrajectorySet rotation_orbit(const RotationSpec& spec, long T);

// one scalar sequence following the recurrence; the q seed values (in time
// order) are the first q outputs
TrajectorySet ar_simulate(const ARModel& model, const std::vector<double>& init, long T);

// sequence l has observables y_t = C A^t x0_l. State growth/decay is pushed
// into Observable::scale2 with exact power-of-two renormalization, so unstable
// systems can run to horizons far beyond double range.
TrajectorySet linear_simulate(const ComplexMatrix& A, const ComplexMatrix& C,
                              const std::vector<std::vector<cplx>>& x0s, long T);

// entry t = (series[t], series[t+lag], ..., series[t+(dim-1)lag])
TrajectorySet time_delay_embed(const std::vector<double>& series, int dim = 2, int lag = 1);

// N = copies sequences; copy j is the single input sequence advanced j steps,
// all truncated to the common length
TrajectorySet with_shifted_copies(const TrajectorySet& single, int copies);

// UCR text format: one record per line, integer class label first, then the
// series values; comma or tab delimited (auto-detected); blank lines ignored
std::vector<std::pair<int, std::vector<double>>> load_ucr(const std::string& path);
std::vector<std::pair<int, std::vector<double>>> parse_ucr(const std::string& text,
                                                           const std::string& origin = "<memory>");

// every observable of every sequence, flattened (median-bandwidth pooling)
std::vector<Observable> collect_observables(const std::vector<TrajectorySet>& sets);

}  // namespace dsmetric
