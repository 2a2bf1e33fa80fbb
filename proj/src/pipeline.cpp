#include "dsmetric/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dsmetric/linear_analytic.hpp"
#include "dsmetric/log.hpp"
#include "dsmetric/rotation_oracle.hpp"
#include "dsmetric/traj_io.hpp"

namespace dsmetric {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, delim)) out.push_back(tok);
    return out;
}

cplx parse_complex_entry(const std::string& tok) {
    const size_t colon = tok.find(':');
    try {
        if (colon == std::string::npos) return {std::stod(tok), 0.0};
        return {std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))};
    } catch (...) {
        throw std::invalid_argument("bad complex entry '" + tok + "' (expected re or re:im)");
    }
}

AngleClass angle_from_options(const std::optional<std::pair<long long, long long>>& frac,
                              const std::optional<double>& irr, const char* what) {
    if (frac.has_value() == irr.has_value())
        throw std::invalid_argument(std::string(what) +
                                    ": exactly one of the rational/irrational angle forms is required");
    if (frac) return AngleClass::rational(frac->first, frac->second);
    return AngleClass::irrational(*irr);
}

ordered_json kernel_json(const KernelChoice& kc, double resolved) {
    ordered_json j;
    j["kernel"] = kc.kernel;
    j["bandwidth"] = kc.bandwidth;
    if (kc.kernel == "gaussian") j["bandwidth_resolved"] = resolved;
    return j;
}

ordered_json schedule_json(const ScheduleChoice& sc) {
    ordered_json j;
    j["tmax"] = sc.tmax;
    j["mode"] = sc.mode;
    j["rel_tol"] = sc.rel_tol;
    j["zero_tol"] = sc.zero_tol;
    return j;
}

}  // namespace

ComplexMatrix parse_matrix(const std::string& text) {
    const std::vector<std::string> rows = split(text, ';');
    if (rows.empty()) throw std::invalid_argument("empty matrix");
    ComplexMatrix m;
    for (size_t i = 0; i < rows.size(); ++i) {
        const std::vector<std::string> entries = split(rows[i], ',');
        if (i == 0) {
            m = ComplexMatrix(static_cast<int>(rows.size()), static_cast<int>(entries.size()));
        } else if (static_cast<int>(entries.size()) != m.cols) {
            throw std::invalid_argument("ragged matrix rows");
        }
        for (size_t j = 0; j < entries.size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = parse_complex_entry(entries[j]);
    }
    return m;
}

std::vector<cplx> parse_complex_vector(const std::string& text) {
    std::vector<cplx> out;
    for (const std::string& tok : split(text, ',')) out.push_back(parse_complex_entry(tok));
    if (out.empty()) throw std::invalid_argument("empty vector");
    return out;
}

std::pair<long long, long long> parse_fraction(const std::string& text) {
    const size_t slash = text.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("bad fraction '" + text + "' (expected p/q)");
    try {
        return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
    } catch (...) {
        throw std::invalid_argument("bad fraction '" + text + "'");
    }
}

KernelSpec KernelChoice::resolve(const std::vector<TrajectorySet>& datasets, double* resolved) const {
    const KernelKind kind = kernel_kind_from_name(kernel);
    if (resolved) *resolved = 0.0;
    if (kind != KernelKind::gaussian) return {kind, 1.0};
    double h;
    if (bandwidth == "auto") {
        h = median_bandwidth(collect_observables(datasets));
        log_info("gaussian bandwidth (median heuristic): " + format_g17(h));
    } else {
        try {
            h = std::stod(bandwidth);
        } catch (...) {
            throw std::invalid_argument("bad bandwidth '" + bandwidth + "' (expected auto or a number)");
        }
    }
    if (resolved) *resolved = h;
    return KernelSpec::gaussian(h);
}

AngleSchedule ScheduleChoice::resolve() const {
    AngleSchedule s = AngleSchedule::geometric(std::min<long>(16, tmax), tmax);
    if (mode == "direct") {
        s.mode = AngleSchedule::Mode::direct;
    } else if (mode == "cesaro") {
        s.mode = AngleSchedule::Mode::cesaro;
    } else {
        throw std::invalid_argument("unknown mode '" + mode + "' (expected direct or cesaro)");
    }
    s.rel_tol = rel_tol;
    s.zero_tol = zero_tol;
    s.validate();
    return s;
}

std::string run_synth(const SynthConfig& cfg) {
    if (cfg.kind == "rotation") {
        RotationSpec spec;
        spec.alpha_modulus = cfg.alpha_mod;
        spec.alpha_angle = angle_from_options(cfg.theta_frac, cfg.theta_irr, "rotation");
        spec.z0 = cfg.z0;
        spec.shifts = cfg.shifts;
        return trajectory_to_csv(rotation_orbit(spec, cfg.T));
    }
    if (cfg.kind == "ar") {
        ARModel model{cfg.ar_coeffs};
        std::vector<double> init = cfg.ar_init;
        if (init.empty()) init.assign(cfg.ar_coeffs.size(), 1.0);
        return trajectory_to_csv(ar_simulate(model, init, cfg.T));
    }
    if (cfg.kind == "linear") {
        const ComplexMatrix a = parse_matrix(cfg.a_matrix);
        const ComplexMatrix c = cfg.c_matrix.empty() ? ComplexMatrix::identity(a.rows)
                                                     : parse_matrix(cfg.c_matrix);
        std::vector<std::vector<cplx>> x0s;
        for (const std::string& s : cfg.x0_specs) x0s.push_back(parse_complex_vector(s));
        if (x0s.empty()) x0s.emplace_back(static_cast<size_t>(a.rows), cplx{1.0, 0.0});
        return trajectory_to_csv(linear_simulate(a, c, x0s, cfg.T));
    }
    throw std::invalid_argument("unknown synth kind '" + cfg.kind + "' (expected rotation, ar or linear)");
}

MetricOutputs run_metric(const MetricConfig& cfg) {
    if (cfg.inputs.size() < 2) throw std::invalid_argument("metric: need at least two trajectory files");
    set_worker_count(cfg.jobs);

    std::vector<TrajectorySet> datasets;
    datasets.reserve(cfg.inputs.size());
    for (const std::string& path : cfg.inputs) datasets.push_back(load_trajectory(path));

    double bandwidth = 0.0;
    const KernelSpec spec = cfg.kernel.resolve(datasets, &bandwidth);
    const AngleSchedule schedule = cfg.schedule.resolve();
    const TimeCoupling coupling = time_coupling_from_name(cfg.coupling);

    const DistanceResult result = distance_matrix(datasets, cfg.m, schedule, spec, coupling);

    ordered_json j;
    j["tool"] = "dsmetric";
    j["version"] = kToolVersion;
    j["command"] = "metric";
    j["config"] = ordered_json{{"inputs", cfg.inputs},
                               {"kernel", kernel_json(cfg.kernel, bandwidth)},
                               {"m", cfg.m},
                               {"schedule", schedule_json(cfg.schedule)},
                               {"coupling", cfg.coupling},
                               {"jobs", cfg.jobs},
                               {"seed", cfg.seed}};
    j["names"] = result.matrix.names;
    ordered_json pairs = ordered_json::array();
    for (const PairEstimate& pe : result.pairs) {
        pairs.push_back(ordered_json{{"i", pe.i},
                                     {"j", pe.j},
                                     {"a", pe.a_value},
                                     {"converged", pe.converged},
                                     {"distance", result.matrix.d[static_cast<size_t>(pe.i)]
                                                                 [static_cast<size_t>(pe.j)]}});
    }
    j["pairs"] = std::move(pairs);
    j["all_converged"] = result.all_converged;
    j["errors"] = ordered_json::array();  // hard failures abort with exit 1 instead

    MetricOutputs out;
    out.distances_csv = distance_matrix_csv(result.matrix);
    out.report_json = j.dump(2) + "\n";
    out.exit_code = result.all_converged ? 0 : 2;
    return out;
}

ClassifyOutputs run_classify(const ClassifyConfig& cfg) {
    set_worker_count(cfg.jobs);
    const auto records = load_ucr(cfg.ucr_path);

    std::vector<TrajectorySet> datasets;
    datasets.reserve(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& [label, series] = records[i];
        TrajectorySet embedded = time_delay_embed(series, cfg.embed_dim, cfg.embed_lag);
        // m sequences per series: the embedded orbit and its first m-1 shifts
        TrajectorySet ts = cfg.m > 1 ? with_shifted_copies(embedded, cfg.m) : std::move(embedded);
        ts.label = label;
        ts.name = "seq" + std::to_string(i) + "_label" + std::to_string(label);
        datasets.push_back(std::move(ts));
    }

    double bandwidth = 0.0;
    const KernelSpec spec = cfg.kernel.resolve(datasets, &bandwidth);
    // the horizon cannot exceed the (embedded, shifted) series length
    long usable = cfg.schedule.tmax;
    for (const TrajectorySet& ts : datasets) usable = std::min(usable, ts.length());
    ScheduleChoice clamped = cfg.schedule;
    clamped.tmax = usable;
    const AngleSchedule schedule = clamped.resolve();
    const TimeCoupling coupling = time_coupling_from_name(cfg.coupling);

    const DistanceResult result = distance_matrix(datasets, cfg.m, schedule, spec, coupling);
    const CvResult cv = cross_validate(result.matrix, cfg.folds, cfg.trials, cfg.seed, cfg.k);

    ordered_json j;
    j["tool"] = "dsmetric";
    j["version"] = kToolVersion;
    j["command"] = "classify";
    j["config"] = ordered_json{{"input", cfg.ucr_path},
                               {"kernel", kernel_json(cfg.kernel, bandwidth)},
                               {"m", cfg.m},
                               {"schedule", schedule_json(cfg.schedule)},
                               {"coupling", cfg.coupling},
                               {"embed", ordered_json{{"dim", cfg.embed_dim}, {"lag", cfg.embed_lag}}},
                               {"knn", ordered_json{{"k", cfg.k}, {"folds", cfg.folds}, {"trials", cfg.trials}}},
                               {"seed", cfg.seed},
                               {"jobs", cfg.jobs}};
    j["n_sequences"] = datasets.size();
    j["labels"] = result.matrix.labels;
    j["all_converged"] = result.all_converged;
    j["cv"] = ordered_json{{"mean_error", cv.mean_error}, {"sd", cv.sd}, {"per_trial", cv.per_trial}};

    ClassifyOutputs out;
    out.distances_csv = distance_matrix_csv(result.matrix);
    out.report_json = j.dump(2) + "\n";
    out.mean_error = cv.mean_error;
    return out;
}

std::string run_oracle(const OracleConfig& cfg) {
    ordered_json j;
    j["tool"] = "dsmetric";
    j["version"] = kToolVersion;
    j["command"] = "oracle";
    j["kind"] = cfg.kind;
    if (cfg.kind == "rotation") {
        const AngleClass a = angle_from_options(cfg.alpha_frac, cfg.alpha_irr, "alpha angle");
        const AngleClass b = angle_from_options(cfg.beta_frac, cfg.beta_irr, "beta angle");
        if (cfg.m == 1) {
            const AngleClass rel = angle_difference(a, b);
            const double value = analytic_A1(cfg.alpha_mod, cfg.beta_mod, rel, cfg.z, cfg.w);
            j["m"] = 1;
            j["relative_angle_rational"] = rel.is_rational();
            j["a1"] = value;
            j["distance"] = metric_distance(value);
        } else if (cfg.m == 2) {
            const A2Branch br = analytic_A2_exact_branches({cfg.alpha_mod, a}, {cfg.beta_mod, b},
                                                           cfg.z, cfg.w);
            j["m"] = 2;
            switch (br.kind) {
                case A2Branch::Kind::zero:
                    j["branch"] = "zero";
                    j["a2"] = 0.0;
                    break;
                case A2Branch::Kind::leading_term:
                    j["branch"] = "leading_term";
                    j["a2_leading"] = br.value;
                    j["remainder_order"] = br.remainder_exponent;
                    break;
                case A2Branch::Kind::order_bound:
                    j["branch"] = "order_bound";
                    if (br.order.infinite)
                        j["mu"] = "infinity";
                    else
                        j["mu"] = br.order.value;
                    break;
            }
        } else {
            throw std::invalid_argument("rotation oracle: m must be 1 or 2");
        }
    } else if (cfg.kind == "ar") {
        auto roots_of = [](const std::vector<double>& coeffs) {
            if (coeffs.empty()) throw std::invalid_argument("ar oracle: empty coefficient list");
            std::vector<cplx> poly{1.0};
            for (double c : coeffs) poly.emplace_back(-c, 0.0);
            return poly_roots(poly);
        };
        const std::vector<cplx> r1 = roots_of(cfg.coeffs1);
        const std::vector<cplx> r2 = roots_of(cfg.coeffs2);
        const double aq = ar_closed_form_Aq(r1, r2);
        auto roots_json = [](const std::vector<cplx>& rs) {
            ordered_json arr = ordered_json::array();
            for (const cplx& r : rs) arr.push_back(ordered_json{{"re", r.real()}, {"im", r.imag()}});
            return arr;
        };
        j["roots1"] = roots_json(r1);
        j["roots2"] = roots_json(r2);
        j["aq"] = aq;
        j["distance"] = metric_distance(aq);
    } else if (cfg.kind == "subspace") {
        const LinearSystem s1{parse_matrix(cfg.a1), parse_matrix(cfg.c1)};
        const LinearSystem s2{parse_matrix(cfg.a2), parse_matrix(cfg.c2)};
        const SubspaceAngles sa = subspace_angle_distance(s1, s2);
        j["cos2"] = sa.cos2;
        j["product_cos2"] = sa.product_cos2();
        j["distance"] = sa.distance;
    } else {
        throw std::invalid_argument("unknown oracle kind '" + cfg.kind +
                                    "' (expected rotation, ar or subspace)");
    }
    return j.dump(2) + "\n";
}

}  // namespace dsmetric
