// dsmetric: kernel angles and pseudo-distances between dynamical systems from
// trajectory data, with analytic oracles and a time-series classification
// harness. Subcommands: synth, metric, oracle, classify.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "dsmetric/log.hpp"
#include "dsmetric/pipeline.hpp"
#include "dsmetric/traj_io.hpp"

using namespace dsmetric;

namespace {

// exit codes: 0 ok, 1 input/config error, 2 non-convergence warnings
constexpr int kExitError = 1;

std::string ensure_out_dir(const std::string& out) {
    std::filesystem::create_directories(out);
    return out;
}

cplx parse_point(const std::string& re, const std::string& im) {
    return {std::stod(re), std::stod(im)};
}

void add_angle_flags(CLI::App* cmd, std::string& frac, double& irr, bool& has_irr,
                     const std::string& prefix) {
    cmd->add_option("--" + prefix + "-frac", frac,
                    "rational angle in turns, as p/q (exact arithmetic)");
    cmd->add_option("--" + prefix + "-irr", irr, "irrational angle in turns")
        ->each([&has_irr](const std::string&) { has_irr = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric between dynamical systems via kernel Gram determinants"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate a trajectory file for a known system");
    SynthConfig sc;
    std::string synth_theta_frac;
    double synth_theta_irr = 0.0;
    bool synth_has_irr = false;
    std::string synth_z0_re = "0.9", synth_z0_im = "0";
    std::string synth_out = "trajectory.traj";
    std::string synth_shifts = "0";
    synth->add_option("kind", sc.kind, "rotation | ar | linear")->required();
    synth->add_option("--T", sc.T, "number of time steps")->required();
    synth->add_option("--out", synth_out, "output trajectory file");
    synth->add_option("--alpha-mod", sc.alpha_mod, "rotation modulus in (0,1]");
    add_angle_flags(synth, synth_theta_frac, synth_theta_irr, synth_has_irr, "theta");
    synth->add_option("--z0-re", synth_z0_re, "initial point, real part");
    synth->add_option("--z0-im", synth_z0_im, "initial point, imaginary part");
    synth->add_option("--shifts", synth_shifts, "comma-separated orbit offsets, e.g. 0,1");
    synth->add_option("--coeffs", sc.ar_coeffs, "AR coefficients a_1..a_q")->delimiter(',');
    synth->add_option("--init", sc.ar_init, "AR seed values y_0..y_{q-1} (default: ones)")->delimiter(',');
    synth->add_option("--A", sc.a_matrix, "state matrix, rows ';'-separated, entries re or re:im");
    synth->add_option("--C", sc.c_matrix, "observation matrix (default: identity)");
    synth->add_option("--x0", sc.x0_specs, "initial state vector(s), comma-separated entries")
        ->take_all();

    // ---- metric ----
    auto* metric = app.add_subcommand("metric", "pairwise angles and distances between trajectory files");
    MetricConfig mc;
    std::string metric_out = "out";
    metric->add_option("inputs", mc.inputs, "trajectory files (>= 2)")->required()->expected(-2);
    metric->add_option("--kernel", mc.kernel.kernel, "linear | gaussian | szego");
    metric->add_option("--bandwidth", mc.kernel.bandwidth, "gaussian width: auto | <float>");
    metric->add_option("--m", mc.m, "exterior power degree (1..3)");
    metric->add_option("--tmax", mc.schedule.tmax, "largest horizon T");
    metric->add_option("--mode", mc.schedule.mode, "direct | cesaro");
    metric->add_option("--rel-tol", mc.schedule.rel_tol, "convergence tolerance");
    metric->add_option("--coupling", mc.coupling, "grid | sync determinant time pairing");
    metric->add_option("--jobs", mc.jobs, "worker threads (0 = default)");
    metric->add_option("--seed", mc.seed, "recorded in the report for provenance");
    metric->add_option("--out", metric_out, "output directory");

    // ---- oracle ----
    auto* oracle = app.add_subcommand("oracle", "closed-form values for rotation, AR and subspace oracles");
    OracleConfig oc;
    std::string oa_frac, ob_frac;
    double oa_irr = 0.0, ob_irr = 0.0;
    bool oa_has_irr = false, ob_has_irr = false;
    std::string oz_re = "0.9", oz_im = "0", ow_re = "0.9", ow_im = "0";
    std::string oracle_out;
    oracle->add_option("kind", oc.kind, "rotation | ar | subspace")->required();
    oracle->add_option("--m", oc.m, "rotation: 1 or 2");
    oracle->add_option("--alpha-mod", oc.alpha_mod, "|alpha| in (0,1]");
    oracle->add_option("--beta-mod", oc.beta_mod, "|beta| in (0,1]");
    add_angle_flags(oracle, oa_frac, oa_irr, oa_has_irr, "alpha");
    add_angle_flags(oracle, ob_frac, ob_irr, ob_has_irr, "beta");
    oracle->add_option("--z-re", oz_re);
    oracle->add_option("--z-im", oz_im);
    oracle->add_option("--w-re", ow_re);
    oracle->add_option("--w-im", ow_im);
    oracle->add_option("--coeffs1", oc.coeffs1, "first AR model a_1..a_q")->delimiter(',');
    oracle->add_option("--coeffs2", oc.coeffs2, "second AR model a_1..a_q")->delimiter(',');
    oracle->add_option("--A1", oc.a1, "first state matrix");
    oracle->add_option("--C1", oc.c1, "first observation matrix");
    oracle->add_option("--A2", oc.a2, "second state matrix");
    oracle->add_option("--C2", oc.c2, "second observation matrix");
    oracle->add_option("--out", oracle_out, "write JSON here instead of stdout");

    // ---- classify ----
    auto* classify = app.add_subcommand("classify", "UCR-format kNN classification via the metric");
    ClassifyConfig cc;
    std::string classify_out = "out";
    classify->add_option("input", cc.ucr_path, "UCR text file")->required();
    classify->add_option("--kernel", cc.kernel.kernel, "linear | gaussian | szego");
    classify->add_option("--bandwidth", cc.kernel.bandwidth, "gaussian width: auto | <float>");
    classify->add_option("--m", cc.m, "exterior power degree (1..3)");
    classify->add_option("--tmax", cc.schedule.tmax, "largest horizon T (clamped to the data)");
    classify->add_option("--mode", cc.schedule.mode, "direct | cesaro");
    classify->add_option("--rel-tol", cc.schedule.rel_tol, "convergence tolerance");
    classify->add_option("--coupling", cc.coupling, "grid | sync determinant time pairing");
    classify->add_option("--embed-dim", cc.embed_dim, "time-delay embedding dimension");
    classify->add_option("--embed-lag", cc.embed_lag, "time-delay embedding lag");
    classify->add_option("--k", cc.k, "nearest neighbors");
    classify->add_option("--folds", cc.folds, "cross-validation folds");
    classify->add_option("--trials", cc.trials, "cross-validation repetitions");
    classify->add_option("--seed", cc.seed, "fold-assignment seed");
    classify->add_option("--jobs", cc.jobs, "worker threads (0 = default)");
    classify->add_option("--out", classify_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            if (!synth_theta_frac.empty()) sc.theta_frac = parse_fraction(synth_theta_frac);
            if (synth_has_irr) sc.theta_irr = synth_theta_irr;
            sc.z0 = parse_point(synth_z0_re, synth_z0_im);
            sc.shifts.clear();
            for (const std::string& tok : [&] {
                     std::vector<std::string> t;
                     std::string cur;
                     for (char ch : synth_shifts + ",") {
                         if (ch == ',') {
                             if (!cur.empty()) t.push_back(cur);
                             cur.clear();
                         } else {
                             cur += ch;
                         }
                     }
                     return t;
                 }())
                sc.shifts.push_back(std::stol(tok));
            write_text_file(synth_out, run_synth(sc));
            log_info("wrote " + synth_out);
            return 0;
        }
        if (metric->parsed()) {
            const MetricOutputs out = run_metric(mc);
            const std::string dir = ensure_out_dir(metric_out);
            write_text_file(dir + "/distances.csv", out.distances_csv);
            write_text_file(dir + "/report.json", out.report_json);
            log_info("wrote " + dir + "/distances.csv and report.json");
            return out.exit_code;
        }
        if (oracle->parsed()) {
            if (!oa_frac.empty()) oc.alpha_frac = parse_fraction(oa_frac);
            if (oa_has_irr) oc.alpha_irr = oa_irr;
            if (!ob_frac.empty()) oc.beta_frac = parse_fraction(ob_frac);
            if (ob_has_irr) oc.beta_irr = ob_irr;
            oc.z = parse_point(oz_re, oz_im);
            oc.w = parse_point(ow_re, ow_im);
            const std::string json = run_oracle(oc);
            if (oracle_out.empty())
                std::fputs(json.c_str(), stdout);
            else
                write_text_file(oracle_out, json);
            return 0;
        }
        if (classify->parsed()) {
            const ClassifyOutputs out = run_classify(cc);
            const std::string dir = ensure_out_dir(classify_out);
            write_text_file(dir + "/distances.csv", out.distances_csv);
            write_text_file(dir + "/report.json", out.report_json);
            log_info("wrote " + dir + "/distances.csv and report.json");
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dsmetric: %s\n", e.what());
        return kExitError;
    }
    return 0;
}
