#include "dsmetric/trajectories.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dsmetric {

void TrajectorySet::validate() const {
    if (sequences.empty()) throw std::invalid_argument("trajectory set '" + name + "': no sequences");
    const size_t T = sequences[0].size();
    if (T == 0) throw std::invalid_argument("trajectory set '" + name + "': empty sequence");
    const int d = sequences[0][0].dim();
    for (const auto& seq : sequences) {
        if (seq.size() != T)
            throw std::invalid_argument("trajectory set '" + name + "': ragged sequence lengths");
        for (const Observable& ob : seq) {
            if (ob.dim() != d)
                throw std::invalid_argument("trajectory set '" + name + "': mixed observable dimensions");
            if (!ob.finite())
                throw std::invalid_argument("trajectory set '" + name + "': non-finite observable");
        }
    }
}

TrajectorySet rotation_orbit(const RotationSpec& spec, long T) {
    if (T < 1) throw std::invalid_argument("rotation_orbit: T must be >= 1");
    if (spec.shifts.empty()) throw std::invalid_argument("rotation_orbit: empty shift list");
    if (!(spec.alpha_modulus > 0.0) || spec.alpha_modulus > 1.0)
        throw std::invalid_argument("rotation_orbit: |alpha| must lie in (0,1]");
    if (!(std::abs(spec.z0) < 1.0))
        throw std::invalid_argument("rotation_orbit: z0 must lie inside the unit disk");
    for (long s : spec.shifts)
        if (s < 0) throw std::invalid_argument("rotation_orbit: negative shift");

    TrajectorySet ts;
    ts.name = "rotation";
    ts.sequences.reserve(spec.shifts.size());
    const AngleClass& ang = spec.alpha_angle;
    for (long s : spec.shifts) {
        std::vector<Observable> seq;
        seq.reserve(static_cast<size_t>(T));
        for (long t = 0; t < T; ++t) {
            const long long n = t + s;
            double frac;  // angle * n, modulo one turn
            if (ang.is_rational()) {
                // exact: ((p*n) mod q) / q, so rational rotations never drift
                const __int128 pn = static_cast<__int128>(ang.p) * n;
                long long r = static_cast<long long>(pn % ang.q);
                if (r < 0) r += ang.q;
                frac = static_cast<double>(r) / static_cast<double>(ang.q);
            } else {
                frac = std::fmod(ang.turns() * static_cast<double>(n), 1.0);
            }
            const double mod = spec.alpha_modulus == 1.0 ? 1.0 : std::pow(spec.alpha_modulus, static_cast<double>(n));
            const cplx rot = std::polar(mod, 2.0 * std::numbers::pi * frac);
            seq.emplace_back(rot * spec.z0);
        }
        ts.sequences.push_back(std::move(seq));
    }
    ts.validate();
    return ts;
}

TrajectorySet ar_simulate(const ARModel& model, const std::vector<double>& init, long T) {
    const int q = model.order();
    if (q < 1) throw std::invalid_argument("ar_simulate: empty coefficient list");
    if (model.coeffs.back() == 0.0) throw std::invalid_argument("ar_simulate: a_q must be nonzero");
    if (static_cast<int>(init.size()) != q)
        throw std::invalid_argument("ar_simulate: init length " + std::to_string(init.size()) +
                                    " does not match order " + std::to_string(q));
    if (T < 1) throw std::invalid_argument("ar_simulate: T must be >= 1");

    std::vector<double> y(init.begin(), init.end());  // init[i] = y_i
    y.reserve(static_cast<size_t>(std::max<long>(T, q)));
    for (long t = q; t < T; ++t) {
        double v = 0.0;
        for (int k = 1; k <= q; ++k) v += model.coeffs[static_cast<size_t>(k - 1)] * y[static_cast<size_t>(t - k)];
        if (!std::isfinite(v)) throw std::runtime_error("ar_simulate: sequence left double range at t=" + std::to_string(t));
        y.push_back(v);
    }

    TrajectorySet ts;
    ts.name = "ar";
    std::vector<Observable> seq;
    seq.reserve(static_cast<size_t>(T));
    for (long t = 0; t < T; ++t) seq.emplace_back(cplx{y[static_cast<size_t>(t)], 0.0});
    ts.sequences.push_back(std::move(seq));
    ts.validate();
    return ts;
}

TrajectorySet linear_simulate(const ComplexMatrix& A, const ComplexMatrix& C,
                              const std::vector<std::vector<cplx>>& x0s, long T) {
    const int q = A.rows;
    if (A.cols != q) throw std::invalid_argument("linear_simulate: A must be square");
    if (C.cols != q) throw std::invalid_argument("linear_simulate: C has " + std::to_string(C.cols) +
                                                 " columns, state dimension is " + std::to_string(q));
    if (!A.finite() || !C.finite()) throw std::invalid_argument("linear_simulate: non-finite system matrix");
    if (x0s.empty()) throw std::invalid_argument("linear_simulate: no initial values");
    if (T < 1) throw std::invalid_argument("linear_simulate: T must be >= 1");

    TrajectorySet ts;
    ts.name = "linear";
    for (const auto& x0 : x0s) {
        if (static_cast<int>(x0.size()) != q)
            throw std::invalid_argument("linear_simulate: initial value dimension mismatch");
        std::vector<cplx> x = x0;
        std::int64_t exp = 0;
        std::vector<Observable> seq;
        seq.reserve(static_cast<size_t>(T));
        for (long t = 0; t < T; ++t) {
            std::vector<cplx> y(static_cast<size_t>(C.rows), cplx{});
            for (int i = 0; i < C.rows; ++i)
                for (int j = 0; j < q; ++j) y[static_cast<size_t>(i)] += C(i, j) * x[static_cast<size_t>(j)];
            seq.emplace_back(std::move(y), exp);

            std::vector<cplx> nx(static_cast<size_t>(q), cplx{});
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) nx[static_cast<size_t>(i)] += A(i, j) * x[static_cast<size_t>(j)];
            x = std::move(nx);

            // exact power-of-two renormalization keeps the state mantissa tame
            double amax = 0.0;
            for (const cplx& v : x) amax = std::max({amax, std::abs(v.real()), std::abs(v.imag())});
            if (amax > 0.0) {
                const int k = std::ilogb(amax);
                if (k > 64 || k < -64) {
                    for (cplx& v : x) v = {std::ldexp(v.real(), -k), std::ldexp(v.imag(), -k)};
                    exp += k;
                }
            }
        }
        ts.sequences.push_back(std::move(seq));
    }
    ts.validate();
    return ts;
}

TrajectorySet time_delay_embed(const std::vector<double>& series, int dim, int lag) {
    if (dim < 1) throw std::invalid_argument("time_delay_embed: dim must be >= 1");
    if (lag < 1) throw std::invalid_argument("time_delay_embed: lag must be >= 1");
    const long need = static_cast<long>(dim - 1) * lag + 1;
    const long n = static_cast<long>(series.size());
    if (n < need)
        throw std::invalid_argument("time_delay_embed: series of length " + std::to_string(n) +
                                    " is too short for dim=" + std::to_string(dim) +
                                    ", lag=" + std::to_string(lag));
    TrajectorySet ts;
    ts.name = "embedded";
    std::vector<Observable> seq;
    const long len = n - (static_cast<long>(dim - 1) * lag);
    seq.reserve(static_cast<size_t>(len));
    for (long t = 0; t < len; ++t) {
        std::vector<cplx> v(static_cast<size_t>(dim));
        for (int j = 0; j < dim; ++j)
            v[static_cast<size_t>(j)] = cplx{series[static_cast<size_t>(t + static_cast<long>(j) * lag)], 0.0};
        seq.emplace_back(std::move(v));
    }
    ts.sequences.push_back(std::move(seq));
    ts.validate();
    return ts;
}

TrajectorySet with_shifted_copies(const TrajectorySet& single, int copies) {
    single.validate();
    if (single.n_sequences() != 1)
        throw std::invalid_argument("with_shifted_copies: expects a single-sequence trajectory set");
    if (copies < 1) throw std::invalid_argument("with_shifted_copies: copies must be >= 1");
    const long T = single.length();
    if (T < copies)
        throw std::invalid_argument("with_shifted_copies: sequence shorter than requested copy count");
    TrajectorySet ts;
    ts.name = single.name;
    ts.label = single.label;
    const long len = T - (copies - 1);
    for (int j = 0; j < copies; ++j) {
        std::vector<Observable> seq(single.sequences[0].begin() + j,
                                    single.sequences[0].begin() + j + len);
        ts.sequences.push_back(std::move(seq));
    }
    ts.validate();
    return ts;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && (tok[pos] == ' ' || tok[pos] == '\r')) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

std::vector<std::pair<int, std::vector<double>>> parse_ucr(const std::string& text, const std::string& origin) {
    std::vector<std::pair<int, std::vector<double>>> out;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    char delim = '\0';
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (delim == '\0') delim = line.find('\t') != std::string::npos ? '\t' : ',';

        std::vector<std::string> toks;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, delim)) toks.push_back(tok);
        if (toks.size() < 2)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected a label followed by at least one value");
        double labelv;
        if (!parse_double(toks[0], labelv))
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad label '" + toks[0] + "'");
        const double r = std::round(labelv);
        if (std::abs(labelv - r) > 1e-9)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": non-integer label '" + toks[0] + "'");
        std::vector<double> vals;
        vals.reserve(toks.size() - 1);
        for (size_t i = 1; i < toks.size(); ++i) {
            double v;
            if (!parse_double(toks[i], v))
                throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad value '" + toks[i] + "'");
            vals.push_back(v);
        }
        out.emplace_back(static_cast<int>(r), std::move(vals));
    }
    if (out.empty()) throw std::invalid_argument(origin + ": no records");
    return out;
}

std::vector<std::pair<int, std::vector<double>>> load_ucr(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_ucr(ss.str(), path);
}

std::vector<Observable> collect_observables(const std::vector<TrajectorySet>& sets) {
    std::vector<Observable> all;
    for (const TrajectorySet& ts : sets)
        for (const auto& seq : ts.sequences)
            for (const Observable& ob : seq) all.push_back(ob);
    return all;
}

}  // namespace dsmetric
