#include "dsmetric/traj_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsmetric {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

bool has_imaginary_part(const TrajectorySet& ts) {
    for (const auto& seq : ts.sequences)
        for (const Observable& ob : seq)
            for (const cplx& v : ob.values)
                if (v.imag() != 0.0) return true;
    return false;
}

}  // namespace

std::string trajectory_to_csv(const TrajectorySet& ts) {
    ts.validate();
    const bool cx = has_imaginary_part(ts);
    std::string out = "# n_seq=" + std::to_string(ts.n_sequences()) + " len=" + std::to_string(ts.length()) +
                      " dim=" + std::to_string(ts.dim()) + " complex=" + (cx ? "1" : "0") + "\n";
    for (int s = 0; s < ts.n_sequences(); ++s)
        for (long t = 0; t < ts.length(); ++t) {
            out += std::to_string(s);
            out += ',';
            out += std::to_string(t);
            const Observable& ob = ts.at(s, t);
            for (int i = 0; i < ob.dim(); ++i) {
                const cplx v = ob.folded(i);  // throws if the scale cannot be represented
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw std::runtime_error("trajectory value too large for the file format");
                out += ',';
                out += format_g17(v.real());
                if (cx) {
                    out += ',';
                    out += format_g17(v.imag());
                }
            }
            out += '\n';
        }
    return out;
}

TrajectorySet trajectory_from_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    long lineno = 0;

    auto fail = [&](const std::string& msg) -> std::runtime_error {
        return std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    long n_seq = -1, len = -1;
    int dim = -1, cx = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] != '#') throw fail("missing trajectory header line");
        if (std::sscanf(line.c_str(), "# n_seq=%ld len=%ld dim=%d complex=%d", &n_seq, &len, &dim, &cx) != 4)
            throw fail("malformed trajectory header");
        break;
    }
    if (n_seq < 1 || len < 1 || dim < 1 || cx < 0 || cx > 1) throw fail("invalid trajectory header fields");

    TrajectorySet ts;
    ts.name = origin;
    ts.sequences.assign(static_cast<size_t>(n_seq),
                        std::vector<Observable>(static_cast<size_t>(len)));
    std::vector<std::vector<char>> seen(static_cast<size_t>(n_seq),
                                        std::vector<char>(static_cast<size_t>(len), 0));
    const size_t expected_fields = 2 + static_cast<size_t>(dim) * (cx ? 2 : 1);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> toks;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) toks.push_back(tok);
        if (toks.size() != expected_fields)
            throw fail("expected " + std::to_string(expected_fields) + " fields, found " +
                       std::to_string(toks.size()));
        long s, t;
        try {
            s = std::stol(toks[0]);
            t = std::stol(toks[1]);
        } catch (...) {
            throw fail("bad sequence/time index");
        }
        if (s < 0 || s >= n_seq || t < 0 || t >= len) throw fail("sequence/time index out of range");
        std::vector<cplx> vals(static_cast<size_t>(dim));
        try {
            for (int i = 0; i < dim; ++i) {
                const double re = std::stod(toks[2 + static_cast<size_t>(i) * (cx ? 2 : 1)]);
                const double im = cx ? std::stod(toks[3 + static_cast<size_t>(i) * 2]) : 0.0;
                vals[static_cast<size_t>(i)] = {re, im};
            }
        } catch (...) {
            throw fail("bad numeric value");
        }
        ts.sequences[static_cast<size_t>(s)][static_cast<size_t>(t)] = Observable(std::move(vals));
        seen[static_cast<size_t>(s)][static_cast<size_t>(t)] = 1;
    }
    for (long s = 0; s < n_seq; ++s)
        for (long t = 0; t < len; ++t)
            if (!seen[static_cast<size_t>(s)][static_cast<size_t>(t)])
                throw std::runtime_error(origin + ": missing row for sequence " + std::to_string(s) +
                                         ", t=" + std::to_string(t));
    ts.validate();
    return ts;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

TrajectorySet load_trajectory(const std::string& path) {
    TrajectorySet ts = trajectory_from_csv(read_text_file(path), path);
    // keep the file stem as the dataset name
    size_t slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    const size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    ts.name = stem;
    return ts;
}

}  // namespace dsmetric
