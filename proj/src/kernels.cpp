#include "dsmetric/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsmetric {

std::string kernel_kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::szego: return "szego";
    }
    return "?";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "szego") return KernelKind::szego;
    throw std::invalid_argument("unknown kernel '" + name + "' (expected linear, gaussian or szego)");
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw std::invalid_argument("gaussian kernel: bandwidth must be a positive real");
    return {KernelKind::gaussian, bandwidth};
}

bool Observable::finite() const {
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

cplx Observable::folded(int i) const {
    const cplx v = values[static_cast<size_t>(i)];
    if (scale2 == 0) return v;
    const int e = static_cast<int>(std::clamp<std::int64_t>(scale2, -5000, 5000));
    const cplx f{std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
    if (v != cplx{} && !(std::isfinite(f.real()) && std::isfinite(f.imag())))
        throw std::runtime_error("observable scale overflows double range");
    return f;
}

namespace {

void check_inputs(const KernelSpec& spec, const Observable& x, const Observable& y) {
    if (x.values.empty() || y.values.empty())
        throw std::invalid_argument("eval_kernel: empty observable");
    if (!x.finite() || !y.finite())
        throw std::invalid_argument("eval_kernel: non-finite observable entry");
    if (x.dim() != y.dim())
        throw std::invalid_argument("eval_kernel: dimension mismatch (" + std::to_string(x.dim()) +
                                    " vs " + std::to_string(y.dim()) + ")");
    if (spec.kind == KernelKind::szego && x.dim() != 1)
        throw std::invalid_argument("szego kernel is defined on one-dimensional points");
    if (spec.kind == KernelKind::gaussian && !(spec.bandwidth > 0.0))
        throw std::invalid_argument("gaussian kernel: bandwidth must be positive");
}

cplx szego_eval(const Observable& x, const Observable& y) {
    const cplx z = x.folded(0), w = y.folded(0);
    if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
        throw std::invalid_argument("szego kernel: point on or outside the unit circle");
    return 1.0 / (1.0 - z * std::conj(w));
}

double sq_distance_folded(const Observable& x, const Observable& y) {
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) s += std::norm(x.folded(i) - y.folded(i));
    return s;
}

}  // namespace

cplx linear_mantissa_inner(const Observable& x, const Observable& y) {
    cplx s = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i) s += x.values[i] * std::conj(y.values[i]);
    return s;
}

cplx eval_kernel(const KernelSpec& spec, const Observable& x, const Observable& y) {
    check_inputs(spec, x, y);
    switch (spec.kind) {
        case KernelKind::szego:
            return szego_eval(x, y);
        case KernelKind::gaussian:
            return std::exp(-sq_distance_folded(x, y) / (2.0 * spec.bandwidth * spec.bandwidth));
        case KernelKind::linear: {
            const cplx k = eval_kernel_wide(spec, x, y).fold();
            if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
                throw std::runtime_error("linear kernel value overflows double range; use the wide form");
            return k;
        }
    }
    throw std::logic_error("unreachable");
}

ScaledComplex eval_kernel_wide(const KernelSpec& spec, const Observable& x, const Observable& y) {
    if (spec.kind == KernelKind::linear) {
        check_inputs(spec, x, y);
        return {linear_mantissa_inner(x, y), x.scale2 + y.scale2};
    }
    return {eval_kernel(spec, x, y), 0};
}

double median_bandwidth(const std::vector<Observable>& points) {
    const size_t n = points.size();
    if (n < 2) throw std::invalid_argument("median_bandwidth: need at least 2 points");
    const int d = points[0].dim();
    for (const Observable& p : points)
        if (p.dim() != d) throw std::invalid_argument("median_bandwidth: mixed dimensions");
    std::vector<double> dist;
    dist.reserve(n * (n - 1) / 2);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            dist.push_back(std::sqrt(sq_distance_folded(points[i], points[j])));
    const size_t mid = (dist.size() - 1) / 2;  // lower median for even counts
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    const double med = dist[mid];
    if (!(med > 0.0)) throw std::invalid_argument("median_bandwidth: degenerate bandwidth (zero median distance)");
    return med;
}

std::vector<std::vector<cplx>> gram_block(const KernelSpec& spec,
                                          const std::vector<Observable>& xs,
                                          const std::vector<Observable>& ys) {
    std::vector<std::vector<cplx>> g(xs.size(), std::vector<cplx>(ys.size()));
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) {
            try {
                g[i][j] = eval_kernel(spec, xs[i], ys[j]);
            } catch (const std::exception& e) {
                throw std::invalid_argument("gram_block entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + "): " + e.what());
            }
        }
    return g;
}

}  // namespace dsmetric
