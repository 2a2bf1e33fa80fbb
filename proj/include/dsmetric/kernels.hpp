#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dsmetric/scaled_float.hpp"

namespace dsmetric {

using cplx = std::complex<double>;

enum class KernelKind { linear, gaussian, szego };

std::string kernel_kind_name(KernelKind k);
KernelKind kernel_kind_from_name(const std::string& name);

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double bandwidth = 1.0;  // gaussian only

    static KernelSpec linear() { return {KernelKind::linear, 1.0}; }
    static KernelSpec szego() { return {KernelKind::szego, 1.0}; }
    static KernelSpec gaussian(double bandwidth);
};

// One observed value: a finite list of complex scalars. The actual value is
// values * 2^scale2; generators of unstable systems keep mantissas tame and
// push growth into scale2, everything else leaves scale2 at 0.
struct Observable {
    std::vector<cplx> values;
    std::int64_t scale2 = 0;

    Observable() = default;
    explicit Observable(std::vector<cplx> v, std::int64_t s = 0) : values(std::move(v)), scale2(s) {}
    explicit Observable(cplx v, std::int64_t s = 0) : values{v}, scale2(s) {}

    int dim() const { return static_cast<int>(values.size()); }
    bool finite() const;
    // value with the scale folded in; throws if that leaves double range
    cplx folded(int i) const;
};

// k(x,y). Hermitian in its arguments: eval_kernel(x,y) == conj(eval_kernel(y,x)).
//   linear:   sum_i x_i conj(y_i)
//   gaussian: exp(-|x-y|^2 / (2 h^2)), h = bandwidth
//   szego:    1/(1 - x conj(y)), one-dimensional, |x|,|y| < 1
cplx eval_kernel(const KernelSpec& spec, const Observable& x, const Observable& y);

// Same kernel in mantissa*2^exp form. For the linear kernel the observables'
// scales move into the exponent exactly; bounded kernels fold them first.
ScaledComplex eval_kernel_wide(const KernelSpec& spec, const Observable& x, const Observable& y);

// inner product of the mantissa vectors alone (scale2 ignored); the K_m^T
// evaluators factor the scales into determinant exponents themselves
cplx linear_mantissa_inner(const Observable& x, const Observable& y);

// Median of pairwise Euclidean distances over distinct index pairs
// (lower median for even counts). Throws if the median is zero.
double median_bandwidth(const std::vector<Observable>& points);

// entry (i,j) = eval_kernel(spec, xs[i], ys[j]); errors carry the location
std::vector<std::vector<cplx>> gram_block(const KernelSpec& spec,
                                          const std::vector<Observable>& xs,
                                          const std::vector<Observable>& ys);

}  // namespace dsmetric
