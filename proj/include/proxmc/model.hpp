#pragma once

#include <string>

#include "proxmc/terms.hpp"
#include "proxmc/vec.hpp"

namespace proxmc {

/* Composite target: posterior potential U = f + g with f smooth
 * (lip_grad-Lipschitz gradient) and g convex non-smooth. The density is
 * pi(x) proportional to exp(-U(x)); sigma and beta record how the model was
 * assembled (noise level, prior weight) for reporting.
 */
struct CompositeModel {
    SmoothTerm smooth;
    NonSmoothTerm nonsmooth;  // includes any prior weight beta
    double sigma = 1.0;
    double beta = 1.0;
    std::string label;
    std::size_t dim = 0;
};

inline double potential_eval(const CompositeModel& m, const Vec& x) {
    if (x.size() != m.dim) throw input_error("potential_eval: dimension mismatch");
    return m.smooth.eval(x) + m.nonsmooth.eval(x);
}

}  // namespace proxmc
