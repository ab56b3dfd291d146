#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "crl/errors.hpp"

namespace crl {

/// Adaptive moment estimation with bias correction.
struct OptState {
    std::vector<double> m;  // first moment
    std::vector<double> v;  // second moment
    long step = 0;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

inline OptState make_opt(std::size_t dim, double lr) {
    OptState o;
    o.m.assign(dim, 0.0);
    o.v.assign(dim, 0.0);
    o.lr = lr;
    return o;
}

/// One descent step on theta. Rejects non-finite gradients before touching
/// any state.
inline void opt_step(OptState& opt, std::vector<double>& theta, const std::vector<double>& grad) {
    if (theta.size() != grad.size() || theta.size() != opt.m.size())
        throw std::invalid_argument("opt_step: length mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) throw NonFiniteError("opt_step: non-finite gradient");
    opt.step += 1;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * grad[i];
        opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
        const double m_hat = opt.m[i] / bc1;
        const double v_hat = opt.v[i] / bc2;
        theta[i] -= opt.lr * m_hat / (std::sqrt(v_hat) + opt.eps);
    }
}

}  // namespace crl
