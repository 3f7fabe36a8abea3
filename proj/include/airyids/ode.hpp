#pragma once

#include "errors.hpp"
#include "real.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace airyids {

template <class Real = real_t>
struct OdeState {
    Real psi, dpsi;
};

// psi'' = q(z) psi with q linear on [z0, z1]: q(z0 + t) = alpha + beta t.
// Taylor coefficients obey (n+2)(n+1) t_{n+2} = alpha t_n + beta t_{n-1}.
template <class Real = real_t>
class TaylorLinearSegment {
public:
    TaylorLinearSegment(Real alpha, Real beta) : alpha_(alpha), beta_(beta) {}

    OdeState<Real> step(const OdeState<Real>& s, const Real& h) const {
        using std::abs;
        const Real eps = eps_v<Real>();
        Real tm1 = 0, t0 = s.psi, t1 = s.dpsi;
        Real hp = h; // h^n for the term t_n
        Real psi = t0 + t1 * h, dpsi = t1;
        Real prev_psi_term = abs(t1 * h);
        int quiet = 0;
        for (int n = 0; n < max_terms; ++n) {
            Real t2 = (alpha_ * t0 + beta_ * tm1) / Real((n + 2) * (n + 1));
            Real dterm = Real(n + 2) * t2 * hp; // d/dh of t_{n+2} h^{n+2}
            hp *= h;
            Real term = t2 * hp;
            psi += term;
            dpsi += dterm;
            Real scale = abs(psi) + abs(dpsi) * abs(h);
            if (abs(term) + abs(dterm * h) <= eps * scale && prev_psi_term <= eps * scale) {
                if (++quiet >= 2) return {psi, dpsi};
            } else {
                quiet = 0;
            }
            prev_psi_term = abs(term);
            tm1 = t0;
            t0 = t1;
            t1 = t2;
        }
        throw NumericError("Taylor step did not converge (h = " + to_string(h) + ")");
    }

private:
    static constexpr int max_terms = 400;
    Real alpha_, beta_;
};

// Integrates psi'' = q(z) psi for continuous piecewise-linear q with kinks at the given breakpoints.
// Substeps keep |alpha| h^2 and |beta| h^3 below step_scale so every series converges quickly.
template <class Real = real_t>
OdeState<Real> integrate_piecewise_linear(const std::function<Real(const Real&)>& q, const std::vector<Real>& knots,
                                          OdeState<Real> s, const Real& step_scale = Real(1)) {
    using std::abs;
    using std::cbrt;
    using std::sqrt;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const Real z0 = knots[k], z1 = knots[k + 1];
        const Real len = z1 - z0;
        if (!(len > 0)) throw PreconditionError("integrate_piecewise_linear: knots must be increasing");
        const Real q0 = q(z0), q1 = q(z1);
        const Real slope = (q1 - q0) / len;
        Real qmax = abs(q0) > abs(q1) ? abs(q0) : abs(q1);
        Real h = len;
        if (qmax * h * h > step_scale) h = sqrt(step_scale / qmax);
        if (abs(slope) * h * h * h > step_scale) h = cbrt(step_scale / abs(slope));
        int steps = static_cast<int>(std::ceil(to_double(Real(len / h))));
        if (steps < 1) steps = 1;
        if (steps > 10000000) throw NumericError("integrate_piecewise_linear: step size underflow");
        const Real dh = len / steps;
        for (int i = 0; i < steps; ++i) {
            Real za = z0 + dh * i;
            TaylorLinearSegment<Real> seg(q0 + slope * (za - z0), slope);
            s = seg.step(s, dh);
        }
    }
    return s;
}

} // namespace airyids
