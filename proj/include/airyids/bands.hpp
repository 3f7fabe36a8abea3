#pragma once

#include "airy.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "real.hpp"
#include "roots.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace airyids {

template <class Real = real_t>
struct PhysicalParams {
    Real m, L0, V0, hbar = Real(1);
};

template <class Real = real_t>
struct Params {
    Real c = Real(10);
    std::optional<PhysicalParams<Real>> physical;

    static Params from_physical(const PhysicalParams<Real>& ph) {
        using std::cbrt;
        Params p;
        p.c = cbrt(2 * ph.m * ph.L0 * ph.L0 * ph.V0 / (ph.hbar * ph.hbar));
        p.physical = ph;
        p.validate();
        return p;
    }

    void validate() const {
        using std::abs;
        if (!(c > 0) || !finite(c)) throw ConfigError("c must be a positive finite number");
        if (physical) {
            const auto& ph = *physical;
            if (!(ph.m > 0 && ph.L0 > 0 && ph.V0 > 0 && ph.hbar > 0)) {
                throw ConfigError("physical parameters m, L0, V0, hbar must be positive");
            }
            using std::cbrt;
            Real expect = cbrt(2 * ph.m * ph.L0 * ph.L0 * ph.V0 / (ph.hbar * ph.hbar));
            if (abs(expect - c) > Real(1e-12) * expect) {
                throw ConfigError("c does not match (2 m L0^2 V0 / hbar^2)^(1/3)");
            }
        }
    }
};

// U, U', V, V' evaluated at y + c; the basis is normalized at y (U=1, U'=0, V=0, V'=1 there).
template <class Real = real_t>
struct UVSample {
    Real y, U, U_prime, V, V_prime;
    Real wronskian() const { return U * V_prime - U_prime * V; }
};

template <class Real = real_t>
UVSample<Real> uv_from_airy(const Real& y, const AiryQuad<Real>& at_y, const AiryQuad<Real>& at_x) {
    const Real pi = pi_v<Real>();
    return {y,
            pi * (at_y.bi_prime * at_x.ai - at_y.ai_prime * at_x.bi),
            pi * (at_y.bi_prime * at_x.ai_prime - at_y.ai_prime * at_x.bi_prime),
            pi * (at_y.ai * at_x.bi - at_y.bi * at_x.ai),
            pi * (at_y.ai * at_x.bi_prime - at_y.bi * at_x.ai_prime)};
}

inline constexpr double uv_margin = 1.0;

template <class Real = real_t>
UVSample<Real> uv_sample(const Real& y, const Params<Real>& params) {
    const Real& c = params.c;
    if (!(y >= -c - Real(uv_margin) && y <= Real(uv_margin))) {
        throw PreconditionError("uv_sample: y = " + to_string(y) + " outside [-c-1, 1]");
    }
    return uv_from_airy(y, airy_eval(y), airy_eval(Real(y + c)));
}

// Same quantities through the canonical pair: U = v'(y)u(x) - u'(y)v(x), V = u(y)v(x) - v(y)u(x).
template <class Real = real_t>
UVSample<Real> uv_sample_canonical(const Real& y, const Params<Real>& params) {
    CanonicalPair<Real> a = canonical_uv(y), b = canonical_uv(Real(y + params.c));
    return {y, a.v_prime * b.u - a.u_prime * b.v, a.v_prime * b.u_prime - a.u_prime * b.v_prime,
            a.u * b.v - a.v * b.u, a.u * b.v_prime - a.v * b.u_prime};
}

template <class Real = real_t>
struct SpectralBand {
    int p = 0;
    Real y_max, y_min, e_min, e_max, center_offset;
    bool truncated = false; // not fully inside [-c, 0]

    Real width() const { return y_min - y_max; }
    bool contains_y(const Real& y) const { return y >= y_max && y <= y_min; }
};

enum class EdgeFunction { U, U_prime, V, V_prime };

inline const char* to_string(EdgeFunction f) {
    switch (f) {
    case EdgeFunction::U: return "U";
    case EdgeFunction::U_prime: return "U'";
    case EdgeFunction::V: return "V";
    case EdgeFunction::V_prime: return "V'";
    }
    return "?";
}

// Edge table: even bands have Y_max at a zero of U and Y_min at a zero of U'; odd bands use V and V'.
inline EdgeFunction edge_function(int p, bool upper_y) {
    if (p % 2 == 0) return upper_y ? EdgeFunction::U_prime : EdgeFunction::U;
    return upper_y ? EdgeFunction::V_prime : EdgeFunction::V;
}

template <class Real>
Real pick(const UVSample<Real>& s, EdgeFunction f) {
    switch (f) {
    case EdgeFunction::U: return s.U;
    case EdgeFunction::U_prime: return s.U_prime;
    case EdgeFunction::V: return s.V;
    case EdgeFunction::V_prime: return s.V_prime;
    }
    return s.U;
}

namespace detail {

template <class Real>
SpectralBand<Real> locate_band(const Params<Real>& params, int p) {
    const Real& c = params.c;
    Real center = band_center_offset<Real>(p);
    Real next = band_center_offset<Real>(p + 1);
    Real d = next - center;
    if (p > 0) {
        Real prev = band_center_offset<Real>(p - 1);
        if (center - prev < d) d = center - prev;
    }
    d /= 2;
    Real lo = -center - d, hi = -center + d;
    if (lo < -c - Real(uv_margin)) lo = -c - Real(uv_margin);
    const bool below_cp = c < c_constant<Real>(p);
    auto edge = [&](EdgeFunction f) {
        auto fn = [&](const Real& y) { return pick(uv_sample(y, params), f); };
        std::string what = std::string("band ") + std::to_string(p) + " edge (" + airyids::to_string(f) + ")";
        if (below_cp && sgn(fn(lo)) * sgn(fn(hi)) > 0) {
            throw PreconditionError(what + " does not exist for c = " + to_string(c) + " below c_" + std::to_string(p));
        }
        return solve_bracketed(fn, lo, hi, what.c_str());
    };
    SpectralBand<Real> b;
    b.p = p;
    b.center_offset = center;
    b.y_max = edge(edge_function(p, false));
    b.y_min = edge(edge_function(p, true));
    if (!(b.y_max < b.y_min)) {
        using std::abs;
        // Bands narrower than the working precision: the two edges coincide up to rounding.
        if (abs(b.y_max - b.y_min) <= 64 * eps_v<Real>() * abs(b.y_min)) {
            if (b.y_min < b.y_max) std::swap(b.y_max, b.y_min);
        } else {
            throw IntegrityError("band " + std::to_string(p) + ": Y_max = " + to_string(b.y_max) +
                                 " is not below Y_min = " + to_string(b.y_min));
        }
    }
    b.e_min = -c - b.y_min;
    b.e_max = -c - b.y_max;
    b.truncated = b.y_max < -c || b.y_min > 0;
    return b;
}

} // namespace detail

// Edges of bands 0..p_max without the c >= c_p check; bands partly outside [-c, 0] carry truncated = true.
template <class Real = real_t>
std::vector<SpectralBand<Real>> band_edges_unchecked(const Params<Real>& params, int p_max) {
    params.validate();
    if (p_max < 0) throw PreconditionError("band_edges: p_max must be >= 0");
    std::vector<SpectralBand<Real>> out(static_cast<std::size_t>(p_max) + 1);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = detail::locate_band(params, static_cast<int>(i)); });
    return out;
}

template <class Real = real_t>
std::vector<SpectralBand<Real>> band_edges(const Params<Real>& params, int p_max) {
    params.validate();
    if (p_max < 0) throw PreconditionError("band_edges: p_max must be >= 0");
    Real cp = c_constant<Real>(p_max);
    if (params.c < cp) {
        throw PreconditionError("band_edges: c = " + to_string(params.c) + " is below c_" + std::to_string(p_max) +
                                " = " + to_string(cp));
    }
    return band_edges_unchecked(params, p_max);
}

// Largest p with c >= c_p, or -1 if c < c_0.
template <class Real = real_t>
int max_band_index(const Params<Real>& params) {
    int p = -1;
    while (params.c >= c_constant<Real>(p + 1)) ++p;
    return p;
}

enum class RescaleDirection { physical_to_rescaled, rescaled_to_physical, energy_to_y, y_to_energy };

template <class Real = real_t>
Real rescale_map(const Real& value, const Params<Real>& params, RescaleDirection dir) {
    switch (dir) {
    case RescaleDirection::energy_to_y:
    case RescaleDirection::y_to_energy: return -params.c - value;
    case RescaleDirection::physical_to_rescaled:
    case RescaleDirection::rescaled_to_physical:
        if (!params.physical) throw ConfigError("rescale_map: physical parameters (m, L0, V0) are required");
        if (dir == RescaleDirection::physical_to_rescaled) return params.c * value / params.physical->V0;
        return value * params.physical->V0 / params.c;
    }
    return value;
}

// Signs of (U, U', V, V') predicted by the edge table from the edges above y.
template <class Real = real_t>
std::array<int, 4> expected_signs(const Real& y, const std::vector<SpectralBand<Real>>& bands) {
    int nU = 0, nUp = 0, nV = 0, nVp = 0;
    for (const auto& b : bands) {
        if (b.p % 2 == 0) {
            nU += b.y_max > y;
            nUp += b.y_min > y;
        } else {
            nV += b.y_max > y;
            nVp += b.y_min > y;
        }
    }
    auto s = [](int n) { return n % 2 == 0 ? 1 : -1; };
    return {s(nU), s(nUp), s(nV), s(nVp)};
}

template <class Real = real_t>
std::array<int, 4> signs_of(const UVSample<Real>& s) {
    return {sgn(s.U), sgn(s.U_prime), sgn(s.V), sgn(s.V_prime)};
}

} // namespace airyids
