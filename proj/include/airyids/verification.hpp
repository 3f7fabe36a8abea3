#pragma once

#include "airy.hpp"
#include "bands.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "real.hpp"
#include "transfer.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace airyids {

template <class Real = real_t>
struct HGF {
    Real y, h, g;
    std::optional<Real> f; // 2 sqrt(-UU'VV') / g; absent outside bands and where g = 0
};

template <class Real = real_t>
HGF<Real> hgf_from(const UVSample<Real>& s, const Params<Real>& params) {
    using std::sqrt;
    const Real& y = s.y;
    HGF<Real> r;
    r.y = y;
    r.h = -s.U * s.U_prime - y * s.V * s.V_prime + s.U_prime * s.V_prime + (y + params.c) * s.U * s.V;
    r.g = s.U * s.V_prime + s.V * s.U_prime;
    Real prod = s.U * s.U_prime * s.V * s.V_prime;
    if (prod <= 0 && r.g != 0) r.f = 2 * sqrt(-prod) / r.g;
    return r;
}

template <class Real = real_t>
HGF<Real> hgf_eval(const Real& y, const Params<Real>& params) {
    require_in_range(y, params, "hgf_eval");
    return hgf_from(uv_sample(y, params), params);
}

// Right-hand sides of the y-derivatives of U, U', V, V' evaluated at y + c.
template <class Real = real_t>
std::array<Real, 4> uv_derivative_identities(const UVSample<Real>& s, const Params<Real>& params) {
    const Real& y = s.y;
    const Real x = y + params.c;
    return {-y * s.V + s.U_prime, -y * s.V_prime + x * s.U, -s.U + s.V_prime, -s.U_prime + x * s.V};
}

template <class Real = real_t>
struct LemmaBandReport {
    int p = 0;
    int expected_sign = 0;
    int samples = 0;
    int violations = 0;
    Real min_abs_h = 0;
    Real worst_y = 0; // sample with the smallest |h| (or the first violation)
    bool pass() const { return violations == 0; }
};

template <class Real = real_t>
struct LemmaReport {
    std::vector<LemmaBandReport<Real>> bands;
    bool pass() const {
        for (const auto& b : bands) {
            if (!b.pass()) return false;
        }
        return true;
    }
};

// h sampled on every band 0..p_max (both edges included); h > 0 expected on even bands, h < 0 on odd ones.
template <class Real = real_t>
LemmaReport<Real> lemma_h_report(int p_max, const Params<Real>& params, int samples = 1000) {
    using std::abs;
    auto bands = band_edges(params, p_max);
    LemmaReport<Real> rep;
    for (const auto& b : bands) {
        std::vector<Real> hs(static_cast<std::size_t>(samples)), ys(hs.size());
        parallel_for(hs.size(), [&](std::size_t i) {
            ys[i] = b.y_max + b.width() * Real(static_cast<int>(i)) / (samples - 1);
            hs[i] = hgf_from(uv_sample(ys[i], params), params).h;
        });
        LemmaBandReport<Real> r;
        r.p = b.p;
        r.expected_sign = b.p % 2 == 0 ? 1 : -1;
        r.samples = samples;
        r.min_abs_h = std::numeric_limits<Real>::infinity();
        for (std::size_t i = 0; i < hs.size(); ++i) {
            bool bad = sgn(hs[i]) != r.expected_sign;
            if (bad && r.violations++ == 0) {
                r.worst_y = ys[i];
                r.min_abs_h = abs(hs[i]);
            }
            if (r.violations == 0 && abs(hs[i]) < r.min_abs_h) {
                r.min_abs_h = abs(hs[i]);
                r.worst_y = ys[i];
            }
        }
        rep.bands.push_back(r);
    }
    return rep;
}

template <class Real = real_t>
LemmaReport<Real> lemma_h_check(int p_max, const Params<Real>& params, int samples = 1000) {
    auto rep = lemma_h_report(p_max, params, samples);
    for (const auto& b : rep.bands) {
        if (!b.pass()) {
            throw IntegrityError("lemma h: wrong sign of h on band " + std::to_string(b.p) + " at y = " +
                                 to_string(b.worst_y));
        }
    }
    return rep;
}

template <class Real = real_t>
struct BandWidthBound {
    int j = 0;
    Real c, lambda, k2j_bound;
    Real center;                   // -a~_{j+1}
    std::optional<SpectralBand<Real>> band;
    bool included = false;
};

template <class Real = real_t>
Real k2j_upper_bound(int j) {
    using std::exp;
    using std::pow;
    using std::sqrt;
    const Real jr = j;
    const Real k = Real(2) / 9;
    return Real(2e6) * pow(jr, Real(-11) / 6) * exp(4 * pi_v<Real>() * k * sqrt(k) / sqrt(jr));
}

// Lambda_{2j,c} with the stated K_{2j} bound, and the inclusion of band 2j in [-a~ - Lambda, -a~ + Lambda].
template <class Real = real_t>
BandWidthBound<Real> band_width_bound(int j, const Params<Real>& params) {
    using std::exp;
    using std::sqrt;
    if (j < 1) throw PreconditionError("band_width_bound: j must be >= 1");
    params.validate();
    Real c2j = c_constant<Real>(2 * j);
    if (params.c < c2j) {
        throw PreconditionError("band_width_bound: c is below c_" + std::to_string(2 * j) + " = " + to_string(c2j));
    }
    const Real at = zero_of<Real>(ZeroKind::ai_prime_zero, j + 1).location;
    const Real bip = airy_eval(Real(-at)).bi_prime;
    const Real d = params.c - at;
    const Real d32 = d * sqrt(d);
    BandWidthBound<Real> r;
    r.j = j;
    r.c = params.c;
    r.k2j_bound = k2j_upper_bound<Real>(j);
    r.lambda = (bip * bip / (2 * pi_v<Real>() * at) + r.k2j_bound / d32) * exp(-Real(4) / 3 * d32);
    r.center = -at;
    auto bands = band_edges_unchecked(params, 2 * j);
    r.band = bands.back();
    r.included = r.band->y_max >= r.center - r.lambda && r.band->y_min <= r.center + r.lambda;
    return r;
}

template <class Real = real_t>
struct InequalityRow {
    std::string label;
    int j = 0;
    Real lhs, rhs;
    bool holds = false;
    bool diagnostic = false; // not part of the inequality chain
};

namespace detail {

template <class Real>
InequalityRow<Real> row(std::string label, int j, const Real& lhs, const Real& rhs, bool diagnostic = false) {
    return {std::move(label), j, lhs, rhs, lhs <= rhs, diagnostic};
}

// The approximation of h(-a~_{j+1}) at c = c_{2j} given in closed form for j >= 1.
template <class Real>
Real h_closed_form(int j) {
    using std::exp;
    using std::pow;
    using std::sqrt;
    const Real pi = pi_v<Real>();
    const Real jr = j;
    const Real T = 3 * pi / 8 * (4 * jr + 3);
    const Real k = Real(2) / 9;
    const Real E = 2 * pi * k * sqrt(k) / sqrt(jr);
    return 1 + T * exp(E) - 3 * pi / 32 * (4 * jr + 3) * (1 - Real(9) / 4 * pow(T, Real(-7) / 2)) * exp(-E) +
           Real(5) / 8 * sqrt(k) * pow(3 * pi / 2, Real(1) / 3) * pow(jr, Real(-1) / 6) * pow(T, Real(-35) / 24) *
               exp(-E);
}

} // namespace detail

template <class Real = real_t>
Real h_closed_form(int j) {
    if (j < 1) throw PreconditionError("h_closed_form: j must be >= 1");
    return detail::h_closed_form<Real>(j);
}

// h(-a~_{j+1}) at c = c_{2j}.
template <class Real = real_t>
Real h_at_center(int j) {
    Params<Real> params;
    params.c = c_constant<Real>(2 * j);
    const Real at = zero_of<Real>(ZeroKind::ai_prime_zero, j + 1).location;
    return hgf_eval(Real(-at), params).h;
}

// Inequalities (01)-(15) of the band-centre estimate evaluated as stated, then the final estimate.
template <class Real = real_t>
std::vector<InequalityRow<Real>> appendix_inequalities(int j_max) {
    using std::abs;
    using std::exp;
    using std::pow;
    using std::sqrt;
    if (j_max < 1) throw PreconditionError("appendix_inequalities: j_max must be >= 1");
    const Real pi = pi_v<Real>();
    const Real sqpi = sqrt(pi);
    const Real k = Real(2) / 9;
    const Real th = Real(1) / 3;
    std::vector<std::vector<InequalityRow<Real>>> per_j(static_cast<std::size_t>(j_max));
    parallel_for(per_j.size(), [&](std::size_t idx) {
        const int j = static_cast<int>(idx) + 1;
        const Real jr = j;
        auto& rows = per_j[idx];
        const Real at = zero_of<Real>(ZeroKind::ai_prime_zero, j + 1).location;
        const Real c2j = c_constant<Real>(2 * j);
        const Real x = c2j - at;
        const Real T = 3 * pi / 8 * (4 * jr + 3);
        const Real sgnj = j % 2 == 0 ? 1 : -1;
        const AiryQuad<Real> q = airy_eval(Real(-at));
        rows.push_back(detail::row("01", j, abs(-at + pow(T, 2 * th)), Real(Real(5) / 48 * pow(T, -4 * th))));
        rows.push_back(detail::row("02", j, abs(q.ai - sgnj / sqpi * pow(T, th / 2)),
                                   Real(Real(5) / 48 / sqpi * pow(T, Real(-11) / 6))));
        rows.push_back(detail::row("03", j, abs(q.bi + sgnj / sqpi * pow(T, -th / 2)),
                                   Real(Real(385) / 4608 / sqpi * pow(T, Real(-13) / 6))));
        rows.push_back(detail::row("04", j, abs(q.bi_prime - Real(3) / 2 * sgnj / sqpi * pow(T, Real(-5) / 4)),
                                   Real(Real(7315) / 663552 / sqpi * pow(T, Real(-17) / 6))));
        const Real lead = k * pow(3 * pi / 2, 2 * th) * pow(jr, -th);
        rows.push_back(detail::row("05", j, abs(x - lead), Real(2 * pow(T, -2 * th))));
        const Real Q = lead + 2 * pow(T, -2 * th);
        rows.push_back(detail::row("06-left", j, Real(8 / (27 * pi) * sqrt(jr)), Real(Real(3) / 2 * pow(Q, Real(-1.5)))));
        rows.push_back(detail::row("06-right", j, Real(Real(3) / 2 * pow(Q, Real(-1.5))),
                                   Real(9 * pi / (32 * sqrt(Real(2))) * (4 * jr + 3))));
        rows.push_back(detail::row("07-left", j, Real(1 / (2 * sqrt(Real(2)) * (4 * jr + 3))),
                                   Real(Real(4) / 3 * pow(Q, Real(1.5)))));
        rows.push_back(detail::row("07-right", j, Real(Real(4) / 3 * pow(Q, Real(1.5))),
                                   Real(Real(16) / 27 * pi / sqrt(jr))));
        rows.push_back(detail::row("08", j, Real(sqrt(Q)), Real(Real(2) / 3 * pow(3 * pi / 2, th) * pow(jr, -th / 2))));
        rows.push_back(detail::row("09", j, Real(1 / sqrt(Q)), Real(pow(T, th) / sqrt(Real(2)))));

        // Products at x through the scaled pair: Ai carries e^{-zeta}, Bi carries e^{zeta}.
        const ScaledAiry<Real> sx = airy_scaled(x);
        const Real em = exp(-sx.zeta), ep = exp(sx.zeta);
        const Real ai = sx.scaled.ai, aip = sx.scaled.ai_prime, bi = sx.scaled.bi, bip = sx.scaled.bi_prime;
        const Real E = 2 * pi * k * sqrt(k) / sqrt(jr);
        const Real damp = exp(-1 / (2 * sqrt(Real(2)) * (4 * jr + 3)));
        const Real s = pow(3 * pi / 2, th) * pow(jr, -th / 2);
        rows.push_back(detail::row("10", j, abs(ai * aip * em * em + exp(-E) / (4 * pi)),
                                   Real(Real(5) / (1024 * sqrt(Real(2))) * (4 * jr + 3) * damp)));
        rows.push_back(detail::row("11", j, abs(bi * bip * ep * ep - exp(E) / pi),
                                   Real(Real(5) / (1024 * sqrt(Real(2))) * (4 * jr + 3) *
                                        exp(Real(16) / 27 * pi / sqrt(jr)))));
        rows.push_back(detail::row("12", j, abs(aip * bip + sqrt(k) * s / (2 * pi)),
                                   Real(Real(7) / (768 * sqrt(Real(2))) * s * (4 * jr + 3))));
        rows.push_back(detail::row("13", j, abs(aip * aip * em * em - sqrt(k) * s * exp(-E) / (4 * pi)),
                                   Real(Real(7) / 1536 * s * (4 * jr + 3) * damp)));
        rows.push_back(detail::row("14", j, abs(ai * bi - 1 / (2 * pi * sqrt(k) * s)),
                                   Real(Real(5) / 192 * pow(T, 4 * th))));
        rows.push_back(detail::row("15", j, abs(ai * ai * em * em - exp(-E) / (4 * pi * sqrt(k) * s)),
                                   Real(Real(5) / (768 * pi) * pow(T, 4 * th) * damp)));

        const Real h = h_at_center<Real>(j);
        const Real approx = detail::h_closed_form<Real>(j);
        rows.push_back(detail::row("finale2", j, abs(h - approx), Real(Real(7) * Real(9e-3) * pow(T, Real(-4)))));
        // h >= 15.87 - 6.3e-2 T^{-4} > 0, written as (bound - h <= 0) and (-bound <= 0).
        const Real bound = Real(15.87) - Real(6.3e-2) * pow(T, Real(-4));
        rows.push_back(detail::row("finale3-bound", j, Real(bound - h), Real(0)));
        rows.push_back(detail::row("finale3-positive", j, Real(-h), Real(0)));

        // Diagnostics: (01) with the asymptotics of the zeros of Ai and with those of Ai'.
        const Real a_next = zero_of<Real>(ZeroKind::ai_zero, j + 1).location;
        rows.push_back(detail::row("01-ai-zero", j, abs(a_next - pow(T, 2 * th)), Real(Real(5) / 48 * pow(T, -4 * th)), true));
        const Real Tp = 3 * pi / 8 * (4 * jr + 1);
        rows.push_back(detail::row("01-ai-prime-asymptotic", j, abs(at - pow(Tp, 2 * th) * (1 - Real(7) / 48 / (Tp * Tp))),
                                   Real(Real(7) / 48 * pow(Tp, -4 * th)), true));
    });
    std::vector<InequalityRow<Real>> out;
    for (auto& rows : per_j) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

// The j = 0 line: a~_1, c_0 and h(-a~_1) at c = c_0.
template <class Real = real_t>
struct BaseCase {
    Real a_tilde_1, c0, h;
};

template <class Real = real_t>
BaseCase<Real> appendix_base_case() {
    BaseCase<Real> b;
    b.a_tilde_1 = zero_of<Real>(ZeroKind::ai_prime_zero, 1).location;
    b.c0 = c_constant<Real>(0);
    Params<Real> params;
    params.c = b.c0;
    b.h = hgf_eval(Real(-b.a_tilde_1), params).h;
    return b;
}

} // namespace airyids
