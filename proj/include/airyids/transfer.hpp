#pragma once

#include "bands.hpp"
#include "errors.hpp"
#include "real.hpp"

#include <array>
#include <optional>
#include <string>

namespace airyids {

enum class Regime { gap, even_band, odd_band, edge };
enum class Parity { odd_wells, even_wells };
enum class Sign { negative = -1, zero = 0, positive = 1 };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::gap: return "gap";
    case Regime::even_band: return "even_band";
    case Regime::odd_band: return "odd_band";
    case Regime::edge: return "edge";
    }
    return "?";
}

inline const char* to_string(Parity p) { return p == Parity::odd_wells ? "odd" : "even"; }

// Number of wells and transfer-matrix exponent.
inline int well_count(int N, Parity parity) { return parity == Parity::odd_wells ? 2 * N + 1 : 2 * N; }
inline int transfer_exponent(int N, Parity parity) { return parity == Parity::odd_wells ? 2 * N + 1 : 2 * N; }

template <class Real = real_t>
struct TransferData {
    Real y, a, b0_sq, b1_sq, b;
    Regime regime;
    Real det() const { return a * a - 4 * b0_sq * b1_sq; }
};

// Classification threshold on q = 4 b0^2 b1^2 = a^2 - 1.
template <class Real = real_t>
Real default_deadband() { return 64 * eps_v<Real>(); }

template <class Real = real_t>
TransferData<Real> transfer_from_uv(const UVSample<Real>& s, Real deadband = default_deadband<Real>()) {
    using std::abs;
    using std::sqrt;
    TransferData<Real> t;
    t.y = s.y;
    t.a = s.U * s.V_prime + s.U_prime * s.V;
    t.b0_sq = s.U * s.U_prime;
    t.b1_sq = s.V * s.V_prime;
    Real q = 4 * t.b0_sq * t.b1_sq;
    t.b = 2 * sqrt(abs(t.b0_sq * t.b1_sq));
    if (abs(q) <= deadband) t.regime = Regime::edge;
    else if (q > 0) t.regime = Regime::gap;
    else t.regime = t.b0_sq < 0 ? Regime::even_band : Regime::odd_band;
    return t;
}

template <class Real = real_t>
void require_in_range(const Real& y, const Params<Real>& params, const char* who) {
    if (!(y >= -params.c && y <= 0)) {
        throw PreconditionError(std::string(who) + ": y = " + to_string(y) + " outside [-c, 0]");
    }
}

template <class Real = real_t>
TransferData<Real> transfer_data(const Real& y, const Params<Real>& params,
                                 Real deadband = default_deadband<Real>()) {
    require_in_range(y, params, "transfer_data");
    return transfer_from_uv(uv_sample(y, params), deadband);
}

// Bloch angle Arg(a + ib) in [0, pi]; meaningful in bands.
template <class Real = real_t>
Real band_angle(const TransferData<Real>& t) {
    using std::atan2;
    return atan2(t.b, t.a);
}

template <class Real = real_t>
struct PhiValue {
    Real log_magnitude; // log|Phi|; -inf when Phi = 0
    Sign sign;
    Real raw;           // valid only when representable
    bool representable;
    Regime regime;
    std::optional<Real> bracket; // tan-form bracket of the band expressions
    int cos_sign = 0;            // sign of cos((2N+1)phi~) in bands
};

namespace detail {

template <class Real>
PhiValue<Real> make_phi(Real log_mag, int sign, Regime regime) {
    using std::exp;
    using std::log;
    PhiValue<Real> v;
    v.log_magnitude = log_mag;
    v.sign = static_cast<Sign>(sign);
    v.regime = regime;
    static const Real log_max = log(std::numeric_limits<Real>::max()) - 1;
    v.representable = sign == 0 || log_mag < log_max;
    v.raw = sign == 0 ? Real(0) : (v.representable ? sign * exp(log_mag) : Real(0));
    return v;
}

template <class Real>
PhiValue<Real> from_product(const Real& log_scale, const Real& inner, Regime regime) {
    using std::abs;
    using std::log;
    if (inner == 0) return make_phi(-std::numeric_limits<Real>::infinity(), 0, regime);
    return make_phi(Real(log_scale + log(abs(inner))), sgn(inner), regime);
}

// Boundary row/column vectors and the matrix entries for the chosen well parity.
template <class Real>
struct Chain {
    Real a, t12, t21;   // T = [[a, t12], [t21, a]]
    Real w1, w2, l1, l2; // Phi = l . T^M w
    Real s;             // sqrt(y + c)
    int M;
    Regime regime;
    Real b_hat;         // 2 sqrt|b0^2 b1^2| = sqrt|a^2 - 1|
    UVSample<Real> uv;
};

template <class Real>
Chain<Real> make_chain(const Real& y, const Params<Real>& params, int N, Parity parity) {
    using std::sqrt;
    require_in_range(y, params, "phi");
    if (N < 0 || (parity == Parity::even_wells && N < 1)) {
        throw PreconditionError("phi: N must be >= 0 (>= 1 for even wells)");
    }
    UVSample<Real> s = uv_sample(y, params);
    TransferData<Real> t = transfer_from_uv(s);
    Chain<Real> ch;
    ch.uv = s;
    ch.a = t.a;
    ch.s = sqrt(y + params.c);
    ch.M = transfer_exponent(N, parity);
    ch.regime = t.regime;
    ch.b_hat = t.b;
    if (parity == Parity::odd_wells) {
        Real PU = s.U_prime + ch.s * s.U, PV = s.V_prime + ch.s * s.V;
        ch.t12 = 2 * t.b1_sq;
        ch.t21 = 2 * t.b0_sq;
        ch.w1 = PV / params.c;
        ch.w2 = PU / params.c;
        ch.l1 = PU;
        ch.l2 = PV;
    } else {
        // Barrier-centered cells: U_B = V'(x), U_B' = -U'(x), V_B = -V(x), V_B' = U(x) at the cell boundary.
        ch.t12 = -2 * s.U * s.V;
        ch.t21 = -2 * s.U_prime * s.V_prime;
        ch.w1 = 1;
        ch.w2 = -ch.s;
        ch.l1 = -ch.s;
        ch.l2 = 1;
    }
    return ch;
}

// Phi = U_{M-1}(a) (l.Tw) - U_{M-2}(a) (l.w), Chebyshev polynomials of the second kind.
template <class Real>
PhiValue<Real> chebyshev_phi(const Chain<Real>& ch) {
    using std::abs;
    using std::expm1;
    using std::exp;
    using std::log1p;
    using std::sin;
    using std::atan2;
    const Real lw = ch.l1 * ch.w1 + ch.l2 * ch.w2;
    const Real lTw = ch.l1 * (ch.a * ch.w1 + ch.t12 * ch.w2) + ch.l2 * (ch.t21 * ch.w1 + ch.a * ch.w2);
    const int M = ch.M;
    if (M == 0) return from_product(Real(0), lw, ch.regime);
    if (abs(ch.a) <= 1) {
        Real th = atan2(ch.b_hat, ch.a);
        Real st = sin(th);
        if (st == 0) {
            // U_n(+-1) = (n+1)(+-1)^n
            Real sg = ch.a > 0 ? Real(1) : Real(-1);
            Real um1 = M * ((M - 1) % 2 == 0 ? Real(1) : sg);
            Real um2 = (M - 1) * ((M - 2) % 2 == 0 ? Real(1) : sg);
            return from_product(Real(0), um1 * lTw - um2 * lw, ch.regime);
        }
        Real inner = (sin(M * th) * lTw - sin((M - 1) * th) * lw) / st;
        return from_product(Real(0), inner, ch.regime);
    }
    // |a| = cosh(eta); U_n(a) = sigma^n e^{n eta} expm1(-2(n+1)eta) / expm1(-2 eta).
    const int sigma = ch.a > 0 ? 1 : -1;
    const Real eta = log1p(abs(ch.a) - 1 + ch.b_hat);
    const Real d = expm1(-2 * eta);
    const Real rM = expm1(-2 * M * eta) / d;
    const Real rM1 = M >= 2 ? expm1(-2 * (M - 1) * eta) / d : Real(0);
    Real inner = rM * lTw - sigma * exp(-eta) * rM1 * lw;
    if ((M - 1) % 2 == 1 && sigma < 0) inner = -inner;
    return from_product(Real((M - 1) * eta), inner, ch.regime);
}

// Eigen-decomposition form: Phi = 1/2 (w1 l1 + w2 l2) S+ + 1/2 (w1 l2 r + w2 l1 / r) S-, r = b0/b1,
// S+- = (a+b)^M +- (a-b)^M, b = 2 b0 b1. Valid in gaps, where r and b are real.
template <class Real>
struct GapSplit {
    Real log_scale, first, second;
};

template <class Real>
GapSplit<Real> gap_split(const Chain<Real>& ch) {
    using std::abs;
    using std::exp;
    using std::log;
    using std::sqrt;
    const Real b0_sq = ch.t21 / 2, b1_sq = ch.t12 / 2;
    const Real r = sqrt(b0_sq / b1_sq);
    const Real b = (b0_sq > 0 ? 1 : -1) * 2 * sqrt(b0_sq * b1_sq);
    const Real lp = ch.a + b, lm = ch.a - b;
    const Real Lp = log(abs(lp)), Lm = log(abs(lm));
    const Real L = Lp > Lm ? Lp : Lm;
    const int M = ch.M;
    const Real sp = (lp < 0 && M % 2 == 1) ? Real(-1) : Real(1);
    const Real sm = (lm < 0 && M % 2 == 1) ? Real(-1) : Real(1);
    const Real pp = sp * exp(M * (Lp - L)), pm = sm * exp(M * (Lm - L));
    return {Real(M * L), (ch.w1 * ch.l1 + ch.w2 * ch.l2) / 2 * (pp + pm),
            (ch.w1 * ch.l2 * r + ch.w2 * ch.l1 / r) / 2 * (pp - pm)};
}

template <class Real>
PhiValue<Real> gap_phi(const Chain<Real>& ch) {
    GapSplit<Real> g = gap_split(ch);
    return from_product(g.log_scale, Real(g.first + g.second), Regime::gap);
}

// Band form for odd well counts: with k = num/den (even bands) or k~ = num/den (odd bands),
// Phi = (1/c)(alpha+beta) [2k/(1+k^2) cos(M phi) + (k^2-1)/(k^2+1) sin(M phi)].
template <class Real>
struct BandParts {
    Real num, den, theta, prefactor; // prefactor = (alpha + beta) / c
    int M;
    Real reduced() const {
        using std::cos;
        using std::sin;
        Real n2 = num * num + den * den;
        return (2 * num * den * cos(M * theta) + (num * num - den * den) * sin(M * theta)) / n2;
    }
};

template <class Real>
BandParts<Real> band_parts(const Chain<Real>& ch, const Real& c) {
    using std::atan2;
    using std::sqrt;
    const auto& s = ch.uv;
    Real PU = ch.l1, PV = ch.l2;
    BandParts<Real> bp;
    bp.M = ch.M;
    bp.theta = atan2(ch.b_hat, ch.a);
    if (ch.regime == Regime::even_band) {
        Real beta0 = sqrt(-s.U * s.U_prime), b1 = sqrt(s.V * s.V_prime);
        bp.num = b1 * PU;
        bp.den = beta0 * PV;
        bp.prefactor = (bp.num * bp.num + bp.den * bp.den) / (beta0 * b1) / c;
    } else {
        Real b0 = sqrt(s.U * s.U_prime), beta1 = sqrt(-s.V * s.V_prime);
        bp.num = b0 * PV;
        bp.den = beta1 * PU;
        bp.prefactor = (bp.num * bp.num + bp.den * bp.den) / (b0 * beta1) / c;
    }
    return bp;
}

} // namespace detail

// Smallest |cos((2N+1)phi~)| at which phi_eval still returns the tan-form bracket.
inline constexpr double partition_tolerance = 1e-12;

template <class Real = real_t>
PhiValue<Real> phi_eval(const Real& y, const Params<Real>& params, int N, Parity parity = Parity::odd_wells) {
    using std::abs;
    using std::cos;
    using std::log;
    auto ch = detail::make_chain(y, params, N, parity);
    if (ch.regime == Regime::edge) {
        throw PreconditionError("phi_eval: y = " + to_string(y) + " is a band edge");
    }
    if (ch.regime == Regime::gap) return detail::gap_phi(ch);
    if (parity == Parity::even_wells) return detail::chebyshev_phi(ch);
    auto bp = detail::band_parts(ch, params.c);
    Real cs = cos(bp.M * bp.theta);
    if (abs(cs) <= Real(partition_tolerance)) {
        throw PartitionRequired("phi_eval: y = " + to_string(y) +
                                " is at a pole of tan((2N+1)phi); partition the band first");
    }
    Real g = bp.reduced();
    PhiValue<Real> v = detail::from_product(Real(log(bp.prefactor)), g, ch.regime);
    v.bracket = g / cs;
    v.cos_sign = sgn(cs);
    return v;
}

// Independent route: Chebyshev expansion of the matrix power, valid in every regime including edges.
template <class Real = real_t>
PhiValue<Real> phi_direct(const Real& y, const Params<Real>& params, int N, Parity parity = Parity::odd_wells) {
    return detail::chebyshev_phi(detail::make_chain(y, params, N, parity));
}

// Literal matrix power by repeated multiplication; small N only.
template <class Real = real_t>
Real phi_matrix_power(const Real& y, const Params<Real>& params, int N, Parity parity = Parity::odd_wells) {
    auto ch = detail::make_chain(y, params, N, parity);
    Real v1 = ch.w1, v2 = ch.w2;
    for (int i = 0; i < ch.M; ++i) {
        Real n1 = ch.a * v1 + ch.t12 * v2;
        Real n2 = ch.t21 * v1 + ch.a * v2;
        v1 = n1;
        v2 = n2;
    }
    return ch.l1 * v1 + ch.l2 * v2;
}

// Pole-free function with the sign and zeros of Phi inside a band (odd well counts).
template <class Real = real_t>
Real band_reduced_phi(const Real& y, const Params<Real>& params, int N) {
    auto ch = detail::make_chain(y, params, N, Parity::odd_wells);
    if (ch.regime != Regime::even_band && ch.regime != Regime::odd_band) {
        throw PreconditionError("band_reduced_phi: y = " + to_string(y) + " is not inside a band");
    }
    return detail::band_parts(ch, params.c).reduced();
}

// The function k of the band expressions (k~ = 1/k is used on odd bands).
template <class Real = real_t>
Real k_function(const Real& y, const Params<Real>& params) {
    using std::sqrt;
    UVSample<Real> s = uv_sample(y, params);
    Real sr = sqrt(y + params.c);
    return sqrt(-(s.V * s.V_prime) / (s.U * s.U_prime)) * (s.U_prime + sr * s.U) / (s.V_prime + sr * s.V);
}

// P_U = U' + sqrt(y+c) U and P_V = V' + sqrt(y+c) V, whose signs drive the gap argument.
template <class Real = real_t>
std::array<Real, 2> gap_factors(const Real& y, const Params<Real>& params) {
    using std::sqrt;
    UVSample<Real> s = uv_sample(y, params);
    Real sr = sqrt(y + params.c);
    return {s.U_prime + sr * s.U, s.V_prime + sr * s.V};
}

// The two terms of the gap expression separately, as (sign, log|.|) pairs.
template <class Real = real_t>
struct GapTerms {
    int first_sign, second_sign;
    Real first_log, second_log;
};

template <class Real = real_t>
GapTerms<Real> gap_terms(const Real& y, const Params<Real>& params, int N, Parity parity = Parity::odd_wells) {
    using std::abs;
    using std::log;
    auto ch = detail::make_chain(y, params, N, parity);
    if (ch.regime != Regime::gap) throw PreconditionError("gap_terms: y is not in a gap");
    auto g = detail::gap_split(ch);
    return {sgn(g.first), sgn(g.second), Real(g.log_scale + log(abs(g.first))),
            Real(g.log_scale + log(abs(g.second)))};
}

} // namespace airyids
