#pragma once

#include "errors.hpp"
#include "real.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <cstdint>
#include <string>

namespace airyids {

template <class Real = real_t>
struct AiryQuad {
    Real ai, ai_prime, bi, bi_prime;
};

// Solutions normalized at 0: u(0)=1, u'(0)=0, v(0)=0, v'(0)=1.
template <class Real = real_t>
struct CanonicalPair {
    Real u, u_prime, v, v_prime;
};

enum class ZeroKind { ai_zero, ai_prime_zero, v_zero, v_prime_zero };

inline const char* to_string(ZeroKind k) {
    switch (k) {
    case ZeroKind::ai_zero: return "ai_zero";
    case ZeroKind::ai_prime_zero: return "ai_prime_zero";
    case ZeroKind::v_zero: return "v_zero";
    case ZeroKind::v_prime_zero: return "v_prime_zero";
    }
    return "?";
}

// location is the positive magnitude; the zero itself sits at -location.
template <class Real = real_t>
struct ZeroFamily {
    ZeroKind kind;
    int index;
    Real location;
};

inline constexpr double airy_domain_bound = 200.0;

template <class Real = real_t>
struct AiryAtZero {
    Real ai, ai_prime, bi, bi_prime;
};

template <class Real = real_t>
AiryAtZero<Real> airy_at_zero() {
    using std::cbrt;
    using std::sqrt;
    const Real three = 3;
    const Real ai0 = 1 / (cbrt(three * three) * boost::math::tgamma(Real(2) / 3));
    const Real aip0 = -1 / (cbrt(three) * boost::math::tgamma(Real(1) / 3));
    return {ai0, aip0, sqrt(three) * ai0, -sqrt(three) * aip0};
}

template <class Real = real_t>
AiryQuad<Real> airy_eval(const Real& x) {
    using std::abs;
    if (!finite(x)) throw RangeError("airy_eval: non-finite argument");
    if (abs(x) > Real(airy_domain_bound)) {
        throw RangeError("airy_eval: |x| = " + to_string(x) + " exceeds the safe bound " +
                         std::to_string(airy_domain_bound) + "; use airy_scaled");
    }
    AiryQuad<Real> q{boost::math::airy_ai(x), boost::math::airy_ai_prime(x), boost::math::airy_bi(x),
                     boost::math::airy_bi_prime(x)};
    if (!finite(q.ai) || !finite(q.ai_prime) || !finite(q.bi) || !finite(q.bi_prime)) {
        throw RangeError("airy_eval: overflow at x = " + to_string(x));
    }
    return q;
}

// e^{zeta}Ai, e^{zeta}Ai', e^{-zeta}Bi, e^{-zeta}Bi' with zeta = (2/3)x^{3/2} for x > 0, zeta = 0 otherwise.
template <class Real = real_t>
struct ScaledAiry {
    Real zeta;
    AiryQuad<Real> scaled;
};

template <class Real = real_t>
ScaledAiry<Real> airy_scaled(const Real& x) {
    using std::exp;
    using std::sqrt;
    Real zeta = x > 0 ? Real(2) / 3 * x * sqrt(x) : Real(0);
    AiryQuad<Real> q = airy_eval(x);
    Real ep = exp(zeta), em = exp(-zeta);
    return {zeta, {q.ai * ep, q.ai_prime * ep, q.bi * em, q.bi_prime * em}};
}

template <class Real = real_t>
CanonicalPair<Real> canonical_from(const AiryQuad<Real>& q) {
    static const AiryAtZero<Real> z = airy_at_zero<Real>();
    const Real pi = pi_v<Real>();
    return {pi * (z.bi_prime * q.ai - z.ai_prime * q.bi), pi * (z.bi_prime * q.ai_prime - z.ai_prime * q.bi_prime),
            pi * (z.ai * q.bi - z.bi * q.ai), pi * (z.ai * q.bi_prime - z.bi * q.ai_prime)};
}

template <class Real = real_t>
CanonicalPair<Real> canonical_uv(const Real& x) {
    return canonical_from(airy_eval(x));
}

namespace detail {

// f(x) and f'(x) of the target function, with x the positive magnitude (zero at -x).
template <class Real>
std::pair<Real, Real> zero_target(ZeroKind kind, const Real& x) {
    AiryQuad<Real> q = airy_eval(Real(-x));
    switch (kind) {
    case ZeroKind::ai_zero: return {q.ai, -q.ai_prime};
    case ZeroKind::ai_prime_zero: return {q.ai_prime, x * q.ai}; // Ai''(t) = t Ai(t)
    case ZeroKind::v_zero: {
        CanonicalPair<Real> c = canonical_from(q);
        return {c.v, -c.v_prime};
    }
    case ZeroKind::v_prime_zero: {
        CanonicalPair<Real> c = canonical_from(q);
        return {c.v_prime, x * c.v};
    }
    }
    return {Real(0), Real(1)};
}

template <class Real>
Real airy_zero_guess(bool prime, int j) {
    using std::pow;
    Real t = 3 * pi_v<Real>() / 8 * (prime ? Real(4 * j - 3) : Real(4 * j - 1));
    Real t2 = t * t;
    Real corr = prime ? (1 - Real(7) / 48 / t2) : (1 + Real(5) / 48 / t2);
    return pow(t, Real(2) / 3) * corr;
}

template <class Real>
Real polish_zero(ZeroKind kind, int j, Real lo, Real hi) {
    auto flo = zero_target(kind, lo).first, fhi = zero_target(kind, hi).first;
    if (sgn(flo) == sgn(fhi)) {
        throw NumericError(std::string("zero_of(") + to_string(kind) + ", " + std::to_string(j) +
                           "): bracket [" + to_string(lo) + ", " + to_string(hi) + "] has no sign change");
    }
    std::uintmax_t iters = 100;
    Real guess = (lo + hi) / 2;
    Real r = boost::math::tools::newton_raphson_iterate(
        [&](const Real& x) { return zero_target(kind, x); }, guess, lo, hi,
        std::numeric_limits<Real>::digits - 4, iters);
    if (iters >= 100) {
        throw NumericError(std::string("zero_of(") + to_string(kind) + ", " + std::to_string(j) +
                           "): no convergence after 100 iterations, last bracket [" + to_string(lo) + ", " +
                           to_string(hi) + "]");
    }
    return r;
}

template <class Real>
Real airy_family_zero(bool prime, int j) {
    using std::sqrt;
    Real g = airy_zero_guess<Real>(prime, j);
    // Local half-spacing of consecutive zeros is about pi/(2 sqrt(g)); stay well inside it.
    Real d = pi_v<Real>() / (4 * sqrt(g > 1 ? g : Real(1)));
    Real lo = g - d, hi = g + d;
    if (lo < 0) lo = 0;
    return polish_zero(prime ? ZeroKind::ai_prime_zero : ZeroKind::ai_zero, j, lo, hi);
}

} // namespace detail

// j >= 1 for the Airy families; the v family has index 0 at the origin.
// v_zero index j >= 1 returns c_{2j-1}; v_prime_zero index j >= 0 returns c_{2j}.
template <class Real = real_t>
ZeroFamily<Real> zero_of(ZeroKind kind, int j) {
    switch (kind) {
    case ZeroKind::ai_zero:
    case ZeroKind::ai_prime_zero:
        if (j < 1) throw PreconditionError("zero_of: index must be >= 1");
        return {kind, j, detail::airy_family_zero<Real>(kind == ZeroKind::ai_prime_zero, j)};
    case ZeroKind::v_zero: {
        if (j < 0) throw PreconditionError("zero_of: index must be >= 0");
        if (j == 0) return {kind, 0, Real(0)};
        // c_{2j-1} lies between a_j and a~_{j+1}.
        Real lo = detail::airy_family_zero<Real>(false, j);
        Real hi = detail::airy_family_zero<Real>(true, j + 1);
        return {kind, j, detail::polish_zero(kind, j, lo, hi)};
    }
    case ZeroKind::v_prime_zero: {
        if (j < 0) throw PreconditionError("zero_of: index must be >= 0");
        // c_{2j} lies between a~_{j+1} and a_{j+1}.
        Real lo = detail::airy_family_zero<Real>(true, j + 1);
        Real hi = detail::airy_family_zero<Real>(false, j + 1);
        return {kind, j, detail::polish_zero(kind, j, lo, hi)};
    }
    }
    throw PreconditionError("zero_of: unknown kind");
}

// Band-center offset: a~_{j+1} for p = 2j, a_{j+1} for p = 2j+1.
template <class Real = real_t>
Real band_center_offset(int p) {
    if (p < 0) throw PreconditionError("band_center_offset: p must be >= 0");
    return p % 2 == 0 ? zero_of<Real>(ZeroKind::ai_prime_zero, p / 2 + 1).location
                      : zero_of<Real>(ZeroKind::ai_zero, p / 2 + 1).location;
}

// c_p: zero of v' for even p, of v for odd p.
template <class Real = real_t>
Real c_constant(int p) {
    if (p < 0) throw PreconditionError("c_constant: p must be >= 0");
    return p % 2 == 0 ? zero_of<Real>(ZeroKind::v_prime_zero, p / 2).location
                      : zero_of<Real>(ZeroKind::v_zero, (p + 1) / 2).location;
}

} // namespace airyids
