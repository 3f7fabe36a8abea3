#pragma once

#include "errors.hpp"
#include "real.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace airyids {

inline constexpr std::uintmax_t max_root_iterations = 200;

// Root of f on [lo, hi] given f(lo), f(hi) of opposite sign; returns the midpoint of the final bracket.
template <class Real, class F>
Real solve_bracketed(F&& f, Real lo, Real hi, Real flo, Real fhi, const char* what = "root") {
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (sgn(flo) == sgn(fhi)) {
        throw NumericError(std::string(what) + ": no sign change on [" + to_string(lo) + ", " +
                           to_string(hi) + "]");
    }
    std::uintmax_t iters = max_root_iterations;
    boost::math::tools::eps_tolerance<Real> tol(std::numeric_limits<Real>::digits - 3);
    std::pair<Real, Real> r;
    try {
        r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    } catch (const std::exception& e) {
        throw NumericError(std::string(what) + ": " + e.what());
    }
    if (iters >= max_root_iterations) {
        throw NumericError(std::string(what) + ": no convergence, last bracket [" + to_string(r.first) +
                           ", " + to_string(r.second) + "]");
    }
    return (r.first + r.second) / 2;
}

template <class Real, class F>
Real solve_bracketed(F&& f, Real lo, Real hi, const char* what = "root") {
    return solve_bracketed(f, lo, hi, Real(f(lo)), Real(f(hi)), what);
}

// Plain bisection on the sign of f; used where only a sign is trustworthy.
template <class Real, class F>
Real bisect_sign(F&& sign_of, Real lo, Real hi, int slo, const char* what = "bisection",
                 int max_iter = 400) {
    for (int i = 0; i < max_iter; ++i) {
        Real mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) return mid;
        int s = sign_of(mid);
        if (s == 0) return mid;
        if (s == slo) lo = mid; else hi = mid;
    }
    throw NumericError(std::string(what) + ": no convergence, last bracket [" + to_string(lo) + ", " +
                       to_string(hi) + "]");
}

} // namespace airyids
