#pragma once

#include "bands.hpp"
#include "errors.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "transfer.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace airyids {

enum class OracleMethod { shooting, monodromy, finite_difference };

inline const char* to_string(OracleMethod m) {
    switch (m) {
    case OracleMethod::shooting: return "shooting";
    case OracleMethod::monodromy: return "monodromy";
    case OracleMethod::finite_difference: return "finite_difference";
    }
    return "?";
}

template <class Real = real_t>
struct OracleResult {
    OracleMethod method;
    std::vector<Real> values; // sorted; y for shooting and monodromy, E for finite differences
    std::vector<Real> residuals;
};

// Wells of depth 1 centred at -W+1, -W+3, ..., W-1; support [-W, W].
template <class Real = real_t>
Real chain_potential(const Real& z, int wells) {
    using std::abs;
    using std::floor;
    const Real W = wells;
    if (z <= -W || z >= W) return Real(0);
    Real t = z + W;                         // in (0, 2W)
    Real cell = floor(t / 2);               // well index
    Real local = t - 2 * cell - 1;          // in [-1, 1)
    return abs(local) - 1;
}

namespace detail {

template <class Real>
std::vector<Real> integer_knots(int lo, int hi) {
    std::vector<Real> k;
    for (int i = lo; i <= hi; ++i) k.push_back(Real(i));
    return k;
}

} // namespace detail

// F(y) = psi'(W) + lambda psi(W) for the solution leaving -W as exp(lambda (z + W)).
template <class Real = real_t>
Real shooting_mismatch(const Real& y, const Params<Real>& params, int wells) {
    using std::sqrt;
    const Real& c = params.c;
    const Real E = -c - y;
    if (!(E < 0)) throw PreconditionError("shooting_mismatch: E must be negative");
    const Real lambda = c * sqrt(-E);
    const Real c3 = c * c * c, c2E = c * c * E;
    auto q = [&](const Real& z) { return c3 * chain_potential(z, wells) - c2E; };
    OdeState<Real> s{Real(1), lambda};
    s = integrate_piecewise_linear<Real>(q, detail::integer_knots<Real>(-wells, wells), s);
    return s.dpsi + lambda * s.psi;
}

// Zeros of the shooting mismatch on the band widened by half its width on each side.
template <class Real = real_t>
OracleResult<Real> shooting_oracle_wells(const Params<Real>& params, int wells, const SpectralBand<Real>& band,
                                         int points = 0) {
    using std::cos;
    if (band.truncated) throw PreconditionError("shooting_oracle: band " + std::to_string(band.p) + " is not inside (-c, 0)");
    if (wells < 1) throw PreconditionError("shooting_oracle: at least one well is required");
    if (points <= 0) points = 50 * (wells + 1);
    const Real pi = pi_v<Real>();
    const Real w = band.width();
    const Real mid = (band.y_max + band.y_min) / 2;
    const Real half = w; // half-width of the scanned window: the band plus w/2 on each side
    std::vector<Real> ys(static_cast<std::size_t>(points) + 1), fs(ys.size());
    for (int i = 0; i <= points; ++i) ys[i] = mid - half * cos(pi * Real(i) / points);
    parallel_for(ys.size(), [&](std::size_t i) { fs[i] = shooting_mismatch(ys[i], params, wells); });
    auto F = [&](const Real& y) { return shooting_mismatch(y, params, wells); };
    std::vector<std::size_t> brackets;
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        if (sgn(fs[i]) * sgn(fs[i + 1]) <= 0 && !(fs[i] == 0 && i > 0)) brackets.push_back(i);
    }
    OracleResult<Real> out{OracleMethod::shooting, std::vector<Real>(brackets.size()), std::vector<Real>(brackets.size())};
    parallel_for(brackets.size(), [&](std::size_t k) {
        std::size_t i = brackets[k];
        Real r = fs[i] == 0 ? ys[i]
                 : fs[i + 1] == 0 ? ys[i + 1]
                                  : solve_bracketed(F, ys[i], ys[i + 1], fs[i], fs[i + 1], "shooting zero");
        out.values[k] = r;
        using std::abs;
        out.residuals[k] = abs(F(r));
    });
    return out;
}

template <class Real = real_t>
OracleResult<Real> shooting_oracle(const Params<Real>& params, int N, const SpectralBand<Real>& band,
                                   Parity parity = Parity::odd_wells) {
    return shooting_oracle_wells(params, well_count(N, parity), band);
}

// Period map of psi'' = (c^3 (|t| - 1) - c^2 E) psi over t in [-1, 1].
template <class Real = real_t>
struct PeriodMap {
    Real m11, m12, m21, m22;
    Real half_trace() const { return (m11 + m22) / 2; }
    Real det() const { return m11 * m22 - m12 * m21; }
};

template <class Real = real_t>
PeriodMap<Real> period_map(const Real& y, const Params<Real>& params) {
    using std::abs;
    const Real& c = params.c;
    const Real E = -c - y;
    const Real c3 = c * c * c, c2E = c * c * E;
    auto q = [&](const Real& t) { return c3 * (abs(t) - 1) - c2E; };
    std::vector<Real> knots{Real(-1), Real(0), Real(1)};
    auto s1 = integrate_piecewise_linear<Real>(q, knots, {Real(1), Real(0)});
    auto s2 = integrate_piecewise_linear<Real>(q, knots, {Real(0), Real(1)});
    return {s1.psi, s2.psi, s1.dpsi, s2.dpsi};
}

// Band edges as the crossings half_trace = -1 and +1 near each Airy-zero band centre.
template <class Real = real_t>
OracleResult<Real> monodromy_oracle(const Params<Real>& params, int p_max) {
    params.validate();
    if (p_max < 0) throw PreconditionError("monodromy_oracle: p_max must be >= 0");
    const std::size_t nb = static_cast<std::size_t>(p_max) + 1;
    std::vector<Real> vals(2 * nb), res(2 * nb);
    parallel_for(nb, [&](std::size_t i) {
        const int p = static_cast<int>(i);
        Real center = band_center_offset<Real>(p), next = band_center_offset<Real>(p + 1);
        Real d = next - center;
        if (p > 0) {
            Real prev = band_center_offset<Real>(p - 1);
            if (center - prev < d) d = center - prev;
        }
        d /= 2;
        Real lo = -center - d, hi = -center + d;
        if (lo < -params.c) lo = -params.c;
        for (int k = 0; k < 2; ++k) {
            Real target = k == 0 ? Real(-1) : Real(1);
            auto f = [&](const Real& y) { return period_map(y, params).half_trace() - target; };
            Real r = solve_bracketed(f, lo, hi, "monodromy edge");
            vals[2 * i + k] = r;
            using std::abs;
            res[2 * i + k] = abs(f(r));
        }
    });
    OracleResult<Real> out{OracleMethod::monodromy, {}, {}};
    std::vector<std::size_t> order(vals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    for (auto i : order) {
        out.values.push_back(vals[i]);
        out.residuals.push_back(res[i]);
    }
    return out;
}

inline constexpr long fd_max_dimension = 20000000;

// Whole-line second-difference discretization in double precision; eigenvalues E in (e_lo, e_hi).
template <class Real = real_t>
OracleResult<Real> fd_oracle_wells(const Params<Real>& params, int wells, double grid_step, double e_lo, double e_hi) {
    if (!(grid_step > 0 && grid_step <= 1e-2)) throw PreconditionError("fd_oracle: grid_step must be in (0, 1e-2]");
    if (!(e_lo < e_hi && e_hi < 0)) throw PreconditionError("fd_oracle: energy window must lie below 0");
    const double c = to_double(params.c);
    // Integer half-length and h = 1/m put every kink of the potential on a grid node.
    const double L = wells + std::ceil(10.0 / std::sqrt(-e_hi) + 1.0);
    const long m_per_unit = static_cast<long>(std::ceil(1.0 / grid_step));
    const long n = static_cast<long>(2 * L) * m_per_unit - 1;
    if (n > fd_max_dimension) throw Error("fd_oracle: matrix dimension " + std::to_string(n) + " exceeds the cap", 5);
    const double h = 1.0 / m_per_unit;
    const double ih2 = 1.0 / (h * h), c3 = c * c * c;
    std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n > 0 ? n - 1 : 0), -ih2);
    for (long i = 0; i < n; ++i) d[i] = 2 * ih2 + c3 * to_double(chain_potential(Real(-L + h * (i + 1)), wells));
    lapack_int m = 0, nsplit = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> iblock(static_cast<std::size_t>(n)), isplit(static_cast<std::size_t>(n));
    int info = LAPACKE_dstebz('V', 'E', static_cast<lapack_int>(n), c * c * e_lo, c * c * e_hi, 0, 0, 0.0, d.data(),
                              e.data(), &m, &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0) throw NumericError("fd_oracle: dstebz failed with info = " + std::to_string(info));
    OracleResult<Real> out{OracleMethod::finite_difference, {}, {}};
    for (lapack_int i = 0; i < m; ++i) out.values.push_back(Real(w[i] / (c * c)));
    std::sort(out.values.begin(), out.values.end());
    out.residuals.assign(out.values.size(), Real(h * h));
    return out;
}

template <class Real = real_t>
OracleResult<Real> fd_oracle(const Params<Real>& params, int N, double grid_step, Parity parity = Parity::odd_wells,
                             double e_lo = 0, double e_hi = 0) {
    if (e_lo == 0 && e_hi == 0) {
        // Up to the top of the highest band inside [-c, 0], plus a margin of a tenth of its depth.
        int p = max_band_index(params);
        if (p < 0) throw PreconditionError("fd_oracle: c is below c_0");
        auto bands = band_edges(params, p);
        while (bands.size() > 1 && bands.back().truncated) bands.pop_back();
        e_lo = -to_double(params.c);
        e_hi = std::min(-1e-3, 0.9 * to_double(bands.back().e_max));
    }
    return fd_oracle_wells(params, well_count(N, parity), grid_step, e_lo, e_hi);
}

// Distance from each value to the nearest entry of a sorted reference list.
template <class Real = real_t>
std::vector<Real> nearest_distances(const std::vector<Real>& values, const std::vector<Real>& sorted_ref) {
    using std::abs;
    std::vector<Real> out;
    for (const auto& v : values) {
        auto it = std::lower_bound(sorted_ref.begin(), sorted_ref.end(), v);
        Real best = std::numeric_limits<Real>::infinity();
        if (it != sorted_ref.end()) best = abs(*it - v);
        if (it != sorted_ref.begin()) best = std::min(best, Real(abs(*(it - 1) - v)));
        out.push_back(best);
    }
    return out;
}

// 1-to-1 pairing of two sorted lists in order; returns the largest pair distance or +inf if sizes differ.
template <class Real = real_t>
Real paired_distance(const std::vector<Real>& a, const std::vector<Real>& b) {
    using std::abs;
    if (a.size() != b.size()) return std::numeric_limits<Real>::infinity();
    Real worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, Real(abs(a[i] - b[i])));
    return worst;
}

} // namespace airyids
