#pragma once

#include "bands.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "transfer.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace airyids {

// phi~(y) = Arg(a + ib)(y + c) on a band, with exact edge values.
template <class Real = real_t>
Real phi_tilde(const Real& y, const Params<Real>& params) {
    return band_angle(transfer_from_uv(uv_sample(y, params)));
}

template <class Real = real_t>
struct BandPartition {
    SpectralBand<Real> band;
    std::vector<Real> points;  // band edges and the points phi~ = (2k+1)pi/(2(2N+1)), increasing in y
    std::vector<Real> targets; // phi~ at each point
};

namespace detail {

// Solves phi~(y) = target on the band; phi~ runs from pi to 0 on even bands and from 0 to pi on odd ones.
template <class Real>
Real invert_phi_tilde(const SpectralBand<Real>& b, const Params<Real>& params, const Real& target) {
    const Real pi = pi_v<Real>();
    const bool even = b.p % 2 == 0;
    auto f = [&](const Real& y) { return phi_tilde(y, params) - target; };
    Real flo = (even ? pi : Real(0)) - target;
    Real fhi = (even ? Real(0) : pi) - target;
    return solve_bracketed(f, b.y_max, b.y_min, flo, fhi, "phi~ inverse");
}

template <class Real>
void check_monotone(const SpectralBand<Real>& b, const std::vector<Real>& ys, const char* what) {
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (!(ys[i - 1] < ys[i])) {
            throw NumericError(std::string(what) + ": phi~ is not monotone on band " + std::to_string(b.p));
        }
    }
}

} // namespace detail

template <class Real = real_t>
BandPartition<Real> subdivision_points(const SpectralBand<Real>& band, int N, const Params<Real>& params) {
    if (N < 0) throw PreconditionError("subdivision_points: N must be >= 0");
    const Real pi = pi_v<Real>();
    const int M = 2 * N + 1;
    const bool even = band.p % 2 == 0;
    BandPartition<Real> part;
    part.band = band;
    std::vector<Real> targets;
    // In increasing y: phi~ decreases on even bands, increases on odd ones.
    for (int i = 0; i < M; ++i) {
        int k = even ? M - 1 - i : i;
        targets.push_back(Real(2 * k + 1) * pi / (2 * M));
    }
    std::vector<Real> ys(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) { ys[i] = detail::invert_phi_tilde(band, params, targets[i]); });
    detail::check_monotone(band, ys, "subdivision_points");
    part.points.push_back(band.y_max);
    part.targets.push_back(even ? pi : Real(0));
    for (std::size_t i = 0; i < ys.size(); ++i) {
        part.points.push_back(ys[i]);
        part.targets.push_back(targets[i]);
    }
    part.points.push_back(band.y_min);
    part.targets.push_back(even ? Real(0) : pi);
    return part;
}

template <class Real = real_t>
struct BandEigenvalues {
    int p = 0;
    std::vector<Real> y;      // increasing
    std::vector<Real> energy; // -c - y
    int count = 0;
    bool truncated = false;
};

template <class Real = real_t>
struct GapReport {
    int p_below = 0; // gap between band p_below and band p_below + 1
    bool empty = true;
    int samples = 0;
    int nonpositive = 0;
    bool factor_signs_constant = true;
};

template <class Real = real_t>
struct EigenvalueReport {
    Real c;
    int n_half = 0;
    Parity parity = Parity::odd_wells;
    std::vector<BandEigenvalues<Real>> per_band;
    std::vector<GapReport<Real>> gaps;
    std::vector<Real> oracle_deltas;

    int total() const {
        int n = 0;
        for (const auto& b : per_band) n += b.count;
        return n;
    }
    // Eigenvalues sorted by energy.
    std::vector<Real> energies() const {
        std::vector<Real> out;
        for (const auto& b : per_band) out.insert(out.end(), b.energy.begin(), b.energy.end());
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline int expected_count(int N, Parity parity) { return parity == Parity::odd_wells ? 2 * N + 2 : 2 * N; }

namespace detail {

struct Cut {
    int sign; // sign of Phi at the point, 0 if unknown
    std::string label;
};

template <class Real>
std::string trace_of(const std::vector<Real>& ys, const std::vector<Cut>& cuts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        os << cuts[i].label << " y=" << to_string(ys[i], 25) << " sign=" << cuts[i].sign << "\n";
    }
    return os.str();
}

// Zeros of Phi on one band for odd well counts, following the cut points of the counting argument.
template <class Real>
std::vector<Real> odd_band_zeros(const SpectralBand<Real>& band, int N, const Params<Real>& params) {
    using std::atan;
    const Real pi = pi_v<Real>();
    const int M = 2 * N + 1;
    const bool even = band.p % 2 == 0;
    const BandPartition<Real> part = subdivision_points(band, N, params);

    std::vector<Real> ys;
    std::vector<Cut> cuts;
    for (std::size_t i = 1; i + 1 < part.points.size(); ++i) {
        ys.push_back(part.points[i]);
        cuts.push_back({0, "pole"});
    }
    std::vector<Real> tan_targets;
    for (int m = 1; m < M; ++m) tan_targets.push_back(Real(m) * pi / M);
    std::vector<Real> tan_points(tan_targets.size());
    parallel_for(tan_targets.size(),
                 [&](std::size_t i) { tan_points[i] = invert_phi_tilde(band, params, tan_targets[i]); });
    for (const auto& y : tan_points) {
        ys.push_back(y);
        cuts.push_back({0, "tan0"});
    }
    // k (even bands) or k~ (odd bands) through atan: -pi/2 -> pi/2 on even bands, reversed on odd ones.
    auto kappa = [&](const Real& y) {
        auto ch = make_chain(y, params, N, Parity::odd_wells);
        auto bp = band_parts(ch, params.c);
        return atan(bp.num / bp.den);
    };
    for (int s : {-1, 1}) {
        Real target = s * pi / 4;
        Real flo = (even ? -pi / 2 : pi / 2) - target, fhi = (even ? pi / 2 : -pi / 2) - target;
        Real y = solve_bracketed([&](const Real& t) { return kappa(t) - target; }, band.y_max, band.y_min, flo, fhi,
                                 "k inverse");
        ys.push_back(y);
        cuts.push_back({0, s < 0 ? "k=-1" : "k=+1"});
    }
    std::vector<std::size_t> order(ys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return ys[i] < ys[j]; });
    std::vector<Real> sy{band.y_max};
    std::vector<Cut> sc{{1, "Y_max"}};
    for (auto i : order) {
        if (ys[i] <= sy.back()) continue; // coincident cut points
        sy.push_back(ys[i]);
        sc.push_back(cuts[i]);
    }
    if (band.y_min > sy.back()) {
        sy.push_back(band.y_min);
        sc.push_back({1, "Y_min"});
    } else {
        sc.back() = {1, "Y_min"};
        sy.back() = band.y_min;
    }
    auto G = [&](const Real& y) { return band_reduced_phi(y, params, N); };
    std::vector<Real> gv(sy.size(), Real(0));
    parallel_for(sy.size() - 2, [&](std::size_t i) { gv[i + 1] = G(sy[i + 1]); });
    for (std::size_t i = 1; i + 1 < sy.size(); ++i) sc[i].sign = sgn(gv[i]);
    gv.front() = 1;
    gv.back() = 1;

    std::vector<Real> zeros;
    for (std::size_t i = 0; i + 1 < sy.size(); ++i) {
        if (sc[i].sign == 0) zeros.push_back(sy[i]);
        if (sc[i].sign * sc[i + 1].sign < 0) {
            zeros.push_back(solve_bracketed(G, sy[i], sy[i + 1], gv[i], gv[i + 1], "Phi zero"));
        }
    }
    if (static_cast<int>(zeros.size()) != 2 * N + 2) {
        throw IntegrityError("band " + std::to_string(band.p) + ": found " + std::to_string(zeros.size()) +
                                 " zeros of Phi, expected " + std::to_string(2 * N + 2),
                             trace_of(sy, sc));
    }
    return zeros;
}

// Pole-free multiple of Phi on a band for the even-wells chain (sin(phi) U_n form).
template <class Real>
Real even_chain_reduced(const Real& y, const Params<Real>& params, int N) {
    using std::sin;
    auto ch = make_chain(y, params, N, Parity::even_wells);
    const Real lw = ch.l1 * ch.w1 + ch.l2 * ch.w2;
    const Real lTw = ch.l1 * (ch.a * ch.w1 + ch.t12 * ch.w2) + ch.l2 * (ch.t21 * ch.w1 + ch.a * ch.w2);
    const Real th = band_angle(transfer_from_uv(ch.uv));
    return sin(ch.M * th) * lTw - sin((ch.M - 1) * th) * lw;
}

template <class Real>
std::vector<Real> even_band_zeros(const SpectralBand<Real>& band, int N, const Params<Real>& params) {
    const Real pi = pi_v<Real>();
    const int M = 2 * N;
    const int steps = 8 * M;
    const bool even = band.p % 2 == 0;
    std::vector<Real> sy(static_cast<std::size_t>(steps) + 1);
    sy.front() = band.y_max;
    sy.back() = band.y_min;
    parallel_for(static_cast<std::size_t>(steps - 1), [&](std::size_t i) {
        Real frac = Real(static_cast<int>(i) + 1) / steps;
        sy[i + 1] = invert_phi_tilde(band, params, even ? pi * (1 - frac) : pi * frac);
    });
    check_monotone(band, sy, "even_band_zeros");
    std::vector<Real> gv(sy.size());
    parallel_for(sy.size(), [&](std::size_t i) {
        gv[i] = (i == 0 || i + 1 == sy.size()) ? Real(static_cast<int>(phi_direct(sy[i], params, N, Parity::even_wells).sign))
                                               : even_chain_reduced(sy[i], params, N);
    });
    auto G = [&](const Real& y) { return even_chain_reduced(y, params, N); };
    std::vector<Real> zeros;
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i < sy.size(); ++i) cuts.push_back({sgn(gv[i]), "grid"});
    for (std::size_t i = 0; i + 1 < sy.size(); ++i) {
        if (i > 0 && gv[i] == 0) zeros.push_back(sy[i]);
        if (sgn(gv[i]) * sgn(gv[i + 1]) < 0) {
            Real lo = i == 0 ? sy[i] : sy[i];
            Real flo = i == 0 ? G(sy[0]) : gv[i];
            Real fhi = i + 2 == sy.size() ? G(sy[i + 1]) : gv[i + 1];
            if (sgn(flo) * sgn(fhi) >= 0) {
                // Edge value of the reduced form vanishes with sin(phi); fall back to the sign route.
                int slo = sgn(gv[i]);
                zeros.push_back(bisect_sign(
                    [&](const Real& y) { return static_cast<int>(phi_direct(y, params, N, Parity::even_wells).sign); },
                    lo, sy[i + 1], slo, "Phi zero"));
            } else {
                zeros.push_back(solve_bracketed(G, lo, sy[i + 1], flo, fhi, "Phi zero"));
            }
        }
    }
    if (static_cast<int>(zeros.size()) != M) {
        throw IntegrityError("band " + std::to_string(band.p) + ": found " + std::to_string(zeros.size()) +
                                 " zeros of Phi (even wells), expected " + std::to_string(M),
                             trace_of(sy, cuts));
    }
    return zeros;
}

} // namespace detail

template <class Real = real_t>
BandEigenvalues<Real> eigenvalues_in_band(const SpectralBand<Real>& band, int N, const Params<Real>& params,
                                          Parity parity = Parity::odd_wells) {
    if (band.truncated) {
        throw PreconditionError("eigenvalues_in_band: band " + std::to_string(band.p) + " is not inside [-c, 0]");
    }
    Real cp = c_constant<Real>(band.p);
    if (params.c < cp) {
        throw PreconditionError("eigenvalues_in_band: c is below c_" + std::to_string(band.p) + " = " + to_string(cp));
    }
    BandEigenvalues<Real> out;
    out.p = band.p;
    out.y = parity == Parity::odd_wells ? detail::odd_band_zeros(band, N, params)
                                        : detail::even_band_zeros(band, N, params);
    std::sort(out.y.begin(), out.y.end());
    for (const auto& y : out.y) out.energy.push_back(-params.c - y);
    out.count = static_cast<int>(out.y.size());
    return out;
}

// Sign-constancy certification of Phi on the open gap between band lower.p and band upper.p.
template <class Real = real_t>
GapReport<Real> certify_gap(const SpectralBand<Real>& lower, const SpectralBand<Real>& upper, int N,
                            const Params<Real>& params, Parity parity, int samples = 500) {
    // In y the gap is (Y_min of the higher band, Y_max of the lower band).
    const Real lo = upper.y_min, hi = lower.y_max;
    GapReport<Real> g;
    g.p_below = lower.p;
    g.samples = samples;
    std::vector<int> phi_sign(static_cast<std::size_t>(samples));
    std::vector<std::array<int, 2>> fac(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        Real y = lo + (hi - lo) * (Real(static_cast<int>(i)) + Real(0.5)) / samples;
        phi_sign[i] = static_cast<int>(phi_eval(y, params, N, parity).sign);
        auto f = gap_factors(y, params);
        fac[i] = {sgn(f[0]), sgn(f[1])};
    });
    for (std::size_t i = 0; i < phi_sign.size(); ++i) {
        if (phi_sign[i] <= 0) ++g.nonpositive;
        if (fac[i] != fac[0]) g.factor_signs_constant = false;
        if (phi_sign[i] != phi_sign[0] || phi_sign[i] == 0) g.empty = false;
    }
    return g;
}

// Bands 0..p_max (default: every band with c >= c_p that lies inside [-c, 0]).
template <class Real = real_t>
EigenvalueReport<Real> full_spectrum(const Params<Real>& params, int N, Parity parity = Parity::odd_wells,
                                     int p_max = -1, int gap_samples = 500) {
    params.validate();
    if (p_max < 0) p_max = max_band_index(params);
    if (p_max < 0) throw PreconditionError("full_spectrum: c is below c_0 = " + to_string(c_constant<Real>(0)));
    auto bands = band_edges(params, p_max);
    while (!bands.empty() && bands.back().truncated) bands.pop_back();
    EigenvalueReport<Real> rep;
    rep.c = params.c;
    rep.n_half = N;
    rep.parity = parity;
    rep.per_band.resize(bands.size());
    for (std::size_t i = 0; i < bands.size(); ++i) rep.per_band[i] = eigenvalues_in_band(bands[i], N, params, parity);
    for (std::size_t i = 0; i + 1 < bands.size() && gap_samples > 0; ++i) {
        GapReport<Real> g = certify_gap(bands[i], bands[i + 1], N, params, parity, gap_samples);
        bool ok = parity == Parity::odd_wells ? g.nonpositive == 0 : g.empty;
        if (!ok) {
            throw IntegrityError("gap above band " + std::to_string(bands[i].p) + ": Phi changes sign or is nonpositive (" +
                                 std::to_string(g.nonpositive) + " of " + std::to_string(g.samples) + " samples)");
        }
        rep.gaps.push_back(g);
    }
    return rep;
}

} // namespace airyids
