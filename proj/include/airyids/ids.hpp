#pragma once

#include "airy.hpp"
#include "bands.hpp"
#include "errors.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "spectrum.hpp"
#include "transfer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace airyids {

// Bands 0, 1, ... whose centre lies above y = -c - 1/2 and which exist for this c.
template <class Real = real_t>
class BandTable {
public:
    explicit BandTable(const Params<Real>& params) : params_(params) {
        params_.validate();
        for (int p = 0; -band_center_offset<Real>(p) > -params_.c - Real(uv_margin) + Real(0.5); ++p) {
            try {
                bands_.push_back(detail::locate_band(params_, p));
            } catch (const PreconditionError&) {
                break; // band p has not formed yet for this c
            }
        }
        if (bands_.empty()) bands_.push_back(detail::locate_band(params_, 0));
    }

    const Params<Real>& params() const { return params_; }
    const std::vector<SpectralBand<Real>>& bands() const { return bands_; }

    // Index of the band whose energy range [E_min, E_max] contains e, if any.
    std::optional<int> band_of(const Real& e) const {
        for (const auto& b : bands_) {
            if (e >= b.e_min && e <= b.e_max) return b.p;
        }
        return std::nullopt;
    }

    // Smallest p with E <= E_max^p; the table size when E lies above every band that has formed.
    int direct_p(const Real& e) const {
        for (const auto& b : bands_) {
            if (e <= b.e_max) return b.p;
        }
        return static_cast<int>(bands_.size());
    }

private:
    Params<Real> params_;
    std::vector<SpectralBand<Real>> bands_;
};

enum class PhaseBranch { below_Y0, at_Y0, above_Y0 };

inline const char* to_string(PhaseBranch b) {
    switch (b) {
    case PhaseBranch::below_Y0: return "below_Y0";
    case PhaseBranch::at_Y0: return "at_Y0";
    case PhaseBranch::above_Y0: return "above_Y0";
    }
    return "?";
}

template <class Real = real_t>
struct PhaseValue {
    Real e, y, phi;
    PhaseBranch branch = PhaseBranch::below_Y0;
    std::optional<int> band; // empty outside the spectrum, where phi = 0
    Real a = 0, b = 0;
};

// Y_0: the unique zero of g = a inside the band, where phi = pi/2.
template <class Real = real_t>
Real phase_midpoint(const SpectralBand<Real>& band, const Params<Real>& params) {
    const bool even = band.p % 2 == 0;
    auto g = [&](const Real& y) { return transfer_from_uv(uv_sample(y, params)).a; };
    return solve_bracketed(g, band.y_max, band.y_min, Real(even ? -1 : 1), Real(even ? 1 : -1), "Y0");
}

namespace detail {

template <class Real>
void check_energy(const Real& e, const Params<Real>& params, const char* who) {
    if (!(e >= -params.c && e <= 0)) {
        throw PreconditionError(std::string(who) + ": E = " + to_string(e) + " outside [-c, 0]");
    }
}

} // namespace detail

template <class Real = real_t>
PhaseValue<Real> bloch_phase(const Real& e, const BandTable<Real>& table) {
    const auto& params = table.params();
    detail::check_energy(e, params, "bloch_phase");
    PhaseValue<Real> v;
    v.e = e;
    v.y = -params.c - e;
    v.phi = 0;
    v.band = table.band_of(e);
    if (!v.band) return v;
    const auto& band = table.bands()[static_cast<std::size_t>(*v.band)];
    const bool even = band.p % 2 == 0;
    if (e == band.e_max) {
        v.phi = even ? pi_v<Real>() : Real(0);
        v.a = even ? -1 : 1;
        return v;
    }
    if (e == band.e_min) {
        v.phi = even ? Real(0) : pi_v<Real>();
        v.a = even ? 1 : -1;
        v.branch = PhaseBranch::above_Y0;
        return v;
    }
    auto t = transfer_from_uv(uv_sample(v.y, params));
    v.a = t.a;
    v.b = t.b;
    v.phi = band_angle(t);
    // a is increasing in y on even bands and decreasing on odd ones, so the side of Y0 follows from sign(a).
    int s = sgn(t.a);
    if (s == 0) v.branch = PhaseBranch::at_Y0;
    else v.branch = (s < 0) == even ? PhaseBranch::below_Y0 : PhaseBranch::above_Y0;
    return v;
}

template <class Real = real_t>
PhaseValue<Real> bloch_phase(const Real& e, const Params<Real>& params) {
    return bloch_phase(e, BandTable<Real>(params));
}

// Secondary routes for the phase on a band: arccos(a) and the arctangent branch form around Y0.
template <class Real = real_t>
Real phase_arccos(const TransferData<Real>& t) {
    using std::acos;
    Real a = t.a > 1 ? Real(1) : (t.a < -1 ? Real(-1) : t.a);
    return acos(a);
}

template <class Real = real_t>
Real phase_arctan(const TransferData<Real>& t) {
    using std::atan;
    const Real pi = pi_v<Real>();
    if (t.a == 0) return pi / 2;
    return t.a < 0 ? pi + atan(t.b / t.a) : atan(t.b / t.a);
}

template <class Real = real_t>
struct BandIndexReport {
    int floor_formula = 0;
    int direct = 0;
    bool agree() const { return floor_formula == direct; }
};

template <class Real = real_t>
int band_index_floor(const Real& e, const Params<Real>& params) {
    using std::floor;
    using std::sqrt;
    Real s = params.c + e;
    Real v = 4 / (3 * pi_v<Real>()) * s * sqrt(s);
    return static_cast<int>(to_double(Real(floor(v))));
}

template <class Real = real_t>
BandIndexReport<Real> band_index_report(const Real& e, const BandTable<Real>& table) {
    const auto& params = table.params();
    detail::check_energy(e, params, "band_index_p");
    return {band_index_floor(e, params), table.direct_p(e)};
}

template <class Real = real_t>
int band_index_p(const Real& e, const BandTable<Real>& table) {
    auto r = band_index_report(e, table);
    if (!r.agree()) {
        throw IntegrityError("band_index_p: floor formula gives " + std::to_string(r.floor_formula) +
                             " but direct band counting gives " + std::to_string(r.direct) + " at E = " + to_string(e));
    }
    return r.direct;
}

template <class Real = real_t>
int band_index_p(const Real& e, const Params<Real>& params) {
    if (params.c < c_constant<Real>(0)) throw PreconditionError("band_index_p: c is below c_0");
    return band_index_p(e, BandTable<Real>(params));
}

// I(E) = p/2 plus phi/(2 pi) on even bands and 1/2 - phi/(2 pi) on odd bands, with p the direct band count.
template <class Real = real_t>
Real ids_formula(const Real& e, const BandTable<Real>& table) {
    const auto& params = table.params();
    detail::check_energy(e, params, "ids_formula");
    if (params.c < c_constant<Real>(0)) throw PreconditionError("ids_formula: c is below c_0");
    const int p = table.direct_p(e);
    Real ids = Real(p) / 2;
    if (table.band_of(e) == p) {
        Real frac = bloch_phase(e, table).phi / (2 * pi_v<Real>());
        ids += p % 2 == 0 ? frac : Real(0.5) - frac;
    }
    return ids;
}

template <class Real = real_t>
Real ids_formula(const Real& e, const Params<Real>& params) {
    return ids_formula(e, BandTable<Real>(params));
}

template <class Real = real_t>
struct EmpiricalIds {
    Real value = 0;
    int n_below = 0;     // eigenvalues <= E
    int p = 0;           // band count index at E
    int m_in_band = 0;   // eigenvalues <= E inside band p (the m_E of the counting argument)
    std::optional<Real> m_lower_bound; // (2N+1)/pi * (swept phase) - 1/2 when E is in a band
    int n_used = 0;
    bool partial = false;
};

// Eigenvalue lists for bands 0..p of one N, computed once per (N, parity, p) and reused.
template <class Real = real_t>
class SpectrumCache {
public:
    explicit SpectrumCache(const BandTable<Real>& table) : table_(table) {}

    const BandEigenvalues<Real>& band(int p, int N, Parity parity) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(p, N, static_cast<int>(parity));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto ev = eigenvalues_in_band(table_.bands()[static_cast<std::size_t>(p)], N, table_.params(), parity);
        return cache_.emplace(key, std::move(ev)).first->second;
    }

    const BandTable<Real>& table() const { return table_; }

private:
    const BandTable<Real>& table_;
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, BandEigenvalues<Real>> cache_;
};

// Counts eigenvalues of the finite chain with energy <= E and divides by 2(2N+1).
template <class Real = real_t>
EmpiricalIds<Real> ids_empirical_report(const Real& e, SpectrumCache<Real>& cache, int N,
                                        Parity parity = Parity::odd_wells) {
    const auto& table = cache.table();
    const auto& params = table.params();
    detail::check_energy(e, params, "ids_empirical");
    if (N < 0) throw PreconditionError("ids_empirical: N must be >= 0");
    EmpiricalIds<Real> r;
    r.n_used = N;
    r.p = table.direct_p(e);
    const int last = std::min(r.p, static_cast<int>(table.bands().size()) - 1);
    for (int q = 0; q <= last; ++q) {
        const auto& b = table.bands()[static_cast<std::size_t>(q)];
        if (b.e_min > e) break; // band q lies entirely above E
        if (b.truncated || params.c < c_constant<Real>(q)) {
            r.partial = true; // no eigenvalue count is available for this band
            continue;
        }
        const auto& ev = cache.band(q, N, parity);
        int k = static_cast<int>(std::count_if(ev.energy.begin(), ev.energy.end(), [&](const Real& x) { return x <= e; }));
        r.n_below += k;
        if (q == r.p) r.m_in_band = k;
    }
    if (table.band_of(e) == r.p) {
        // Phase swept from the band bottom: phi on even bands, pi - phi on odd ones.
        Real phi = bloch_phase(e, table).phi;
        Real swept = r.p % 2 == 0 ? phi : pi_v<Real>() - phi;
        r.m_lower_bound = Real(2 * N + 1) / pi_v<Real>() * swept - Real(0.5);
    }
    r.value = Real(r.n_below) / (2 * (2 * N + 1));
    return r;
}

template <class Real = real_t>
Real ids_empirical(const Real& e, const Params<Real>& params, int N) {
    BandTable<Real> table(params);
    SpectrumCache<Real> cache(table);
    return ids_empirical_report(e, cache, N).value;
}

template <class Real = real_t>
struct IdsSample {
    Real e;
    int p_of_e = 0;
    bool in_band = false;
    Real phi = 0, ids = 0;
    std::optional<Real> ids_empirical;
    std::optional<int> n_used;
};

// Uniform energy grid on [-c, 0] with `grid` points; empirical values when N is given.
template <class Real = real_t>
std::vector<IdsSample<Real>> ids_curve(const Params<Real>& params, int grid, std::optional<int> N = std::nullopt) {
    if (grid < 2) throw ConfigError("ids_curve: grid must be >= 2");
    BandTable<Real> table(params);
    SpectrumCache<Real> cache(table);
    std::vector<IdsSample<Real>> out(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        IdsSample<Real>& s = out[static_cast<std::size_t>(i)];
        s.e = -params.c + params.c * Real(i) / (grid - 1);
        s.p_of_e = table.direct_p(s.e);
        auto ph = bloch_phase(s.e, table);
        s.in_band = ph.band.has_value();
        s.phi = ph.phi;
        s.ids = ids_formula(s.e, table);
        if (N) {
            s.ids_empirical = ids_empirical_report(s.e, cache, *N).value;
            s.n_used = *N;
        }
    }
    return out;
}

} // namespace airyids
