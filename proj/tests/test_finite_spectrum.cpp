#include "test_support.hpp"

using namespace airyids;
using namespace testing_support;

namespace {

const Params<quad>& c10() {
    static const Params<quad> p = params_c(quad(10));
    return p;
}

const std::vector<SpectralBand<quad>>& bands10() {
    static const auto b = band_edges(c10(), 3);
    return b;
}

} // namespace

TEST(Subdivision, MonotoneWithExactTargets) {
    for (const auto& b : bands10()) {
        auto part = subdivision_points(b, 3, c10());
        ASSERT_EQ(part.points.size(), 9u);
        EXPECT_EQ(part.points.front(), b.y_max);
        EXPECT_EQ(part.points.back(), b.y_min);
        for (std::size_t i = 1; i < part.points.size(); ++i) EXPECT_LT(part.points[i - 1], part.points[i]);
        for (std::size_t i = 1; i + 1 < part.points.size(); ++i) {
            EXPECT_LT(absd((phi_tilde(part.points[i], c10()) - part.targets[i]) * b.width()), 1e-30);
        }
    }
    EXPECT_THROW(subdivision_points(bands10()[0], -1, c10()), PreconditionError);
}

TEST(BandZeros, CountIsTwoNPlusTwo) {
    for (int N : {0, 1, 2}) {
        for (const auto& b : bands10()) {
            auto ev = eigenvalues_in_band(b, N, c10());
            EXPECT_EQ(ev.count, expected_count(N, Parity::odd_wells)) << "N = " << N << " p = " << b.p;
            for (const auto& y : ev.y) EXPECT_TRUE(b.contains_y(y));
            for (std::size_t i = 0; i < ev.y.size(); ++i) EXPECT_EQ(ev.energy[i], -c10().c - ev.y[i]);
        }
    }
    EXPECT_EQ(eigenvalues_in_band(bands10()[1], 2, c10()).count, 6);
}

TEST(BandZeros, AreSignChangesOfPhi) {
    const int N = 2;
    for (const auto& b : bands10()) {
        auto ev = eigenvalues_in_band(b, N, c10());
        for (const auto& y : ev.y) {
            quad d = std::max(quad(b.width() * q("1e-20")), q("1e-31"));
            EXPECT_NE(static_cast<int>(phi_direct(quad(y - d), c10(), N).sign),
                      static_cast<int>(phi_direct(quad(y + d), c10(), N).sign))
                << "p = " << b.p << " y = " << to_string(y);
        }
    }
}

TEST(BandZeros, MatchShootingWithOneExtraWell) {
    for (int N : {1, 2}) {
        for (int p : {0, 2}) {
            const auto& b = bands10()[static_cast<std::size_t>(p)];
            auto ev = eigenvalues_in_band(b, N, c10());
            auto sh = shooting_oracle_wells(c10(), 2 * N + 2, b);
            EXPECT_LT(absd(paired_distance(ev.y, sh.values)), 1e-25) << "N = " << N << " p = " << p;
        }
    }
}

TEST(BandZeros, OddWellShootingCountDiffers) {
    const int N = 2;
    const auto& b = bands10()[0];
    auto sh = shooting_oracle(c10(), N, b);
    EXPECT_EQ(sh.values.size(), static_cast<std::size_t>(2 * N + 1));
}

TEST(EvenWells, CountAndShooting) {
    for (int N : {1, 2}) {
        for (const auto& b : bands10()) {
            auto ev = eigenvalues_in_band(b, N, c10(), Parity::even_wells);
            EXPECT_EQ(ev.count, 2 * N) << "N = " << N << " p = " << b.p;
            if (b.p <= 1) {
                auto sh = shooting_oracle(c10(), N, b, Parity::even_wells);
                EXPECT_LT(absd(paired_distance(ev.y, sh.values)), 1e-25);
            }
        }
    }
}

TEST(FullSpectrum, GapsCertifiedAndTotals) {
    auto rep = full_spectrum(c10(), 2, Parity::odd_wells, 3, 200);
    ASSERT_EQ(rep.per_band.size(), 4u);
    EXPECT_EQ(rep.total(), 24);
    ASSERT_EQ(rep.gaps.size(), 3u);
    for (const auto& g : rep.gaps) {
        EXPECT_EQ(g.nonpositive, 0);
        EXPECT_TRUE(g.empty);
        EXPECT_TRUE(g.factor_signs_constant);
    }
    auto e = rep.energies();
    EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
    EXPECT_GT(e.front(), -c10().c);
    EXPECT_LT(e.back(), 0);
}

TEST(FullSpectrum, EvenWellGapsHaveConstantSign) {
    auto rep = full_spectrum(c10(), 2, Parity::even_wells, 3, 200);
    EXPECT_EQ(rep.total(), 16);
    for (const auto& g : rep.gaps) EXPECT_TRUE(g.empty);
}

TEST(FullSpectrum, Preconditions) {
    auto low = params_c(quad(3));
    EXPECT_NO_THROW(band_edges_unchecked(low, 1));
    EXPECT_THROW(band_edges_unchecked(low, 2), PreconditionError);
    auto b1 = band_edges_unchecked(params_c(quad(2.5)), 1)[1];
    EXPECT_THROW(eigenvalues_in_band(b1, 1, params_c(quad(2.5))), PreconditionError);
    auto all = band_edges_unchecked(c10(), 13);
    EXPECT_THROW(eigenvalues_in_band(all[13], 1, c10()), PreconditionError);
    EXPECT_THROW(full_spectrum(params_c(quad(1)), 1), PreconditionError);
    EXPECT_EQ(full_spectrum(low, 1, Parity::odd_wells, -1, 50).per_band.size(), 2u);
}

TEST(FiniteDifference, EigenvaluesCloseToPhiZeros) {
    const int N = 1;
    auto rep = full_spectrum(c10(), N, Parity::odd_wells, 2, 0);
    auto e = rep.energies();
    auto fd = fd_oracle_wells(c10(), 2 * N + 2, 1e-3, -10.0, to_double(bands10()[2].e_max) + 0.05);
    ASSERT_EQ(fd.values.size(), e.size());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_LT(absd(fd.values[i] - e[i]), 1e-4) << i;
}

TEST(FiniteDifference, WindowValidation) {
    EXPECT_THROW(fd_oracle_wells(c10(), 3, 1e-3, -1.0, 0.5), PreconditionError);
    EXPECT_THROW(fd_oracle_wells(c10(), 3, 0.5, -10.0, -1.0), PreconditionError);
}
