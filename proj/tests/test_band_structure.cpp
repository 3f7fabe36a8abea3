#include "test_support.hpp"

using namespace airyids;
using namespace testing_support;

namespace {

const Params<quad>& c10() {
    static const Params<quad> p = params_c(quad(10));
    return p;
}

const std::vector<SpectralBand<quad>>& bands10() {
    static const auto b = band_edges(c10(), 4);
    return b;
}

} // namespace

TEST(UvSample, AtEnergyZero) {
    const auto& P = c10();
    auto s = uv_sample(quad(-10), P);
    auto at = canonical_uv(quad(-10));
    EXPECT_LT(rel(s.U, at.v_prime), 1e-28);
    EXPECT_LT(rel(s.V, -at.v), 1e-28);
}

TEST(UvSample, WronskianAndCanonicalRoute) {
    const auto& P = c10();
    for (int i = 0; i <= 400; ++i) {
        quad y = quad(-10) + quad(10) * i / 400;
        auto s = uv_sample(y, P);
        EXPECT_LT(absd(s.wronskian() - 1), 1e-10) << "y = " << to_string(y);
        auto t = uv_sample_canonical(y, P);
        EXPECT_LT(absd(t.wronskian() - 1), 1e-10);
    }
}

TEST(UvSample, DomainChecked) {
    EXPECT_THROW(uv_sample(quad(2), c10()), PreconditionError);
    EXPECT_THROW(uv_sample(quad(-12), c10()), PreconditionError);
}

// Edges for c = 10 from an independent 45-digit root solve.
TEST(BandEdges, ReferenceEdgesC10) {
    const char* ref[4][2] = {
        {"-1.0187929716474712292784784568525", "-1.0187929716474709461221110108752"},
        {"-2.3381074104599349313043359025379", "-2.3381074104595951302467210433014"},
        {"-3.2481975821989571344027112932258", "-3.2481975821601610934877619865299"},
        {"-4.0879494452843518048120896502991", "-4.0879494429365339382279620160999"}};
    const auto& b = bands10();
    for (int p = 0; p < 4; ++p) {
        EXPECT_LT(absd(b[p].y_max - q(ref[p][0])), 1e-28) << "p = " << p;
        EXPECT_LT(absd(b[p].y_min - q(ref[p][1])), 1e-28) << "p = " << p;
    }
}

TEST(BandEdges, EdgeFunctionVanishesAndHalfTraceIsUnit) {
    const auto& P = c10();
    for (const auto& b : bands10()) {
        auto lo = uv_sample(b.y_max, P), hi = uv_sample(b.y_min, P);
        EXPECT_LT(absd(pick(lo, edge_function(b.p, false))), 1e-25);
        EXPECT_LT(absd(pick(hi, edge_function(b.p, true))), 1e-25);
        EXPECT_LT(absd(abs(transfer_from_uv(lo).a) - 1), 1e-8);
        EXPECT_LT(absd(abs(transfer_from_uv(hi).a) - 1), 1e-8);
        EXPECT_LT(b.y_max, b.y_min);
        EXPECT_LT(b.e_min, b.e_max);
        EXPECT_EQ(b.e_min, -P.c - b.y_min);
        EXPECT_FALSE(b.truncated);
    }
}

TEST(BandEdges, AlternateWithGaps) {
    const auto& b = bands10();
    for (std::size_t p = 0; p + 1 < b.size(); ++p) EXPECT_LT(b[p + 1].y_min, b[p].y_max);
}

TEST(BandEdges, CentreNearAiryZero) {
    const auto& b = bands10();
    for (const auto& band : b) {
        quad mid = (band.y_max + band.y_min) / 2;
        EXPECT_LT(absd(mid + band.center_offset), 10 * absd(band.width()) + 1e-25) << "p = " << band.p;
    }
}

TEST(BandEdges, AgreeWithMonodromyOracle) {
    auto m = monodromy_oracle(c10(), 3);
    const auto& b = bands10();
    ASSERT_EQ(m.values.size(), 8u);
    for (int p = 0; p <= 3; ++p) {
        // Oracle values are sorted in y: band 3 first.
        EXPECT_LT(absd(m.values[2 * (3 - p)] - b[p].y_max), 1e-7);
        EXPECT_LT(absd(m.values[2 * (3 - p) + 1] - b[p].y_min), 1e-7);
    }
}

TEST(BandEdges, PreconditionBelowCp) {
    auto P = params_c(quad(3));
    EXPECT_NO_THROW(band_edges(P, 1));
    try {
        band_edges(P, 2);
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("3.534048578693"), std::string::npos) << e.what();
    }
    EXPECT_EQ(max_band_index(P), 1);
    EXPECT_EQ(max_band_index(c10()), 12);
}

TEST(SignTable, MatchesEdgeTableOnBandsAndGaps) {
    const auto& P = c10();
    const auto& b = bands10();
    std::vector<std::pair<quad, quad>> intervals;
    for (std::size_t p = 0; p < b.size(); ++p) {
        intervals.push_back({b[p].y_max, b[p].y_min});
        if (p + 1 < b.size()) intervals.push_back({b[p + 1].y_min, b[p].y_max});
    }
    intervals.push_back({b[0].y_min, quad(0)});
    int mismatches = 0;
    for (const auto& [lo, hi] : intervals) {
        for (int i = 1; i < 200; ++i) {
            quad y = lo + (hi - lo) * i / 200;
            if (expected_signs(y, b) != signs_of(uv_sample(y, P))) ++mismatches;
        }
    }
    EXPECT_EQ(mismatches, 0);
}

// Central differences of y -> U(y+c) etc. against the derivative identities, relative to the local scale.
TEST(Derivatives, IdentitiesHold) {
    const auto& P = c10();
    const quad h = q("1e-5");
    double worst = 0;
    for (int i = 1; i < 1000; ++i) {
        quad y = quad(-10) + quad(10) * i / 1000;
        auto s = uv_sample(y, P), up = uv_sample(quad(y + h), P), dn = uv_sample(quad(y - h), P);
        auto rhs = uv_derivative_identities(s, P);
        quad fd[4] = {(up.U - dn.U) / (2 * h), (up.U_prime - dn.U_prime) / (2 * h), (up.V - dn.V) / (2 * h),
                      (up.V_prime - dn.V_prime) / (2 * h)};
        quad scale = abs(s.U) + abs(s.U_prime) + abs(s.V) + abs(s.V_prime);
        for (int k = 0; k < 4; ++k) worst = std::max(worst, absd((fd[k] - rhs[k]) / scale));
    }
    EXPECT_LT(worst, 1e-7);
}

TEST(Rescale, Examples) {
    PhysicalParams<quad> ph{quad(1), quad(1), quad(2)};
    auto P = Params<quad>::from_physical(ph);
    EXPECT_LT(rel(rescale_map(quad(-2), P, RescaleDirection::physical_to_rescaled), -P.c), 1e-30);
    EXPECT_EQ(rescale_map(quad(0), c10(), RescaleDirection::energy_to_y), quad(-10));
    Params<quad> Q;
    Q.c = q("1.6");
    Q.physical = PhysicalParams<quad>{quad(1), quad(1), quad(2)};
    EXPECT_LT(absd(rescale_map(quad(-1), Q, RescaleDirection::physical_to_rescaled) + q("0.8")), 1e-30);
    EXPECT_THROW(rescale_map(quad(-1), c10(), RescaleDirection::physical_to_rescaled), ConfigError);
    EXPECT_THROW(Q.validate(), ConfigError); // 1.6 is not (2 m L0^2 V0)^(1/3)
}

TEST(Params, Validation) {
    EXPECT_THROW(params_c(quad(-1)).validate(), ConfigError);
    EXPECT_THROW(Params<quad>::from_physical({quad(1), quad(0), quad(1)}), ConfigError);
    EXPECT_LT(rel(Params<quad>::from_physical({quad(4), quad(1), quad(1)}).c, quad(2)), 1e-30);
}

TEST(BandEdges, TruncatedFlag) {
    auto all = band_edges_unchecked(c10(), 13);
    EXPECT_TRUE(all[13].truncated);
    EXPECT_FALSE(all[12].truncated);
}
