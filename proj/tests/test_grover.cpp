// Copyright 2026 The qcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qcount/grover.hpp"

namespace qcount {
namespace {

using testing::C;

TEST(Oracle, ParsesRangesAndSorts) {
    const auto o = Oracle::parse(8, "15, 0-3,2");
    EXPECT_EQ(o.count(), 5u);
    EXPECT_EQ(o.marked(), (std::vector<std::uint64_t>{0, 1, 2, 3, 15}));
    EXPECT_EQ(o.to_string(), "0-3,15");
    EXPECT_TRUE(o.is_marked(15));
    EXPECT_FALSE(o.is_marked(16));
    EXPECT_THROW(Oracle::parse(3, "0-8"), std::invalid_argument);
    EXPECT_THROW(Oracle::parse(3, "a"), std::invalid_argument);
    EXPECT_THROW(Oracle::parse(3, "5-2"), std::invalid_argument);
    EXPECT_EQ(Oracle::parse(3, "").count(), 0u);
}

TEST(Oracle, DenseAndSparseMembershipAgree) {
    std::vector<std::uint64_t> few{3, 700, 1023}, many;
    for (std::uint64_t x = 0; x < 1024; x += 3) many.push_back(x);
    for (const auto& set : {few, many}) {
        const Oracle o(10, set);
        for (std::uint64_t x = 0; x < 1024; ++x)
            EXPECT_EQ(o.is_marked(x), std::binary_search(set.begin(), set.end(), x));
    }
}

TEST(GoodBadBasis, DegenerateAndDefinitionCases) {
    const auto none = good_bad_basis(Oracle(2, {}));
    ASSERT_TRUE(none.b);
    EXPECT_FALSE(none.g);
    for (auto a : *none.b) EXPECT_NEAR(std::abs(a - C(0.5)), 0.0, 1e-15);

    const auto all = good_bad_basis(Oracle(2, {0, 1, 2, 3}));
    EXPECT_FALSE(all.b);
    ASSERT_TRUE(all.g);

    const auto one = good_bad_basis(Oracle(2, {3}));
    const double r = 1.0 / std::sqrt(3.0);
    EXPECT_LT(testing::max_diff(*one.b, std::vector<C>{r, r, r, 0.0}), 1e-15);
    EXPECT_LT(testing::max_diff(*one.g, std::vector<C>{0.0, 0.0, 0.0, 1.0}), 1e-15);
}

TEST(GroverAngle, KnownValues) {
    EXPECT_EQ(grover_angle(Oracle(4, {})).theta, 0.0);
    const auto full = grover_angle(Oracle::parse(3, "0-7"));
    EXPECT_NEAR(full.theta, std::numbers::pi, 1e-15);
    EXPECT_NEAR(full.frequency(5), 16.0, 1e-12);
    const auto a = grover_angle(Oracle::parse(8, "0-12"));
    // 2 asin(sqrt(13/256)) evaluated in long double
    const long double ref = 2.0L * std::asin(std::sqrt(13.0L / 256.0L));
    EXPECT_NEAR(a.theta, static_cast<double>(ref), 1e-15);
    EXPECT_NEAR(a.theta, 0.4546, 1e-4);
    EXPECT_NEAR(a.frequency(8), 18.522, 1e-3);
}

TEST(Grover, MatchesDenseMatrix) {
    std::mt19937_64 gen(1);
    for (const char* marked : {"", "0", "3,5,9", "0-15", "1-7,30"}) {
        const auto o = Oracle::parse(5, marked);
        const auto G = testing::dense_grover(32, o.marked());
        for (int rep = 0; rep < 5; ++rep) {
            auto v = testing::random_state(32, gen);
            const auto expect = testing::matvec(G, v);
            apply_grover(o, v);
            EXPECT_LT(testing::max_diff(v, expect), 1e-12) << marked;
        }
    }
}

TEST(Grover, RejectsDimensionMismatch) {
    std::vector<Complex> v(8);
    EXPECT_THROW(apply_grover(Oracle(4, {1}), v), std::invalid_argument);
}

TEST(Grover, NoMarkedItemsFixesUniformState) {
    const Oracle o(4, {});
    auto s = uniform_state(16);
    const auto before = s;
    apply_grover(o, s);
    EXPECT_LT(testing::max_diff(s, before), 1e-15);
}

TEST(Grover, RotatesGroverSpaceByTheta) {
    const Oracle o(4, {2, 5, 11});
    const auto basis = good_bad_basis(o);
    const double th = grover_angle(o).theta;
    std::vector<C> v(16), expect(16);
    for (int i = 0; i < 16; ++i) {
        v[i] = std::cos(th / 2) * (*basis.b)[i] + std::sin(th / 2) * (*basis.g)[i];
        expect[i] = std::cos(1.5 * th) * (*basis.b)[i] + std::sin(1.5 * th) * (*basis.g)[i];
    }
    apply_grover(o, v);
    EXPECT_LT(testing::max_diff(v, expect), 1e-10);
}

TEST(Grover, IsUnitary) {
    std::mt19937_64 gen(8);
    const Oracle o(5, {1, 2, 3, 17});
    const auto G = testing::dense_grover(32, o.marked());
    for (int rep = 0; rep < 50; ++rep) {
        const auto v0 = testing::random_state(32, gen);
        auto v = v0;
        apply_grover(o, v);
        // G is real symmetric up to the diagonal flip; G^dagger v = conj-transpose product
        std::vector<C> back(32, 0.0);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c) back[r] += std::conj(G[c * 32 + r]) * v[c];
        EXPECT_LT(testing::max_diff(back, v0), 1e-10);
    }
}

TEST(Grover, AmplitudeAmplificationLaw) {
    for (int n : {3, 4, 5}) {
        for (std::uint64_t t : {1u, 2u, 3u}) {
            std::vector<std::uint64_t> marked;
            for (std::uint64_t x = 0; x < t; ++x) marked.push_back(x * 2 + 1);
            const Oracle o(n, marked);
            const double th = grover_angle(o).theta;
            auto s = uniform_state(o.size());
            for (int m = 0; m <= 64; ++m) {
                double good = 0.0;
                for (auto x : marked) good += std::norm(s[x]);
                EXPECT_NEAR(good, std::pow(std::sin((m + 0.5) * th), 2), 1e-9);
                apply_grover(o, s);
            }
        }
    }
}

TEST(Grover, ReducedRotationMatchesFullOperator) {
    const Oracle o(6, {0, 9, 33, 40, 41});
    const auto basis = good_bad_basis(o);
    auto full = uniform_state(64);
    auto reduced = grover_space_start(o);
    const auto R = grover_space_rotation(o);
    for (int step = 0; step < 20; ++step) {
        apply_grover(o, full);
        const Complex b = R[0] * reduced[0] + R[1] * reduced[1];
        const Complex g = R[2] * reduced[0] + R[3] * reduced[1];
        reduced = {b, g};
        EXPECT_NEAR(std::abs(detail::inner(*basis.b, full) - reduced[0]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(detail::inner(*basis.g, full) - reduced[1]), 0.0, 1e-12);
    }
}

TEST(SixBasis, BasisElementsAndUniformState) {
    const Oracle o(4, {1, 6, 7});
    const auto basis = good_bad_basis(o);
    const auto d = decompose_six_basis(*basis.b, o);
    EXPECT_NEAR(std::abs(d.u - C(1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(d.v), 0.0, 1e-12);
    EXPECT_FALSE(d.e_b);
    EXPECT_FALSE(d.e_g);

    const double th = grover_angle(o).theta;
    const auto s = decompose_six_basis(uniform_state(16), o);
    EXPECT_NEAR(std::abs(s.u - C(std::cos(th / 2))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.v - C(std::sin(th / 2))), 0.0, 1e-12);
    EXPECT_EQ(s.u_e, C(0.0));
    EXPECT_EQ(s.v_e, C(0.0));
}

TEST(SixBasis, RandomStatesReconstructWithOrthogonality) {
    std::mt19937_64 gen(13);
    const Oracle o(5, {0, 4, 8, 12, 16, 20, 24});
    const auto basis = good_bad_basis(o);
    for (int rep = 0; rep < 50; ++rep) {
        const auto phi = testing::random_state(32, gen);
        const auto d = decompose_six_basis(phi, o);
        EXPECT_NEAR(d.weight(), 1.0, 1e-9);
        EXPECT_LT(testing::max_diff(reconstruct(d, o), phi), 1e-9);
        ASSERT_TRUE(d.e_b && d.e_g);
        EXPECT_LT(std::abs(detail::inner(*basis.b, *d.e_b)), 1e-10);
        EXPECT_LT(std::abs(detail::inner(*basis.g, *d.e_g)), 1e-10);
        for (std::uint64_t x = 0; x < 32; ++x) {
            if (o.is_marked(x)) EXPECT_EQ((*d.e_b)[x], C(0.0)); else EXPECT_EQ((*d.e_g)[x], C(0.0));
        }
    }
}

TEST(SixBasis, RejectsUnnormalizedInput) {
    std::vector<Complex> v(16, 1.0);
    EXPECT_THROW(decompose_six_basis(v, Oracle(4, {1})), std::invalid_argument);
}

TEST(BlockAction, FourByFourMatrixOnCoordinates) {
    std::mt19937_64 gen(17);
    const Oracle o(6, {1, 2, 3, 5, 8, 13, 21, 34, 55, 60, 61});
    const auto basis = good_bad_basis(o);
    const double th = grover_angle(o).theta;
    for (int rep = 0; rep < 100; ++rep) {
        const auto phi = testing::random_state(64, gen);
        EXPECT_LE(verify_block_action(o, phi), 1e-9);

        // Coordinates of G phi in the frame of phi, read with the dense oracle.
        const auto d = decompose_six_basis(phi, o);
        const auto g_phi = testing::matvec(testing::dense_grover(64, o.marked()), phi);
        const C u = detail::inner(*basis.b, g_phi), v = detail::inner(*basis.g, g_phi);
        const C ue = detail::inner(*d.e_b, g_phi), ve = detail::inner(*d.e_g, g_phi);
        EXPECT_NEAR(std::abs(u - (std::cos(th) * d.u - std::sin(th) * d.v)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(v - (std::sin(th) * d.u + std::cos(th) * d.v)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(ue + d.u_e), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(ve - d.v_e), 0.0, 1e-10);
    }
}

TEST(BlockAction, ResidualDirectionsAreEigenvectors) {
    std::mt19937_64 gen(23);
    const Oracle o(5, {2, 3, 19});
    const auto d = decompose_six_basis(testing::random_state(32, gen), o);
    auto eb = *d.e_b, eg = *d.e_g;
    apply_grover(o, eb);
    apply_grover(o, eg);
    for (int i = 0; i < 32; ++i) {
        EXPECT_NEAR(std::abs(eb[i] + (*d.e_b)[i]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(eg[i] - (*d.e_g)[i]), 0.0, 1e-12);
    }
    EXPECT_THROW(verify_block_action(Oracle(3, {}), uniform_state(8)), std::invalid_argument);
}

}  // namespace
}  // namespace qcount
