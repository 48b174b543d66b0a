// Copyright 2026 The edp-search Authors
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

#include "edp/sim.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "brute.hpp"
#include "fixtures.hpp"

using namespace edp;

namespace {

/// Brute-force lookup of (syndrome, g) for every t in Z_2^8 under the
/// reference protocol, by decomposing t over G, H and C element sets.
struct ReferenceTables {
    std::vector<int> syndrome_zero;  // 1 when both syndromes vanish
    std::vector<int> g;              // index of (l|m) in Z_2^4, -1 off C^perp

    ReferenceTables() : syndrome_zero(256), g(256, -1) {
        fixtures::Reference ref;
        EncodingClass cls = ref.cls();
        auto cset = brute::span_set({ref.xi1.coords(), ref.xi2.coords()}, 2, 8);
        for (std::uint64_t idx = 0; idx < 256; ++idx) {
            auto t = brute::decode(idx, 2, 8);
            syndrome_zero[idx] = brute::form(ref.xi1.coords(), t, 2) == 0 && brute::form(ref.xi2.coords(), t, 2) == 0;
            if (!syndrome_zero[idx]) continue;
            for (std::uint64_t w = 0; w < 16; ++w) {
                auto lm = brute::decode(w, 2, 4);
                brute::Vec r = t;
                for (int i = 0; i < 2; ++i) {
                    r = brute::add(r, cls.g[i].coords(), 2, -lm[i]);
                    r = brute::add(r, cls.h[i].coords(), 2, -lm[2 + i]);
                }
                if (cset.count(brute::encode(r, 2))) g[idx] = static_cast<int>(w);
            }
        }
    }
};

double direct_entropy(const std::vector<double> &probs) {
    double h = 0;
    for (double x : probs)
        if (x > 0) h += x * std::log2(1.0 / x);
    return h;
}

}  // namespace

TEST(werner_input, examples) {
    BellDiagonal one = werner_input(1.0, 3, 2);
    EXPECT_EQ(one.probs[0], 1.0);
    EXPECT_DOUBLE_EQ(one.total(), 1.0);
    BellDiagonal quarter = werner_input(0.25, 1, 2);
    for (double x : quarter.probs) EXPECT_DOUBLE_EQ(x, 0.25);
    EXPECT_NEAR(werner_input(0.9, 4, 2).probs[0], 0.6561, 1e-15);
    EXPECT_TRUE(werner_input(0.37, 2, 3).is_normalized());
    EXPECT_THROW(werner_input(1.5, 1, 2), std::invalid_argument);
    EXPECT_THROW(werner_input(-0.1, 1, 2), std::invalid_argument);
}

TEST(run_protocol, point_mass_at_zero) {
    fixtures::Reference ref;
    auto res = run_protocol(BellDiagonal::point_mass(2, 4, GFVector(2, 4)), ref.spec());
    ASSERT_EQ(res.size(), 1u);
    EXPECT_EQ(res[0].accept_prob, 1.0);
    EXPECT_TRUE(res[0].defined);
    EXPECT_EQ(res[0].p_out.probs[0], 1.0);
}

TEST(run_protocol, werner_accept_probability_and_output) {
    fixtures::Reference ref;
    ReferenceTables tables;
    for (double f : {0.55, 0.7, 0.85, 0.95}) {
        BellDiagonal in = werner_input(f, 4, 2);
        double accept = 0;
        std::vector<double> out(16, 0.0);
        for (std::uint64_t idx = 0; idx < 256; ++idx) {
            if (!tables.syndrome_zero[idx]) continue;
            accept += in.probs[idx];
            out[tables.g[idx]] += in.probs[idx];
        }
        auto res = run_protocol(in, ref.spec());
        EXPECT_NEAR(res[0].accept_prob, accept, 1e-15);
        for (int w = 0; w < 16; ++w) EXPECT_NEAR(res[0].p_out.probs[w], out[w] / accept, 1e-14);
    }
}

TEST(run_protocol, branches_cover_all_syndromes) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        int p = trial % 2 ? 3 : 2;
        int n = p == 2 ? 4 : 3;
        int k = p == 2 ? 2 : 1;
        ProtocolSpec spec = brute::random_spec(p, n, k, rng);
        std::vector<Syndrome> all;
        for (std::uint64_t i = 0; i < ipow(p, n - k); ++i) all.push_back(syndrome_from_index(i, p, n - k));
        spec.accept = all;
        auto res = run_protocol(brute::random_distribution(p, n, rng), spec);
        double total = 0;
        for (const auto &br : res) {
            total += br.accept_prob;
            if (br.defined) {
                EXPECT_TRUE(br.p_out.is_normalized());
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(run_protocol, zero_acceptance_branch_is_undefined) {
    fixtures::Reference ref;
    ProtocolSpec spec = ref.spec();
    spec.accept = {{1, 0}};
    auto res = run_protocol(BellDiagonal::point_mass(2, 4, GFVector(2, 4)), spec);
    EXPECT_EQ(res[0].accept_prob, 0.0);
    EXPECT_FALSE(res[0].defined);
}

TEST(group_product, block_order) {
    std::mt19937_64 rng(1);
    BellDiagonal group = brute::random_distribution(2, 2, rng);
    BellDiagonal joint = group_product(group, 2);
    for (std::uint64_t idx = 0; idx < 256; ++idx) {
        auto t = brute::decode(idx, 2, 8);  // a1..a4 | b1..b4
        brute::Vec g0 = {t[0], t[1], t[4], t[5]}, g1 = {t[2], t[3], t[6], t[7]};
        EXPECT_DOUBLE_EQ(joint.probs[idx], group.probs[brute::encode(g0, 2)] * group.probs[brute::encode(g1, 2)]);
    }
}

TEST(iterate_protocol, zero_and_one_round) {
    fixtures::Reference ref;
    BellDiagonal group = werner_input(0.9, 2, 2);
    IterationResult r0 = iterate_protocol(group, ref.spec(), 0);
    EXPECT_TRUE(r0.accept_probs.empty());
    EXPECT_EQ(r0.final.probs, group.probs);

    IterationResult r1 = iterate_protocol(group, ref.spec(), 1);
    auto direct = run_protocol(werner_input(0.9, 4, 2), ref.spec());
    ASSERT_EQ(r1.accept_probs.size(), 1u);
    EXPECT_NEAR(r1.accept_probs[0], direct[0].accept_prob, 1e-15);
    for (std::size_t w = 0; w < 16; ++w) EXPECT_NEAR(r1.final.probs[w], direct[0].p_out.probs[w], 1e-15);
}

TEST(iterate_protocol, second_round_matches_monte_carlo) {
    fixtures::Reference ref;
    ReferenceTables tables;
    const double f = 0.8;
    IterationResult exact = iterate_protocol(werner_input(f, 2, 2), ref.spec(), 2);
    ASSERT_EQ(exact.accept_probs.size(), 2u);

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto sample_pair = [&]() -> int {
        if (u(rng) < f) return 0;
        return 1 + static_cast<int>(rng() % 3);  // label a*2 + b
    };
    // Pair labels in block order -> index of t in Z_2^8.
    auto assemble = [](const int labels[4]) {
        brute::Vec t(8);
        for (int i = 0; i < 4; ++i) {
            t[i] = labels[i] >> 1;
            t[4 + i] = labels[i] & 1;
        }
        return brute::encode(t, 2);
    };
    auto round_one = [&]() -> int {
        for (;;) {
            int labels[4];
            for (int &l : labels) l = sample_pair();
            auto idx = assemble(labels);
            if (tables.syndrome_zero[idx]) return tables.g[idx];
        }
    };
    const long samples = 10'000'000;
    long accepted = 0;
    for (long s = 0; s < samples; ++s) {
        int outs[2] = {round_one(), round_one()};
        int labels[4];
        for (int grp = 0; grp < 2; ++grp) {
            auto w = brute::decode(outs[grp], 2, 4);  // l1 l2 | m1 m2
            for (int j = 0; j < 2; ++j) labels[2 * grp + j] = w[j] * 2 + w[2 + j];
        }
        accepted += tables.syndrome_zero[assemble(labels)];
    }
    const double q = exact.accept_probs[1];
    const double sigma = std::sqrt(q * (1 - q) / samples);
    EXPECT_NEAR(static_cast<double>(accepted) / samples, q, 3 * sigma);
}

TEST(hashing_yield, extremes_and_positive_case) {
    EXPECT_DOUBLE_EQ(hashing_yield(BellDiagonal::point_mass(2, 2, GFVector(2, 2))), 2.0);
    EXPECT_NEAR(hashing_yield(BellDiagonal::uniform(2, 2)), 0.0, 1e-12);
    fixtures::Reference ref;
    IterationResult r1 = iterate_protocol(werner_input(0.85, 2, 2), ref.spec(), 1);
    double h = hashing_yield(r1.final);
    EXPECT_GT(h, 0.0);
    EXPECT_NEAR(h, 2.0 - direct_entropy(r1.final.probs), 1e-12);
}

TEST(yield_curve, endpoints) {
    fixtures::Reference ref;
    auto pts = yield_curve(ref.spec(), {1.0, 0.25}, 3);
    ASSERT_EQ(pts.size(), 8u);
    EXPECT_EQ(pts[0].rounds, 0);
    EXPECT_DOUBLE_EQ(pts[0].yield, 1.0);
    for (int r = 4; r < 8; ++r) EXPECT_NEAR(pts[r].yield, 0.0, 1e-12);
    auto best = best_per_fidelity(pts);
    ASSERT_EQ(best.size(), 2u);
    EXPECT_EQ(best[0].rounds, 0);
    EXPECT_DOUBLE_EQ(best[0].yield, 1.0);
}

TEST(yield_curve, matches_formula_per_round) {
    fixtures::Reference ref;
    auto pts = yield_curve(ref.spec(), {0.8}, 2);
    IterationResult two = iterate_protocol(werner_input(0.8, 2, 2), ref.spec(), 2);
    const auto &pt = pts[2];
    ASSERT_EQ(pt.success_probs.size(), 2u);
    EXPECT_NEAR(pt.entropy_bits, direct_entropy(two.final.probs), 1e-12);
    double expected = 0.25 * two.accept_probs[0] * two.accept_probs[1] * (2.0 - pt.entropy_bits) / 2.0;
    EXPECT_NEAR(pt.yield, expected, 1e-15);
    // r = 0 is hashing on the raw pairs.
    EXPECT_NEAR(pts[0].yield, std::max(0.0, 2.0 - direct_entropy(werner_input(0.8, 2, 2).probs)) / 2.0, 1e-15);
    auto high = yield_curve(ref.spec(), {0.95}, 0);
    EXPECT_NEAR(high[0].yield, (2.0 - direct_entropy(werner_input(0.95, 2, 2).probs)) / 2.0, 1e-15);
}

TEST(yield_curve, one_round_output_fidelity_exceeds_input_above_0_6) {
    fixtures::Reference ref;
    for (int i = 61; i < 100; ++i) {
        const double f = i / 100.0;
        IterationResult r1 = iterate_protocol(werner_input(f, 2, 2), ref.spec(), 1);
        EXPECT_GT(r1.final.probs[0], f) << "F=" << f;
    }
}

TEST(yield_curve, one_round_group_fidelity_exceeds_input_group_fidelity) {
    fixtures::Reference ref;
    for (int i = 51; i < 100; ++i) {
        const double f = i / 100.0;
        IterationResult r1 = iterate_protocol(werner_input(f, 2, 2), ref.spec(), 1);
        EXPECT_GT(r1.final.probs[0], f * f) << "F=" << f;
    }
}

TEST(fidelity_grid, inclusive_and_clean) {
    auto g = fidelity_grid(0.6, 1.0, 0.05);
    ASSERT_EQ(g.size(), 9u);
    EXPECT_EQ(g.front(), 0.6);
    EXPECT_EQ(g[3], 0.75);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_THROW(fidelity_grid(0.6, 1.0, 0.0), std::invalid_argument);
}

TEST(write_yield_csv, format) {
    YieldPoint a;
    a.fidelity = 0.85;
    a.rounds = 1;
    a.success_probs = {0.5};
    a.entropy_bits = 0.25;
    a.yield = 0.3125;
    std::ostringstream out;
    write_yield_csv(out, {a});
    EXPECT_EQ(out.str(), "F,rounds,accept_prob_product,entropy_bits,yield\n0.85,1,0.5,0.25,0.3125\n");
}
