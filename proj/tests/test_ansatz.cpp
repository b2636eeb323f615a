// Copyright 2026 The permzne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "permzne/ansatz.hpp"

using namespace permzne;

namespace {

// Direct count over the gate list: gates on the pair, gates touching
// exactly one of its qubits, gates touching neither.
struct BruteCounts {
    int same = 0, one = 0, none = 0;
};

BruteCounts brute_counts(const Circuit &c, const QubitPair &p) {
    BruteCounts b;
    for (const auto &s : c.slots()) {
        if (s.pair_index < 0) continue;
        const QubitPair g(s.targets[0], s.targets[1]);
        if (g == p)
            ++b.same;
        else if (g.touches(p.first) || g.touches(p.second))
            ++b.one;
        else
            ++b.none;
    }
    return b;
}

} // namespace

TEST(Hea, SixQubitRingDepthFour) {
    const auto c = build_hea(6, 4, Topology::Ring);
    EXPECT_EQ(c.pairs().size(), 6u);
    EXPECT_EQ(c.num_two_qubit_gates(), 24u);
    EXPECT_EQ(c.num_parameters(), 72u);
    EXPECT_EQ(c.pairs().back(), QubitPair(5, 0));
}

TEST(Hea, SixQubitLineDepthOne) {
    const auto c = build_hea(6, 1, Topology::Line);
    EXPECT_EQ(c.pairs().size(), 5u);
    EXPECT_EQ(c.num_parameters(), 17u);
}

TEST(Hea, TwoQubitRingCollapses) {
    const auto c = build_hea(2, 1, Topology::Ring);
    ASSERT_EQ(c.pairs().size(), 1u);
    EXPECT_EQ(c.pairs()[0], QubitPair(0, 1));
}

TEST(Hea, RejectsTooFewQubits) {
    EXPECT_THROW(build_hea(1, 1, Topology::Ring), std::invalid_argument);
    EXPECT_THROW(build_hea(3, 0, Topology::Ring), std::invalid_argument);
    EXPECT_THROW(Circuit(3, 1, {QubitPair(0, 3)}), std::invalid_argument);
}

TEST(Hea, LayerStructureAndGateOrder) {
    const auto c = build_hea(3, 2, Topology::Ring);
    const auto &s = c.slots();
    const std::size_t per_layer = 2 * 3 + 3;
    ASSERT_EQ(s.size(), 2 * per_layer);
    for (std::size_t l = 0; l < 2; ++l) {
        for (std::size_t i = 0; i < per_layer; ++i) {
            const auto &a = s[i];
            const auto &b = s[l * per_layer + i];
            EXPECT_EQ(a.kind, b.kind);
            EXPECT_EQ(a.targets, b.targets);
            EXPECT_EQ(b.layer, static_cast<int>(l));
        }
    }
    EXPECT_EQ(s[0].kind, GateKind::RY);
    EXPECT_EQ(s[1].kind, GateKind::RX);
    EXPECT_EQ(s[6].kind, GateKind::RZZ);
}

TEST(Hea, ParameterMapIsBijection) {
    for (auto topo : {Topology::Ring, Topology::Line})
        for (int n : {2, 3, 6}) {
            const auto c = build_hea(n, 3, topo);
            std::set<int> seen;
            for (const auto &s : c.slots()) seen.insert(s.param_index);
            EXPECT_EQ(seen.size(), c.num_parameters());
            EXPECT_EQ(*seen.begin(), 0);
            EXPECT_EQ(*seen.rbegin(), static_cast<int>(c.num_parameters()) - 1);
            EXPECT_EQ(c.num_parameters(), 3 * (2 * n + c.pairs().size()));
        }
}

TEST(Hea, DeterministicConstruction) {
    const auto a = build_hea(5, 3, Topology::Ring);
    const auto b = build_hea(5, 3, Topology::Ring);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Hea, JsonRoundTrip) {
    const auto c = build_hea(4, 2, Topology::Line);
    EXPECT_EQ(circuit_from_json(to_json(c)), c);
    EXPECT_EQ(to_json(c).at("gates").size(), c.num_parameters());
}

TEST(Multigraph, SixRingDepthFour) {
    const auto s = multigraph_stats(build_hea(6, 4, Topology::Ring));
    for (int d : s.degree) EXPECT_EQ(d, 8);
    for (std::size_t p = 0; p < 6; ++p) {
        EXPECT_EQ(s.n2[p], 4);
        EXPECT_EQ(s.n1[p], 12);
        EXPECT_EQ(s.n0[p], 8);
        EXPECT_EQ(s.n2[p] + s.n1[p] + s.n0[p], 24);
    }
    EXPECT_TRUE(is_count_regular(s));
}

TEST(Multigraph, SixLineDepthFour) {
    const auto c = build_hea(6, 4, Topology::Line);
    const auto s = multigraph_stats(c);
    EXPECT_EQ(s.degree[0], 4);
    EXPECT_EQ(s.degree[1], 8);
    EXPECT_EQ(s.n1[0], 8);  // end pair (0, 1)
    EXPECT_EQ(s.n1[1], 12); // interior pair (1, 2)
    EXPECT_FALSE(is_count_regular(s));
}

TEST(Multigraph, SinglePairEdgeCase) {
    const auto s = multigraph_stats(build_hea(2, 1, Topology::Line));
    ASSERT_EQ(s.n2.size(), 1u);
    EXPECT_EQ(s.n2[0], 1);
    EXPECT_EQ(s.n1[0], 1);
    EXPECT_EQ(s.n0[0], -1);
}

TEST(Multigraph, TriangleIsRegular) {
    EXPECT_TRUE(is_count_regular(multigraph_stats(build_hea(3, 2, Topology::Ring))));
}

TEST(Multigraph, RingRegularForAllSizesAndDepths) {
    for (int n = 3; n <= 9; ++n)
        for (int d = 1; d <= 5; ++d) {
            const auto c = build_hea(n, d, Topology::Ring);
            const auto s = multigraph_stats(c);
            EXPECT_TRUE(is_count_regular(s)) << n << "," << d;
            for (std::size_t p = 0; p < s.n2.size(); ++p) {
                EXPECT_EQ(s.n2[p], d);
                EXPECT_EQ(s.n2[p] + s.n1[p] + s.n0[p], static_cast<int>(c.num_two_qubit_gates()));
            }
        }
}

// The counting formulas against a direct walk over the gate list: n2 agrees,
// and n1 exceeds the exactly-one-shared count by n2.
TEST(Multigraph, FormulasAgainstDirectCount) {
    for (auto topo : {Topology::Ring, Topology::Line}) {
        const auto c = build_hea(7, 3, topo);
        const auto s = multigraph_stats(c);
        for (std::size_t p = 0; p < c.pairs().size(); ++p) {
            const auto b = brute_counts(c, c.pairs()[p]);
            EXPECT_EQ(s.n2[p], b.same);
            EXPECT_EQ(s.n1[p], b.one + b.same);
            EXPECT_EQ(s.n0[p], b.none - b.same);
        }
    }
}
