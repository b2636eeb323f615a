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

#pragma once

#include <algorithm>
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsim.hpp"

namespace permzne {

/// Unordered qubit pair stored with first < second.
struct QubitPair {
    int first = 0;
    int second = 1;

    QubitPair() = default;
    QubitPair(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {}

    [[nodiscard]] bool touches(int q) const { return first == q || second == q; }
    [[nodiscard]] bool shares_one(const QubitPair &o) const {
        return (*this != o) && (touches(o.first) || touches(o.second));
    }
    friend auto operator<=>(const QubitPair &, const QubitPair &) = default;
};

enum class Topology { Ring, Line };

inline const char *topology_name(Topology t) { return t == Topology::Ring ? "ring" : "line"; }

inline Topology parse_topology(const std::string &s) {
    if (s == "ring") return Topology::Ring;
    if (s == "line") return Topology::Line;
    throw std::invalid_argument("unknown topology '" + s + "' (expected ring or line)");
}

/// A gate with a parameter slot. `pair_index` indexes the circuit's pair
/// list for two-qubit slots and is -1 otherwise.
struct GateSlot {
    GateKind kind = GateKind::RY;
    std::array<int, 2> targets{0, -1};
    int param_index = 0;
    int layer = 0;
    int pair_index = -1;
};

/// d structurally identical layers. Each layer applies RY then RX to every
/// qubit, then RZZ over every pair in the pair list, in list order. Every
/// slot owns its own parameter.
class Circuit {
  public:
    Circuit(int num_qubits, int depth, std::vector<QubitPair> pairs)
        : num_qubits_(num_qubits), depth_(depth), pairs_(std::move(pairs)) {
        if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
        if (depth < 1) throw std::invalid_argument("circuit depth must be >= 1");
        for (const auto &p : pairs_) {
            if (p.first == p.second) throw std::invalid_argument("pair needs distinct qubits");
            if (p.first < 0 || p.second >= num_qubits)
                throw std::invalid_argument("pair index out of range");
        }
        int param = 0;
        for (int l = 0; l < depth; ++l) {
            for (int q = 0; q < num_qubits; ++q) {
                slots_.push_back({GateKind::RY, {q, -1}, param++, l, -1});
                slots_.push_back({GateKind::RX, {q, -1}, param++, l, -1});
            }
            for (std::size_t p = 0; p < pairs_.size(); ++p)
                slots_.push_back({GateKind::RZZ,
                                  {pairs_[p].first, pairs_[p].second},
                                  param++,
                                  l,
                                  static_cast<int>(p)});
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] const std::vector<QubitPair> &pairs() const { return pairs_; }
    [[nodiscard]] const std::vector<GateSlot> &slots() const { return slots_; }
    [[nodiscard]] std::size_t num_parameters() const { return slots_.size(); }
    [[nodiscard]] std::size_t num_two_qubit_gates() const {
        return pairs_.size() * static_cast<std::size_t>(depth_);
    }

    [[nodiscard]] Gate bind(const GateSlot &slot, std::span<const double> params) const {
        return {slot.kind, params[static_cast<std::size_t>(slot.param_index)], slot.targets};
    }

    void check_parameters(std::span<const double> params) const {
        if (params.size() != num_parameters())
            throw std::invalid_argument("expected " + std::to_string(num_parameters()) +
                                        " parameters, got " + std::to_string(params.size()));
    }

    /// U(theta)|0...0>
    [[nodiscard]] StateVector statevector(std::span<const double> params) const {
        check_parameters(params);
        StateVector psi(num_qubits_);
        for (const auto &slot : slots_) psi.apply(bind(slot, params));
        return psi;
    }

    friend bool operator==(const Circuit &a, const Circuit &b) {
        return a.num_qubits_ == b.num_qubits_ && a.depth_ == b.depth_ && a.pairs_ == b.pairs_;
    }

  private:
    int num_qubits_;
    int depth_;
    std::vector<QubitPair> pairs_;
    std::vector<GateSlot> slots_;
};

/// Nearest-neighbour pair list; the ring adds (n-1, 0) unless it would
/// duplicate (0, 1), which happens for n = 2.
inline std::vector<QubitPair> hea_pairs(int n, Topology topology) {
    std::vector<QubitPair> pairs;
    for (int j = 0; j + 1 < n; ++j) pairs.emplace_back(j, j + 1);
    if (topology == Topology::Ring && n > 2) pairs.emplace_back(n - 1, 0);
    return pairs;
}

inline Circuit build_hea(int n, int depth, Topology topology) {
    if (n < 2) throw std::invalid_argument("hardware-efficient ansatz needs n >= 2");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    return Circuit(n, depth, hea_pairs(n, topology));
}

/// Per-pair gate-count statistics of the two-qubit interaction multigraph.
/// For a pair (j, k):
///   n2 = gates on (j, k)
///   n1 = deg(j) + deg(k) - n2
///   n0 = |T| d - n1 - n2
/// n1 counts gates on (j, k) itself once; the strictly-one-shared count would
/// subtract n2 twice. Left as written since only constancy across pairs
/// matters, and for layered circuits n2 = d is constant anyway.
struct MultigraphStats {
    std::vector<int> degree;
    std::vector<int> n2;
    std::vector<int> n1;
    std::vector<int> n0;
};

inline MultigraphStats multigraph_stats(const Circuit &circuit) {
    MultigraphStats s;
    const auto &pairs = circuit.pairs();
    s.degree.assign(static_cast<std::size_t>(circuit.num_qubits()), 0);
    std::vector<int> multiplicity(pairs.size(), 0);
    for (const auto &slot : circuit.slots()) {
        if (slot.pair_index < 0) continue;
        ++s.degree[static_cast<std::size_t>(slot.targets[0])];
        ++s.degree[static_cast<std::size_t>(slot.targets[1])];
        ++multiplicity[static_cast<std::size_t>(slot.pair_index)];
    }
    const int total = static_cast<int>(circuit.num_two_qubit_gates());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const int n2 = multiplicity[p];
        const int n1 = s.degree[static_cast<std::size_t>(pairs[p].first)] +
                       s.degree[static_cast<std::size_t>(pairs[p].second)] - n2;
        s.n2.push_back(n2);
        s.n1.push_back(n1);
        s.n0.push_back(total - n1 - n2);
    }
    return s;
}

/// True iff (n2, n1, n0) is the same for every pair.
inline bool is_count_regular(const MultigraphStats &s) {
    for (std::size_t p = 1; p < s.n2.size(); ++p)
        if (s.n2[p] != s.n2[0] || s.n1[p] != s.n1[0] || s.n0[p] != s.n0[0]) return false;
    return true;
}

inline nlohmann::json to_json(const Circuit &c) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto &p : c.pairs()) pairs.push_back({p.first, p.second});
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &s : c.slots()) {
        nlohmann::json targets = nlohmann::json::array({s.targets[0]});
        if (s.pair_index >= 0) targets.push_back(s.targets[1]);
        gates.push_back({{"kind", gate_name(s.kind)},
                         {"targets", std::move(targets)},
                         {"param", s.param_index},
                         {"layer", s.layer}});
    }
    return {{"num_qubits", c.num_qubits()},
            {"depth", c.depth()},
            {"pairs", std::move(pairs)},
            {"num_parameters", c.num_parameters()},
            {"gates", std::move(gates)}};
}

inline Circuit circuit_from_json(const nlohmann::json &j) {
    std::vector<QubitPair> pairs;
    for (const auto &p : j.at("pairs")) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    return Circuit(j.at("num_qubits").get<int>(), j.at("depth").get<int>(), std::move(pairs));
}

} // namespace permzne
