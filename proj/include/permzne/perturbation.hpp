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
#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "hamiltonian.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "simulate.hpp"

namespace permzne {

/// First-order sensitivity of the energy to single channel insertions.
///
/// insertion[l][p] is the energy when the full channel (q = 1) follows the
/// two-qubit gate on pair p of layer l and nothing else is noisy. `mean` is
/// their average A, eps[l][p] = insertion[l][p] - A and eps_tilde[p] sums
/// eps over layers.
struct PerturbationProfile {
    double e0 = 0.0;
    std::vector<std::vector<double>> insertion;
    double mean = 0.0;
    std::vector<std::vector<double>> eps;
    std::vector<double> eps_tilde;

    [[nodiscard]] int depth() const { return static_cast<int>(insertion.size()); }
    [[nodiscard]] std::size_t num_pairs() const { return eps_tilde.size(); }
    /// A - E0
    [[nodiscard]] double delta() const { return mean - e0; }
};

inline PerturbationProfile compute_profile(const Circuit &circuit, std::span<const double> theta,
                                           const PauliHamiltonian &h, unsigned jobs = 1) {
    if (circuit.num_qubits() != h.num_qubits())
        throw std::invalid_argument("circuit and Hamiltonian sizes differ");
    circuit.check_parameters(theta);
    const std::size_t num_pairs = circuit.pairs().size();
    const auto depth = static_cast<std::size_t>(circuit.depth());
    if (num_pairs == 0) throw std::invalid_argument("circuit has no two-qubit gates");

    PerturbationProfile prof;
    prof.e0 = noiseless_energy(circuit, theta, h);
    const std::size_t total = num_pairs * depth;
    std::vector<double> flat(total);
    parallel_for(total, jobs, [&](std::size_t g) {
        std::vector<double> rates(total, 0.0);
        rates[g] = 1.0;
        flat[g] = expectation(run_with_gate_rates(circuit, theta, rates), h);
    });

    prof.insertion.assign(depth, std::vector<double>(num_pairs));
    double sum = 0.0;
    for (std::size_t l = 0; l < depth; ++l)
        for (std::size_t p = 0; p < num_pairs; ++p) {
            prof.insertion[l][p] = flat[l * num_pairs + p];
            sum += flat[l * num_pairs + p];
        }
    prof.mean = sum / static_cast<double>(total);
    prof.eps.assign(depth, std::vector<double>(num_pairs));
    prof.eps_tilde.assign(num_pairs, 0.0);
    for (std::size_t l = 0; l < depth; ++l)
        for (std::size_t p = 0; p < num_pairs; ++p) {
            prof.eps[l][p] = prof.insertion[l][p] - prof.mean;
            prof.eps_tilde[p] += prof.eps[l][p];
        }
    return prof;
}

/// Decomposition y = delta * x + dy of the first-order energy shift.
struct FirstOrderTerms {
    double ces = 0.0;       // x = d * sum_T q_pi(jk)
    double linear = 0.0;    // (A - E0) * x
    double deviation = 0.0; // sum_T eps_tilde_jk q_pi(jk)
};

inline void check_profile(const PerturbationProfile &prof, const Circuit &circuit) {
    if (prof.num_pairs() != circuit.pairs().size() || prof.depth() != circuit.depth())
        throw std::invalid_argument("profile does not match circuit");
}

inline FirstOrderTerms first_order_terms(const PerturbationProfile &prof, const Circuit &circuit,
                                         const ErrorModel &model, const Permutation &pi) {
    check_profile(prof, circuit);
    FirstOrderTerms t;
    double rate_sum = 0.0;
    const auto &pairs = circuit.pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double q = mapped_rate(model, pi, pairs[p]);
        rate_sum += q;
        t.deviation += prof.eps_tilde[p] * q;
    }
    t.ces = static_cast<double>(circuit.depth()) * rate_sum;
    t.linear = prof.delta() * t.ces;
    return t;
}

/// E0 + d (A - E0) sum_T q + sum_T eps_tilde q
inline double first_order_energy(const PerturbationProfile &prof, const Circuit &circuit,
                                 const ErrorModel &model, const Permutation &pi) {
    const auto t = first_order_terms(prof, circuit, model, pi);
    return prof.e0 + t.linear + t.deviation;
}

/// Upper bounds on |dy| / |delta x|.
///   B1 = max|eps_tilde| / (d |A - E0|)
///   B2 = |T| max|eps_tilde| Diam{q} / (d |A - E0| sum q)
/// with q the mapped rates over the circuit's pairs.
struct DeviationBounds {
    double b1 = 0.0;
    double b2 = 0.0;
    double bound = 0.0;
    bool degenerate = false;
    std::string diagnostic;
};

inline DeviationBounds deviation_bounds(const PerturbationProfile &prof, const Circuit &circuit,
                                        const ErrorModel &model, const Permutation &pi) {
    check_profile(prof, circuit);
    DeviationBounds out;
    double max_eps = 0.0;
    for (double e : prof.eps_tilde) max_eps = std::max(max_eps, std::abs(e));
    double q_sum = 0.0, q_min = std::numeric_limits<double>::infinity(), q_max = 0.0;
    for (const auto &p : circuit.pairs()) {
        const double q = mapped_rate(model, pi, p);
        q_sum += q;
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
    }
    const double diam = q_max - q_min;
    const double scale = static_cast<double>(circuit.depth()) * std::abs(prof.delta());
    if (scale <= 1e-12) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        out.degenerate = true;
        out.diagnostic = "A - E0 vanishes; relative deviation is unbounded";
        out.b1 = max_eps == 0.0 ? 0.0 : inf;
        out.b2 = (max_eps == 0.0 || diam == 0.0) ? 0.0 : inf;
    } else {
        out.b1 = max_eps / scale;
        out.b2 = (diam == 0.0 || max_eps == 0.0)
                     ? 0.0
                     : static_cast<double>(circuit.pairs().size()) * max_eps * diam / (scale * q_sum);
    }
    out.bound = std::min(out.b1, out.b2);
    return out;
}

/// |dy| / |delta x|; zero when both vanish.
inline double relative_deviation(const FirstOrderTerms &t) {
    if (t.deviation == 0.0) return 0.0;
    return std::abs(t.deviation) / std::abs(t.linear);
}

inline nlohmann::json to_json(const PerturbationProfile &p) {
    return {{"e0", p.e0},           {"mean", p.mean},
            {"insertion", p.insertion}, {"eps", p.eps},
            {"eps_tilde", p.eps_tilde}};
}

inline PerturbationProfile profile_from_json(const nlohmann::json &j) {
    PerturbationProfile p;
    p.e0 = j.at("e0").get<double>();
    p.mean = j.at("mean").get<double>();
    p.insertion = j.at("insertion").get<std::vector<std::vector<double>>>();
    p.eps = j.at("eps").get<std::vector<std::vector<double>>>();
    p.eps_tilde = j.at("eps_tilde").get<std::vector<double>>();
    return p;
}

/// CSV `layer,pair_first,pair_second,energy` of the single-insertion energies.
inline void write_insertion_csv(std::ostream &os, const PerturbationProfile &p,
                                const Circuit &circuit) {
    check_profile(p, circuit);
    os << "layer,pair_first,pair_second,energy\n";
    os.precision(17);
    for (std::size_t l = 0; l < p.insertion.size(); ++l)
        for (std::size_t k = 0; k < circuit.pairs().size(); ++k)
            os << l << ',' << circuit.pairs()[k].first << ',' << circuit.pairs()[k].second << ','
               << p.insertion[l][k] << '\n';
}

} // namespace permzne
