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

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ansatz.hpp"
#include "noise.hpp"
#include "qsim.hpp"

namespace permzne {

struct RunOptions {
    /// Run the CPTP checks after every channel application.
    bool check_invariants = false;
};

/// Index of a two-qubit gate in per-gate rate vectors: layer * |T| + pair.
inline std::size_t two_qubit_gate_index(const Circuit &c, const GateSlot &slot) {
    return static_cast<std::size_t>(slot.layer) * c.pairs().size() +
           static_cast<std::size_t>(slot.pair_index);
}

/// Exact density-matrix evolution with a depolarizing channel of strength
/// `gate_rates[g]` after two-qubit gate g. Single-qubit gates are noiseless.
/// The state stays a statevector until the first nonzero rate.
inline DensityMatrix run_with_gate_rates(const Circuit &circuit, std::span<const double> params,
                                         std::span<const double> gate_rates,
                                         const RunOptions &options = {}) {
    circuit.check_parameters(params);
    if (gate_rates.size() != circuit.num_two_qubit_gates())
        throw std::invalid_argument("need one rate per two-qubit gate");
    if (circuit.num_qubits() > kMaxDenseQubits)
        throw CapabilityError("density matrix limited to " + std::to_string(kMaxDenseQubits) +
                              " qubits");

    StateVector psi(circuit.num_qubits());
    std::optional<DensityMatrix> rho;
    for (const auto &slot : circuit.slots()) {
        const Gate g = circuit.bind(slot, params);
        if (rho) {
            rho->apply(g);
        } else {
            psi.apply(g);
        }
        if (slot.pair_index < 0) continue;
        const double q = gate_rates[two_qubit_gate_index(circuit, slot)];
        if (q == 0.0) continue;
        if (!rho) rho = DensityMatrix::from_pure(psi);
        apply_depolarizing(*rho, slot.targets[0], slot.targets[1], q);
        if (options.check_invariants) require_cptp(*rho);
    }
    return rho ? std::move(*rho) : DensityMatrix::from_pure(psi);
}

/// Per-gate rates q_{pi(j) pi(k)} (same for every layer).
inline std::vector<double> mapped_gate_rates(const Circuit &circuit, const ErrorModel &model,
                                             const Permutation &pi) {
    if (model.num_qubits() != circuit.num_qubits())
        throw std::invalid_argument("error model size does not match circuit");
    if (pi.size() != circuit.num_qubits())
        throw std::invalid_argument("mapping size does not match circuit");
    std::vector<double> rates;
    rates.reserve(circuit.num_two_qubit_gates());
    for (int l = 0; l < circuit.depth(); ++l)
        for (const auto &p : circuit.pairs()) rates.push_back(mapped_rate(model, pi, p));
    return rates;
}

/// Noisy circuit under the abstract-to-physical mapping `pi`.
inline DensityMatrix run_noisy_circuit(const Circuit &circuit, std::span<const double> params,
                                       const ErrorModel &model, const Permutation &pi,
                                       const RunOptions &options = {}) {
    const auto rates = mapped_gate_rates(circuit, model, pi);
    return run_with_gate_rates(circuit, params, rates, options);
}

inline double noisy_energy(const Circuit &circuit, std::span<const double> params,
                           const PauliHamiltonian &h, const ErrorModel &model,
                           const Permutation &pi) {
    return expectation(run_noisy_circuit(circuit, params, model, pi), h);
}

inline double noiseless_energy(const Circuit &circuit, std::span<const double> params,
                               const PauliHamiltonian &h) {
    return expectation(circuit.statevector(params), h);
}

} // namespace permzne
