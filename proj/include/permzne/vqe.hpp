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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "hamiltonian.hpp"
#include "lbfgs.hpp"
#include "parallel.hpp"
#include "qsim.hpp"
#include "rng.hpp"
#include "simulate.hpp"

namespace permzne {

inline void check_vqe_sizes(const Circuit &circuit, const PauliHamiltonian &h) {
    if (circuit.num_qubits() != h.num_qubits())
        throw std::invalid_argument("circuit and Hamiltonian sizes differ");
}

/// <psi(theta)|H|psi(theta)>
inline double energy(const Circuit &circuit, const PauliHamiltonian &h,
                     std::span<const double> theta) {
    check_vqe_sizes(circuit, h);
    return noiseless_energy(circuit, theta, h);
}

/// Parameter-shift gradient. Every generator (X, Y, Z(x)Z) squares to the
/// identity, so dE/dt = [E(t + pi/2) - E(t - pi/2)] / 2 exactly.
inline std::vector<double> energy_gradient(const Circuit &circuit, const PauliHamiltonian &h,
                                           std::span<const double> theta) {
    check_vqe_sizes(circuit, h);
    circuit.check_parameters(theta);
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    constexpr double kShift = std::numbers::pi / 2.0;
    for (std::size_t p = 0; p < theta.size(); ++p) {
        shifted[p] = theta[p] + kShift;
        const double plus = noiseless_energy(circuit, shifted, h);
        shifted[p] = theta[p] - kShift;
        const double minus = noiseless_energy(circuit, shifted, h);
        shifted[p] = theta[p];
        grad[p] = 0.5 * (plus - minus);
    }
    return grad;
}

namespace detail {

inline void apply_hamiltonian(const PauliHamiltonian &h, std::span<const cplx> in,
                              std::span<cplx> out) {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    for (const auto &term : h.terms()) {
        const PauliAction act(term.string);
        for (std::uint64_t b = 0; b < in.size(); ++b)
            out[b ^ act.x_mask] += term.coefficient * act.phase(b) * in[b];
    }
}

/// Im <bra| G |ket> for the gate generator G (Y, X, or Z(x)Z).
inline double generator_matrix_element(const GateSlot &slot, std::span<const cplx> bra,
                                       std::span<const cplx> ket) {
    cplx acc = 0.0;
    const std::uint64_t ma = std::uint64_t{1} << slot.targets[0];
    switch (slot.kind) {
    case GateKind::RX:
        for (std::uint64_t b = 0; b < ket.size(); ++b) acc += std::conj(bra[b ^ ma]) * ket[b];
        break;
    case GateKind::RY:
        // Y|0> = i|1>, Y|1> = -i|0>
        for (std::uint64_t b = 0; b < ket.size(); ++b)
            acc += std::conj(bra[b ^ ma]) * ((b & ma) ? cplx{0, -1} : cplx{0, 1}) * ket[b];
        break;
    case GateKind::RZZ: {
        const std::uint64_t mb = std::uint64_t{1} << slot.targets[1];
        for (std::uint64_t b = 0; b < ket.size(); ++b) {
            const bool odd = ((b & ma) != 0) != ((b & mb) != 0);
            acc += std::conj(bra[b]) * (odd ? -ket[b] : ket[b]);
        }
        break;
    }
    }
    return acc.imag();
}

} // namespace detail

/// Reverse-mode gradient: one forward pass plus one backward sweep that
/// un-computes each gate. Agrees with energy_gradient to rounding.
inline double energy_and_gradient_adjoint(const Circuit &circuit, const PauliHamiltonian &h,
                                          std::span<const double> theta, std::span<double> grad) {
    check_vqe_sizes(circuit, h);
    StateVector psi = circuit.statevector(theta);
    StateVector lambda(circuit.num_qubits());
    detail::apply_hamiltonian(h, psi.amplitudes(), lambda.amplitudes());
    cplx e = 0.0;
    for (std::size_t b = 0; b < psi.dim(); ++b) e += std::conj(psi[b]) * lambda[b];

    const auto &slots = circuit.slots();
    for (std::size_t k = slots.size(); k-- > 0;) {
        const auto &slot = slots[k];
        grad[static_cast<std::size_t>(slot.param_index)] =
            detail::generator_matrix_element(slot, lambda.amplitudes(), psi.amplitudes());
        Gate inverse = circuit.bind(slot, theta);
        inverse.angle = -inverse.angle;
        psi.apply(inverse);
        lambda.apply(inverse);
    }
    return e.real();
}

inline std::vector<double> energy_gradient_adjoint(const Circuit &circuit,
                                                   const PauliHamiltonian &h,
                                                   std::span<const double> theta) {
    std::vector<double> grad(theta.size());
    energy_and_gradient_adjoint(circuit, h, theta, grad);
    return grad;
}

struct VqeOptions {
    int max_iters = 5000;
    double grad_tol = 1e-9;
    int memory = 10;
    double init_sigma = 1e-3;
    int seed_pool = 10;
    std::uint64_t base_seed = 0;
    unsigned jobs = 1;
};

struct VqeOutcome {
    std::vector<double> theta_star;
    double energy = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double grad_norm = 0.0;
    std::string stop_reason;
};

/// Initial parameters drawn i.i.d. from N(0, sigma^2).
inline std::vector<double> initial_parameters(std::size_t count, std::uint64_t seed, double sigma) {
    Rng rng(seed, streams::vqe_init);
    std::vector<double> theta(count);
    for (double &t : theta) t = sigma * rng.normal();
    return theta;
}

/// Quasi-Newton minimization of the exact statevector energy from one seed.
inline VqeOutcome optimize(const Circuit &circuit, const PauliHamiltonian &h,
                           std::uint64_t init_seed, const VqeOptions &options = {}) {
    check_vqe_sizes(circuit, h);
    LbfgsOptions lopt;
    lopt.max_iters = options.max_iters;
    lopt.grad_tol = options.grad_tol;
    lopt.memory = options.memory;
    const Objective objective = [&](std::span<const double> x, std::span<double> g) {
        return energy_and_gradient_adjoint(circuit, h, x, g);
    };
    auto result = minimize_lbfgs(
        objective, initial_parameters(circuit.num_parameters(), init_seed, options.init_sigma), lopt);
    VqeOutcome out;
    out.theta_star = std::move(result.x);
    // Recompute on the final point so the energy is exactly reproducible.
    out.energy = energy(circuit, h, out.theta_star);
    out.iterations = result.iterations;
    out.evaluations = result.evaluations;
    out.converged = result.converged;
    out.seed = init_seed;
    out.grad_norm = result.grad_norm;
    out.stop_reason = std::move(result.stop_reason);
    return out;
}

/// Runs `seed_pool` starts (seeds base_seed, base_seed + 1, ...) and keeps
/// the lowest energy; ties go to the earlier seed.
inline VqeOutcome optimize_multistart(const Circuit &circuit, const PauliHamiltonian &h,
                                      const VqeOptions &options = {}) {
    if (options.seed_pool < 1) throw std::invalid_argument("seed pool must be >= 1");
    std::vector<VqeOutcome> runs(static_cast<std::size_t>(options.seed_pool));
    parallel_for(runs.size(), options.jobs, [&](std::size_t i) {
        runs[i] = optimize(circuit, h, options.base_seed + i, options);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (runs[i].energy < runs[best].energy) best = i;
    return runs[best];
}

struct DepthScanRow {
    int depth = 0;
    VqeOutcome best;
};

/// Best-of-pool VQE energy per depth.
inline std::vector<DepthScanRow> depth_scan(int n, Topology topology, const PauliHamiltonian &h,
                                            const std::vector<int> &depths,
                                            const VqeOptions &options = {}) {
    std::vector<DepthScanRow> rows;
    for (int d : depths) rows.push_back({d, optimize_multistart(build_hea(n, d, topology), h, options)});
    return rows;
}

/// Searches depths 1..max_depth and stops at the first whose best energy is
/// within `gap_fraction` * gap of the ground energy. Returns all scanned rows;
/// the last row is the accepted depth when `reached` is set.
struct AutoDepthResult {
    std::vector<DepthScanRow> rows;
    bool reached = false;
    double ground = 0.0;
    double gap = 0.0;
};

inline AutoDepthResult auto_depth(int n, Topology topology, const PauliHamiltonian &h,
                                  const VqeOptions &options = {}, int max_depth = 20,
                                  double gap_fraction = 1e-2) {
    const auto spectrum = exact_spectrum(h);
    AutoDepthResult out;
    out.ground = ground_energy(spectrum);
    out.gap = spectral_gap(spectrum);
    for (int d = 1; d <= max_depth; ++d) {
        out.rows.push_back({d, optimize_multistart(build_hea(n, d, topology), h, options)});
        if (out.rows.back().best.energy - out.ground <= gap_fraction * out.gap) {
            out.reached = true;
            break;
        }
    }
    return out;
}

inline nlohmann::json to_json(const VqeOutcome &o) {
    return {{"theta_star", o.theta_star}, {"energy", o.energy},
            {"iterations", o.iterations}, {"evaluations", o.evaluations},
            {"converged", o.converged},   {"seed", o.seed},
            {"grad_norm", o.grad_norm},   {"stop_reason", o.stop_reason}};
}

inline VqeOutcome vqe_outcome_from_json(const nlohmann::json &j) {
    VqeOutcome o;
    o.theta_star = j.at("theta_star").get<std::vector<double>>();
    o.energy = j.at("energy").get<double>();
    o.iterations = j.value("iterations", 0);
    o.evaluations = j.value("evaluations", 0);
    o.converged = j.value("converged", false);
    o.seed = j.value("seed", std::uint64_t{0});
    o.grad_norm = j.value("grad_norm", 0.0);
    o.stop_reason = j.value("stop_reason", std::string{});
    return o;
}

} // namespace permzne
