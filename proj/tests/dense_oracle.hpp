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

// Brute-force dense-matrix reference used only by tests. Gates are built as
// cos(t/2) I - i sin(t/2) P on the full register and channels as an explicit
// two-qubit Pauli twirl, so nothing here shares code with the engine kernels.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "permzne/ansatz.hpp"
#include "permzne/qsim.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

inline Eigen::Matrix2cd pauli(char p) {
    Eigen::Matrix2cd m;
    switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
    }
    return m;
}

/// Kronecker product with qubit 0 as the least significant factor.
inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// ops[q] applied to qubit q.
inline Mat tensor(const std::vector<char> &ops) {
    Mat out = Mat::Identity(1, 1);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) out = kron(out, pauli(*it));
    return out;
}

inline Mat pauli_on(int n, std::initializer_list<std::pair<int, char>> sites) {
    std::vector<char> ops(static_cast<std::size_t>(n), 'I');
    for (auto [q, p] : sites) ops[static_cast<std::size_t>(q)] = p;
    return tensor(ops);
}

inline Mat gate_unitary(const permzne::Gate &g, int n) {
    Mat gen;
    switch (g.kind) {
    case permzne::GateKind::RY: gen = pauli_on(n, {{g.targets[0], 'Y'}}); break;
    case permzne::GateKind::RX: gen = pauli_on(n, {{g.targets[0], 'X'}}); break;
    case permzne::GateKind::RZZ: gen = pauli_on(n, {{g.targets[0], 'Z'}, {g.targets[1], 'Z'}}); break;
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    return std::cos(0.5 * g.angle) * Mat::Identity(d, d) - cplx(0, 1) * std::sin(0.5 * g.angle) * gen;
}

/// (1 - q) rho + q/16 sum_{P in Paulis on (a, b)} P rho P
inline Mat twirl(const Mat &rho, int n, int a, int b, double q) {
    static const char kP[] = {'I', 'X', 'Y', 'Z'};
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    for (char pa : kP)
        for (char pb : kP) {
            const Mat p = pauli_on(n, {{a, pa}, {b, pb}});
            acc += p * rho * p.adjoint();
        }
    return (1.0 - q) * rho + (q / 16.0) * acc;
}

inline Mat to_mat(const permzne::DensityMatrix &rho) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Mat m(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            m(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return m;
}

/// Dense evolution of a layered circuit; `gate_rates[g]` is the channel
/// strength after two-qubit gate g (layer-major).
inline Mat run(const permzne::Circuit &c, const std::vector<double> &theta,
               const std::vector<double> &gate_rates) {
    const int n = c.num_qubits();
    const Eigen::Index d = Eigen::Index{1} << n;
    Mat rho = Mat::Zero(d, d);
    rho(0, 0) = 1.0;
    for (const auto &slot : c.slots()) {
        const Mat u = gate_unitary(c.bind(slot, theta), n);
        rho = u * rho * u.adjoint();
        if (slot.pair_index >= 0) {
            const double q = gate_rates[static_cast<std::size_t>(slot.layer) * c.pairs().size() +
                                        static_cast<std::size_t>(slot.pair_index)];
            rho = twirl(rho, n, slot.targets[0], slot.targets[1], q);
        }
    }
    return rho;
}

inline double energy(const Mat &rho, const Mat &h) { return (rho * h).trace().real(); }

} // namespace oracle
