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
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace permzne {

using cplx = std::complex<double>;

/// Largest register the dense backends accept.
inline constexpr int kMaxDenseQubits = 12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis. Character i of the label acts on
/// qubit i, and qubit i is bit i of a basis-state index.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

    static PauliString from_label(std::string_view label) {
        std::vector<Pauli> ops;
        ops.reserve(label.size());
        for (char c : label) {
            switch (c) {
            case 'I': ops.push_back(Pauli::I); break;
            case 'X': ops.push_back(Pauli::X); break;
            case 'Y': ops.push_back(Pauli::Y); break;
            case 'Z': ops.push_back(Pauli::Z); break;
            default:
                throw std::invalid_argument("invalid Pauli label character '" +
                                            std::string(1, c) + "'");
            }
        }
        return PauliString(std::move(ops));
    }

    /// Identity everywhere except the given (qubit, op) entries.
    static PauliString sparse(int num_qubits,
                              std::initializer_list<std::pair<int, Pauli>> entries) {
        std::vector<Pauli> ops(static_cast<std::size_t>(num_qubits), Pauli::I);
        for (auto [q, p] : entries) {
            if (q < 0 || q >= num_qubits) throw std::invalid_argument("Pauli site out of range");
            ops[static_cast<std::size_t>(q)] = p;
        }
        return PauliString(std::move(ops));
    }

    [[nodiscard]] int num_qubits() const { return static_cast<int>(ops_.size()); }
    [[nodiscard]] const std::vector<Pauli> &ops() const { return ops_; }
    [[nodiscard]] Pauli at(int q) const { return ops_[static_cast<std::size_t>(q)]; }

    [[nodiscard]] std::string label() const {
        static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
        std::string s;
        for (Pauli p : ops_) s.push_back(kChars[static_cast<int>(p)]);
        return s;
    }

    /// Bits flipped by the string (X or Y sites).
    [[nodiscard]] std::uint64_t x_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < ops_.size(); ++q)
            if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
        return m;
    }

    /// Bits contributing a sign (Z or Y sites).
    [[nodiscard]] std::uint64_t z_mask() const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < ops_.size(); ++q)
            if (ops_[q] == Pauli::Z || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
        return m;
    }

    [[nodiscard]] int y_count() const {
        return static_cast<int>(std::count(ops_.begin(), ops_.end(), Pauli::Y));
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    std::vector<Pauli> ops_;
};

/// Action of a Pauli string on one computational basis state:
/// P|b> = phase(b) |b ^ x_mask>.
struct PauliAction {
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    cplx y_phase{1.0, 0.0}; // i^{#Y}

    explicit PauliAction(const PauliString &p) : x_mask(p.x_mask()), z_mask(p.z_mask()) {
        static const cplx kPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        y_phase = kPowers[p.y_count() % 4];
    }

    [[nodiscard]] cplx phase(std::uint64_t basis) const {
        return (std::popcount(basis & z_mask) & 1) ? -y_phase : y_phase;
    }
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

/// Real-weighted sum of Pauli strings; Hermitian by construction.
class PauliHamiltonian {
  public:
    PauliHamiltonian() = default;
    explicit PauliHamiltonian(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1) throw std::invalid_argument("Hamiltonian needs at least one qubit");
    }

    void add_term(double coefficient, PauliString string) {
        if (string.num_qubits() != num_qubits_)
            throw std::invalid_argument("Pauli string length " +
                                        std::to_string(string.num_qubits()) +
                                        " does not match system size " +
                                        std::to_string(num_qubits_));
        terms_.push_back({coefficient, std::move(string)});
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const { return terms_; }

    /// Dense 2^n x 2^n matrix. Guarded by kMaxDenseQubits.
    [[nodiscard]] Eigen::MatrixXcd dense_matrix() const {
        if (num_qubits_ > kMaxDenseQubits)
            throw CapabilityError("dense Hamiltonian limited to " +
                                  std::to_string(kMaxDenseQubits) + " qubits");
        const Eigen::Index dim = Eigen::Index{1} << num_qubits_;
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto &term : terms_) {
            const PauliAction act(term.string);
            for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
                const auto row = static_cast<Eigen::Index>(b ^ act.x_mask);
                m(row, static_cast<Eigen::Index>(b)) += term.coefficient * act.phase(b);
            }
        }
        return m;
    }

  private:
    int num_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Periodic transverse-field Ising chain: sum_j J_j Z_j Z_{j+1} + sum_j h_j X_j,
/// with site n wrapping to site 0. Bond j couples (j, j+1 mod n).
inline PauliHamiltonian build_tfim(int n, const std::vector<double> &couplings,
                                   const std::vector<double> &fields) {
    if (n < 2) throw std::invalid_argument("TFIM needs n >= 2");
    if (couplings.size() != static_cast<std::size_t>(n) ||
        fields.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("TFIM coupling/field vectors must have length n");
    PauliHamiltonian h(n);
    for (int j = 0; j < n; ++j)
        h.add_term(couplings[static_cast<std::size_t>(j)],
                   PauliString::sparse(n, {{j, Pauli::Z}, {(j + 1) % n, Pauli::Z}}));
    for (int j = 0; j < n; ++j)
        h.add_term(fields[static_cast<std::size_t>(j)], PauliString::sparse(n, {{j, Pauli::X}}));
    return h;
}

/// Uniform couplings and fields equal to one.
inline PauliHamiltonian build_tfim_uniform(int n) {
    return build_tfim(n, std::vector<double>(static_cast<std::size_t>(n), 1.0),
                      std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

/// One strong bond: J_0 = 6, all other couplings and fields equal to one.
inline PauliHamiltonian build_tfim_strong_bond(int n) {
    std::vector<double> couplings(static_cast<std::size_t>(n), 1.0);
    couplings[0] = 6.0;
    return build_tfim(n, couplings, std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

/// Ascending eigenvalues from dense diagonalization.
inline std::vector<double> exact_spectrum(const PauliHamiltonian &h) {
    const Eigen::MatrixXcd m = h.dense_matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigen decomposition failed");
    const Eigen::VectorXd &ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end());
    return out;
}

inline double ground_energy(const std::vector<double> &spectrum) { return spectrum.front(); }
inline double ground_energy(const PauliHamiltonian &h) { return ground_energy(exact_spectrum(h)); }

/// Distance between the two lowest distinct levels; eigenvalues within
/// 1e-9 count as one level. Zero when the spectrum is a single level.
inline double spectral_gap(const std::vector<double> &spectrum) {
    constexpr double kMergeTol = 1e-9;
    const double e0 = spectrum.front();
    for (double e : spectrum)
        if (e - e0 > kMergeTol) return e - e0;
    return 0.0;
}
inline double spectral_gap(const PauliHamiltonian &h) { return spectral_gap(exact_spectrum(h)); }

inline nlohmann::json to_json(const PauliHamiltonian &h) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : h.terms())
        terms.push_back({{"coefficient", t.coefficient}, {"pauli", t.string.label()}});
    return {{"num_qubits", h.num_qubits()}, {"terms", std::move(terms)}};
}

inline PauliHamiltonian hamiltonian_from_json(const nlohmann::json &j) {
    PauliHamiltonian h(j.at("num_qubits").get<int>());
    for (const auto &t : j.at("terms"))
        h.add_term(t.at("coefficient").get<double>(),
                   PauliString::from_label(t.at("pauli").get<std::string>()));
    return h;
}

} // namespace permzne
