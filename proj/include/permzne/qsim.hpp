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
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "hamiltonian.hpp"

// Dense statevector and density-matrix engine.
//
// Conventions, fixed globally:
//   RY(t)  = exp(-i t Y / 2)
//   RX(t)  = exp(-i t X / 2)
//   RZZ(t) = exp(-i t Z(x)Z / 2)
// Qubit 0 is the least significant bit of a basis-state index.

namespace permzne {

inline constexpr int kMaxStatevectorQubits = 20;

enum class GateKind : std::uint8_t { RY, RX, RZZ };

inline const char *gate_name(GateKind k) {
    switch (k) {
    case GateKind::RY: return "RY";
    case GateKind::RX: return "RX";
    case GateKind::RZZ: return "RZZ";
    }
    return "?";
}

inline bool is_two_qubit(GateKind k) { return k == GateKind::RZZ; }

struct Gate {
    GateKind kind = GateKind::RY;
    double angle = 0.0;
    std::array<int, 2> targets{0, -1};

    static Gate ry(int q, double t) { return {GateKind::RY, t, {q, -1}}; }
    static Gate rx(int q, double t) { return {GateKind::RX, t, {q, -1}}; }
    static Gate rzz(int a, int b, double t) { return {GateKind::RZZ, t, {a, b}}; }
};

/// 2x2 (single-qubit) or diagonal 4x4 (RZZ) matrix of a gate, row-major.
inline std::array<cplx, 4> single_qubit_matrix(const Gate &g) {
    const double c = std::cos(0.5 * g.angle);
    const double s = std::sin(0.5 * g.angle);
    switch (g.kind) {
    case GateKind::RY: return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
    case GateKind::RX: return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
    default: throw std::invalid_argument("not a single-qubit gate");
    }
}

inline Eigen::Matrix4cd two_qubit_matrix(const Gate &g) {
    if (g.kind != GateKind::RZZ) throw std::invalid_argument("not a two-qubit gate");
    const cplx even = std::polar(1.0, -0.5 * g.angle);
    const cplx odd = std::conj(even);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = even;
    m(1, 1) = odd;
    m(2, 2) = odd;
    m(3, 3) = even;
    return m;
}

namespace kernels {

inline void apply_1q(std::span<cplx> amps, int qubit, const std::array<cplx, 4> &u) {
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t size = amps.size();
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i + stride];
            amps[i] = u[0] * a0 + u[1] * a1;
            amps[i + stride] = u[2] * a0 + u[3] * a1;
        }
    }
}

/// Diagonal ZZ phase: `even` where bits a and b agree, `odd` otherwise.
inline void apply_zz(std::span<cplx> amps, int a, int b, cplx even, cplx odd) {
    const std::uint64_t ma = std::uint64_t{1} << a;
    const std::uint64_t mb = std::uint64_t{1} << b;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const bool parity = ((i & ma) != 0) != ((i & mb) != 0);
        amps[i] *= parity ? odd : even;
    }
}

} // namespace kernels

inline void check_gate_targets(const Gate &g, int num_qubits) {
    if (!std::isfinite(g.angle)) throw std::invalid_argument("gate angle must be finite");
    auto in_range = [&](int q) { return q >= 0 && q < num_qubits; };
    if (!in_range(g.targets[0]))
        throw std::invalid_argument("gate target " + std::to_string(g.targets[0]) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    " qubits");
    if (is_two_qubit(g.kind)) {
        if (!in_range(g.targets[1]))
            throw std::invalid_argument("gate target " + std::to_string(g.targets[1]) +
                                        " out of range");
        if (g.targets[0] == g.targets[1])
            throw std::invalid_argument("two-qubit gate needs distinct targets");
    }
}

class StateVector {
  public:
    /// |0...0>
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
        if (num_qubits > kMaxStatevectorQubits)
            throw CapabilityError("statevector limited to " +
                                  std::to_string(kMaxStatevectorQubits) + " qubits");
        amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    StateVector(int num_qubits, std::vector<cplx> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {
        if (amps_.size() != (std::size_t{1} << num_qubits))
            throw std::invalid_argument("amplitude count does not match qubit count");
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }

    void apply(const Gate &g) {
        check_gate_targets(g, num_qubits_);
        if (is_two_qubit(g.kind)) {
            const cplx even = std::polar(1.0, -0.5 * g.angle);
            kernels::apply_zz(amps_, g.targets[0], g.targets[1], even, std::conj(even));
        } else {
            kernels::apply_1q(amps_, g.targets[0], single_qubit_matrix(g));
        }
    }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const cplx &a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

  private:
    int num_qubits_;
    std::vector<cplx> amps_;
};

/// Row-major 2^n x 2^n density matrix. Entry (r, c) lives at r * dim + c, so
/// the flat index is a 2n-qubit register whose low n bits index the column.
class DensityMatrix {
  public:
    explicit DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
        if (num_qubits > kMaxDenseQubits)
            throw CapabilityError("density matrix limited to " +
                                  std::to_string(kMaxDenseQubits) + " qubits");
        entries_.assign(dim() * dim(), cplx{0.0, 0.0});
        entries_[0] = 1.0;
    }

    static DensityMatrix from_pure(const StateVector &psi) {
        DensityMatrix rho(psi.num_qubits());
        const std::size_t d = rho.dim();
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) rho.entries_[r * d + c] = psi[r] * std::conj(psi[c]);
        return rho;
    }

    static DensityMatrix maximally_mixed(int num_qubits) {
        DensityMatrix rho(num_qubits);
        const std::size_t d = rho.dim();
        rho.entries_[0] = 0.0;
        for (std::size_t i = 0; i < d; ++i) rho.entries_[i * d + i] = 1.0 / static_cast<double>(d);
        return rho;
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << num_qubits_; }
    [[nodiscard]] cplx operator()(std::size_t r, std::size_t c) const { return entries_[r * dim() + c]; }
    cplx &operator()(std::size_t r, std::size_t c) { return entries_[r * dim() + c]; }
    [[nodiscard]] std::span<const cplx> entries() const { return entries_; }

    /// rho -> U rho U^dagger
    void apply(const Gate &g) {
        check_gate_targets(g, num_qubits_);
        const int n = num_qubits_;
        if (is_two_qubit(g.kind)) {
            const cplx even = std::polar(1.0, -0.5 * g.angle);
            const cplx odd = std::conj(even);
            const int a = g.targets[0];
            const int b = g.targets[1];
            kernels::apply_zz(entries_, a + n, b + n, even, odd);
            kernels::apply_zz(entries_, a, b, std::conj(even), std::conj(odd));
        } else {
            const auto u = single_qubit_matrix(g);
            const std::array<cplx, 4> uc{std::conj(u[0]), std::conj(u[1]), std::conj(u[2]),
                                         std::conj(u[3])};
            kernels::apply_1q(entries_, g.targets[0] + n, u);
            kernels::apply_1q(entries_, g.targets[0], uc);
        }
    }

    [[nodiscard]] cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] double hermiticity_deviation() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = r; c < dim(); ++c)
                worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return worst;
    }

    [[nodiscard]] double min_eigenvalue() const {
        const auto d = static_cast<Eigen::Index>(dim());
        Eigen::MatrixXcd m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                m(r, c) = (*this)(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    [[nodiscard]] double max_abs_difference(const DensityMatrix &other) const {
        if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("size mismatch");
        double worst = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
        return worst;
    }

    DensityMatrix &scale_add(double self_weight, const DensityMatrix &other, double other_weight) {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            entries_[i] = self_weight * entries_[i] + other_weight * other.entries_[i];
        return *this;
    }

    static DensityMatrix zeros(int num_qubits) {
        DensityMatrix rho(num_qubits);
        rho.entries_[0] = 0.0;
        return rho;
    }

  private:
    int num_qubits_;
    std::vector<cplx> entries_;
};

/// Two-qubit channel kinds. Only depolarizing is implemented.
enum class ChannelKind : std::uint8_t { Depolarizing };

/// rho -> (1 - q) rho + q * Tr_{ab}(rho) (x) I/4 on qubits (a, b).
inline void apply_depolarizing(DensityMatrix &rho, int a, int b, double q) {
    const int n = rho.num_qubits();
    if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("channel qubit out of range");
    if (a == b) throw std::invalid_argument("depolarizing pair needs distinct qubits");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("error rate must lie in [0, 1]");
    if (q == 0.0) return;

    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    const std::array<std::size_t, 4> offsets{0, ma, mb, ma | mb};
    const std::size_t d = rho.dim();
    const double keep = 1.0 - q;
    for (std::size_t r = 0; r < d; ++r) {
        if (r & (ma | mb)) continue;
        for (std::size_t c = 0; c < d; ++c) {
            if (c & (ma | mb)) continue;
            cplx marginal = 0.0;
            for (std::size_t o : offsets) marginal += rho(r | o, c | o);
            const cplx mixed = 0.25 * q * marginal;
            for (std::size_t orow : offsets) {
                for (std::size_t ocol : offsets) {
                    cplx &e = rho(r | orow, c | ocol);
                    e *= keep;
                    if (orow == ocol) e += mixed;
                }
            }
        }
    }
}

struct CptpReport {
    double trace_deviation = 0.0;
    double hermiticity_deviation = 0.0;
    double min_eigenvalue = 0.0;
    bool eigenvalue_checked = false;

    [[nodiscard]] bool ok() const {
        return trace_deviation <= 1e-10 && hermiticity_deviation <= 1e-10 &&
               (!eigenvalue_checked || min_eigenvalue >= -1e-9);
    }
};

/// Trace, Hermiticity, and (for n <= 6) positivity of a density matrix.
inline CptpReport cptp_report(const DensityMatrix &rho) {
    CptpReport r;
    r.trace_deviation = std::abs(rho.trace() - cplx{1.0, 0.0});
    r.hermiticity_deviation = rho.hermiticity_deviation();
    if (rho.num_qubits() <= 6) {
        r.min_eigenvalue = rho.min_eigenvalue();
        r.eigenvalue_checked = true;
    }
    return r;
}

inline void require_cptp(const DensityMatrix &rho) {
    const CptpReport r = cptp_report(rho);
    if (!r.ok())
        throw std::logic_error("density matrix invariant violated: trace dev " +
                               std::to_string(r.trace_deviation) + ", hermiticity dev " +
                               std::to_string(r.hermiticity_deviation) + ", min eig " +
                               std::to_string(r.min_eigenvalue));
}

namespace detail {
inline void check_sizes(int state_qubits, const PauliHamiltonian &h) {
    if (state_qubits != h.num_qubits())
        throw std::invalid_argument("state has " + std::to_string(state_qubits) +
                                    " qubits but Hamiltonian has " +
                                    std::to_string(h.num_qubits()));
}
inline double checked_real(cplx v) {
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw std::logic_error("expectation has imaginary residual " + std::to_string(v.imag()));
    return v.real();
}
} // namespace detail

/// <psi|H|psi>
inline double expectation(const StateVector &psi, const PauliHamiltonian &h) {
    detail::check_sizes(psi.num_qubits(), h);
    const auto amps = psi.amplitudes();
    cplx total = 0.0;
    for (const auto &term : h.terms()) {
        const PauliAction act(term.string);
        cplx acc = 0.0;
        for (std::uint64_t b = 0; b < amps.size(); ++b)
            acc += std::conj(amps[b ^ act.x_mask]) * act.phase(b) * amps[b];
        total += term.coefficient * acc;
    }
    return detail::checked_real(total);
}

/// Tr(rho H)
inline double expectation(const DensityMatrix &rho, const PauliHamiltonian &h) {
    detail::check_sizes(rho.num_qubits(), h);
    const std::size_t d = rho.dim();
    cplx total = 0.0;
    for (const auto &term : h.terms()) {
        const PauliAction act(term.string);
        cplx acc = 0.0;
        for (std::uint64_t b = 0; b < d; ++b) acc += act.phase(b) * rho(b, b ^ act.x_mask);
        total += term.coefficient * acc;
    }
    return detail::checked_real(total);
}

} // namespace permzne
