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
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "errors.hpp"
#include "qsim.hpp"
#include "rng.hpp"

namespace permzne {

/// Symmetric table of two-qubit gate error rates between physical qubits.
class ErrorModel {
  public:
    explicit ErrorModel(int num_qubits, std::uint64_t seed = 0)
        : num_qubits_(num_qubits), seed_(seed),
          rates_(static_cast<std::size_t>(num_qubits) * static_cast<std::size_t>(num_qubits), 0.0) {
        if (num_qubits < 1) throw std::invalid_argument("error model needs at least one qubit");
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] ChannelKind channel() const { return ChannelKind::Depolarizing; }

    [[nodiscard]] double rate(int a, int b) const {
        return rates_[static_cast<std::size_t>(a * num_qubits_ + b)];
    }

    void set_rate(int a, int b, double q) {
        if (a == b) throw std::invalid_argument("error rate diagonal is unused");
        if (a < 0 || b < 0 || a >= num_qubits_ || b >= num_qubits_)
            throw std::invalid_argument("error rate index out of range");
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("error rate must lie in [0, 1]");
        rates_[static_cast<std::size_t>(a * num_qubits_ + b)] = q;
        rates_[static_cast<std::size_t>(b * num_qubits_ + a)] = q;
    }

    /// Every rate multiplied by `factor`.
    [[nodiscard]] ErrorModel scaled(double factor) const {
        ErrorModel out = *this;
        for (int a = 0; a < num_qubits_; ++a)
            for (int b = a + 1; b < num_qubits_; ++b) out.set_rate(a, b, rate(a, b) * factor);
        return out;
    }

    [[nodiscard]] double max_rate() const {
        return rates_.empty() ? 0.0 : *std::max_element(rates_.begin(), rates_.end());
    }

    /// Mean over unordered pairs.
    [[nodiscard]] double mean_rate() const {
        if (num_qubits_ < 2) return 0.0;
        double s = 0.0;
        for (int a = 0; a < num_qubits_; ++a)
            for (int b = a + 1; b < num_qubits_; ++b) s += rate(a, b);
        return s / (0.5 * num_qubits_ * (num_qubits_ - 1));
    }

  private:
    int num_qubits_;
    std::uint64_t seed_;
    std::vector<double> rates_;
};

/// Upper triangle i.i.d. uniform on [0, q_max], row by row, mirrored.
inline ErrorModel sample_error_table(int n, double q_max, std::uint64_t seed) {
    if (!(q_max >= 0.0 && q_max <= 1.0)) throw std::invalid_argument("q_max must lie in [0, 1]");
    ErrorModel model(n, seed);
    Rng rng(seed, streams::error_table);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) model.set_rate(a, b, q_max * rng.uniform());
    return model;
}

/// Bijection abstract qubit j -> physical qubit image[j].
class Permutation {
  public:
    explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
        std::vector<int> sorted = image_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != static_cast<int>(i))
                throw std::invalid_argument("mapping is not a bijection on [0, n)");
    }

    static Permutation identity(int n) {
        std::vector<int> image(static_cast<std::size_t>(n));
        std::iota(image.begin(), image.end(), 0);
        return Permutation(std::move(image));
    }

    /// Inverse of lehmer_rank.
    static Permutation from_lehmer_rank(int n, std::uint64_t rank) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(n), 0);
        for (int i = n - 1; i >= 0; --i) {
            const auto base = static_cast<std::uint64_t>(n - i);
            digits[static_cast<std::size_t>(i)] = rank % base;
            rank /= base;
        }
        std::vector<int> image;
        for (int i = 0; i < n; ++i) {
            const auto it = pool.begin() + static_cast<std::ptrdiff_t>(digits[static_cast<std::size_t>(i)]);
            image.push_back(*it);
            pool.erase(it);
        }
        return Permutation(std::move(image));
    }

    [[nodiscard]] int size() const { return static_cast<int>(image_.size()); }
    [[nodiscard]] int operator()(int j) const { return image_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] const std::vector<int> &image() const { return image_; }

    /// Lehmer code digits: digit i counts later entries smaller than image[i].
    [[nodiscard]] std::vector<int> lehmer_code() const {
        std::vector<int> code;
        for (std::size_t i = 0; i < image_.size(); ++i) {
            int smaller = 0;
            for (std::size_t k = i + 1; k < image_.size(); ++k) smaller += image_[k] < image_[i];
            code.push_back(smaller);
        }
        return code;
    }

    /// Lehmer code read as a factorial-base number; equals the position of
    /// the permutation in lexicographic order.
    [[nodiscard]] std::uint64_t lehmer_rank() const {
        const auto code = lehmer_code();
        std::uint64_t rank = 0;
        const auto n = code.size();
        for (std::size_t i = 0; i < n; ++i)
            rank = rank * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(code[i]);
        return rank;
    }

    friend bool operator==(const Permutation &, const Permutation &) = default;
    friend auto operator<=>(const Permutation &, const Permutation &) = default;

  private:
    std::vector<int> image_;
};

/// n!, saturating at UINT64_MAX.
inline std::uint64_t factorial_saturating(int n) {
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) {
        if (f > UINT64_MAX / static_cast<std::uint64_t>(k)) return UINT64_MAX;
        f *= static_cast<std::uint64_t>(k);
    }
    return f;
}

inline constexpr int kMaxEnumerationQubits = 8;

/// All n! permutations in lexicographic order, identity first.
inline std::vector<Permutation> enumerate_permutations(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (n > kMaxEnumerationQubits)
        throw CapabilityError("permutation enumeration limited to n <= " +
                              std::to_string(kMaxEnumerationQubits));
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    std::vector<Permutation> out;
    out.reserve(factorial_saturating(n));
    do {
        out.emplace_back(image);
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
}

/// `count` distinct uniformly random permutations (sampling without
/// replacement), in draw order.
inline std::vector<Permutation> sample_permutations(int n, std::size_t count, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (count < 2) throw std::invalid_argument("need at least two permutations");
    if (static_cast<std::uint64_t>(count) > factorial_saturating(n))
        throw std::invalid_argument("requested " + std::to_string(count) +
                                    " distinct permutations but only " +
                                    std::to_string(factorial_saturating(n)) + " exist");
    Rng rng(seed, streams::permutations);
    std::set<std::vector<int>> seen;
    std::vector<Permutation> out;
    out.reserve(count);
    std::vector<int> image(static_cast<std::size_t>(n));
    while (out.size() < count) {
        std::iota(image.begin(), image.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const auto k = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(image[static_cast<std::size_t>(i)], image[k]);
        }
        if (seen.insert(image).second) out.emplace_back(image);
    }
    return out;
}

/// q_{pi(j) pi(k)} for a pair of abstract qubits.
inline double mapped_rate(const ErrorModel &model, const Permutation &pi, const QubitPair &p) {
    return model.rate(pi(p.first), pi(p.second));
}

/// d * sum over the circuit's pairs of the mapped error rates.
inline double circuit_error_sum(const Circuit &circuit, const ErrorModel &model,
                                const Permutation &pi) {
    if (model.num_qubits() != circuit.num_qubits() || pi.size() != circuit.num_qubits())
        throw std::invalid_argument("circuit, error model and mapping sizes differ");
    double s = 0.0;
    for (const auto &p : circuit.pairs()) s += mapped_rate(model, pi, p);
    return static_cast<double>(circuit.depth()) * s;
}

inline nlohmann::json to_json(const ErrorModel &m) {
    nlohmann::json entries = nlohmann::json::array();
    for (int a = 0; a < m.num_qubits(); ++a)
        for (int b = a + 1; b < m.num_qubits(); ++b)
            entries.push_back({{"row", a}, {"col", b}, {"rate", m.rate(a, b)}});
    return {{"num_qubits", m.num_qubits()},
            {"channel", "depolarizing"},
            {"seed", m.seed()},
            {"rates", std::move(entries)}};
}

inline ErrorModel error_model_from_json(const nlohmann::json &j) {
    if (j.value("channel", std::string("depolarizing")) != "depolarizing")
        throw std::invalid_argument("only the depolarizing channel is supported");
    ErrorModel m(j.at("num_qubits").get<int>(), j.value("seed", std::uint64_t{0}));
    for (const auto &e : j.at("rates"))
        m.set_rate(e.at("row").get<int>(), e.at("col").get<int>(), e.at("rate").get<double>());
    return m;
}

/// CSV with header `row,col,rate`, one line per unordered pair.
inline void write_error_csv(std::ostream &os, const ErrorModel &m) {
    os << "row,col,rate\n";
    os.precision(17);
    for (int a = 0; a < m.num_qubits(); ++a)
        for (int b = a + 1; b < m.num_qubits(); ++b) os << a << ',' << b << ',' << m.rate(a, b) << '\n';
}

inline ErrorModel read_error_csv(std::istream &is, int num_qubits) {
    ErrorModel m(num_qubits);
    std::string line;
    if (!std::getline(is, line) || line.rfind("row,col,rate", 0) != 0)
        throw std::invalid_argument("error table CSV must start with header row,col,rate");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int a = 0, b = 0;
        double q = 0.0;
        char c1 = 0, c2 = 0;
        if (!(ls >> a >> c1 >> b >> c2 >> q) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("malformed error table line: " + line);
        m.set_rate(a, b, q);
    }
    return m;
}

} // namespace permzne
