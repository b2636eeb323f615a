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
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "perturbation.hpp"
#include "rng.hpp"
#include "simulate.hpp"

namespace permzne {

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
};

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

namespace detail {

inline double mean_of(std::span<const FitPoint> pts, double FitPoint::*field) {
    double s = 0.0;
    for (const auto &p : pts) s += p.*field;
    return s / static_cast<double>(pts.size());
}

/// Var x is treated as zero below this fraction of <x>^2 (rounding noise in
/// permutation-invariant error sums sits around 1e-32 relative).
inline constexpr double kDegenerateRelVar = 1e-24;

inline bool degenerate_design(double var_x, double mean_x) {
    return !(var_x > kDegenerateRelVar * mean_x * mean_x) || var_x == 0.0;
}

} // namespace detail

/// Ordinary least squares: slope = Cov(x, y) / Var x, intercept = <y> - slope <x>.
inline LinearFit linear_fit(std::span<const FitPoint> pts) {
    if (pts.size() < 2) throw std::invalid_argument("linear fit needs at least two points");
    const double mx = detail::mean_of(pts, &FitPoint::x);
    const double my = detail::mean_of(pts, &FitPoint::y);
    double sxx = 0.0, sxy = 0.0;
    for (const auto &p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    const double var_x = sxx / static_cast<double>(pts.size());
    if (detail::degenerate_design(var_x, mx))
        throw DegenerateDesignError("all abscissae coincide; slope is undefined", my);
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

/// Averages of q_pi(p1) q_pi(p2) over all relabelings, for pair-pairs that
/// coincide (kappa2), share one qubit (kappa1), or are disjoint (kappa0).
struct PermutationMoments {
    double kappa2 = 0.0;
    double kappa1 = 0.0;
    double kappa0 = 0.0;
};

inline PermutationMoments permutation_moments(const ErrorModel &model) {
    const int n = model.num_qubits();
    if (n < 4) throw std::invalid_argument("disjoint pair moment needs n >= 4");
    PermutationMoments m;
    double s2 = 0.0, total = 0.0;
    std::vector<double> incident(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const double q = model.rate(a, b);
            s2 += q * q;
            total += q;
            incident[static_cast<std::size_t>(a)] += q;
            incident[static_cast<std::size_t>(b)] += q;
        }
    const double num_pairs = 0.5 * n * (n - 1);
    m.kappa2 = s2 / num_pairs;

    // Ordered (shared a, b, c) triples with b != c: sum_a (S_a^2 - sum_b q_ab^2).
    double s1 = 0.0;
    for (int a = 0; a < n; ++a) {
        const double sa = incident[static_cast<std::size_t>(a)];
        double sq = 0.0;
        for (int b = 0; b < n; ++b)
            if (b != a) sq += model.rate(a, b) * model.rate(a, b);
        s1 += sa * sa - sq;
    }
    m.kappa1 = s1 / (static_cast<double>(n) * (n - 1) * (n - 2));

    // Ordered disjoint pair-pairs: all ordered pair-pairs minus equal and sharing.
    const double s0 = total * total - s2 - s1;
    m.kappa0 = s0 / (num_pairs * 0.5 * (n - 2) * (n - 3));
    return m;
}

struct CovarianceDecomposition {
    std::vector<double> terms; // eps_tilde_p [n2 k2 + n1 k1 + n0 k0]
    double total = 0.0;
};

inline CovarianceDecomposition covariance_decomposition(const PerturbationProfile &prof,
                                                        const MultigraphStats &stats,
                                                        const PermutationMoments &m) {
    if (stats.n2.size() != prof.num_pairs())
        throw std::invalid_argument("multigraph stats do not match profile");
    CovarianceDecomposition out;
    for (std::size_t p = 0; p < prof.num_pairs(); ++p) {
        const double bracket = stats.n2[p] * m.kappa2 + stats.n1[p] * m.kappa1 + stats.n0[p] * m.kappa0;
        out.terms.push_back(prof.eps_tilde[p] * bracket);
        out.total += out.terms.back();
    }
    return out;
}

struct BootstrapOptions {
    double confidence = 0.95;
    int resamples = 2000;
    std::uint64_t seed = 0;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    int rejected_resamples = 0;
};

/// BCa interval for the OLS intercept with pairs resampling.
inline ConfidenceInterval bootstrap_ci(std::span<const FitPoint> pts,
                                       const BootstrapOptions &opt = {}) {
    const std::size_t n = pts.size();
    if (n < 10) throw std::invalid_argument("bootstrap needs at least 10 samples");
    if (!(opt.confidence > 0.0 && opt.confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0, 1)");
    if (opt.resamples < 2) throw std::invalid_argument("need at least two resamples");

    const double estimate = linear_fit(pts).intercept;
    const auto resamples = static_cast<std::size_t>(opt.resamples);
    const std::size_t max_attempts = 10 * resamples;
    std::size_t attempts = 0;
    std::vector<double> stats;
    stats.reserve(resamples);
    std::vector<FitPoint> draw(n);
    for (std::size_t b = 0; b < resamples; ++b) {
        Rng rng(opt.seed ^ splitmix64(b), streams::bootstrap);
        for (;;) {
            if (++attempts > max_attempts)
                throw std::runtime_error("bootstrap gave up after too many degenerate resamples");
            for (auto &p : draw) p = pts[static_cast<std::size_t>(rng.below(n))];
            try {
                stats.push_back(linear_fit(draw).intercept);
                break;
            } catch (const DegenerateDesignError &) {
            }
        }
    }
    ConfidenceInterval ci;
    ci.rejected_resamples = static_cast<int>(attempts - resamples);
    std::sort(stats.begin(), stats.end());

    // Zero-spread bootstrap distribution (e.g. exactly affine data).
    if (stats.back() - stats.front() <= 1e-14 * std::max(1.0, std::abs(estimate))) {
        ci.low = std::min(stats.front(), estimate);
        ci.high = std::max(stats.back(), estimate);
        return ci;
    }

    const boost::math::normal_distribution<double> unit;
    const double below = static_cast<double>(std::count_if(
                             stats.begin(), stats.end(), [&](double s) { return s < estimate; })) /
                         static_cast<double>(resamples);
    const double clamp = 0.5 / static_cast<double>(resamples);
    const double z0 = boost::math::quantile(unit, std::clamp(below, clamp, 1.0 - clamp));

    // Jackknife acceleration.
    std::vector<double> jack(n);
    std::vector<FitPoint> leave(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) leave[k++] = pts[j];
        jack[i] = linear_fit(leave).intercept;
    }
    double jmean = 0.0;
    for (double v : jack) jmean += v;
    jmean /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (double v : jack) {
        const double d = jmean - v;
        num += d * d * d;
        den += d * d;
    }
    const double accel = den > 0.0 ? num / (6.0 * std::pow(den, 1.5)) : 0.0;

    auto adjusted = [&](double tail) {
        const double z = boost::math::quantile(unit, tail);
        return boost::math::cdf(unit, z0 + (z0 + z) / (1.0 - accel * (z0 + z)));
    };
    auto quantile_of = [&](double p) {
        const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(resamples - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, resamples - 1);
        const double frac = pos - static_cast<double>(lo);
        return stats[lo] + frac * (stats[hi] - stats[lo]);
    };
    const double alpha = 0.5 * (1.0 - opt.confidence);
    ci.low = quantile_of(adjusted(alpha));
    ci.high = quantile_of(adjusted(1.0 - alpha));
    if (ci.low > ci.high) std::swap(ci.low, ci.high);
    return ci;
}

enum class EnergyMode { ExactSim, FirstOrder };

inline const char *energy_mode_name(EnergyMode m) {
    return m == EnergyMode::ExactSim ? "exact_sim" : "first_order";
}

inline EnergyMode parse_energy_mode(const std::string &s) {
    if (s == "exact_sim") return EnergyMode::ExactSim;
    if (s == "first_order") return EnergyMode::FirstOrder;
    throw std::invalid_argument("unknown energy mode '" + s + "'");
}

struct ZneSample {
    std::uint64_t lehmer = 0;
    double ces = 0.0;
    double energy = 0.0;
};

struct ZneDiagnostics {
    PermutationMoments moments;
    CovarianceDecomposition covariance;
};

/// Outcome of a permutation fit. When every CES coincides the design is
/// degenerate: `degenerate` is set, slope is zero and intercept carries the
/// mean energy.
struct ZneResult {
    EnergyMode mode = EnergyMode::ExactSim;
    std::vector<ZneSample> samples;
    bool degenerate = false;
    double intercept = 0.0;
    double slope = 0.0;
    std::optional<ConfidenceInterval> ci;
    std::optional<ZneDiagnostics> diagnostics;

    [[nodiscard]] std::vector<FitPoint> points() const {
        std::vector<FitPoint> pts;
        for (const auto &s : samples) pts.push_back({s.ces, s.energy});
        return pts;
    }
    [[nodiscard]] double min_energy() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto &s : samples) m = std::min(m, s.energy);
        return m;
    }
};

/// Fits already-collected samples; adds the BCa interval when there are at
/// least 10 samples and `bootstrap` is given.
inline ZneResult fit_samples(std::vector<ZneSample> samples, EnergyMode mode,
                             const std::optional<BootstrapOptions> &bootstrap = std::nullopt) {
    ZneResult r;
    r.mode = mode;
    r.samples = std::move(samples);
    const auto pts = r.points();
    try {
        const auto fit = linear_fit(pts);
        r.intercept = fit.intercept;
        r.slope = fit.slope;
        if (bootstrap && pts.size() >= 10) r.ci = bootstrap_ci(pts, *bootstrap);
    } catch (const DegenerateDesignError &e) {
        r.degenerate = true;
        r.intercept = e.mean_y();
        r.slope = 0.0;
    }
    return r;
}

/// Energies for many mappings, memoized by Lehmer rank. Batches evaluate the
/// missing mappings in parallel.
class PermutationEnergyCache {
  public:
    PermutationEnergyCache(const Circuit &circuit, std::vector<double> theta,
                           const PauliHamiltonian &h, ErrorModel model, EnergyMode mode,
                           const PerturbationProfile *profile = nullptr)
        : circuit_(circuit), theta_(std::move(theta)), h_(h), model_(std::move(model)),
          mode_(mode), profile_(profile) {
        if (mode_ == EnergyMode::FirstOrder && profile_ == nullptr)
            throw std::invalid_argument("first-order mode needs a perturbation profile");
    }

    std::vector<ZneSample> samples(const std::vector<Permutation> &perms, unsigned jobs) {
        std::vector<std::size_t> missing;
        for (std::size_t i = 0; i < perms.size(); ++i)
            if (!cache_.contains(perms[i].lehmer_rank())) missing.push_back(i);
        std::vector<double> fresh(missing.size());
        parallel_for(missing.size(), jobs, [&](std::size_t k) {
            fresh[k] = evaluate(perms[missing[k]]);
        });
        for (std::size_t k = 0; k < missing.size(); ++k)
            cache_[perms[missing[k]].lehmer_rank()] = fresh[k];

        std::vector<ZneSample> out;
        out.reserve(perms.size());
        for (const auto &pi : perms) {
            const auto rank = pi.lehmer_rank();
            out.push_back({rank, circuit_error_sum(circuit_, model_, pi), cache_.at(rank)});
        }
        return out;
    }

    [[nodiscard]] std::size_t size() const { return cache_.size(); }

  private:
    double evaluate(const Permutation &pi) const {
        if (mode_ == EnergyMode::FirstOrder) return first_order_energy(*profile_, circuit_, model_, pi);
        return noisy_energy(circuit_, theta_, h_, model_, pi);
    }

    const Circuit &circuit_;
    std::vector<double> theta_;
    const PauliHamiltonian &h_;
    ErrorModel model_;
    EnergyMode mode_;
    const PerturbationProfile *profile_;
    std::map<std::uint64_t, double> cache_;
};

struct ExtrapolateOptions {
    EnergyMode mode = EnergyMode::ExactSim;
    unsigned jobs = 1;
    std::optional<BootstrapOptions> bootstrap;
    /// Reused when given; computed on demand for first-order mode otherwise.
    const PerturbationProfile *profile = nullptr;
};

/// One energy per mapping, then an OLS fit of energy against CES. The
/// intercept is the zero-noise estimate. Diagnostics need a profile and n >= 4.
inline ZneResult extrapolate(const Circuit &circuit, std::span<const double> theta,
                             const PauliHamiltonian &h, const ErrorModel &model,
                             const std::vector<Permutation> &perms,
                             const ExtrapolateOptions &options = {}) {
    if (perms.empty()) throw std::invalid_argument("need at least one permutation");
    std::optional<PerturbationProfile> own_profile;
    const PerturbationProfile *profile = options.profile;
    if (profile == nullptr && options.mode == EnergyMode::FirstOrder) {
        own_profile = compute_profile(circuit, theta, h, options.jobs);
        profile = &*own_profile;
    }
    PermutationEnergyCache cache(circuit, std::vector<double>(theta.begin(), theta.end()), h, model,
                                 options.mode, profile);
    ZneResult r = fit_samples(cache.samples(perms, options.jobs), options.mode, options.bootstrap);
    if (profile != nullptr && model.num_qubits() >= 4) {
        ZneDiagnostics diag;
        diag.moments = permutation_moments(model);
        diag.covariance = covariance_decomposition(*profile, multigraph_stats(circuit), diag.moments);
        r.diagnostics = diag;
    }
    return r;
}

inline nlohmann::json to_json(const ZneResult &r) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto &s : r.samples)
        samples.push_back({{"permutation_lehmer", s.lehmer}, {"ces", s.ces}, {"energy", s.energy}});
    nlohmann::json j{{"mode", energy_mode_name(r.mode)},
                     {"degenerate", r.degenerate},
                     {"intercept", r.intercept},
                     {"slope", r.slope},
                     {"slope_convention", "energy per unit CES, CES = d * sum of mapped rates"},
                     {"num_samples", r.samples.size()},
                     {"min_energy", r.min_energy()},
                     {"samples", std::move(samples)}};
    if (r.ci) j["ci"] = {{"low", r.ci->low}, {"high", r.ci->high},
                         {"rejected_resamples", r.ci->rejected_resamples}};
    if (r.diagnostics) {
        const auto &d = *r.diagnostics;
        j["diagnostics"] = {{"kappa2", d.moments.kappa2},
                            {"kappa1", d.moments.kappa1},
                            {"kappa0", d.moments.kappa0},
                            {"covariance_terms", d.covariance.terms},
                            {"covariance_total", d.covariance.total}};
    }
    return j;
}

/// CSV with fixed columns permutation_lehmer,ces,energy.
inline void write_samples_csv(std::ostream &os, const std::vector<ZneSample> &samples) {
    os << "permutation_lehmer,ces,energy\n";
    os.precision(17);
    for (const auto &s : samples) os << s.lehmer << ',' << s.ces << ',' << s.energy << '\n';
}

} // namespace permzne
