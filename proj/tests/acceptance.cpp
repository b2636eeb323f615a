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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "permzne/experiment.hpp"

using namespace permzne;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string &name, const std::function<Outcome()> &body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++g_failures;
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> random_angles(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(count);
    for (double &x : v) x = 2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi;
    return v;
}

struct Instance {
    PauliHamiltonian h;
    Circuit circuit;
    VqeOutcome vqe;
    double ground = 0.0;
    double gap = 0.0;
    double vqe_seconds = 0.0;
};

Instance prepare(PauliHamiltonian h, int depth, Topology topo) {
    const auto spectrum = exact_spectrum(h);
    Circuit c = build_hea(h.num_qubits(), depth, topo);
    const auto t0 = std::chrono::steady_clock::now();
    VqeOptions opt; // ten-seed pool
    auto out = optimize_multistart(c, h, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(h), std::move(c), std::move(out), ground_energy(spectrum), spectral_gap(spectrum), secs};
}

struct FullZne {
    ZneResult result;
    PerturbationProfile profile;
    ErrorModel model{1};
};

FullZne full_zne(const Instance &inst, std::uint64_t table_seed) {
    FullZne z;
    z.model = sample_error_table(inst.h.num_qubits(), 1e-3, table_seed);
    z.profile = compute_profile(inst.circuit, inst.vqe.theta_star, inst.h);
    ExtrapolateOptions xo;
    xo.profile = &z.profile;
    z.result = extrapolate(inst.circuit, inst.vqe.theta_star, inst.h, z.model,
                           enumerate_permutations(inst.h.num_qubits()), xo);
    return z;
}

Outcome ratio_criterion(const Instance &inst, const FullZne &z, double required) {
    const double e0 = inst.vqe.energy;
    const double err = std::abs(z.result.intercept - e0);
    const double shift = z.result.min_energy() - e0;
    const double ratio = shift / err;
    return {ratio >= required,
            fmt("|alpha - E0| = %.3e, min(E - E0) = %.3e, ratio %.1f (need >= %.0f), 720 mappings",
                err, shift, ratio, required)};
}

Outcome bound_criterion(const Instance &inst, const FullZne &z) {
    double worst = -1e300, max_rel = 0.0;
    std::size_t violations = 0;
    for (const auto &pi : enumerate_permutations(inst.h.num_qubits())) {
        const auto t = first_order_terms(z.profile, inst.circuit, z.model, pi);
        const auto b = deviation_bounds(z.profile, inst.circuit, z.model, pi);
        const double rel = std::abs(t.deviation) / std::abs(t.linear);
        max_rel = std::max(max_rel, rel);
        worst = std::max(worst, rel - b.bound);
        if (b.degenerate || rel > b.bound + 1e-12) ++violations;
    }
    return {violations == 0, fmt("max |dy|/|dx| = %.3e, max excess over min(B1,B2) = %.3e, violations %zu",
                                 max_rel, worst, violations)};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    std::cout << "acceptance: preparing VQE instances (n = 6, ring)\n" << std::flush;
    const Instance uniform = prepare(build_tfim_uniform(6), 4, Topology::Ring);
    const Instance strong = prepare(build_tfim_strong_bond(6), 8, Topology::Ring);

    report(1, "first-order exactness on ring circuits", [] {
        double worst = 0.0;
        int runs = 0;
        for (int n = 4; n <= 6; ++n)
            for (int d : {1, 3})
                for (std::uint64_t seed : {0u, 1u, 2u}) {
                    const auto c = build_hea(n, d, Topology::Ring);
                    const auto h = seed == 1 ? build_tfim_strong_bond(n) : build_tfim_uniform(n);
                    const auto theta = random_angles(c.num_parameters(), 1000 + seed * 7 + static_cast<std::uint64_t>(n));
                    const auto prof = compute_profile(c, theta, h);
                    const auto m = sample_error_table(n, seed == 2 ? 0.05 : 1e-3, 200 + seed);
                    ExtrapolateOptions xo;
                    xo.mode = EnergyMode::FirstOrder;
                    xo.profile = &prof;
                    const auto r = extrapolate(c, theta, h, m, enumerate_permutations(n), xo);
                    worst = std::max(worst, std::abs(r.intercept - prof.e0) / std::max(1.0, std::abs(prof.e0)));
                    ++runs;
                }
        return Outcome{worst <= 1e-10, fmt("max |alpha - E0| / max(1,|E0|) = %.2e over %d runs (tol 1e-10)", worst, runs)};
    });

    report(2, "first-order residual halving ratio", [] {
        const auto h = build_tfim_uniform(4);
        const auto c = build_hea(4, 2, Topology::Ring);
        const auto theta = optimize_multistart(c, h, {}).theta_star;
        const auto prof = compute_profile(c, theta, h);
        const auto m = sample_error_table(4, 1e-3, 0);
        const auto half = m.scaled(0.5);
        double lo = 1e300, hi = 0.0;
        int count = 0;
        for (const auto &pi : enumerate_permutations(4)) {
            const double r1 = std::abs(noisy_energy(c, theta, h, m, pi) - first_order_energy(prof, c, m, pi));
            const double r2 = std::abs(noisy_energy(c, theta, h, half, pi) - first_order_energy(prof, c, half, pi));
            lo = std::min(lo, r1 / r2);
            hi = std::max(hi, r1 / r2);
            ++count;
        }
        return Outcome{lo >= 3.2 && hi <= 4.8, fmt("ratio range [%.4f, %.4f] over %d mappings (need [3.2, 4.8])", lo, hi, count)};
    });

    std::optional<FullZne> zu, zs;
    report(3, "uniform-field ring, all mappings", [&] {
        zu = full_zne(uniform, 0);
        return ratio_criterion(uniform, *zu, 100.0);
    });
    report(4, "strong-bond ring, all mappings", [&] {
        zs = full_zne(strong, 0);
        return ratio_criterion(strong, *zs, 30.0);
    });

    report(5, "VQE accuracy at depths 4 and 8", [&] {
        const double ea = (uniform.vqe.energy - uniform.ground) / uniform.gap;
        const double eb = (strong.vqe.energy - strong.ground) / strong.gap;
        const bool gap_ok = std::abs(uniform.gap - 0.26) <= 0.02;
        const bool time_ok = uniform.vqe_seconds <= 120.0 && strong.vqe_seconds <= 120.0;
        return Outcome{ea <= 1e-2 && eb <= 1e-2 && gap_ok && time_ok,
                       fmt("uniform err/gap %.2e (gap %.4f, %.1f s), strong-bond err/gap %.2e (gap %.4f, %.1f s)",
                           ea, uniform.gap, uniform.vqe_seconds, eb, strong.gap, strong.vqe_seconds)};
    });

    report(6, "extrapolation error against noise magnitude", [&] {
        const std::vector<double> qs{1e-4, 2e-4, 5e-4, 1e-3, 2e-3};
        const auto perms = sample_permutations(6, 50, 0);
        const auto points = run_sweep(uniform.circuit, uniform.vqe.theta_star, uniform.h, uniform.vqe.energy, qs, 0,
                                      perms, {});
        std::vector<double> err;
        std::string list;
        for (const auto &p : points) {
            err.push_back(p.error);
            list += fmt(" %.2e", p.error);
        }
        const auto slope = log_log_slope(qs, err);
        return Outcome{slope && *slope >= 0.7 && *slope <= 1.5,
                       fmt("log-log slope %.3f (need [0.7, 1.5]); errors:", slope.value_or(NAN)) + list};
    });

    report(7, "error spread against pool size, ring and line", [&] {
        bool ok = true;
        std::string detail;
        for (auto topo : {Topology::Ring, Topology::Line}) {
            std::optional<Instance> line;
            if (topo == Topology::Line) line = prepare(build_tfim_uniform(6), 4, topo);
            const Instance &inst = line ? *line : uniform;
            PermutationEnergyCache cache(inst.circuit, inst.vqe.theta_star, inst.h, sample_error_table(6, 1e-3, 0),
                                         EnergyMode::ExactSim);
            std::vector<double> stds;
            detail += std::string(topology_name(topo)) + fmt(" (E*-Eg %.1e):", inst.vqe.energy - inst.ground);
            for (std::size_t pool : {10u, 50u, 200u}) {
                const auto d = zne_error_distribution(cache, 6, inst.vqe.energy, pool, 50, 0, 1);
                stds.push_back(*d.stddev);
                ok = ok && d.mean_abs < inst.gap / 10.0;
                detail += fmt(" pool %zu std %.2e mean|err| %.2e;", pool, *d.stddev, d.mean_abs);
            }
            ok = ok && stds[0] > stds[1] && stds[1] > stds[2];
            detail += " ";
        }
        return Outcome{ok, detail + fmt("(gap/10 = %.3e)", uniform.gap / 10.0)};
    });

    report(8, "deviation bounds on the full-mapping instances", [&] {
        if (!zu || !zs) return Outcome{false, "criterion 3 or 4 did not produce data"};
        const auto a = bound_criterion(uniform, *zu);
        const auto b = bound_criterion(strong, *zs);
        return Outcome{a.pass && b.pass, "uniform: " + a.detail + "; strong-bond: " + b.detail};
    });

    report(9, "engine invariants", [] {
        std::string detail;
        bool ok = true;

        // CPTP after noisy evolution.
        double min_eig = 1.0;
        for (int n = 2; n <= 6; ++n) {
            const auto c = build_hea(n, 2, Topology::Ring);
            const auto rho = run_noisy_circuit(c, random_angles(c.num_parameters(), static_cast<std::uint64_t>(n)),
                                               sample_error_table(n, 0.5, 1), Permutation::identity(n),
                                               {.check_invariants = true});
            const auto rep = cptp_report(rho);
            ok = ok && rep.ok();
            min_eig = std::min(min_eig, rep.min_eigenvalue);
        }
        detail += fmt("CPTP min eig %.1e;", min_eig);

        // Mixture expansion against dense evolution of every channel configuration.
        {
            const auto c = build_hea(3, 2, Topology::Line);
            const auto theta = random_angles(c.num_parameters(), 9);
            const std::vector<double> rates{0.2, 0.07, 0.33, 0.5};
            const auto rho = oracle::to_mat(run_with_gate_rates(c, theta, rates));
            oracle::Mat mix = oracle::Mat::Zero(8, 8);
            for (unsigned s = 0; s < 16; ++s) {
                std::vector<double> cfg(4);
                double w = 1.0;
                for (unsigned g = 0; g < 4; ++g) {
                    const bool on = (s >> g) & 1u;
                    cfg[g] = on ? 1.0 : 0.0;
                    w *= on ? rates[g] : 1.0 - rates[g];
                }
                mix += w * oracle::run(c, theta, cfg);
            }
            const double dev = (rho - mix).cwiseAbs().maxCoeff();
            ok = ok && dev <= 1e-12;
            detail += fmt(" mixture dev %.1e;", dev);
        }

        // Shift-rule gradient against central differences.
        {
            double worst = 0.0;
            for (int n = 2; n <= 4; ++n) {
                const auto c = build_hea(n, 2, Topology::Ring);
                const auto h = build_tfim_strong_bond(n);
                auto theta = random_angles(c.num_parameters(), 50 + static_cast<std::uint64_t>(n));
                const auto g = energy_gradient(c, h, theta);
                for (std::size_t p = 0; p < theta.size(); ++p) {
                    const double t = theta[p];
                    theta[p] = t + 1e-5;
                    const double plus = energy(c, h, theta);
                    theta[p] = t - 1e-5;
                    const double minus = energy(c, h, theta);
                    theta[p] = t;
                    worst = std::max(worst, std::abs(g[p] - (plus - minus) / 2e-5));
                }
            }
            ok = ok && worst <= 1e-6;
            detail += fmt(" gradient dev %.1e;", worst);
        }

        // Moments against enumeration over S_n.
        {
            double worst = 0.0;
            for (int n = 4; n <= 6; ++n) {
                const auto m = sample_error_table(n, 1.0, 70 + static_cast<std::uint64_t>(n));
                const auto k = permutation_moments(m);
                double b2 = 0.0, b1 = 0.0, b0 = 0.0;
                const auto all = enumerate_permutations(n);
                for (const auto &pi : all) {
                    const double q01 = mapped_rate(m, pi, {0, 1});
                    b2 += q01 * q01;
                    b1 += q01 * mapped_rate(m, pi, {1, 2});
                    b0 += q01 * mapped_rate(m, pi, {2, 3});
                }
                const double cnt = static_cast<double>(all.size());
                worst = std::max({worst, std::abs(k.kappa2 - b2 / cnt), std::abs(k.kappa1 - b1 / cnt),
                                  std::abs(k.kappa0 - b0 / cnt)});
            }
            ok = ok && worst <= 1e-12;
            detail += fmt(" kappa dev %.1e;", worst);
        }

        // Byte-identical reruns, including a threaded run.
        {
            const auto root = fs::temp_directory_path() / "permzne_acceptance";
            fs::remove_all(root);
            const auto config = parse_config(json{{"n", 4},
                                                  {"depth", 2},
                                                  {"hamiltonian", "b"},
                                                  {"table_seed", 5},
                                                  {"vqe", {{"seed_pool", 3}}},
                                                  {"bootstrap", {{"resamples", 300}, {"seed", 2}}}});
            std::ostringstream log;
            bool same = true;
            std::vector<fs::path> dirs{root / "a", root / "b", root / "c"};
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                RunContext ctx{dirs[i], i == 2 ? 4u : 1u, true, &log};
                same = same && cmd_zne(config, ctx) == 0;
            }
            for (const char *f : {"zne.json", "samples.csv", "profile.json", "insertions.csv", "error_table.csv", "zne.svg"})
                for (std::size_t i = 1; i < dirs.size(); ++i)
                    same = same && slurp(dirs[0] / f) == slurp(dirs[i] / f) && !slurp(dirs[0] / f).empty();
            fs::remove_all(root);
            ok = ok && same;
            detail += same ? " reruns byte-identical" : " reruns differ";
        }
        return Outcome{ok, detail};
    });

    std::printf("acceptance: %d failure(s)\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
