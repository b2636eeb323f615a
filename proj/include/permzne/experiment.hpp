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

// Config-driven experiment pipelines behind the command-line runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "hamiltonian.hpp"
#include "noise.hpp"
#include "perturbation.hpp"
#include "svg.hpp"
#include "vqe.hpp"
#include "zne.hpp"

namespace permzne {

using nlohmann::json;

struct PermutationSpec {
    bool all = true;
    std::size_t count = 50;
    std::uint64_t seed = 0;
};

struct ExperimentConfig {
    int n = 6;
    Topology topology = Topology::Ring;
    std::string hamiltonian_type = "a"; // "a", "b" or "explicit"
    std::vector<double> couplings;
    std::vector<double> fields;
    std::optional<int> depth; // empty = auto
    int max_depth = 20;
    double q_max = 1e-3;
    std::uint64_t table_seed = 0;
    PermutationSpec permutations;
    EnergyMode energy_mode = EnergyMode::ExactSim;
    VqeOptions vqe;
    std::optional<std::string> vqe_outcome_path;
    BootstrapOptions bootstrap;
    std::vector<double> sweep_q_max{1e-4, 2e-4, 5e-4, 1e-3, 2e-3};
    std::vector<int> scaling_n{4, 6};
    int repetitions = 50;
    std::size_t pool_size = 50;
    std::vector<std::size_t> pool_sizes{5, 10, 20, 50, 100, 200};
    std::string output_dir = "out";
};

inline ExperimentConfig parse_config(const json &j) {
    ExperimentConfig c;
    c.n = j.value("n", c.n);
    c.topology = parse_topology(j.value("topology", std::string("ring")));
    if (j.contains("hamiltonian")) {
        const auto &h = j.at("hamiltonian");
        if (h.is_string()) {
            c.hamiltonian_type = h.get<std::string>();
            if (c.hamiltonian_type != "a" && c.hamiltonian_type != "b")
                throw std::invalid_argument("hamiltonian type must be \"a\", \"b\" or {J, h}");
        } else {
            c.hamiltonian_type = "explicit";
            c.couplings = h.at("J").get<std::vector<double>>();
            c.fields = h.at("h").get<std::vector<double>>();
        }
    }
    if (j.contains("depth")) {
        const auto &d = j.at("depth");
        if (d.is_string()) {
            if (d.get<std::string>() != "auto") throw std::invalid_argument("depth must be an integer or \"auto\"");
        } else {
            c.depth = d.get<int>();
        }
    }
    c.max_depth = j.value("max_depth", c.max_depth);
    c.q_max = j.value("q_max", c.q_max);
    c.table_seed = j.value("table_seed", c.table_seed);
    if (j.contains("permutations")) {
        const auto &p = j.at("permutations");
        const auto mode = p.value("mode", std::string("all"));
        if (mode == "all") {
            c.permutations.all = true;
        } else if (mode == "sample") {
            c.permutations.all = false;
            c.permutations.count = p.value("count", c.permutations.count);
        } else {
            throw std::invalid_argument("permutation mode must be all or sample");
        }
        c.permutations.seed = p.value("seed", c.permutations.seed);
    }
    c.energy_mode = parse_energy_mode(j.value("energy_mode", std::string("exact_sim")));
    if (j.contains("vqe")) {
        const auto &v = j.at("vqe");
        c.vqe.seed_pool = v.value("seed_pool", c.vqe.seed_pool);
        c.vqe.base_seed = v.value("base_seed", c.vqe.base_seed);
        c.vqe.max_iters = v.value("max_iters", c.vqe.max_iters);
        c.vqe.grad_tol = v.value("grad_tol", c.vqe.grad_tol);
        c.vqe.init_sigma = v.value("init_sigma", c.vqe.init_sigma);
        if (v.contains("outcome")) c.vqe_outcome_path = v.at("outcome").get<std::string>();
    }
    if (j.contains("bootstrap")) {
        const auto &b = j.at("bootstrap");
        c.bootstrap.resamples = b.value("resamples", c.bootstrap.resamples);
        c.bootstrap.seed = b.value("seed", c.bootstrap.seed);
        c.bootstrap.confidence = b.value("confidence", c.bootstrap.confidence);
    }
    if (j.contains("sweep")) c.sweep_q_max = j.at("sweep").value("q_max", c.sweep_q_max);
    if (j.contains("scaling")) {
        const auto &s = j.at("scaling");
        c.scaling_n = s.value("n", c.scaling_n);
        c.repetitions = s.value("repetitions", c.repetitions);
        c.pool_size = s.value("pool_size", c.pool_size);
        c.pool_sizes = s.value("pool_sizes", c.pool_sizes);
    }
    c.output_dir = j.value("output_dir", c.output_dir);

    if (c.n < 2) throw std::invalid_argument("n must be >= 2");
    if (!c.depth && c.hamiltonian_type == "explicit")
        throw std::invalid_argument("auto depth requires hamiltonian type a or b");
    if (c.permutations.all && c.n > kMaxEnumerationQubits)
        throw std::invalid_argument("permutation mode all requires n <= " +
                                    std::to_string(kMaxEnumerationQubits));
    if (!(c.q_max >= 0.0 && c.q_max <= 1.0)) throw std::invalid_argument("q_max must lie in [0, 1]");
    if (c.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    return c;
}

inline json to_json(const ExperimentConfig &c) {
    json h;
    if (c.hamiltonian_type == "explicit")
        h = {{"J", c.couplings}, {"h", c.fields}};
    else
        h = c.hamiltonian_type;
    json perms = c.permutations.all
                     ? json{{"mode", "all"}, {"seed", c.permutations.seed}}
                     : json{{"mode", "sample"}, {"count", c.permutations.count}, {"seed", c.permutations.seed}};
    json j{{"n", c.n},
           {"topology", topology_name(c.topology)},
           {"hamiltonian", h},
           {"max_depth", c.max_depth},
           {"q_max", c.q_max},
           {"table_seed", c.table_seed},
           {"permutations", perms},
           {"energy_mode", energy_mode_name(c.energy_mode)},
           {"vqe",
            {{"seed_pool", c.vqe.seed_pool},
             {"base_seed", c.vqe.base_seed},
             {"max_iters", c.vqe.max_iters},
             {"grad_tol", c.vqe.grad_tol},
             {"init_sigma", c.vqe.init_sigma}}},
           {"bootstrap",
            {{"resamples", c.bootstrap.resamples},
             {"seed", c.bootstrap.seed},
             {"confidence", c.bootstrap.confidence}}},
           {"sweep", {{"q_max", c.sweep_q_max}}},
           {"scaling",
            {{"n", c.scaling_n},
             {"repetitions", c.repetitions},
             {"pool_size", c.pool_size},
             {"pool_sizes", c.pool_sizes}}},
           {"output_dir", c.output_dir}};
    j["depth"] = c.depth ? json(*c.depth) : json("auto");
    if (c.vqe_outcome_path) j["vqe"]["outcome"] = *c.vqe_outcome_path;
    return j;
}

inline PauliHamiltonian make_hamiltonian(const ExperimentConfig &c, int n) {
    if (c.hamiltonian_type == "a") return build_tfim_uniform(n);
    if (c.hamiltonian_type == "b") return build_tfim_strong_bond(n);
    return build_tfim(n, c.couplings, c.fields);
}

struct RunContext {
    std::filesystem::path out_dir;
    unsigned jobs = 1;
    bool svg = false;
    std::ostream *log = &std::cerr;
};

/// Noiseless VQE stage shared by all commands.
struct VqeStage {
    PauliHamiltonian hamiltonian;
    Circuit circuit;
    VqeOutcome outcome;
    double ground = 0.0;
    double gap = 0.0;
    bool reached = true;
    std::vector<DepthScanRow> scan;
};

inline VqeStage run_vqe_stage(const ExperimentConfig &c, int n, const RunContext &ctx) {
    auto h = make_hamiltonian(c, n);
    const auto spectrum = exact_spectrum(h);
    VqeOptions opt = c.vqe;
    opt.jobs = ctx.jobs;
    if (c.depth) {
        Circuit circuit = build_hea(n, *c.depth, c.topology);
        VqeOutcome outcome;
        if (c.vqe_outcome_path) {
            std::ifstream in(*c.vqe_outcome_path);
            if (!in) throw std::runtime_error("cannot open VQE outcome " + *c.vqe_outcome_path);
            const json j = json::parse(in);
            outcome = vqe_outcome_from_json(j.contains("outcome") ? j.at("outcome") : j);
            circuit.check_parameters(outcome.theta_star);
        } else {
            outcome = optimize_multistart(circuit, h, opt);
        }
        VqeStage st{std::move(h), circuit, outcome, ground_energy(spectrum), spectral_gap(spectrum), true, {}};
        st.reached = st.outcome.energy - st.ground <= 1e-2 * st.gap;
        st.scan.push_back({*c.depth, st.outcome});
        return st;
    }
    auto scan = auto_depth(n, c.topology, h, opt, c.max_depth);
    const auto &last = scan.rows.back();
    VqeStage st{std::move(h), build_hea(n, last.depth, c.topology), last.best, scan.ground, scan.gap,
                scan.reached, scan.rows};
    return st;
}

inline json vqe_stage_json(const VqeStage &st) {
    json scan = json::array();
    for (const auto &row : st.scan)
        scan.push_back({{"depth", row.depth},
                        {"energy", row.best.energy},
                        {"error", row.best.energy - st.ground},
                        {"error_over_gap", (row.best.energy - st.ground) / st.gap},
                        {"seed", row.best.seed},
                        {"converged", row.best.converged}});
    return {{"depth", st.circuit.depth()},
            {"ground_energy", st.ground},
            {"spectral_gap", st.gap},
            {"error", st.outcome.energy - st.ground},
            {"error_over_gap", (st.outcome.energy - st.ground) / st.gap},
            {"target_reached", st.reached},
            {"scan", scan},
            {"outcome", to_json(st.outcome)}};
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

inline void write_json(const std::filesystem::path &path, const json &j) {
    write_text(path, j.dump(2) + "\n");
}

inline std::vector<Permutation> resolve_permutations(const ExperimentConfig &c, int n) {
    if (c.permutations.all) return enumerate_permutations(n);
    return sample_permutations(n, c.permutations.count, c.permutations.seed);
}

/// `vqe`: noiseless optimization (depth scan when depth is auto).
inline int cmd_vqe(const ExperimentConfig &c, const RunContext &ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    const auto st = run_vqe_stage(c, c.n, ctx);
    json out{{"config", to_json(c)},
             {"hamiltonian", to_json(st.hamiltonian)},
             {"circuit", {{"num_qubits", st.circuit.num_qubits()},
                          {"depth", st.circuit.depth()},
                          {"topology", topology_name(c.topology)},
                          {"num_parameters", st.circuit.num_parameters()}}},
             {"vqe", vqe_stage_json(st)},
             {"outcome", to_json(st.outcome)}};
    write_json(ctx.out_dir / "vqe.json", out);
    write_json(ctx.out_dir / "circuit.json", to_json(st.circuit));
    *ctx.log << "vqe: depth " << st.circuit.depth() << ", E* = " << st.outcome.energy
             << ", E* - E_ground = " << st.outcome.energy - st.ground << " ("
             << (st.outcome.energy - st.ground) / st.gap << " gap)\n";
    if (!st.reached) {
        *ctx.log << "vqe: target error 1e-2 * gap not reached within depth " << st.circuit.depth()
                 << "\n";
        return 2;
    }
    return 0;
}

/// Max over samples of |dy| / |delta x| against the tightest bound, first-order terms.
inline json bound_summary(const PerturbationProfile &prof, const Circuit &circuit,
                          const ErrorModel &model, const std::vector<Permutation> &perms) {
    double worst_margin = -std::numeric_limits<double>::infinity();
    double max_rel = 0.0;
    std::size_t violations = 0;
    for (const auto &pi : perms) {
        const auto t = first_order_terms(prof, circuit, model, pi);
        const auto b = deviation_bounds(prof, circuit, model, pi);
        const double rel = relative_deviation(t);
        max_rel = std::max(max_rel, rel);
        worst_margin = std::max(worst_margin, rel - b.bound);
        if (rel > b.bound + 1e-12) ++violations;
    }
    const auto b0 = deviation_bounds(prof, circuit, model, perms.front());
    return {{"b1", b0.b1},
            {"max_relative_deviation", max_rel},
            {"max_excess_over_bound", worst_margin},
            {"violations", violations}};
}

/// `zne`: noisy energies over mappings, fit, CI, diagnostics.
inline int cmd_zne(const ExperimentConfig &c, const RunContext &ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    const auto st = run_vqe_stage(c, c.n, ctx);
    const auto model = sample_error_table(c.n, c.q_max, c.table_seed);
    const auto perms = resolve_permutations(c, c.n);
    const auto profile = compute_profile(st.circuit, st.outcome.theta_star, st.hamiltonian, ctx.jobs);

    ExtrapolateOptions xo;
    xo.mode = c.energy_mode;
    xo.jobs = ctx.jobs;
    xo.bootstrap = c.bootstrap;
    xo.profile = &profile;
    const auto r = extrapolate(st.circuit, st.outcome.theta_star, st.hamiltonian, model, perms, xo);
    const double e0 = st.outcome.energy;
    const double err = r.intercept - e0;
    const double min_shift = r.min_energy() - e0;

    json out{{"config", to_json(c)},
             {"vqe", vqe_stage_json(st)},
             {"error_table", to_json(model)},
             {"e0", e0},
             {"zne", to_json(r)},
             {"extrapolation_error", err},
             {"min_noisy_shift", min_shift},
             {"error_ratio", err == 0.0 ? json(nullptr) : json(min_shift / std::abs(err))},
             {"profile_summary", {{"mean", profile.mean}, {"delta", profile.delta()}}},
             {"deviation_bounds", bound_summary(profile, st.circuit, model, perms)}};
    write_json(ctx.out_dir / "zne.json", out);
    write_json(ctx.out_dir / "profile.json", to_json(profile));
    {
        std::ostringstream os;
        write_samples_csv(os, r.samples);
        write_text(ctx.out_dir / "samples.csv", os.str());
    }
    {
        std::ostringstream os;
        write_insertion_csv(os, profile, st.circuit);
        write_text(ctx.out_dir / "insertions.csv", os.str());
    }
    {
        std::ostringstream os;
        write_error_csv(os, model);
        write_text(ctx.out_dir / "error_table.csv", os.str());
    }
    if (ctx.svg) {
        std::ostringstream os;
        write_zne_svg(os, r, e0);
        write_text(ctx.out_dir / "zne.svg", os.str());
    }
    if (r.degenerate)
        *ctx.log << "zne: warning: degenerate design (all circuit error sums equal); reporting mean energy "
                 << r.intercept << "\n";
    else
        *ctx.log << "zne: intercept " << r.intercept << ", E0 " << e0 << ", error " << err
                 << ", min noisy shift / |error| = " << (err == 0.0 ? INFINITY : min_shift / std::abs(err))
                 << "\n";
    return 0;
}

/// Least-squares slope of log|err| against log q_max; empty with fewer than
/// two usable points.
inline std::optional<double> log_log_slope(const std::vector<double> &q, const std::vector<double> &err) {
    std::vector<FitPoint> pts;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0.0 && err[i] != 0.0) pts.push_back({std::log(q[i]), std::log(std::abs(err[i]))});
    if (pts.size() < 2) return std::nullopt;
    try {
        return linear_fit(pts).slope;
    } catch (const DegenerateDesignError &) {
        return std::nullopt;
    }
}

struct SweepPoint {
    double q_max = 0.0;
    ZneResult result;
    double error = 0.0;
    double max_q_T_d = 0.0;
};

/// ZNE at several noise magnitudes with one shared relative table: rates are
/// uniform[0, 1] draws scaled by each q_max.
inline std::vector<SweepPoint> run_sweep(const Circuit &circuit, std::span<const double> theta,
                                         const PauliHamiltonian &h, double e0,
                                         const std::vector<double> &q_values, std::uint64_t table_seed,
                                         const std::vector<Permutation> &perms,
                                         const ExtrapolateOptions &xo) {
    const auto base = sample_error_table(circuit.num_qubits(), 1.0, table_seed);
    std::vector<SweepPoint> out;
    for (double q : q_values) {
        const auto model = base.scaled(q);
        SweepPoint pt;
        pt.q_max = q;
        pt.result = extrapolate(circuit, theta, h, model, perms, xo);
        pt.error = pt.result.intercept - e0;
        pt.max_q_T_d = model.max_rate() * static_cast<double>(circuit.num_two_qubit_gates());
        out.push_back(std::move(pt));
    }
    return out;
}

/// `sweep`: extrapolation error against noise magnitude.
inline int cmd_sweep(const ExperimentConfig &c, const RunContext &ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    const auto st = run_vqe_stage(c, c.n, ctx);
    const auto perms = resolve_permutations(c, c.n);
    ExtrapolateOptions xo;
    xo.mode = c.energy_mode;
    xo.jobs = ctx.jobs;
    xo.bootstrap = c.bootstrap;
    std::optional<PerturbationProfile> profile;
    if (c.energy_mode == EnergyMode::FirstOrder) {
        profile = compute_profile(st.circuit, st.outcome.theta_star, st.hamiltonian, ctx.jobs);
        xo.profile = &*profile;
    }
    const double e0 = st.outcome.energy;
    const auto points = run_sweep(st.circuit, st.outcome.theta_star, st.hamiltonian, e0, c.sweep_q_max,
                                  c.table_seed, perms, xo);
    json rows = json::array();
    std::vector<double> q, err;
    std::ostringstream csv;
    csv.precision(17);
    csv << "q_max,intercept,error,ci_low,ci_high,min_energy,max_q_T_d,below_gap\n";
    for (const auto &p : points) {
        q.push_back(p.q_max);
        err.push_back(p.error);
        const bool below_gap = std::abs(p.error) < st.gap;
        json row{{"q_max", p.q_max},
                 {"intercept", p.result.intercept},
                 {"error", p.error},
                 {"degenerate", p.result.degenerate},
                 {"min_energy", p.result.min_energy()},
                 {"max_q_T_d", p.max_q_T_d},
                 {"error_below_gap", below_gap}};
        if (p.result.ci) row["ci"] = {{"low", p.result.ci->low}, {"high", p.result.ci->high}};
        rows.push_back(row);
        csv << p.q_max << ',' << p.result.intercept << ',' << p.error << ',';
        if (p.result.ci)
            csv << p.result.ci->low << ',' << p.result.ci->high;
        else
            csv << ',';
        csv << ',' << p.result.min_energy() << ',' << p.max_q_T_d << ',' << (below_gap ? 1 : 0) << '\n';
    }
    const auto slope = log_log_slope(q, err);
    json out{{"config", to_json(c)}, {"vqe", vqe_stage_json(st)}, {"e0", e0}, {"points", rows}};
    out["log_log_slope"] = slope ? json(*slope) : json(nullptr);
    write_json(ctx.out_dir / "sweep.json", out);
    write_text(ctx.out_dir / "sweep.csv", csv.str());
    if (slope)
        *ctx.log << "sweep: log-log slope of |error| vs q_max = " << *slope << "\n";
    else
        *ctx.log << "sweep: fewer than two usable q_max values; slope omitted\n";
    return 0;
}

struct ErrorDistribution {
    std::vector<double> errors;
    double mean = 0.0;
    double mean_abs = 0.0;
    std::optional<double> stddev;
};

inline ErrorDistribution summarize_errors(std::vector<double> errors) {
    ErrorDistribution d;
    d.errors = std::move(errors);
    const auto k = static_cast<double>(d.errors.size());
    for (double e : d.errors) {
        d.mean += e / k;
        d.mean_abs += std::abs(e) / k;
    }
    if (d.errors.size() > 1) {
        double ss = 0.0;
        for (double e : d.errors) ss += (e - d.mean) * (e - d.mean);
        d.stddev = std::sqrt(ss / (k - 1.0));
    }
    return d;
}

/// Pool sizes above n! are clamped to n!.
inline std::size_t effective_pool_size(int n, std::size_t pool_size) {
    return std::min<std::uint64_t>(pool_size, factorial_saturating(n));
}

/// ZNE error (intercept - e0) over `repetitions` independent pools of
/// `pool_size` sampled mappings; repetition r draws with seed base_seed + r.
/// Energies come from `cache`, so repeated mappings are simulated once.
inline ErrorDistribution zne_error_distribution(PermutationEnergyCache &cache, int n, double e0,
                                                std::size_t pool_size, int repetitions,
                                                std::uint64_t base_seed, unsigned jobs) {
    pool_size = effective_pool_size(n, pool_size);
    std::vector<double> errors;
    for (int rep = 0; rep < repetitions; ++rep) {
        const auto perms = sample_permutations(n, pool_size, base_seed + static_cast<std::uint64_t>(rep));
        const auto r = fit_samples(cache.samples(perms, jobs), EnergyMode::ExactSim);
        errors.push_back(r.intercept - e0);
    }
    return summarize_errors(std::move(errors));
}

inline json distribution_json(const ErrorDistribution &d) {
    json j{{"mean", d.mean}, {"mean_abs", d.mean_abs}, {"errors", d.errors}};
    j["stddev"] = d.stddev ? json(*d.stddev) : json(nullptr);
    return j;
}

/// `scaling`: error distributions across system sizes and across pool sizes.
inline int cmd_scaling(const ExperimentConfig &c, const RunContext &ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    std::ostringstream csv;
    csv.precision(17);
    csv << "table,n,depth,pool_size,repetitions,mean_error,mean_abs_error,std_error\n";
    auto csv_row = [&](const char *table, int n, int depth, std::size_t pool, const ErrorDistribution &d) {
        csv << table << ',' << n << ',' << depth << ',' << pool << ',' << d.errors.size() << ',' << d.mean
            << ',' << d.mean_abs << ',';
        if (d.stddev) csv << *d.stddev;
        csv << '\n';
    };

    json by_n = json::array();
    for (int n : c.scaling_n) {
        const auto st = run_vqe_stage(c, n, ctx);
        const auto model = sample_error_table(n, c.q_max, c.table_seed);
        PermutationEnergyCache cache(st.circuit, st.outcome.theta_star, st.hamiltonian, model,
                                     EnergyMode::ExactSim);
        const auto d = zne_error_distribution(cache, n, st.outcome.energy, c.pool_size, c.repetitions,
                                              c.permutations.seed, ctx.jobs);
        const std::size_t pool = effective_pool_size(n, c.pool_size);
        by_n.push_back({{"n", n}, {"depth", st.circuit.depth()}, {"e0", st.outcome.energy},
                        {"gap", st.gap}, {"pool_size", pool}, {"distribution", distribution_json(d)}});
        csv_row("by_n", n, st.circuit.depth(), pool, d);
        *ctx.log << "scaling: n=" << n << " mean error " << d.mean << ", std "
                 << (d.stddev ? std::to_string(*d.stddev) : std::string("n/a")) << "\n";
    }

    json by_pool = json::array();
    if (!c.pool_sizes.empty()) {
        const auto st = run_vqe_stage(c, c.n, ctx);
        const auto model = sample_error_table(c.n, c.q_max, c.table_seed);
        PermutationEnergyCache cache(st.circuit, st.outcome.theta_star, st.hamiltonian, model,
                                     EnergyMode::ExactSim);
        for (std::size_t pool : c.pool_sizes) {
            const auto d = zne_error_distribution(cache, c.n, st.outcome.energy, pool, c.repetitions,
                                                  c.permutations.seed, ctx.jobs);
            const std::size_t used = effective_pool_size(c.n, pool);
            by_pool.push_back({{"pool_size", used}, {"distribution", distribution_json(d)}});
            csv_row("by_pool", c.n, st.circuit.depth(), used, d);
        }
    }
    json out{{"config", to_json(c)}, {"by_n", by_n}, {"by_pool", by_pool}};
    if (c.repetitions == 1) out["notice"] = "one repetition per cell; standard deviation absent";
    write_json(ctx.out_dir / "scaling.json", out);
    write_text(ctx.out_dir / "scaling.csv", csv.str());
    return 0;
}

} // namespace permzne
