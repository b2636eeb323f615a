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
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace permzne {

/// Objective callback: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    int memory = 10;
    int max_iters = 5000;
    double grad_tol = 1e-9; // on the infinity norm
    double c1 = 1e-4;
    double c2 = 0.9;
    int max_line_search = 40;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string stop_reason;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

struct TrialPoint {
    double step = 0.0;
    double value = 0.0;
    double slope = 0.0;
    std::vector<double> x;
    std::vector<double> grad;
};

/// Minimizer of the cubic through (a, fa, da) and (b, fb, db), clamped to
/// the inner 80% of [a, b]; bisection when the cubic is unusable.
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double margin = 0.1 * (hi - lo);
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    double t = 0.5 * (a + b);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double denom = db - da + 2.0 * d2;
        if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
    }
    if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
    return t;
}

} // namespace detail

/// Limited-memory BFGS with a strong-Wolfe line search.
inline LbfgsResult minimize_lbfgs(const Objective &objective, std::vector<double> x0,
                                  const LbfgsOptions &opt = {}) {
    using detail::dot;
    const std::size_t dim = x0.size();
    LbfgsResult res;
    res.x = std::move(x0);
    std::vector<double> grad(dim);
    res.value = objective(res.x, grad);
    res.evaluations = 1;

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(dim), alpha_buf;

    auto evaluate = [&](double step) {
        detail::TrialPoint t;
        t.step = step;
        t.x.resize(dim);
        t.grad.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) t.x[i] = res.x[i] + step * dir[i];
        t.value = objective(t.x, t.grad);
        t.slope = dot(t.grad, dir);
        ++res.evaluations;
        return t;
    };

    for (res.iterations = 0; res.iterations < opt.max_iters; ++res.iterations) {
        res.grad_norm = detail::inf_norm(grad);
        if (res.grad_norm <= opt.grad_tol) {
            res.converged = true;
            res.stop_reason = "gradient tolerance reached";
            return res;
        }

        // Two-loop recursion.
        dir = grad;
        alpha_buf.assign(s_hist.size(), 0.0);
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha_buf[k] = rho_hist[k] * dot(s_hist[k], dir);
            for (std::size_t i = 0; i < dim; ++i) dir[i] -= alpha_buf[k] * y_hist[k][i];
        }
        const double gamma =
            s_hist.empty() ? 1.0 : dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (double &e : dir) e *= gamma;
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * dot(y_hist[k], dir);
            for (std::size_t i = 0; i < dim; ++i) dir[i] += (alpha_buf[k] - beta) * s_hist[k][i];
        }
        for (double &e : dir) e = -e;

        double slope0 = dot(grad, dir);
        if (!(slope0 < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t i = 0; i < dim; ++i) dir[i] = -grad[i];
            slope0 = dot(grad, dir);
        }

        const double f0 = res.value;
        const double first_step = s_hist.empty() ? std::min(1.0, 1.0 / detail::inf_norm(grad)) : 1.0;
        auto sufficient = [&](const detail::TrialPoint &t) {
            return t.value <= f0 + opt.c1 * t.step * slope0;
        };
        auto curvature = [&](const detail::TrialPoint &t) {
            return std::abs(t.slope) <= -opt.c2 * slope0;
        };

        detail::TrialPoint prev{0.0, f0, slope0, res.x, grad};
        std::optional<detail::TrialPoint> accepted;
        std::optional<detail::TrialPoint> lo, hi;
        double step = first_step;
        int evals = 0;
        for (; evals < opt.max_line_search; ++evals) {
            auto t = evaluate(step);
            if (!std::isfinite(t.value) || !sufficient(t) || (evals > 0 && t.value >= prev.value)) {
                lo = prev;
                hi = std::move(t);
                break;
            }
            if (curvature(t)) {
                accepted = std::move(t);
                break;
            }
            if (t.slope >= 0.0) {
                lo = t;
                hi = prev;
                break;
            }
            prev = std::move(t);
            step *= 2.0;
        }
        if (!accepted && lo) {
            // Zoom.
            for (; evals < opt.max_line_search; ++evals) {
                const double trial =
                    detail::cubic_step(lo->step, lo->value, lo->slope, hi->step,
                                       std::isfinite(hi->value) ? hi->value : lo->value + 1.0,
                                       std::isfinite(hi->slope) ? hi->slope : 0.0);
                auto t = evaluate(trial);
                if (!sufficient(t) || t.value >= lo->value) {
                    hi = std::move(t);
                } else {
                    if (curvature(t)) {
                        accepted = std::move(t);
                        break;
                    }
                    if (t.slope * (hi->step - lo->step) >= 0.0) hi = lo;
                    lo = std::move(t);
                }
                if (std::abs(hi->step - lo->step) <= 1e-16 * std::max(1.0, lo->step)) break;
            }
            // Settle for sufficient decrease if curvature was never met.
            if (!accepted && lo->step > 0.0) accepted = *lo;
        }
        if (!accepted && prev.step > 0.0) accepted = prev;

        if (!accepted) {
            if (!s_hist.empty()) {
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                continue;
            }
            res.stop_reason = "line search made no progress";
            return res;
        }

        std::vector<double> s(dim), y(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            s[i] = accepted->x[i] - res.x[i];
            y[i] = accepted->grad[i] - grad[i];
        }
        const double sy = dot(s, y);
        res.x = std::move(accepted->x);
        grad = std::move(accepted->grad);
        res.value = accepted->value;
        if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
    }
    res.grad_norm = detail::inf_norm(grad);
    res.converged = res.grad_norm <= opt.grad_tol;
    res.stop_reason = res.converged ? "gradient tolerance reached" : "iteration limit reached";
    return res;
}

} // namespace permzne
