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
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "zne.hpp"

namespace permzne {

/// Scatter of (CES, energy) with the fitted line and a horizontal rule at
/// the noiseless energy.
inline void write_zne_svg(std::ostream &os, const ZneResult &r, double e0) {
    constexpr double W = 640, H = 480, margin = 60;
    double x_max = 0.0;
    double y_lo = std::min(e0, r.intercept), y_hi = std::max(e0, r.intercept);
    for (const auto &s : r.samples) {
        x_max = std::max(x_max, s.ces);
        y_lo = std::min(y_lo, s.energy);
        y_hi = std::max(y_hi, s.energy);
    }
    if (x_max <= 0.0) x_max = 1.0;
    if (y_hi - y_lo <= 0.0) y_hi = y_lo + 1.0;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    x_max *= 1.05;
    auto px = [&](double x) { return margin + (W - 2 * margin) * x / x_max; };
    auto py = [&](double y) { return H - margin - (H - 2 * margin) * (y - y_lo) / (y_hi - y_lo); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << H - margin << "\" x2=\"" << W - margin
       << "\" y2=\"" << H - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << H - margin << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">circuit error sum (max "
       << x_max << ")</text>\n";
    os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
       << ")\" text-anchor=\"middle\">energy [" << y_lo << ", " << y_hi << "]</text>\n";
    os << "<line x1=\"" << px(0) << "\" y1=\"" << py(e0) << "\" x2=\"" << px(x_max) << "\" y2=\""
       << py(e0) << "\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n";
    for (const auto &s : r.samples)
        os << "<circle cx=\"" << px(s.ces) << "\" cy=\"" << py(s.energy)
           << "\" r=\"2\" fill=\"steelblue\"/>\n";
    os << "<line x1=\"" << px(0) << "\" y1=\"" << py(r.intercept) << "\" x2=\"" << px(x_max)
       << "\" y2=\"" << py(r.intercept + r.slope * x_max) << "\" stroke=\"crimson\"/>\n";
    os << "</svg>\n";
}

} // namespace permzne
