// Copyright 2026 The qnnsense Authors
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
#include <cstddef>
#include <string>

#include "errors.hpp"

namespace qnnsense {

struct Maximum {
    double argmax;
    double value;
};

struct MaximizeOptions {
    double tolerance = 1e-7; ///< absolute tolerance on the argument
    std::size_t grid = 64;   ///< coarse samples used to bracket the peak
    bool require_interior = true;
};

/**
 * Maximise a scalar function on [lo, hi]. A coarse uniform grid picks the
 * best sample and its two neighbours form the bracket that golden-section
 * search then refines. With require_interior set, a maximiser that lands
 * within a few tolerances of either end of [lo, hi] raises BracketError.
 */
template <class F>
Maximum maximize_scalar(F &&f, double lo, double hi,
                        const MaximizeOptions &opts = {}) {
    if (!(lo < hi)) {
        throw DomainError("maximize_scalar: empty interval");
    }
    const std::size_t n = opts.grid < 3 ? 3 : opts.grid;
    const double step = (hi - lo) / double(n - 1);
    std::size_t best = 0;
    double best_val = -INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = f(lo + step * double(k));
        if (!std::isfinite(v)) {
            throw NumericError("maximize_scalar: non-finite objective");
        }
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    double a = lo + step * double(best == 0 ? 0 : best - 1);
    double b = lo + step * double(best + 1 >= n ? n - 1 : best + 1);

    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > opts.tolerance) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    Maximum result{x, fx};
    if (fc > result.value) {
        result = {c, fc};
    }
    if (fd > result.value) {
        result = {d, fd};
    }
    if (opts.require_interior) {
        const double edge = 4.0 * opts.tolerance;
        if (result.argmax - lo < edge || hi - result.argmax < edge) {
            throw BracketError("no interior maximum in [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
        }
    }
    return result;
}

} // namespace qnnsense
