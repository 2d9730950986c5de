// SPDX-License-Identifier: Apache-2.0
//
// macstbc: space-time block codes with reduced sphere-decoding complexity
// for the two-user MIMO multiple access channel
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <limits>

#include "macstbc/matrix.hpp"
#include "macstbc/qr.hpp"

namespace macstbc {

/// Real PAM axis of a square M-QAM constellation: levels
/// {-(sqrt(M)-1), .., -1, +1, .., sqrt(M)-1} scaled by sqrt(3/(2(M-1))) so a
/// uniform QAM symbol has unit average energy.
struct PamConstellation {
    int qam_size = 0;
    double level_scale = 0.0;
    std::vector<double> points;  // ascending

    static PamConstellation square_qam(int m) {
        if (m < 4) throw std::invalid_argument("square_qam: need M >= 4");
        const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
        if (root * root != m) throw std::invalid_argument("square_qam: M must be a perfect square");
        PamConstellation c;
        c.qam_size = m;
        c.level_scale = std::sqrt(3.0 / (2.0 * (m - 1)));
        c.points.resize(static_cast<std::size_t>(root));
        for (int i = 0; i < root; ++i)
            c.points[static_cast<std::size_t>(i)] = c.level_scale * (2 * i - (root - 1));
        return c;
    }

    int num_levels() const noexcept { return static_cast<int>(points.size()); }
};

/// Nearest PAM level index; clips beyond the extreme levels and rounds exact
/// midpoints toward the larger level.
inline int pam_quantize_index(double v, const PamConstellation& c) noexcept {
    const int root = c.num_levels();
    const double u = (v / c.level_scale + (root - 1)) / 2.0;
    int idx = static_cast<int>(std::floor(u + 0.5));
    if (idx < 0) idx = 0;
    if (idx > root - 1) idx = root - 1;
    return idx;
}

inline double pam_quantize(double v, const PamConstellation& c) noexcept {
    return c.points[static_cast<std::size_t>(pam_quantize_index(v, c))];
}

/// Complexity counters. Semantics, fixed so runs are comparable:
///  - quantizer_calls: nearest-level quantizations performed
///  - sort_comparisons: comparisons spent ordering candidate levels by cost;
///    orderings use selection sort, exactly n(n-1)/2 comparisons for n levels
///  - metric_evals: scalar squared-residual terms accumulated into any
///    candidate metric or per-level cost table
///  - nodes_visited: brute force counts full vectors scored; the tree decoder
///    counts partial-cost node evaluations; the conditional decoder counts
///    interferer candidates handed to the per-coordinate stage
struct DecodeStats {
    std::uint64_t quantizer_calls = 0;
    std::uint64_t sort_comparisons = 0;
    std::uint64_t metric_evals = 0;
    std::uint64_t nodes_visited = 0;

    DecodeStats& operator+=(const DecodeStats& o) {
        quantizer_calls += o.quantizer_calls;
        sort_comparisons += o.sort_comparisons;
        metric_evals += o.metric_evals;
        nodes_visited += o.nodes_visited;
        return *this;
    }
};

struct DecodeResult {
    std::vector<double> z_hat;  // PAM levels, user-1 coordinates then user-2
    double metric = 0.0;
    DecodeStats stats;
};

namespace detail {

inline bool lex_less(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

/// All three decoders break exact metric ties toward the lexicographically
/// smaller symbol vector, so their outputs are comparable bit for bit.
inline void accept_candidate(double metric, std::span<const double> z, double& best_metric,
                             std::vector<double>& best_z) {
    if (metric < best_metric || (metric == best_metric && lex_less(z, best_z))) {
        best_metric = metric;
        best_z.assign(z.begin(), z.end());
    }
}

/// Ascending-cost level order via selection sort: deterministic comparison
/// count, ties kept on the lower level.
inline void sort_levels_by_cost(std::span<const double> cost, std::span<int> order,
                                std::uint64_t& comparisons) {
    const int n = static_cast<int>(cost.size());
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n - 1; ++i) {
        int best = i;
        for (int j = i + 1; j < n; ++j) {
            ++comparisons;
            if (cost[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] <
                cost[static_cast<std::size_t>(order[static_cast<std::size_t>(best)])])
                best = j;
        }
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(best)]);
    }
    // selection sort is not stable; restore the lower-level-first convention
    // inside runs of equal cost so enumeration order is reproducible
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (cost[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] ==
                    cost[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] &&
                order[static_cast<std::size_t>(j)] < order[static_cast<std::size_t>(i)])
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
}

}  // namespace detail

/// Exhaustive joint ML search over all PAM vectors. Enumerates in ascending
/// lexicographic order, so the reported optimum is the lexicographically
/// smallest among metric ties.
inline DecodeResult ml_bruteforce(const Mat<double>& gen, std::span<const double> y,
                                  const PamConstellation& c, double rho, int tx_antennas) {
    if (y.size() != gen.rows()) throw std::invalid_argument("ml_bruteforce: observation length mismatch");
    const std::size_t dims = gen.cols();
    const int q = c.num_levels();
    double budget = 1.0;
    for (std::size_t i = 0; i < dims; ++i) budget *= q;
    if (budget > static_cast<double>(1 << 24))
        throw std::invalid_argument("ml_bruteforce: search space exceeds the enumeration guard");
    const double s = std::sqrt(rho / (2.0 * tx_antennas));

    DecodeResult res;
    res.metric = std::numeric_limits<double>::infinity();
    std::vector<int> idx(dims, 0);
    std::vector<double> z(dims);
    for (;;) {
        for (std::size_t j = 0; j < dims; ++j) z[j] = c.points[static_cast<std::size_t>(idx[j])];
        double metric = 0.0;
        for (std::size_t r = 0; r < gen.rows(); ++r) {
            double acc = y[r];
            for (std::size_t j = 0; j < dims; ++j) acc -= s * gen(r, j) * z[j];
            metric += acc * acc;
            ++res.stats.metric_evals;
        }
        ++res.stats.nodes_visited;
        detail::accept_candidate(metric, z, res.metric, res.z_hat);
        // odometer: last coordinate fastest keeps the order lexicographic
        std::size_t pos = dims;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < q) break;
            idx[pos] = 0;
            if (pos == 0) { pos = dims; break; }
        }
        if (pos == dims) break;
    }
    return res;
}

namespace detail {

/// Given one interferer candidate, finish the metric: each user-1 coordinate
/// decouples through the diagonal r11, so a single quantization per
/// coordinate is optimal. Aborts as soon as the accumulating metric strictly
/// exceeds the incumbent.
struct ConditionalContext {
    const RBlocks& blocks;
    std::span<const double> y1;
    const PamConstellation& c;
    double s;
    double best_metric = std::numeric_limits<double>::infinity();
    std::vector<double> best_z;
    std::vector<double> scratch_z;
    DecodeStats stats;

    ConditionalContext(const RBlocks& b, std::span<const double> y, const PamConstellation& pam,
                       double scale)
        : blocks(b), y1(y), c(pam), s(scale) {}
};

inline void finish_candidate(ConditionalContext& ctx, std::span<const double> interferer,
                             double interferer_cost) {
    ++ctx.stats.nodes_visited;
    const std::size_t twok = ctx.blocks.r11.rows();
    double metric = interferer_cost;
    std::vector<double>& z = ctx.scratch_z;
    for (std::size_t i = 0; i < twok; ++i) {
        double numer = ctx.y1[i];
        for (std::size_t j = 0; j < twok; ++j) numer -= ctx.s * ctx.blocks.r12(i, j) * interferer[j];
        const double denom = ctx.s * ctx.blocks.r11(i, i);
        const double level = pam_quantize(numer / denom, ctx.c);
        ++ctx.stats.quantizer_calls;
        const double resid = numer - denom * level;
        metric += resid * resid;
        ++ctx.stats.metric_evals;
        z[i] = level;
        if (metric > ctx.best_metric) return;  // equal metrics continue, ties resolve below
    }
    for (std::size_t j = 0; j < twok; ++j) z[twok + j] = interferer[j];
    accept_candidate(metric, z, ctx.best_metric, ctx.best_z);
}

}  // namespace detail

/// Two-stage ML decoder for systems whose r11 block is diagonal.
///
/// With a diagonal r22 the interferer coordinates decouple as well: 2k
/// independent orderings of the PAM levels (one selection sort of sqrt(M)
/// levels per coordinate) drive a best-first tree walk with a suffix-minimum
/// bound. With an upper-triangular r22 the interferer is enumerated by
/// depth-first tree search with per-depth level ordering and radius pruning.
/// Either way every surviving candidate finishes through the diagonal-r11
/// quantization stage, and the global optimum matches ml_bruteforce under the
/// shared tie-break.
inline DecodeResult decode_conditional(const RBlocks& blocks, std::span<const double> y_tilde,
                                       const PamConstellation& c, double rho, int tx_antennas) {
    if (blocks.classification == StructureClass::Unstructured)
        throw std::invalid_argument("decode_conditional: system is unstructured; use a generic decoder");
    const std::size_t twok = blocks.r11.rows();
    if (y_tilde.size() != 2 * twok)
        throw std::invalid_argument("decode_conditional: rotated observation must have 4k entries");
    const int q = c.num_levels();
    const double s = std::sqrt(rho / (2.0 * tx_antennas));
    detail::ConditionalContext ctx(blocks, y_tilde.subspan(0, twok), c, s);
    ctx.scratch_z.resize(2 * twok);
    std::span<const double> y2 = y_tilde.subspan(twok, twok);

    std::vector<double> a(twok, 0.0);
    if (blocks.classification == StructureClass::ReducedAsdc) {
        // one cost table and one ordering per interferer coordinate
        Mat<double> cost(twok, static_cast<std::size_t>(q));
        Mat<int> order(twok, static_cast<std::size_t>(q));
        for (std::size_t i = 0; i < twok; ++i) {
            for (int p = 0; p < q; ++p) {
                const double resid = y2[i] - s * blocks.r22(i, i) * c.points[static_cast<std::size_t>(p)];
                cost(i, static_cast<std::size_t>(p)) = resid * resid;
                ++ctx.stats.metric_evals;
            }
            detail::sort_levels_by_cost(cost.row(i), order.row(i), ctx.stats.sort_comparisons);
        }
        std::vector<double> suffix_min(twok + 1, 0.0);
        for (std::size_t i = twok; i-- > 0;)
            suffix_min[i] = suffix_min[i + 1] + cost(i, static_cast<std::size_t>(order(i, 0)));

        auto dfs = [&](auto&& self, std::size_t depth, double partial) -> void {
            for (int t = 0; t < q; ++t) {
                const int lvl = order(depth, static_cast<std::size_t>(t));
                const double here = partial + cost(depth, static_cast<std::size_t>(lvl));
                if (here + suffix_min[depth + 1] > ctx.best_metric) break;  // ordered: rest are no better
                a[depth] = c.points[static_cast<std::size_t>(lvl)];
                if (depth + 1 == twok)
                    detail::finish_candidate(ctx, a, here);
                else
                    self(self, depth + 1, here);
            }
        };
        dfs(dfs, 0, 0.0);
    } else {
        // upper-triangular interferer block: classic depth-first enumeration
        // from the last coordinate with a fresh level ordering per node
        auto dfs = [&](auto&& self, std::size_t coord, double partial) -> void {
            double b = y2[coord];
            for (std::size_t j = coord + 1; j < twok; ++j) b -= s * blocks.r22(coord, j) * a[j];
            std::vector<double> local_cost(static_cast<std::size_t>(q));
            std::vector<int> local_order(static_cast<std::size_t>(q));
            for (int p = 0; p < q; ++p) {
                const double resid = b - s * blocks.r22(coord, coord) * c.points[static_cast<std::size_t>(p)];
                local_cost[static_cast<std::size_t>(p)] = resid * resid;
                ++ctx.stats.metric_evals;
            }
            detail::sort_levels_by_cost(local_cost, local_order, ctx.stats.sort_comparisons);
            for (int t = 0; t < q; ++t) {
                const int lvl = local_order[static_cast<std::size_t>(t)];
                const double here = partial + local_cost[static_cast<std::size_t>(lvl)];
                if (here > ctx.best_metric) break;
                a[coord] = c.points[static_cast<std::size_t>(lvl)];
                if (coord == 0)
                    detail::finish_candidate(ctx, a, here);
                else
                    self(self, coord - 1, here);
            }
        };
        dfs(dfs, twok - 1, 0.0);
    }

    DecodeResult res;
    res.z_hat = std::move(ctx.best_z);
    res.metric = ctx.best_metric;
    res.stats = ctx.stats;
    return res;
}

/// Depth-first tree search over the full upper-triangular system with
/// ascending-cost level ordering per node and pruning on the incumbent
/// radius. The initial radius is infinite: the first leaf sets it.
inline DecodeResult sphere_decode_generic(const Mat<double>& r, std::span<const double> y_tilde,
                                          const PamConstellation& c, double rho, int tx_antennas) {
    const std::size_t dims = r.rows();
    if (r.cols() != dims) throw std::invalid_argument("sphere_decode_generic: R must be square");
    if (y_tilde.size() != dims)
        throw std::invalid_argument("sphere_decode_generic: rotated observation length mismatch");
    for (std::size_t i = 0; i < dims; ++i)
        if (r(i, i) == 0.0) throw std::invalid_argument("sphere_decode_generic: R is rank deficient");
    const int q = c.num_levels();
    const double s = std::sqrt(rho / (2.0 * tx_antennas));

    DecodeResult res;
    res.metric = std::numeric_limits<double>::infinity();
    std::vector<double> z(dims, 0.0);
    auto dfs = [&](auto&& self, std::size_t coord, double partial) -> void {
        double b = y_tilde[coord];
        for (std::size_t j = coord + 1; j < dims; ++j) b -= s * r(coord, j) * z[j];
        std::vector<double> cost(static_cast<std::size_t>(q));
        std::vector<int> order(static_cast<std::size_t>(q));
        for (int p = 0; p < q; ++p) {
            const double resid = b - s * r(coord, coord) * c.points[static_cast<std::size_t>(p)];
            cost[static_cast<std::size_t>(p)] = resid * resid;
            ++res.stats.metric_evals;
        }
        detail::sort_levels_by_cost(cost, order, res.stats.sort_comparisons);
        for (int t = 0; t < q; ++t) {
            const int lvl = order[static_cast<std::size_t>(t)];
            const double here = partial + cost[static_cast<std::size_t>(lvl)];
            ++res.stats.nodes_visited;
            if (here > res.metric) break;
            z[coord] = c.points[static_cast<std::size_t>(lvl)];
            if (coord == 0)
                detail::accept_candidate(here, z, res.metric, res.z_hat);
            else
                self(self, coord - 1, here);
        }
    };
    dfs(dfs, dims - 1, 0.0);
    return res;
}

}  // namespace macstbc
