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

#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "macstbc/matrix.hpp"

namespace macstbc {

/// A codeword: T x Nt complex matrix produced by substituting symbol values
/// into a design.
using CodewordMatrix = Mat<cplx>;

/// A linear design in complex symbols x_1..x_k: a T x Nt codeword matrix
/// whose column i equals x_coeff[i]*x + xconj_coeff[i]*conj(x).
///
/// Designs are immutable after construction; build them through the factory
/// functions below (or design JSON import) and share freely across threads.
class LinearDesign {
  public:
    LinearDesign(std::string label, int time_slots, int tx_antennas, int num_symbols,
                 std::vector<Mat<cplx>> x_coeff, std::vector<Mat<cplx>> xconj_coeff)
        : label_(std::move(label)),
          time_slots_(time_slots),
          tx_antennas_(tx_antennas),
          num_symbols_(num_symbols),
          x_coeff_(std::move(x_coeff)),
          xconj_coeff_(std::move(xconj_coeff)) {
        if (time_slots_ <= 0 || tx_antennas_ <= 0 || num_symbols_ <= 0)
            throw std::invalid_argument("LinearDesign: dimensions must be positive");
        if (x_coeff_.size() != static_cast<std::size_t>(tx_antennas_) ||
            xconj_coeff_.size() != static_cast<std::size_t>(tx_antennas_))
            throw std::invalid_argument("LinearDesign: need one coefficient pair per antenna");
        for (int i = 0; i < tx_antennas_; ++i) {
            const auto& a = x_coeff_[static_cast<std::size_t>(i)];
            const auto& b = xconj_coeff_[static_cast<std::size_t>(i)];
            if (a.rows() != static_cast<std::size_t>(time_slots_) ||
                a.cols() != static_cast<std::size_t>(num_symbols_) || a.rows() != b.rows() ||
                a.cols() != b.cols())
                throw std::invalid_argument("LinearDesign: coefficient matrix shape mismatch");
        }
        entry_monomial_ = compute_entry_monomial();
    }

    const std::string& label() const noexcept { return label_; }
    int time_slots() const noexcept { return time_slots_; }
    int tx_antennas() const noexcept { return tx_antennas_; }
    int num_symbols() const noexcept { return num_symbols_; }
    bool entry_monomial() const noexcept { return entry_monomial_; }

    /// Coefficient of x in codeword column `antenna` (T x k).
    const Mat<cplx>& x_coeff(int antenna) const { return x_coeff_.at(static_cast<std::size_t>(antenna)); }
    /// Coefficient of conj(x) in codeword column `antenna` (T x k).
    const Mat<cplx>& xconj_coeff(int antenna) const { return xconj_coeff_.at(static_cast<std::size_t>(antenna)); }

    /// First (time slot, antenna) whose entry mixes several symbols or has a
    /// non-unit coefficient; nullopt when the design is entry-monomial.
    std::optional<std::pair<int, int>> monomial_violation() const {
        for (int t = 0; t < time_slots_; ++t)
            for (int i = 0; i < tx_antennas_; ++i)
                if (!entry_is_monomial(t, i)) return std::make_pair(t, i);
        return std::nullopt;
    }

  private:
    bool entry_is_monomial(int t, int i) const {
        int nonzeros = 0;
        bool units = true;
        for (int j = 0; j < num_symbols_; ++j) {
            for (const cplx& c : {x_coeff_[static_cast<std::size_t>(i)](t, j),
                                  xconj_coeff_[static_cast<std::size_t>(i)](t, j)}) {
                if (c == cplx{}) continue;
                ++nonzeros;
                // unit coefficients keep the induced real generator in
                // signed-permutation form: +-1 or +-i only
                const bool unit = (c.imag() == 0.0 && std::abs(c.real()) == 1.0) ||
                                  (c.real() == 0.0 && std::abs(c.imag()) == 1.0);
                units = units && unit;
            }
        }
        return nonzeros <= 1 && units;
    }

    bool compute_entry_monomial() const {
        for (int t = 0; t < time_slots_; ++t)
            for (int i = 0; i < tx_antennas_; ++i)
                if (!entry_is_monomial(t, i)) return false;
        return true;
    }

    std::string label_;
    int time_slots_, tx_antennas_, num_symbols_;
    std::vector<Mat<cplx>> x_coeff_, xconj_coeff_;
    bool entry_monomial_ = false;
};

/// One codeword entry of a monomial design: sign * x_var or sign * conj(x_var).
struct MonomialTerm {
    int var = -1;            // 0-based symbol index, -1 for a structural zero
    bool conjugated = false;
    int sign = 0;
};

using EntryGrid = std::vector<std::vector<MonomialTerm>>;  // [time][antenna]

inline LinearDesign design_from_grid(std::string label, const EntryGrid& grid, int num_symbols) {
    const int time_slots = static_cast<int>(grid.size());
    if (time_slots == 0) throw std::invalid_argument("design_from_grid: empty grid");
    const int tx = static_cast<int>(grid.front().size());
    std::vector<Mat<cplx>> a(static_cast<std::size_t>(tx),
                             Mat<cplx>(static_cast<std::size_t>(time_slots), static_cast<std::size_t>(num_symbols)));
    std::vector<Mat<cplx>> b = a;
    for (int t = 0; t < time_slots; ++t) {
        if (static_cast<int>(grid[static_cast<std::size_t>(t)].size()) != tx)
            throw std::invalid_argument("design_from_grid: ragged grid");
        for (int i = 0; i < tx; ++i) {
            const MonomialTerm& e = grid[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            if (e.sign == 0) continue;
            if (e.var < 0 || e.var >= num_symbols)
                throw std::invalid_argument("design_from_grid: symbol index out of range");
            auto& target = e.conjugated ? b[static_cast<std::size_t>(i)] : a[static_cast<std::size_t>(i)];
            target(static_cast<std::size_t>(t), static_cast<std::size_t>(e.var)) = cplx(e.sign, 0.0);
        }
    }
    return LinearDesign(std::move(label), time_slots, tx, num_symbols, std::move(a), std::move(b));
}

namespace detail {

// 2x2 block in symbols 2m+1, 2m+2 (1-based): [[x, -y*],[y, x*]]
inline EntryGrid alamouti_grid(int m) {
    const int v = 2 * m;
    EntryGrid g(2, std::vector<MonomialTerm>(2));
    g[0][0] = {v, false, +1};
    g[0][1] = {v + 1, true, -1};
    g[1][0] = {v + 1, false, +1};
    g[1][1] = {v, true, +1};
    return g;
}

// grid tensor identity: 2x2 block grid -> 2n x 2n grid with each entry
// replicated along an n-diagonal
inline EntryGrid tensor_identity(const EntryGrid& block, int n) {
    EntryGrid out(static_cast<std::size_t>(2 * n),
                  std::vector<MonomialTerm>(static_cast<std::size_t>(2 * n)));
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            const MonomialTerm& e = block[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
            if (e.sign == 0) continue;
            for (int r = 0; r < n; ++r)
                out[static_cast<std::size_t>(p * n + r)][static_cast<std::size_t>(q * n + r)] = e;
        }
    return out;
}

inline EntryGrid even_design_grid(int tx, int k) {
    const int half = tx / 2;
    EntryGrid grid;
    if (k % 2 == 0) {
        for (int m = 0; m < k / 2; ++m) {
            EntryGrid block = tensor_identity(alamouti_grid(m), half);
            grid.insert(grid.end(), block.begin(), block.end());
        }
    } else {
        grid = even_design_grid(tx, k - 1);
        for (int i = 0; i < tx; ++i) {
            std::vector<MonomialTerm> row(static_cast<std::size_t>(tx));
            row[static_cast<std::size_t>(i)] = {k - 1, false, +1};
            grid.push_back(std::move(row));
        }
    }
    return grid;
}

inline void drop_last_column(EntryGrid& grid) {
    for (auto& row : grid) row.pop_back();
}

}  // namespace detail

/// The 2x2 orthogonal block over symbols 2m+1 and 2m+2 (1-based), widened to
/// 2(m+1) symbol slots so blocks with different m compose under one indexing.
inline LinearDesign make_alamouti_block(int m) {
    if (m < 0) throw std::invalid_argument("make_alamouti_block: block index must be >= 0");
    return design_from_grid("alamouti_block_" + std::to_string(m), detail::alamouti_grid(m), 2 * (m + 1));
}

/// Stacked-block design for tx_antennas >= 2 and num_symbols >= 2.
///
/// Even antenna counts 2a stack one 2a x 2a block per symbol pair (each block
/// an Alamouti grid spread along an a-diagonal), plus a trailing x_k*I block
/// when the symbol count is odd. Odd antenna counts build the design for one
/// more antenna and drop its last column.
inline LinearDesign build_design(int tx_antennas, int num_symbols) {
    if (tx_antennas < 2) throw std::invalid_argument("build_design: need at least 2 antennas");
    if (num_symbols < 2) throw std::invalid_argument("build_design: need at least 2 symbols");
    const bool odd_tx = tx_antennas % 2 != 0;
    EntryGrid grid = detail::even_design_grid(odd_tx ? tx_antennas + 1 : tx_antennas, num_symbols);
    if (odd_tx) detail::drop_last_column(grid);
    const std::string label = "stacked(" + std::to_string(tx_antennas) + "," + std::to_string(num_symbols) + ")";
    return design_from_grid(label, grid, num_symbols);
}

/// Square orthogonal design for 2^exponent antennas in exponent+1 symbols,
/// built by the doubling recursion D <- [[D, -x*I],[xI, D^H]] seeded with the
/// 2-antenna block, so exponent=1 is exactly make_alamouti_block(0).
/// Satisfies X^H X = (sum |x_i|^2) I identically.
inline LinearDesign build_square_cod(int exponent) {
    if (exponent < 1) throw std::invalid_argument("build_square_cod: exponent must be >= 1");
    EntryGrid g = detail::alamouti_grid(0);
    for (int step = 2; step <= exponent; ++step) {
        const int n = static_cast<int>(g.size());
        const int new_var = step;  // 0-based index of the symbol added this step
        EntryGrid out(static_cast<std::size_t>(2 * n),
                      std::vector<MonomialTerm>(static_cast<std::size_t>(2 * n)));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const MonomialTerm& e = g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                if (e.sign != 0) out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = e;
                const MonomialTerm& h = g[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
                if (h.sign != 0)
                    out[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(n + c)] = {h.var, !h.conjugated, h.sign};
            }
        for (int r = 0; r < n; ++r) {
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(n + r)] = {new_var, true, -1};
            out[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r)] = {new_var, false, +1};
        }
        g = std::move(out);
    }
    return design_from_grid("cod(" + std::to_string(1 << exponent) + ")", g, exponent + 1);
}

/// n x n grid of n^2 distinct symbols: full spatial multiplexing. Not
/// orthogonal for n >= 2; used as the unstructured reference design.
inline LinearDesign build_spatial_multiplexing(int n) {
    if (n < 2) throw std::invalid_argument("build_spatial_multiplexing: need n >= 2");
    EntryGrid g(static_cast<std::size_t>(n), std::vector<MonomialTerm>(static_cast<std::size_t>(n)));
    for (int t = 0; t < n; ++t)
        for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = {i * n + t, false, +1};
    return design_from_grid("smux(" + std::to_string(n) + ")", g, n * n);
}

/// Substitute symbol values: column i of the result is
/// x_coeff[i]*x + xconj_coeff[i]*conj(x).
inline CodewordMatrix evaluate(const LinearDesign& design, std::span<const cplx> x) {
    if (x.size() != static_cast<std::size_t>(design.num_symbols()))
        throw std::invalid_argument("evaluate: symbol vector length mismatch");
    std::vector<cplx> xc(x.begin(), x.end());
    for (cplx& v : xc) v = std::conj(v);
    CodewordMatrix out(static_cast<std::size_t>(design.time_slots()), static_cast<std::size_t>(design.tx_antennas()));
    for (int i = 0; i < design.tx_antennas(); ++i) {
        const std::vector<cplx> plain = design.x_coeff(i) * x;
        const std::vector<cplx> conj_part = design.xconj_coeff(i) * std::span<const cplx>(xc);
        for (int t = 0; t < design.time_slots(); ++t)
            out(static_cast<std::size_t>(t), static_cast<std::size_t>(i)) =
                plain[static_cast<std::size_t>(t)] + conj_part[static_cast<std::size_t>(t)];
    }
    return out;
}

inline CodewordMatrix evaluate(const LinearDesign& design, const std::vector<cplx>& x) {
    return evaluate(design, std::span<const cplx>(x));
}

/// Exact reduced fraction.
struct Ratio {
    long long num = 0;
    long long den = 1;
    bool operator==(const Ratio&) const = default;
};

/// Symbols per channel use, k/T, as an exact fraction.
inline Ratio rate(const LinearDesign& design) {
    const long long k = design.num_symbols();
    const long long t = design.time_slots();
    const long long g = std::gcd(k, t);
    return {k / g, t / g};
}

/// Exact check of k/T <= 2/Nt.
inline bool rate_within_bound(const LinearDesign& design) {
    return static_cast<long long>(design.num_symbols()) * design.tx_antennas() <=
           2LL * design.time_slots();
}

}  // namespace macstbc
