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

#include <algorithm>
#include <optional>
#include <string>

#include "macstbc/lattice.hpp"
#include "macstbc/matrix.hpp"
#include "macstbc/rng.hpp"

namespace macstbc {

struct QrFactors {
    Mat<double> q;  // m x m orthogonal
    Mat<double> r;  // m x n upper triangular, nonnegative diagonal
};

/// Householder QR with the diagonal of R normalized to be nonnegative.
/// Throws when a diagonal pivot collapses relative to the matrix scale,
/// naming the dependent column.
inline QrFactors qr_decompose(const Mat<double>& m) {
    const std::size_t nrow = m.rows(), ncol = m.cols();
    if (nrow < ncol) throw std::invalid_argument("qr_decompose: matrix has more columns than rows");
    QrFactors f{Mat<double>::identity(nrow), m};
    std::vector<double> v(nrow);
    for (std::size_t j = 0; j < ncol; ++j) {
        double colnorm = 0.0;
        for (std::size_t r = j; r < nrow; ++r) colnorm += f.r(r, j) * f.r(r, j);
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;  // flagged by the rank guard below
        const double head = f.r(j, j);
        const double alpha = head >= 0.0 ? -colnorm : colnorm;
        double vnorm2 = 0.0;
        for (std::size_t r = j; r < nrow; ++r) {
            v[r] = f.r(r, j);
            if (r == j) v[r] -= alpha;
            vnorm2 += v[r] * v[r];
        }
        if (vnorm2 == 0.0) continue;  // column already reduced
        // reflect R columns j.. and accumulate Q <- Q * H
        for (std::size_t c = j; c < ncol; ++c) {
            double proj = 0.0;
            for (std::size_t r = j; r < nrow; ++r) proj += v[r] * f.r(r, c);
            proj *= 2.0 / vnorm2;
            for (std::size_t r = j; r < nrow; ++r) f.r(r, c) -= proj * v[r];
        }
        for (std::size_t c = 0; c < nrow; ++c) {
            double proj = 0.0;
            for (std::size_t r = j; r < nrow; ++r) proj += v[r] * f.q(c, r);
            proj *= 2.0 / vnorm2;
            for (std::size_t r = j; r < nrow; ++r) f.q(c, r) -= proj * v[r];
        }
    }
    // sign normalization and structural zeros below the diagonal
    for (std::size_t j = 0; j < ncol; ++j) {
        if (f.r(j, j) < 0.0) {
            for (std::size_t c = j; c < ncol; ++c) f.r(j, c) = -f.r(j, c);
            for (std::size_t r = 0; r < nrow; ++r) f.q(r, j) = -f.q(r, j);
        }
        for (std::size_t r = j + 1; r < nrow; ++r) f.r(r, j) = 0.0;
    }
    const double scale = fro_norm(m);
    for (std::size_t j = 0; j < ncol; ++j)
        if (f.r(j, j) <= 1e-10 * scale)
            throw std::runtime_error("qr_decompose: column " + std::to_string(j + 1) +
                                     " is linearly dependent on earlier columns");
    return f;
}

/// Leading n x n part of R (the remaining rows are structurally zero when the
/// generator has full column rank n).
inline Mat<double> square_upper(const Mat<double>& r, std::size_t n) {
    return r.block(0, 0, n, n);
}

enum class StructureClass { ReducedAsdc, ReducedWsdc, Unstructured };

inline const char* to_string(StructureClass c) {
    switch (c) {
        case StructureClass::ReducedAsdc: return "ReducedASDC";
        case StructureClass::ReducedWsdc: return "ReducedWSDC";
        default: return "Unstructured";
    }
}

/// R partitioned into 2k x 2k blocks [[r11, r12],[0, r22]]. An off-diagonal
/// entry counts as zero when its magnitude is below tol * ||R||_F; that gap
/// separates orthogonalization residue (~1e-16) from generic entries by many
/// orders of magnitude.
struct RBlocks {
    Mat<double> r11, r12, r22;
    StructureClass classification = StructureClass::Unstructured;
    double tol = 0.0;
    double rel_offdiag_r11 = 0.0;  // max |off-diagonal| / ||R||_F
    double rel_offdiag_r22 = 0.0;
};

namespace detail {

inline double max_offdiag(const Mat<double>& a) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) m = std::max(m, std::abs(a(r, c)));
    return m;
}

}  // namespace detail

inline RBlocks extract_blocks(const Mat<double>& r, int num_symbols, double tol) {
    const std::size_t twok = 2 * static_cast<std::size_t>(num_symbols);
    if (r.rows() < 2 * twok || r.cols() != 2 * twok)
        throw std::invalid_argument("extract_blocks: R must be square of side 4k");
    const double scale = fro_norm(r.block(0, 0, 2 * twok, 2 * twok));
    RBlocks b;
    b.r11 = r.block(0, 0, twok, twok);
    b.r12 = r.block(0, twok, twok, twok);
    b.r22 = r.block(twok, twok, twok, twok);
    b.tol = tol;
    b.rel_offdiag_r11 = detail::max_offdiag(b.r11) / scale;
    b.rel_offdiag_r22 = detail::max_offdiag(b.r22) / scale;
    const bool diag11 = b.rel_offdiag_r11 < tol;
    const bool diag22 = b.rel_offdiag_r22 < tol;
    b.classification = diag11 ? (diag22 ? StructureClass::ReducedAsdc : StructureClass::ReducedWsdc)
                              : StructureClass::Unstructured;
    return b;
}

/// Numerical structure classification over random channel draws. The class
/// holds only if every trial agrees: r11 (and r22 for the fully reduced
/// class) must stay diagonal in all of them.
struct ClassifyReport {
    StructureClass classification = StructureClass::Unstructured;
    int trials = 0;
    double tol = 0.0;
    double worst_offdiag_r11 = 0.0;
    double worst_offdiag_r22 = 0.0;
};

inline ClassifyReport classify_design(const LinearDesign& design, int trials, double tol,
                                      std::uint64_t seed = 0x5eed) {
    if (trials < 1) throw std::invalid_argument("classify_design: need at least one trial");
    const int nr = rx_antennas_for(design);
    const std::size_t dim = 4 * static_cast<std::size_t>(design.num_symbols());
    ClassifyReport rep;
    rep.trials = trials;
    rep.tol = tol;
    bool all11 = true, all22 = true;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_stream(seed, 0xc1a55, static_cast<std::uint64_t>(t));
        const ChannelPair ch{sample_channel(design.tx_antennas(), nr, rng),
                             sample_channel(design.tx_antennas(), nr, rng)};
        const LatticeGenerator gen = build_lattice_generator(design, ch);
        const QrFactors f = qr_decompose(gen.m);
        const RBlocks b = extract_blocks(square_upper(f.r, dim), design.num_symbols(), tol);
        rep.worst_offdiag_r11 = std::max(rep.worst_offdiag_r11, b.rel_offdiag_r11);
        rep.worst_offdiag_r22 = std::max(rep.worst_offdiag_r22, b.rel_offdiag_r22);
        all11 = all11 && b.rel_offdiag_r11 < tol;
        all22 = all22 && b.rel_offdiag_r22 < tol;
    }
    rep.classification = all11 ? (all22 ? StructureClass::ReducedAsdc : StructureClass::ReducedWsdc)
                               : StructureClass::Unstructured;
    return rep;
}

/// Exact pairwise check of C_i' C_j + C_j' C_i = 0 over the integers.
struct HurwitzRadonReport {
    bool orthogonal = true;
    int witness_i = -1;  // 0-based offending pair when not orthogonal
    int witness_j = -1;
};

inline HurwitzRadonReport check_hurwitz_radon(const CoefficientSet& set) {
    const int n = static_cast<int>(set.c.size());
    for (int i = 0; i < n; ++i) {
        const Mat<long long> cit = transpose(set.c[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < n; ++j) {
            const Mat<long long> s = cit * set.c[static_cast<std::size_t>(j)] +
                                     transpose(set.c[static_cast<std::size_t>(j)]) * set.c[static_cast<std::size_t>(i)];
            if (!is_zero(s)) return {false, i, j};
        }
    }
    return {true, -1, -1};
}

/// Ordered pair inside one group of the index partition.
struct IndexPair {
    int first = -1;
    int second = -1;
};

namespace detail {

struct PairingProducts {
    std::vector<Mat<long long>> with_l;  // C_l' C_j for every j
    std::vector<Mat<long long>> with_m;  // C_m' C_j for every j
    std::vector<bool> neutral;           // term j vanishes identically
};

inline PairingProducts pairing_products(const CoefficientSet& set, int l, int m) {
    const std::size_t n = set.c.size();
    PairingProducts p;
    const Mat<long long> clt = transpose(set.c[static_cast<std::size_t>(l)]);
    const Mat<long long> cmt = transpose(set.c[static_cast<std::size_t>(m)]);
    p.with_l.reserve(n);
    p.with_m.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        p.with_l.push_back(clt * set.c[j]);
        p.with_m.push_back(cmt * set.c[j]);
        // the (l,m) off-diagonal inner-product sum carries the term
        // (h2' C_l'C_j h1)(h2' C_m'C_j h1); a zero factor kills it outright
        p.neutral.push_back(is_zero(p.with_l.back()) || is_zero(p.with_m.back()));
    }
    return p;
}

inline bool admissible_pair(const PairingProducts& p, int g1, int g2) {
    return p.with_l[static_cast<std::size_t>(g1)] == p.with_m[static_cast<std::size_t>(g2)] &&
           p.with_m[static_cast<std::size_t>(g1)] == -p.with_l[static_cast<std::size_t>(g2)];
}

inline bool pair_backtrack(const PairingProducts& p, std::vector<bool>& used,
                           std::vector<IndexPair>& pairs) {
    const int n = static_cast<int>(used.size());
    int u = 0;
    while (u < n && used[static_cast<std::size_t>(u)]) ++u;
    if (u == n) return true;
    used[static_cast<std::size_t>(u)] = true;
    for (int w = u + 1; w < n; ++w) {
        if (used[static_cast<std::size_t>(w)]) continue;
        // two identically-vanishing terms cancel on their own and may be
        // grouped freely; otherwise the pair must cancel via the sign-swap
        // equations, in either orientation
        IndexPair candidates[2];
        int ncand = 0;
        if (p.neutral[static_cast<std::size_t>(u)] && p.neutral[static_cast<std::size_t>(w)]) {
            candidates[ncand++] = {u, w};
        } else {
            if (admissible_pair(p, u, w)) candidates[ncand++] = {u, w};
            if (admissible_pair(p, w, u)) candidates[ncand++] = {w, u};
        }
        for (int c = 0; c < ncand; ++c) {
            used[static_cast<std::size_t>(w)] = true;
            pairs.push_back(candidates[c]);
            if (pair_backtrack(p, used, pairs)) return true;
            pairs.pop_back();
            used[static_cast<std::size_t>(w)] = false;
        }
    }
    used[static_cast<std::size_t>(u)] = false;
    return false;
}

}  // namespace detail

/// Search for a partition of {0..2k-1} into k pairs certifying, in exact
/// integer arithmetic, that the (l,m) entry of the upper-right interference
/// block cannot survive orthogonalization for any channel: each pair either
/// satisfies C_l'C_{g1} = C_m'C_{g2} and C_m'C_{g1} = -C_l'C_{g2}, or joins
/// two indices whose cross-products with C_l or C_m are identically zero.
/// Pairs are tried in lexicographic order; the first valid partition is
/// verified by substitution and returned.
inline std::optional<std::vector<IndexPair>> find_group_partition(const CoefficientSet& set, int l, int m) {
    const int n = static_cast<int>(set.c.size());
    if (l == m || l < 0 || m < 0 || l >= n || m >= n)
        throw std::invalid_argument("find_group_partition: need distinct indices in [0, 2k)");
    const detail::PairingProducts p = detail::pairing_products(set, l, m);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<IndexPair> pairs;
    if (!detail::pair_backtrack(p, used, pairs)) return std::nullopt;
    for (const IndexPair& g : pairs) {
        const bool ok = detail::admissible_pair(p, g.first, g.second) ||
                        (p.neutral[static_cast<std::size_t>(g.first)] &&
                         p.neutral[static_cast<std::size_t>(g.second)]);
        if (!ok) throw std::logic_error("find_group_partition: produced an invalid partition");
    }
    return pairs;
}

/// The two exact conditions under which both diagonal blocks of R stay
/// diagonal for every channel realization: pairwise Hurwitz-Radon
/// orthogonality, and a valid group partition for every ordered index pair.
struct DiagonalityConditions {
    bool hurwitz_radon = false;
    bool pairing = false;
};

inline DiagonalityConditions check_diagonality_conditions(const CoefficientSet& set) {
    DiagonalityConditions cond;
    cond.hurwitz_radon = check_hurwitz_radon(set).orthogonal;
    if (!cond.hurwitz_radon) return cond;
    const int n = static_cast<int>(set.c.size());
    for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
            if (l != m && !find_group_partition(set, l, m)) return cond;
    cond.pairing = true;
    return cond;
}

inline StructureClass exact_structure_class(const DiagonalityConditions& cond) {
    if (cond.hurwitz_radon && cond.pairing) return StructureClass::ReducedAsdc;
    if (cond.hurwitz_radon) return StructureClass::ReducedWsdc;
    return StructureClass::Unstructured;
}

/// Monte Carlo confirmation that the interference block r12 carries no zero
/// entries for identical designs: counts trials where any |r12 entry| falls
/// below tol * ||R||_F. The fraction is generically far below 1%.
struct CrossBlockDensityReport {
    int trials = 0;
    int degenerate_trials = 0;
    double fraction = 0.0;
    double tol = 0.0;
    bool pass = false;
};

inline CrossBlockDensityReport check_r12_density(const LinearDesign& design, int trials, double tol,
                                                 std::uint64_t seed = 0x5eed) {
    if (trials < 100) throw std::invalid_argument("check_r12_density: need at least 100 trials");
    const int nr = rx_antennas_for(design);
    const std::size_t dim = 4 * static_cast<std::size_t>(design.num_symbols());
    CrossBlockDensityReport rep;
    rep.trials = trials;
    rep.tol = tol;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_stream(seed, 0xd15e, static_cast<std::uint64_t>(t));
        const ChannelPair ch{sample_channel(design.tx_antennas(), nr, rng),
                             sample_channel(design.tx_antennas(), nr, rng)};
        const QrFactors f = qr_decompose(build_lattice_generator(design, ch).m);
        const Mat<double> r = square_upper(f.r, dim);
        const RBlocks b = extract_blocks(r, design.num_symbols(), tol);
        const double scale = fro_norm(r);
        bool degenerate = false;
        for (double v : b.r12.data())
            if (std::abs(v) < tol * scale) degenerate = true;
        rep.degenerate_trials += degenerate;
    }
    rep.fraction = static_cast<double>(rep.degenerate_trials) / trials;
    rep.pass = rep.fraction < 0.01;
    return rep;
}

}  // namespace macstbc
