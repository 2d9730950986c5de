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

#include <string>

#include "macstbc/design.hpp"
#include "macstbc/matrix.hpp"

namespace macstbc {

/// Quasi-static channels of the two users, tx_antennas x rx_antennas each.
struct ChannelPair {
    Mat<cplx> user1;
    Mat<cplx> user2;
};

/// Smallest receive array that keeps the real generator full column rank:
/// ceil(2k / T).
inline int rx_antennas_for(const LinearDesign& design) {
    return (2 * design.num_symbols() + design.time_slots() - 1) / design.time_slots();
}

/// [Re(v); Im(v)] stacking used for every real-valued view in this library.
inline std::vector<double> stack_re_im(std::span<const cplx> v) {
    std::vector<double> out(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i].real();
        out[v.size() + i] = v[i].imag();
    }
    return out;
}

/// Real channel vector for one user: receive antennas outermost, within each
/// antenna the Re parts of column j then the Im parts.
inline std::vector<double> stack_channel(const Mat<cplx>& h) {
    std::vector<double> out;
    out.reserve(2 * h.rows() * h.cols());
    for (std::size_t j = 0; j < h.cols(); ++j) {
        for (std::size_t i = 0; i < h.rows(); ++i) out.push_back(h(i, j).real());
        for (std::size_t i = 0; i < h.rows(); ++i) out.push_back(h(i, j).imag());
    }
    return out;
}

/// Real 2T x 2k map from the stacked symbol vector [Re x; Im x] of one user to
/// the stacked signal [Re y; Im y] seen at a single receive antenna with
/// per-transmit-antenna gains `gains`:
///
///   sum_i [ Re(g_i A_i)+Re(g_i B_i)   -Im(g_i A_i)+Im(g_i B_i) ]
///         [ Im(g_i A_i)+Im(g_i B_i)    Re(g_i A_i)-Re(g_i B_i) ]
inline Mat<double> build_user_matrix(const LinearDesign& design, std::span<const cplx> gains) {
    if (gains.size() != static_cast<std::size_t>(design.tx_antennas()))
        throw std::invalid_argument("build_user_matrix: need one gain per transmit antenna");
    const std::size_t t = static_cast<std::size_t>(design.time_slots());
    const std::size_t k = static_cast<std::size_t>(design.num_symbols());
    Mat<double> out(2 * t, 2 * k);
    for (int i = 0; i < design.tx_antennas(); ++i) {
        const cplx g = gains[static_cast<std::size_t>(i)];
        if (g == cplx{}) continue;
        const Mat<cplx>& a = design.x_coeff(i);
        const Mat<cplx>& b = design.xconj_coeff(i);
        for (std::size_t r = 0; r < t; ++r)
            for (std::size_t c = 0; c < k; ++c) {
                const cplx ga = g * a(r, c);
                const cplx gb = g * b(r, c);
                out(r, c) += ga.real() + gb.real();
                out(r, k + c) += -ga.imag() + gb.imag();
                out(t + r, c) += ga.imag() + gb.imag();
                out(t + r, k + c) += ga.real() - gb.real();
            }
    }
    return out;
}

/// Real lattice generator M in R^{2T*Nr x 4k}: per receive antenna j one
/// 2T-row band [user-1 block | user-2 block]. Columns 1..2k depend only on
/// the user-1 channel, columns 2k+1..4k only on the user-2 channel, and
/// M * [x1_stacked; x2_stacked] reproduces the stacked noiseless signal.
struct LatticeGenerator {
    Mat<double> m;
    int rx_antennas = 0;
};

inline LatticeGenerator build_lattice_generator(const LinearDesign& design, const ChannelPair& ch) {
    const int nr = rx_antennas_for(design);
    const std::size_t t = static_cast<std::size_t>(design.time_slots());
    const std::size_t k = static_cast<std::size_t>(design.num_symbols());
    for (const Mat<cplx>* h : {&ch.user1, &ch.user2})
        if (h->rows() != static_cast<std::size_t>(design.tx_antennas()) ||
            h->cols() != static_cast<std::size_t>(nr))
            throw std::invalid_argument("build_lattice_generator: channel must be Nt x ceil(2k/T)");
    LatticeGenerator gen{Mat<double>(2 * t * static_cast<std::size_t>(nr), 4 * k), nr};
    for (int j = 0; j < nr; ++j) {
        const Mat<double> u1 = build_user_matrix(design, std::span<const cplx>(ch.user1.col(static_cast<std::size_t>(j))));
        const Mat<double> u2 = build_user_matrix(design, std::span<const cplx>(ch.user2.col(static_cast<std::size_t>(j))));
        const std::size_t r0 = 2 * t * static_cast<std::size_t>(j);
        for (std::size_t r = 0; r < 2 * t; ++r)
            for (std::size_t c = 0; c < 2 * k; ++c) {
                gen.m(r0 + r, c) = u1(r, c);
                gen.m(r0 + r, 2 * k + c) = u2(r, c);
            }
    }
    return gen;
}

/// The 2k exact integer matrices C_i with M = [C_1 h1 .. C_2k h1 | C_1 h2 ..
/// C_2k h2]; one shared set since both users employ the same design.
struct CoefficientSet {
    std::vector<Mat<long long>> c;
    int time_slots = 0;
    int tx_antennas = 0;
    int rx_antennas = 0;
    int num_symbols = 0;
    bool valid = true;           // false when some C_i is identically zero
    std::string invalid_reason;
};

/// Extract the C_i by one-hot channel probes: each real channel variable set
/// to 1 in turn yields one exact integer column of every C_i (no
/// floating-point differentiation; probe outputs are small integers).
inline CoefficientSet extract_coefficient_matrices(const LinearDesign& design, int rx_antennas) {
    if (!design.entry_monomial()) {
        const auto bad = design.monomial_violation();
        throw std::invalid_argument(
            "extract_coefficient_matrices: design is not entry-monomial at (time slot " +
            std::to_string(bad->first) + ", antenna " + std::to_string(bad->second) + ")");
    }
    const int nt = design.tx_antennas();
    const std::size_t t = static_cast<std::size_t>(design.time_slots());
    const std::size_t k = static_cast<std::size_t>(design.num_symbols());
    const std::size_t rows = 2 * t * static_cast<std::size_t>(rx_antennas);
    const std::size_t vars = 2 * static_cast<std::size_t>(nt) * static_cast<std::size_t>(rx_antennas);
    CoefficientSet set;
    set.c.assign(2 * k, Mat<long long>(rows, vars));
    set.time_slots = design.time_slots();
    set.tx_antennas = nt;
    set.rx_antennas = rx_antennas;
    set.num_symbols = design.num_symbols();
    for (int j = 0; j < rx_antennas; ++j)
        for (int part = 0; part < 2; ++part)
            for (int i = 0; i < nt; ++i) {
                const std::size_t v = static_cast<std::size_t>(j) * 2 * static_cast<std::size_t>(nt) +
                                      static_cast<std::size_t>(part) * static_cast<std::size_t>(nt) +
                                      static_cast<std::size_t>(i);
                std::vector<cplx> gains(static_cast<std::size_t>(nt));
                gains[static_cast<std::size_t>(i)] = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
                const Mat<double> u = build_user_matrix(design, std::span<const cplx>(gains));
                const std::size_t r0 = 2 * t * static_cast<std::size_t>(j);
                for (std::size_t c = 0; c < 2 * k; ++c)
                    for (std::size_t r = 0; r < 2 * t; ++r) {
                        const double val = u(r, c);
                        const long long iv = std::llround(val);
                        if (std::abs(val - static_cast<double>(iv)) > 1e-9)
                            throw std::runtime_error("extract_coefficient_matrices: non-integer coefficient");
                        set.c[c](r0 + r, v) = iv;
                    }
            }
    for (std::size_t i = 0; i < set.c.size(); ++i)
        if (is_zero(set.c[i])) {
            set.valid = false;
            set.invalid_reason = "coefficient matrix " + std::to_string(i + 1) + " is identically zero";
            break;
        }
    return set;
}

/// Monomial structure report for a coefficient set. Row/column monomial means
/// at most one nonzero per row/column of every C_i; the three entry
/// properties additionally require signed unit coefficients per user half and
/// every channel variable appearing exactly once per generator column.
struct MonomialReport {
    bool row_monomial = true;
    bool col_monomial = true;
    bool user1_signed_vars = true;   // first 2k generator columns: entries are +-(one channel variable)
    bool user2_signed_vars = true;   // last 2k columns: same matrices, same verdict
    bool every_var_once = true;      // each generator column touches all 2*Nt*Nr variables exactly once
    bool rc_monomial = true;
    std::vector<std::string> violations;
};

inline MonomialReport check_rc_monomial(const CoefficientSet& set) {
    MonomialReport rep;
    auto flag = [&rep](bool& field, std::string what) {
        field = false;
        rep.violations.push_back(std::move(what));
    };
    for (std::size_t i = 0; i < set.c.size(); ++i) {
        const Mat<long long>& c = set.c[i];
        for (std::size_t r = 0; r < c.rows(); ++r) {
            int nz = 0;
            for (std::size_t v = 0; v < c.cols(); ++v) {
                const long long e = c(r, v);
                if (e == 0) continue;
                ++nz;
                if (e != 1 && e != -1) {
                    flag(rep.user1_signed_vars,
                         "C_" + std::to_string(i + 1) + " entry (" + std::to_string(r + 1) + "," +
                             std::to_string(v + 1) + ") = " + std::to_string(e) + " is not a signed unit");
                    rep.user2_signed_vars = false;
                }
            }
            if (nz > 1)
                flag(rep.row_monomial,
                     "C_" + std::to_string(i + 1) + " row " + std::to_string(r + 1) + " has " +
                         std::to_string(nz) + " nonzeros");
        }
        for (std::size_t v = 0; v < c.cols(); ++v) {
            int nz = 0;
            for (std::size_t r = 0; r < c.rows(); ++r) nz += c(r, v) != 0;
            if (nz > 1)
                flag(rep.col_monomial,
                     "C_" + std::to_string(i + 1) + " column " + std::to_string(v + 1) + " has " +
                         std::to_string(nz) + " nonzeros");
            if (nz != 1)
                flag(rep.every_var_once,
                     "C_" + std::to_string(i + 1) + " column " + std::to_string(v + 1) + " holds variable " +
                         std::to_string(nz) + " times");
        }
    }
    rep.rc_monomial = rep.row_monomial && rep.col_monomial;
    return rep;
}

}  // namespace macstbc
