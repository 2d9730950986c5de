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

#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "macstbc/decoder.hpp"
#include "macstbc/lattice.hpp"
#include "macstbc/qr.hpp"
#include "macstbc/rng.hpp"

namespace macstbc {

enum class DecoderKind { Bruteforce, Generic, Conditional };

inline const char* to_string(DecoderKind d) {
    switch (d) {
        case DecoderKind::Bruteforce: return "bruteforce";
        case DecoderKind::Generic: return "generic";
        default: return "conditional";
    }
}

inline DecoderKind decoder_from_string(const std::string& s) {
    if (s == "bruteforce") return DecoderKind::Bruteforce;
    if (s == "generic") return DecoderKind::Generic;
    if (s == "conditional") return DecoderKind::Conditional;
    throw std::invalid_argument("unknown decoder '" + s + "' (bruteforce|generic|conditional)");
}

struct SimConfig {
    int qam = 4;
    std::vector<double> snr_db;
    std::int64_t trials_per_snr = 0;
    std::uint64_t master_seed = 1;
    DecoderKind decoder = DecoderKind::Conditional;
    double zero_tol = 1e-9;      // structure classification tolerance
    int threads = 0;             // 0: one worker per available execution unit
    double noise_scale = 1.0;    // 0 disables noise; used by sanity checks
};

struct TrialResult {
    std::vector<double> z_sent;
    std::vector<double> z_hat;
    int errors_user1 = 0;  // wrong real PAM coordinates in the first 2k entries
    int errors_user2 = 0;
    DecodeStats stats;
};

/// One Monte Carlo decode, a pure function of (master_seed, snr_index,
/// trial_index). Draw order per trial: user-1 channel, user-2 channel,
/// symbol levels, then noise.
inline TrialResult run_trial(const LinearDesign& design, const SimConfig& cfg, int snr_index,
                             std::int64_t trial_index) {
    const PamConstellation pam = PamConstellation::square_qam(cfg.qam);
    const int nr = rx_antennas_for(design);
    const std::size_t twok = 2 * static_cast<std::size_t>(design.num_symbols());
    const double rho = std::pow(10.0, cfg.snr_db.at(static_cast<std::size_t>(snr_index)) / 10.0);
    const double s = std::sqrt(rho / (2.0 * design.tx_antennas()));

    auto rng = make_stream(cfg.master_seed, static_cast<std::uint64_t>(snr_index),
                           static_cast<std::uint64_t>(trial_index));
    const ChannelPair ch{sample_channel(design.tx_antennas(), nr, rng),
                         sample_channel(design.tx_antennas(), nr, rng)};
    std::uniform_int_distribution<int> level(0, pam.num_levels() - 1);
    std::vector<double> z(2 * twok);
    for (double& v : z) v = pam.points[static_cast<std::size_t>(level(rng))];
    const LatticeGenerator gen = build_lattice_generator(design, ch);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
    std::vector<double> y = gen.m * z;
    for (double& v : y) v *= s;
    for (double& v : y) v += cfg.noise_scale * gauss(rng);

    TrialResult out;
    out.z_sent = z;
    DecodeResult dec;
    if (cfg.decoder == DecoderKind::Bruteforce) {
        dec = ml_bruteforce(gen.m, y, pam, rho, design.tx_antennas());
    } else {
        const QrFactors f = qr_decompose(gen.m);
        const std::vector<double> rotated = transpose(f.q) * y;
        const std::span<const double> y_tilde(rotated.data(), 2 * twok);
        const Mat<double> r = square_upper(f.r, 2 * twok);
        if (cfg.decoder == DecoderKind::Generic) {
            dec = sphere_decode_generic(r, y_tilde, pam, rho, design.tx_antennas());
        } else {
            const RBlocks blocks = extract_blocks(r, design.num_symbols(), cfg.zero_tol);
            dec = decode_conditional(blocks, y_tilde, pam, rho, design.tx_antennas());
        }
    }
    for (std::size_t i = 0; i < 2 * twok; ++i) {
        if (dec.z_hat[i] == z[i]) continue;
        (i < twok ? out.errors_user1 : out.errors_user2) += 1;
    }
    out.z_hat = std::move(dec.z_hat);
    out.stats = dec.stats;
    return out;
}

struct SnrPoint {
    double snr_db = 0.0;
    std::int64_t trials = 0;
    std::int64_t coord_errors_user1 = 0;
    std::int64_t coord_errors_user2 = 0;
    DecodeStats totals;
    std::uint64_t max_nodes = 0;
    int coords_per_user = 0;

    double ser_user1() const { return static_cast<double>(coord_errors_user1) / (static_cast<double>(trials) * coords_per_user); }
    double ser_user2() const { return static_cast<double>(coord_errors_user2) / (static_cast<double>(trials) * coords_per_user); }
    double ser_total() const {
        return static_cast<double>(coord_errors_user1 + coord_errors_user2) /
               (static_cast<double>(trials) * 2 * coords_per_user);
    }
    double mean_quantizer_calls() const { return static_cast<double>(totals.quantizer_calls) / static_cast<double>(trials); }
    double mean_sort_comparisons() const { return static_cast<double>(totals.sort_comparisons) / static_cast<double>(trials); }
    double mean_nodes() const { return static_cast<double>(totals.nodes_visited) / static_cast<double>(trials); }
};

struct SweepResult {
    std::vector<SnrPoint> points;
    double wall_seconds = 0.0;  // informational only; never serialized
};

/// Full sweep: trials_per_snr decodes at each SNR. Trials run on a small
/// worker pool; per-trial streams and commutative integer reductions make the
/// result identical regardless of scheduling.
inline SweepResult run_sweep(const LinearDesign& design, const SimConfig& cfg) {
    if (cfg.trials_per_snr < 1) throw std::invalid_argument("run_sweep: trials_per_snr must be >= 1");
    if (cfg.snr_db.empty()) throw std::invalid_argument("run_sweep: need at least one SNR point");
    if (cfg.decoder == DecoderKind::Conditional) {
        // fail fast instead of per trial when the structure cannot support it
        const ClassifyReport probe = classify_design(design, 4, cfg.zero_tol, cfg.master_seed);
        if (probe.classification == StructureClass::Unstructured)
            throw std::invalid_argument("run_sweep: design '" + design.label() +
                                        "' is unstructured; the conditional decoder does not apply");
    }
    const auto t0 = std::chrono::steady_clock::now();
    int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    SweepResult sweep;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        SnrPoint point;
        point.snr_db = cfg.snr_db[si];
        point.trials = cfg.trials_per_snr;
        point.coords_per_user = 2 * design.num_symbols();
        std::mutex merge_mutex;
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        auto work = [&]() {
            SnrPoint local;
            local.coords_per_user = point.coords_per_user;
            try {
                for (;;) {
                    const std::int64_t trial = next.fetch_add(1);
                    if (trial >= cfg.trials_per_snr) break;
                    const TrialResult tr = run_trial(design, cfg, static_cast<int>(si), trial);
                    local.coord_errors_user1 += tr.errors_user1;
                    local.coord_errors_user2 += tr.errors_user2;
                    local.totals += tr.stats;
                    local.max_nodes = std::max(local.max_nodes, tr.stats.nodes_visited);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            point.coord_errors_user1 += local.coord_errors_user1;
            point.coord_errors_user2 += local.coord_errors_user2;
            point.totals += local.totals;
            point.max_nodes = std::max(point.max_nodes, local.max_nodes);
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        sweep.points.push_back(point);
    }
    sweep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sweep;
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace detail

/// CSV rows mirror the JSON report; doubles carry 17 significant digits so
/// reruns with the same seed are byte-identical.
inline std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << "snr_db,trials,ser_user1,ser_user2,ser_total,mean_quantizer_calls,"
          "mean_sort_comparisons,mean_nodes,max_nodes\n";
    for (const SnrPoint& p : sweep.points) {
        os << detail::format_double(p.snr_db) << ',' << p.trials << ','
           << detail::format_double(p.ser_user1()) << ',' << detail::format_double(p.ser_user2())
           << ',' << detail::format_double(p.ser_total()) << ','
           << detail::format_double(p.mean_quantizer_calls()) << ','
           << detail::format_double(p.mean_sort_comparisons()) << ','
           << detail::format_double(p.mean_nodes()) << ',' << p.max_nodes << '\n';
    }
    return os.str();
}

}  // namespace macstbc
