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

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "macstbc/io.hpp"
#include "macstbc/macstbc.hpp"

namespace macstbc::cli {

/// Exit code contract: 0 success/match, 1 verification or runtime failure,
/// 2 usage or config error.
enum ExitCode { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string design = "alamouti";
    int tx_antennas = 0;   // 0: per-design default
    int num_symbols = 0;
    std::string design_file;
    int qam = 4;
    std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
    std::int64_t trials = 500;
    std::uint64_t seed = 1;
    std::string decoder = "conditional";
    std::string out;
    double tol = 1e-9;
    int threads = 0;
    std::string claim;  // expected structure class override for verify
};

namespace detail {

inline void default_params(Options& o) {
    auto set = [&](int nt, int k) {
        if (o.tx_antennas == 0) o.tx_antennas = nt;
        if (o.num_symbols == 0) o.num_symbols = k;
    };
    if (o.design == "alamouti") set(2, 2);
    else if (o.design == "case1") set(2, 2);
    else if (o.design == "case2") set(2, 3);
    else if (o.design == "case3") set(3, 2);
    else if (o.design == "case4") set(3, 3);
    else if (o.design == "cod") set(4, 0);
    else if (o.design == "smux") set(2, 0);
}

inline void require_parity(const Options& o, bool tx_even, bool k_even) {
    if ((o.tx_antennas % 2 == 0) != tx_even || (o.num_symbols % 2 == 0) != k_even)
        throw UsageError("design '" + o.design + "' needs " + (tx_even ? "even" : "odd") +
                         " --nt and " + (k_even ? "even" : "odd") + " --k");
}

inline LinearDesign resolve_design(Options& o) {
    if (!o.design_file.empty()) return load_design(o.design_file);
    default_params(o);
    if (o.design == "alamouti") {
        if (o.tx_antennas != 2 || o.num_symbols != 2)
            throw UsageError("design 'alamouti' is fixed at --nt 2 --k 2");
        return build_design(2, 2);
    }
    if (o.design == "case1") { require_parity(o, true, true); return build_design(o.tx_antennas, o.num_symbols); }
    if (o.design == "case2") { require_parity(o, true, false); return build_design(o.tx_antennas, o.num_symbols); }
    if (o.design == "case3") { require_parity(o, false, true); return build_design(o.tx_antennas, o.num_symbols); }
    if (o.design == "case4") { require_parity(o, false, false); return build_design(o.tx_antennas, o.num_symbols); }
    if (o.design == "cod") {
        int a = 0, n = o.tx_antennas;
        while (n > 1 && n % 2 == 0) { n /= 2; ++a; }
        if (n != 1 || a < 1) throw UsageError("design 'cod' needs --nt a power of two >= 2");
        return build_square_cod(a);
    }
    if (o.design == "smux") return build_spatial_multiplexing(o.tx_antennas);
    throw UsageError("unknown design '" + o.design + "'; see list-designs");
}

inline std::optional<StructureClass> claimed_class(const Options& o) {
    if (!o.claim.empty()) {
        if (o.claim == "asdc") return StructureClass::ReducedAsdc;
        if (o.claim == "wsdc") return StructureClass::ReducedWsdc;
        if (o.claim == "unstructured") return StructureClass::Unstructured;
        throw UsageError("unknown --claim '" + o.claim + "' (asdc|wsdc|unstructured)");
    }
    if (!o.design_file.empty()) return std::nullopt;
    if (o.design == "cod") return o.tx_antennas == 2 ? StructureClass::ReducedAsdc : StructureClass::ReducedWsdc;
    if (o.design == "smux") return StructureClass::Unstructured;
    return StructureClass::ReducedAsdc;  // alamouti and all stacked-block cases
}

inline void merge_config(Options& o, const CLI::App& sub) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw UsageError("cannot open config '" + o.config_path + "'");
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config parse error: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    auto flag_given = [&sub](const std::string& name) { return sub.count(name) > 0; };
    try {
        for (const auto& [key, value] : cfg.items()) {
            if (key == "design") { if (!flag_given("--design")) o.design = value.get<std::string>(); }
            else if (key == "nt") { if (!flag_given("--nt")) o.tx_antennas = value.get<int>(); }
            else if (key == "k") { if (!flag_given("--k")) o.num_symbols = value.get<int>(); }
            else if (key == "design_file") { if (!flag_given("--design-file")) o.design_file = value.get<std::string>(); }
            else if (key == "qam") { if (!flag_given("--qam")) o.qam = value.get<int>(); }
            else if (key == "snr_db") { if (!flag_given("--snr")) o.snr_db = value.get<std::vector<double>>(); }
            else if (key == "trials") { if (!flag_given("--trials")) o.trials = value.get<std::int64_t>(); }
            else if (key == "seed") { if (!flag_given("--seed")) o.seed = value.get<std::uint64_t>(); }
            else if (key == "decoder") { if (!flag_given("--decoder")) o.decoder = value.get<std::string>(); }
            else if (key == "out") { if (!flag_given("--out")) o.out = value.get<std::string>(); }
            else if (key == "tol") { if (!flag_given("--tol")) o.tol = value.get<double>(); }
            else if (key == "threads") { if (!flag_given("--threads")) o.threads = value.get<int>(); }
            else if (key == "claim") { if (!flag_given("--claim")) o.claim = value.get<std::string>(); }
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config value error: " + std::string(e.what()));
    }
}

inline std::string entry_text(const LinearDesign& d, int t, int i) {
    for (int j = 0; j < d.num_symbols(); ++j) {
        const cplx a = d.x_coeff(i)(static_cast<std::size_t>(t), static_cast<std::size_t>(j));
        const cplx b = d.xconj_coeff(i)(static_cast<std::size_t>(t), static_cast<std::size_t>(j));
        if (a != cplx{}) {
            const std::string sign = a.real() < 0 || a.imag() < 0 ? "-" : "";
            const std::string unit = a.imag() != 0 ? "i*" : "";
            return sign + unit + "x" + std::to_string(j + 1);
        }
        if (b != cplx{}) {
            const std::string sign = b.real() < 0 || b.imag() < 0 ? "-" : "";
            const std::string unit = b.imag() != 0 ? "i*" : "";
            return sign + unit + "x" + std::to_string(j + 1) + "*";
        }
    }
    return "0";
}

inline void print_design(std::ostream& out, const LinearDesign& d) {
    out << d.label() << ": T=" << d.time_slots() << " Nt=" << d.tx_antennas()
        << " k=" << d.num_symbols();
    const Ratio r = rate(d);
    out << " rate=" << r.num << "/" << r.den
        << (d.entry_monomial() ? " (entry-monomial)" : " (not entry-monomial)") << "\n";
    for (int t = 0; t < d.time_slots(); ++t) {
        out << "  [";
        for (int i = 0; i < d.tx_antennas(); ++i) {
            if (i) out << ", ";
            out << entry_text(d, t, i);
        }
        out << "]\n";
    }
}

inline void print_zero_pattern(std::ostream& out, const Mat<double>& r, int num_symbols, double tol) {
    const double threshold = tol * fro_norm(r);
    const std::size_t twok = 2 * static_cast<std::size_t>(num_symbols);
    out << "R zero pattern ('.' below " << tol << "*||R||_F):\n";
    for (std::size_t i = 0; i < r.rows(); ++i) {
        out << "  ";
        for (std::size_t j = 0; j < r.cols(); ++j) {
            if (j == twok) out << "| ";
            out << (std::abs(r(i, j)) < threshold ? '.' : 'x') << ' ';
        }
        out << '\n';
        if (i + 1 == twok) {
            out << "  ";
            for (std::size_t j = 0; j < 2 * r.cols() + 2; ++j) out << '-';
            out << '\n';
        }
    }
}

inline int cmd_verify(Options& o, std::ostream& out) {
    const LinearDesign design = resolve_design(o);
    const CoefficientSet cset = extract_coefficient_matrices(design, rx_antennas_for(design));
    const MonomialReport rc = check_rc_monomial(cset);
    const DiagonalityConditions cond = check_diagonality_conditions(cset);
    const StructureClass exact = exact_structure_class(cond);
    const ClassifyReport numeric = classify_design(design, static_cast<int>(o.trials), o.tol, o.seed);
    const std::optional<StructureClass> claim = claimed_class(o);

    const bool consistent = exact == numeric.classification;
    const bool match = consistent && (!claim || *claim == exact);
    nlohmann::json report{{"design", design.label()},
                          {"nt", design.tx_antennas()},
                          {"k", design.num_symbols()},
                          {"rc_monomial", rc.rc_monomial},
                          {"hr_orthogonal", cond.hurwitz_radon},
                          {"partition_condition", cond.pairing},
                          {"exact_class", to_string(exact)},
                          {"numerical_class", to_string(numeric.classification)},
                          {"worst_offdiag_r11", numeric.worst_offdiag_r11},
                          {"worst_offdiag_r22", numeric.worst_offdiag_r22},
                          {"claimed_class", claim ? nlohmann::json(to_string(*claim)) : nlohmann::json()},
                          {"match", match},
                          {"tol", o.tol},
                          {"trials", o.trials}};
    out << report.dump(2) << '\n';
    if (!o.out.empty()) {
        const std::filesystem::path parent = std::filesystem::path(o.out).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        std::ofstream file(o.out);
        if (!file) throw std::runtime_error("cannot write report to '" + o.out + "'");
        file << report.dump(2) << '\n';
    }
    return match ? exit_ok : exit_failure;
}

inline int cmd_inspect(Options& o, std::ostream& out) {
    const LinearDesign design = resolve_design(o);
    print_design(out, design);
    const int nr = rx_antennas_for(design);
    auto rng = make_stream(o.seed, 0x1a5bec7, 0);
    const ChannelPair ch{sample_channel(design.tx_antennas(), nr, rng),
                         sample_channel(design.tx_antennas(), nr, rng)};
    const LatticeGenerator gen = build_lattice_generator(design, ch);
    out << "lattice generator: " << gen.m.rows() << " x " << gen.m.cols() << " (Nr=" << nr << ")\n";
    const QrFactors f = qr_decompose(gen.m);
    const Mat<double> r = square_upper(f.r, 4 * static_cast<std::size_t>(design.num_symbols()));
    print_zero_pattern(out, r, design.num_symbols(), o.tol);
    const RBlocks blocks = extract_blocks(r, design.num_symbols(), o.tol);
    out << "sampled classification: " << to_string(blocks.classification) << '\n';
    if (!o.out.empty()) {
        const std::filesystem::path dir(o.out);
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "design.json") << design_to_json(design).dump(2) << '\n';
        std::ofstream(dir / "M.csv") << matrix_csv(gen.m);
        std::ofstream(dir / "R.csv") << matrix_csv(r);
        if (design.entry_monomial()) {
            const CoefficientSet cset = extract_coefficient_matrices(design, nr);
            for (std::size_t i = 0; i < cset.c.size(); ++i)
                std::ofstream(dir / ("C_" + std::to_string(i + 1) + ".csv")) << matrix_csv(cset.c[i]);
        }
        out << "wrote design.json, M.csv, R.csv"
            << (design.entry_monomial() ? " and coefficient matrices" : "") << " to " << o.out << '\n';
    }
    return exit_ok;
}

inline int cmd_simulate(Options& o, std::ostream& out) {
    const LinearDesign design = resolve_design(o);
    SimConfig cfg;
    cfg.qam = o.qam;
    cfg.snr_db = o.snr_db;
    cfg.trials_per_snr = o.trials;
    cfg.master_seed = o.seed;
    cfg.decoder = decoder_from_string(o.decoder);
    cfg.zero_tol = o.tol;
    cfg.threads = o.threads;
    const SweepResult sweep = run_sweep(design, cfg);

    const std::filesystem::path dir(o.out.empty() ? "results" : o.out);
    std::filesystem::create_directories(dir);
    const std::string csv = sweep_csv(sweep);
    std::ofstream(dir / "results.csv") << csv;
    nlohmann::json j = sweep_to_json(sweep);
    j["config"] = {{"design", design.label()}, {"qam", o.qam},   {"snr_db", o.snr_db},
                   {"trials", o.trials},       {"seed", o.seed}, {"decoder", o.decoder},
                   {"tol", o.tol}};
    std::ofstream(dir / "results.json") << j.dump(2) << '\n';
    out << csv;
    out << "wrote " << (dir / "results.csv").string() << " and " << (dir / "results.json").string()
        << " (" << sweep.wall_seconds << " s)\n";
    return exit_ok;
}

inline int cmd_list_designs(std::ostream& out) {
    out << "built-in designs (all constructible for both users):\n"
        << "  alamouti            2 antennas, 2 symbols, rate 1; fully reduced structure\n"
        << "  case1 --nt --k      even antennas, even symbols; fully reduced structure\n"
        << "  case2 --nt --k      even antennas, odd symbols; fully reduced structure\n"
        << "  case3 --nt --k      odd antennas, even symbols; fully reduced structure\n"
        << "  case4 --nt --k      odd antennas, odd symbols; fully reduced structure\n"
        << "  cod --nt            square orthogonal design, antennas a power of two;\n"
        << "                      diagonal r11 only (reduced worst case) for nt > 2\n"
        << "  smux --nt           spatial multiplexing reference; unstructured\n"
        << "custom designs: --design-file FILE.json (schema {T, Nt, k, A, B})\n";
    return exit_ok;
}

}  // namespace detail

/// Parse and execute. Arguments exclude the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"two-user MIMO multiple-access STBC toolbox"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON config; flags override its keys");
        sub->add_option("--design", o.design, "built-in design name (see list-designs)");
        sub->add_option("--nt", o.tx_antennas, "transmit antennas per user");
        sub->add_option("--k", o.num_symbols, "complex symbols per codeword");
        sub->add_option("--design-file", o.design_file, "design JSON document to load");
        sub->add_option("--qam", o.qam, "square QAM size");
        sub->add_option("--snr", o.snr_db, "SNR list in dB")->delimiter(',');
        sub->add_option("--trials", o.trials, "trials (per SNR point for simulate)");
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--decoder", o.decoder, "bruteforce|generic|conditional");
        sub->add_option("--out", o.out, "output file (verify) or directory (inspect, simulate)");
        sub->add_option("--tol", o.tol, "relative zero tolerance");
        sub->add_option("--threads", o.threads, "worker threads (0 = all available)");
        sub->add_option("--claim", o.claim, "expected class: asdc|wsdc|unstructured");
        return sub;
    };
    CLI::App* verify = add_common(app.add_subcommand("verify", "check the structure class of a design"));
    CLI::App* inspect = add_common(app.add_subcommand("inspect", "print a design and one sampled R pattern"));
    CLI::App* simulate = add_common(app.add_subcommand("simulate", "Monte Carlo SNR sweep"));
    app.add_subcommand("list-designs", "enumerate built-in designs");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (app.got_subcommand("list-designs")) return detail::cmd_list_designs(out);
        CLI::App* active = app.got_subcommand(verify) ? verify
                           : app.got_subcommand(inspect) ? inspect
                                                         : simulate;
        detail::merge_config(o, *active);
        if (app.got_subcommand(verify)) return detail::cmd_verify(o, out);
        if (app.got_subcommand(inspect)) return detail::cmd_inspect(o, out);
        return detail::cmd_simulate(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace macstbc::cli
