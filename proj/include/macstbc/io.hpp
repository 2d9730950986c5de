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

#include <fstream>

#include <json.hpp>

#include "macstbc/design.hpp"
#include "macstbc/simulator.hpp"

namespace macstbc {

namespace detail {

// serialize exactly representable integers as JSON integers, keeping the
// monomial coefficient matrices exact in the document
inline nlohmann::json number_or_int(double v) {
    const double r = std::nearbyint(v);
    if (r == v && std::abs(v) < 1e15) return static_cast<std::int64_t>(r);
    return v;
}

inline nlohmann::json complex_entry(const cplx& c) {
    return nlohmann::json::array({number_or_int(c.real()), number_or_int(c.imag())});
}

inline nlohmann::json coeff_list(const LinearDesign& d, bool conjugate_part) {
    nlohmann::json list = nlohmann::json::array();
    for (int i = 0; i < d.tx_antennas(); ++i) {
        const Mat<cplx>& m = conjugate_part ? d.xconj_coeff(i) : d.x_coeff(i);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_entry(m(r, c)));
            rows.push_back(std::move(row));
        }
        list.push_back(std::move(rows));
    }
    return list;
}

}  // namespace detail

/// Design document: {T, Nt, k, A, B} with A and B one T x k matrix of
/// [re, im] entries per antenna column.
inline nlohmann::json design_to_json(const LinearDesign& d) {
    return nlohmann::json{{"T", d.time_slots()},
                          {"Nt", d.tx_antennas()},
                          {"k", d.num_symbols()},
                          {"label", d.label()},
                          {"A", detail::coeff_list(d, false)},
                          {"B", detail::coeff_list(d, true)}};
}

inline LinearDesign design_from_json(const nlohmann::json& j) {
    const int t = j.at("T").get<int>();
    const int nt = j.at("Nt").get<int>();
    const int k = j.at("k").get<int>();
    const std::string label = j.value("label", std::string("imported"));
    auto parse_side = [&](const nlohmann::json& side) {
        if (static_cast<int>(side.size()) != nt)
            throw std::invalid_argument("design_from_json: need one coefficient matrix per antenna");
        std::vector<Mat<cplx>> out;
        out.reserve(side.size());
        for (const auto& mat : side) {
            Mat<cplx> m(static_cast<std::size_t>(t), static_cast<std::size_t>(k));
            if (static_cast<int>(mat.size()) != t)
                throw std::invalid_argument("design_from_json: coefficient matrix row count mismatch");
            for (std::size_t r = 0; r < m.rows(); ++r) {
                const auto& row = mat.at(r);
                if (static_cast<int>(row.size()) != k)
                    throw std::invalid_argument("design_from_json: coefficient matrix column count mismatch");
                for (std::size_t c = 0; c < m.cols(); ++c) {
                    const auto& e = row.at(c);
                    m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
                }
            }
            out.push_back(std::move(m));
        }
        return out;
    };
    return LinearDesign(label, t, nt, k, parse_side(j.at("A")), parse_side(j.at("B")));
}

inline void save_design(const LinearDesign& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << design_to_json(d).dump(2) << '\n';
}

inline LinearDesign load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open design file '" + path + "'");
    nlohmann::json j;
    in >> j;
    return design_from_json(j);
}

/// Row-major CSV, 17 significant digits.
inline std::string matrix_csv(const Mat<double>& m) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << m(r, c);
        }
        os << '\n';
    }
    return os.str();
}

inline std::string matrix_csv(const Mat<long long>& m) {
    std::ostringstream os;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << m(r, c);
        }
        os << '\n';
    }
    return os.str();
}

/// JSON mirror of the sweep CSV (same columns, one object per SNR point).
inline nlohmann::json sweep_to_json(const SweepResult& sweep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SnrPoint& p : sweep.points) {
        rows.push_back({{"snr_db", p.snr_db},
                        {"trials", p.trials},
                        {"ser_user1", p.ser_user1()},
                        {"ser_user2", p.ser_user2()},
                        {"ser_total", p.ser_total()},
                        {"mean_quantizer_calls", p.mean_quantizer_calls()},
                        {"mean_sort_comparisons", p.mean_sort_comparisons()},
                        {"mean_nodes", p.mean_nodes()},
                        {"max_nodes", p.max_nodes}});
    }
    return nlohmann::json{{"points", rows}};
}

}  // namespace macstbc
