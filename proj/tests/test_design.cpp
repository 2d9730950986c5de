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

#include <catch2/catch_amalgamated.hpp>

#include "macstbc/design.hpp"
#include "macstbc/io.hpp"
#include "macstbc/rng.hpp"
#include "oracles.hpp"

using namespace macstbc;

namespace {

Mat<cplx> cmat(std::size_t rows, std::size_t cols, std::initializer_list<cplx> vals) {
    Mat<cplx> m(rows, cols);
    std::size_t i = 0;
    for (const cplx& v : vals) m.data()[i++] = v;
    return m;
}

const cplx imag_unit(0.0, 1.0);

}  // namespace

TEST_CASE("alamouti block 0 has the canonical coefficient matrices") {
    const LinearDesign d = make_alamouti_block(0);
    REQUIRE(d.time_slots() == 2);
    REQUIRE(d.tx_antennas() == 2);
    REQUIRE(d.num_symbols() == 2);
    CHECK(d.entry_monomial());
    CHECK(d.x_coeff(0) == Mat<cplx>::identity(2));
    CHECK(is_zero(d.xconj_coeff(0)));
    CHECK(is_zero(d.x_coeff(1)));
    CHECK(d.xconj_coeff(1) == cmat(2, 2, {0.0, -1.0, 1.0, 0.0}));
}

TEST_CASE("alamouti block 1 repeats the pattern in symbols 3 and 4") {
    const LinearDesign d = make_alamouti_block(1);
    REQUIRE(d.num_symbols() == 4);
    const std::vector<cplx> x{0.0, 0.0, cplx(2.0, 1.0), cplx(-1.0, 3.0)};
    const Mat<cplx> c = evaluate(d, x);
    CHECK(c(0, 0) == x[2]);
    CHECK(c(0, 1) == -std::conj(x[3]));
    CHECK(c(1, 0) == x[3]);
    CHECK(c(1, 1) == std::conj(x[2]));
    // symbols 1 and 2 never appear
    const Mat<cplx> only12 = evaluate(d, std::vector<cplx>{1.0, imag_unit, 0.0, 0.0});
    CHECK(is_zero(only12));
    CHECK_THROWS_AS(make_alamouti_block(-1), std::invalid_argument);
}

TEST_CASE("alamouti evaluation substitutes symbols") {
    const LinearDesign d = make_alamouti_block(0);
    CHECK(evaluate(d, std::vector<cplx>{1.0, 0.0}) == Mat<cplx>::identity(2));
    CHECK(evaluate(d, std::vector<cplx>{1.0, imag_unit}) == cmat(2, 2, {1.0, imag_unit, imag_unit, 1.0}));
    CHECK(is_zero(evaluate(d, std::vector<cplx>{0.0, 0.0})));
    CHECK_THROWS_AS(evaluate(d, std::vector<cplx>{1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("stacked designs have the promised shapes and rates") {
    struct Expect {
        int nt, k, t;
        Ratio rt;
    };
    for (const Expect& e : {Expect{2, 2, 2, {1, 1}}, Expect{2, 3, 4, {3, 4}}, Expect{4, 2, 4, {1, 2}},
                            Expect{4, 3, 8, {3, 8}}, Expect{3, 2, 4, {1, 2}}, Expect{5, 2, 6, {1, 3}},
                            Expect{6, 4, 12, {1, 3}}}) {
        const LinearDesign d = build_design(e.nt, e.k);
        INFO("nt=" << e.nt << " k=" << e.k);
        CHECK(d.time_slots() == e.t);
        CHECK(d.tx_antennas() == e.nt);
        CHECK(d.num_symbols() == e.k);
        CHECK(rate(d) == e.rt);
        CHECK(d.entry_monomial());
        CHECK(is_zero(evaluate(d, std::vector<cplx>(static_cast<std::size_t>(e.k)))));
    }
    CHECK_THROWS_AS(build_design(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_design(4, 1), std::invalid_argument);
}

TEST_CASE("odd symbol count appends a scaled identity block") {
    const LinearDesign d = build_design(2, 3);
    const Mat<cplx> c = evaluate(d, std::vector<cplx>{0.0, 0.0, 1.0});
    // only the appended x3*I block is active
    REQUIRE(c.rows() == 4);
    CHECK(c.block(0, 0, 2, 2) == Mat<cplx>(2, 2));
    CHECK(c.block(2, 0, 2, 2) == Mat<cplx>::identity(2));
    // the top block is the 2-antenna pair design in x1, x2
    const Mat<cplx> top = evaluate(d, std::vector<cplx>{1.0, imag_unit, 0.0});
    CHECK(top.block(0, 0, 2, 2) == cmat(2, 2, {1.0, imag_unit, imag_unit, 1.0}));
    CHECK(top.block(2, 0, 2, 2) == Mat<cplx>(2, 2));
}

TEST_CASE("odd antenna counts drop the final column of the even design") {
    const LinearDesign odd = build_design(3, 2);
    const LinearDesign even = build_design(4, 2);
    REQUIRE(odd.time_slots() == even.time_slots());
    auto rng = make_stream(11, 0, 0);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> x(2);
        for (cplx& v : x) v = cplx(g(rng), g(rng));
        const Mat<cplx> co = evaluate(odd, x);
        const Mat<cplx> ce = evaluate(even, x);
        CHECK(co == ce.block(0, 0, ce.rows(), 3));
    }
}

TEST_CASE("evaluation is real-linear in the stacked symbol coordinates") {
    auto rng = make_stream(23, 0, 0);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> scale(-2.0, 2.0);
    for (const auto& d : {build_design(2, 3), build_design(4, 2), build_square_cod(2)}) {
        for (int trial = 0; trial < 25; ++trial) {
            const std::size_t k = static_cast<std::size_t>(d.num_symbols());
            std::vector<cplx> x(k), y(k), mix(k);
            const double alpha = scale(rng), beta = scale(rng);
            for (std::size_t i = 0; i < k; ++i) {
                x[i] = cplx(g(rng), g(rng));
                y[i] = cplx(g(rng), g(rng));
                mix[i] = alpha * x[i] + beta * y[i];
            }
            const Mat<cplx> lhs = evaluate(d, mix);
            const Mat<cplx> ex = evaluate(d, x), ey = evaluate(d, y);
            for (std::size_t i = 0; i < lhs.data().size(); ++i)
                CHECK(std::abs(lhs.data()[i] - (alpha * ex.data()[i] + beta * ey.data()[i])) < 1e-12);
        }
    }
}

TEST_CASE("square orthogonal designs") {
    SECTION("exponent 1 reproduces the 2-antenna block exactly") {
        const LinearDesign cod = build_square_cod(1);
        const LinearDesign ala = make_alamouti_block(0);
        CHECK(cod.x_coeff(0) == ala.x_coeff(0));
        CHECK(cod.x_coeff(1) == ala.x_coeff(1));
        CHECK(cod.xconj_coeff(0) == ala.xconj_coeff(0));
        CHECK(cod.xconj_coeff(1) == ala.xconj_coeff(1));
    }
    SECTION("shapes and rate") {
        const LinearDesign cod = build_square_cod(2);
        CHECK(cod.time_slots() == 4);
        CHECK(cod.tx_antennas() == 4);
        CHECK(cod.num_symbols() == 3);
        CHECK(rate(cod) == Ratio{3, 4});
        CHECK(cod.entry_monomial());
    }
    SECTION("symbolic orthogonality identity holds exactly") {
        for (int a = 1; a <= 3; ++a) CHECK(oracle::satisfies_orthogonal_identity(build_square_cod(a)));
    }
    SECTION("stacked constructions stay column-orthogonal, multiplexing does not") {
        CHECK(oracle::satisfies_orthogonal_identity(build_design(4, 2)));
        CHECK_FALSE(oracle::satisfies_orthogonal_identity(build_spatial_multiplexing(2)));
    }
    SECTION("exponent 0 is rejected") {
        CHECK_THROWS_AS(build_square_cod(0), std::invalid_argument);
    }
}

TEST_CASE("rate bound k/T <= 2/Nt holds exactly for every construction") {
    for (int nt = 2; nt <= 7; ++nt)
        for (int k = 2; k <= 7; ++k) {
            const LinearDesign d = build_design(nt, k);
            INFO("nt=" << nt << " k=" << k);
            CHECK(rate_within_bound(d));
        }
    // square orthogonal designs trade the bound for rate (a+1)/2^a
    CHECK(rate_within_bound(build_square_cod(1)));
    CHECK_FALSE(rate_within_bound(build_square_cod(2)));
    CHECK_FALSE(rate_within_bound(build_square_cod(3)));
}

TEST_CASE("entry-monomial detection flags mixed entries") {
    // first antenna column transmits x1 + x2 in slot 0
    Mat<cplx> a0(1, 2);
    a0(0, 0) = 1.0;
    a0(0, 1) = 1.0;
    Mat<cplx> zero(1, 2);
    const LinearDesign d("mixed", 1, 1, 2, {a0}, {zero});
    CHECK_FALSE(d.entry_monomial());
    REQUIRE(d.monomial_violation().has_value());
    CHECK(d.monomial_violation()->first == 0);
    CHECK(d.monomial_violation()->second == 0);
}

TEST_CASE("design JSON round trip preserves coefficients exactly") {
    for (const auto& d : {build_design(2, 3), build_design(5, 2), build_square_cod(2)}) {
        const nlohmann::json j = design_to_json(d);
        const LinearDesign back = design_from_json(j);
        CHECK(back.time_slots() == d.time_slots());
        CHECK(back.tx_antennas() == d.tx_antennas());
        CHECK(back.num_symbols() == d.num_symbols());
        CHECK(back.entry_monomial() == d.entry_monomial());
        for (int i = 0; i < d.tx_antennas(); ++i) {
            CHECK(back.x_coeff(i) == d.x_coeff(i));
            CHECK(back.xconj_coeff(i) == d.xconj_coeff(i));
        }
        // monomial designs serialize with integer entries
        CHECK(j.at("A").at(0).at(0).at(0).at(0).is_number_integer());
    }
    CHECK_THROWS(design_from_json(nlohmann::json{{"T", 2}, {"Nt", 2}, {"k", 2}}));
}
