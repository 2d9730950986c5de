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

#include "macstbc/qr.hpp"
#include "oracles.hpp"

using namespace macstbc;

namespace {

Mat<double> random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat<double> m(rows, cols);
    for (double& v : m.data()) v = g(rng);
    return m;
}

double reconstruction_residual(const Mat<double>& m, const QrFactors& f) {
    return fro_norm(f.q * f.r - m) / fro_norm(m);
}

double orthogonality_residual(const QrFactors& f) {
    return fro_norm(transpose(f.q) * f.q - Mat<double>::identity(f.q.rows()));
}

CoefficientSet coefficients_of(const LinearDesign& d) {
    return extract_coefficient_matrices(d, rx_antennas_for(d));
}

}  // namespace

TEST_CASE("factorization of simple matrices") {
    SECTION("identity") {
        const QrFactors f = qr_decompose(Mat<double>::identity(8));
        CHECK(f.q == Mat<double>::identity(8));
        CHECK(f.r == Mat<double>::identity(8));
    }
    SECTION("column-swapped identity gives a permuted Q and identity R") {
        Mat<double> m(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        const QrFactors f = qr_decompose(m);
        CHECK(f.r == Mat<double>::identity(2));
        CHECK(f.q == m);
    }
}

TEST_CASE("random factorizations reconstruct to machine accuracy") {
    auto rng = make_stream(101, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat<double> m = random_matrix(8, 8, rng);
        const QrFactors f = qr_decompose(m);
        CHECK(reconstruction_residual(m, f) < 1e-12);
        CHECK(orthogonality_residual(f) < 1e-12);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(f.r(i, i) >= 0.0);
            for (std::size_t j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
        }
        // Q is an isometry: column norms of M survive in R
        for (std::size_t c = 0; c < 8; ++c)
            CHECK(norm2(f.r.col(c)) == Catch::Approx(norm2(m.col(c))).epsilon(1e-12));
    }
}

TEST_CASE("householder factor matches the triangularization oracle") {
    auto rng = make_stream(103, 0, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const Mat<double> m = random_matrix(10, 6, rng);
        const QrFactors f = qr_decompose(m);
        const auto [qg, rg] = oracle::gram_schmidt_qr(m);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                CHECK(f.r(i, j) == Catch::Approx(rg(i, j)).margin(1e-10));
        for (std::size_t r = 0; r < 10; ++r)
            for (std::size_t c = 0; c < 6; ++c)
                CHECK(f.q(r, c) == Catch::Approx(qg(r, c)).margin(1e-10));
        // only the first n rows of R carry data
        for (std::size_t r = 6; r < 10; ++r)
            for (std::size_t c = 0; c < 6; ++c) CHECK(f.r(r, c) == 0.0);
    }
}

TEST_CASE("dependent columns are reported by index") {
    Mat<double> m(4, 3);
    for (std::size_t r = 0; r < 4; ++r) {
        m(r, 0) = static_cast<double>(r + 1);
        m(r, 1) = 2.0 * static_cast<double>(r + 1);  // duplicate direction
        m(r, 2) = r == 0 ? 1.0 : 0.0;
    }
    CHECK_THROWS_WITH(qr_decompose(m), Catch::Matchers::ContainsSubstring("column 2"));
}

TEST_CASE("block extraction classifies synthetic patterns") {
    const int k = 2;
    Mat<double> r = Mat<double>::identity(8);
    SECTION("diagonal blocks everywhere") {
        const RBlocks b = extract_blocks(r, k, 1e-9);
        CHECK(b.classification == StructureClass::ReducedAsdc);
    }
    SECTION("one off-diagonal entry in the lower-right block") {
        r(4, 5) = 1.0;
        const RBlocks b = extract_blocks(r, k, 1e-9);
        CHECK(b.classification == StructureClass::ReducedWsdc);
    }
    SECTION("dense upper-left block") {
        r(0, 1) = 1.0;
        const RBlocks b = extract_blocks(r, k, 1e-9);
        CHECK(b.classification == StructureClass::Unstructured);
    }
    SECTION("interference block never affects the verdict") {
        r(0, 5) = 123.0;
        CHECK(extract_blocks(r, k, 1e-9).classification == StructureClass::ReducedAsdc);
    }
    SECTION("dimension checks") {
        CHECK_THROWS_AS(extract_blocks(Mat<double>::identity(6), k, 1e-9), std::invalid_argument);
    }
}

TEST_CASE("numerical classification of the built-in designs") {
    CHECK(classify_design(build_design(2, 2), 50, 1e-9).classification == StructureClass::ReducedAsdc);
    CHECK(classify_design(build_square_cod(2), 50, 1e-9).classification == StructureClass::ReducedWsdc);
    CHECK(classify_design(build_spatial_multiplexing(2), 50, 1e-9).classification ==
          StructureClass::Unstructured);
    CHECK_THROWS_AS(classify_design(build_design(2, 2), 0, 1e-9), std::invalid_argument);
}

TEST_CASE("pairwise orthogonality of the coefficient matrices") {
    CHECK(check_hurwitz_radon(coefficients_of(build_design(2, 2))).orthogonal);
    CHECK(check_hurwitz_radon(coefficients_of(build_square_cod(2))).orthogonal);
    const HurwitzRadonReport bad = check_hurwitz_radon(coefficients_of(build_spatial_multiplexing(2)));
    CHECK_FALSE(bad.orthogonal);
    CHECK(bad.witness_i >= 0);
    CHECK(bad.witness_j > bad.witness_i);
}

TEST_CASE("group partition search") {
    SECTION("the 2-antenna pair admits a partition for (1,2)") {
        const CoefficientSet set = coefficients_of(build_design(2, 2));
        const auto part = find_group_partition(set, 0, 1);
        REQUIRE(part.has_value());
        CHECK(part->size() == 2);
        std::vector<bool> seen(4, false);
        for (const IndexPair& p : *part) {
            seen[static_cast<std::size_t>(p.first)] = true;
            seen[static_cast<std::size_t>(p.second)] = true;
        }
        for (bool s : seen) CHECK(s);
    }
    SECTION("every ordered pair succeeds for the stacked (4,2) design") {
        const CoefficientSet set = coefficients_of(build_design(4, 2));
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m)
                if (l != m) CHECK(find_group_partition(set, l, m).has_value());
    }
    SECTION("the 4-antenna orthogonal design fails for some pair") {
        const CoefficientSet set = coefficients_of(build_square_cod(2));
        bool all = true;
        for (int l = 0; l < 6 && all; ++l)
            for (int m = 0; m < 6 && all; ++m)
                if (l != m) all = find_group_partition(set, l, m).has_value();
        CHECK_FALSE(all);
    }
    SECTION("index validation") {
        const CoefficientSet set = coefficients_of(build_design(2, 2));
        CHECK_THROWS_AS(find_group_partition(set, 1, 1), std::invalid_argument);
        CHECK_THROWS_AS(find_group_partition(set, 0, 9), std::invalid_argument);
    }
}

TEST_CASE("exact diagonality conditions per design family") {
    const DiagonalityConditions ala = check_diagonality_conditions(coefficients_of(build_design(2, 2)));
    CHECK(ala.hurwitz_radon);
    CHECK(ala.pairing);
    const DiagonalityConditions odd = check_diagonality_conditions(coefficients_of(build_design(2, 3)));
    CHECK(odd.hurwitz_radon);
    CHECK(odd.pairing);
    const DiagonalityConditions cod = check_diagonality_conditions(coefficients_of(build_square_cod(2)));
    CHECK(cod.hurwitz_radon);
    CHECK_FALSE(cod.pairing);
    const DiagonalityConditions sm = check_diagonality_conditions(coefficients_of(build_spatial_multiplexing(2)));
    CHECK_FALSE(sm.hurwitz_radon);
    CHECK_FALSE(sm.pairing);
}

TEST_CASE("exact and numerical classifications agree on every built-in") {
    for (const auto& d : {build_design(2, 2), build_design(2, 3), build_design(4, 2),
                          build_design(3, 2), build_design(4, 3), build_design(5, 2),
                          build_square_cod(2), build_square_cod(3), build_spatial_multiplexing(2)}) {
        INFO(d.label());
        const StructureClass exact = exact_structure_class(check_diagonality_conditions(coefficients_of(d)));
        const StructureClass numeric = classify_design(d, 100, 1e-9).classification;
        CHECK(exact == numeric);
    }
}

TEST_CASE("orthogonal equal-norm generators give a scalar upper-left block") {
    auto rng = make_stream(107, 0, 0);
    for (const auto& d : {build_design(2, 2), build_design(4, 2), build_square_cod(2)}) {
        const int nr = rx_antennas_for(d);
        for (int trial = 0; trial < 20; ++trial) {
            const ChannelPair ch{sample_channel(d.tx_antennas(), nr, rng),
                                 sample_channel(d.tx_antennas(), nr, rng)};
            const QrFactors f = qr_decompose(build_lattice_generator(d, ch).m);
            const std::size_t twok = 2 * static_cast<std::size_t>(d.num_symbols());
            double lo = f.r(0, 0), hi = f.r(0, 0);
            for (std::size_t i = 1; i < twok; ++i) {
                lo = std::min(lo, f.r(i, i));
                hi = std::max(hi, f.r(i, i));
            }
            CHECK((hi - lo) / hi < 1e-9);
        }
    }
}

TEST_CASE("interference block is generically dense") {
    SECTION("statistics over random channels") {
        const CrossBlockDensityReport ala = check_r12_density(build_design(2, 2), 300, 1e-9);
        CHECK(ala.trials == 300);
        CHECK(ala.pass);
        const CrossBlockDensityReport cod = check_r12_density(build_square_cod(2), 300, 1e-9);
        CHECK(cod.pass);
        CHECK_THROWS_AS(check_r12_density(build_design(2, 2), 50, 1e-9), std::invalid_argument);
    }
    SECTION("a constant user-1 channel still mixes the users") {
        const LinearDesign d = build_design(2, 2);
        Mat<cplx> h1(2, 2);
        for (auto& v : h1.data()) v = cplx(0.7, -0.3);
        auto rng = make_stream(109, 0, 0);
        const ChannelPair ch{h1, sample_channel(2, 2, rng)};
        const QrFactors f = qr_decompose(build_lattice_generator(d, ch).m);
        const Mat<double> r = square_upper(f.r, 8);
        const RBlocks b = extract_blocks(r, 2, 1e-9);
        const double scale = fro_norm(r);
        for (double v : b.r12.data()) CHECK(std::abs(v) > 1e-9 * scale);
    }
}
