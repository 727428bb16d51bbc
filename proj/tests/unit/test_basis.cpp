#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "spinchaos/basis.hpp"
#include "spinchaos/error.hpp"

using namespace spinchaos;

TEST_CASE("sector enumeration sizes") {
    CHECK(enumerate_sector(3, 1).size() == 3);
    CHECK(enumerate_sector(15, 5).size() == 3003);
    CHECK(enumerate_sector(4, 0).size() == 1);
    CHECK(enumerate_sector(4, 4).size() == 1);
    CHECK_THROWS_AS(enumerate_sector(4, 5), DomainError);
    CHECK_THROWS_AS(enumerate_sector(4, -1), DomainError);
}

TEST_CASE("enumeration is sorted, unique and matches brute force") {
    for (int length = 1; length <= 12; ++length) {
        for (int k = 0; k <= length; ++k) {
            const auto got = enumerate_sector(length, k);
            const auto want = oracle::sector_states(length, k);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].bits == want[i]);
                CHECK(got[i].up_count() == k);
            }
        }
    }
}

TEST_CASE("reflection is an involution that keeps the up count") {
    for (const auto& c : enumerate_sector(11, 4)) {
        CHECK(reflect(reflect(c)) == c);
        CHECK(reflect(c).up_count() == 4);
        CHECK(reflect(c).bits == oracle::mirror(c.bits, 11));
    }
}

TEST_CASE("default up count") {
    CHECK(default_up_count(15) == 5);
    CHECK(default_up_count(12) == 4);
    CHECK(default_up_count(14) == 5);
    CHECK(default_up_count(10) == 3);
}

TEST_CASE("L=15 sector with five up spins") {
    const auto b = build_even_parity_basis(15, 5);
    CHECK(b.dimension() == 1512);
    CHECK(b.palindromic_count() == 21);
    CHECK(b.paired_count() == 1491);
    const SectorBasis odd(15, 5, Parity::Odd);
    CHECK(odd.dimension() == 1491);
    CHECK(b.dimension() + odd.dimension() == 3003);
}

TEST_CASE("palindrome and pair counts against brute force for L <= 16") {
    for (int length = 1; length <= 16; ++length) {
        for (int k = 0; k <= length; ++k) {
            std::size_t pal = 0;
            std::size_t pairs = 0;
            for (std::uint64_t c : oracle::sector_states(length, k)) {
                const auto r = oracle::mirror(c, length);
                if (r == c) ++pal;
                else if (c < r) ++pairs;
            }
            const SectorBasis even(length, k, Parity::Even);
            const SectorBasis odd(length, k, Parity::Odd);
            CHECK(even.palindromic_count() == pal);
            CHECK(even.paired_count() == pairs);
            CHECK(even.dimension() == pal + pairs);
            CHECK(odd.dimension() == pairs);
            CHECK(odd.palindromic_count() == 0);
        }
    }
}

TEST_CASE("representatives, partners and lookup are consistent") {
    for (auto parity : {Parity::Even, Parity::Odd}) {
        const SectorBasis b(13, 4, parity);
        std::set<std::uint64_t> seen;
        for (std::size_t i = 0; i < b.dimension(); ++i) {
            const auto c = b.representative(i);
            const auto r = reflect(c);
            CHECK(c.bits <= r.bits);
            if (i > 0) CHECK(b.representative(i - 1).bits < c.bits);
            const auto loc = b.locate(c.bits);
            REQUIRE(loc.has_value());
            CHECK(loc->index == i);
            CHECK_FALSE(loc->via_partner);
            if (b.parity_class(i) == ParityClass::Paired) {
                REQUIRE(b.partner(i).has_value());
                CHECK(b.partner(i)->bits == r.bits);
                const auto ploc = b.locate(r.bits);
                REQUIRE(ploc.has_value());
                CHECK(ploc->index == i);
                CHECK(ploc->via_partner);
            } else {
                CHECK(c == r);
                CHECK_FALSE(b.partner(i).has_value());
            }
            seen.insert(c.bits);
            seen.insert(r.bits);
        }
        const auto total = enumerate_sector(13, 4).size();
        if (parity == Parity::Even) CHECK(seen.size() == total);
        CHECK_FALSE(b.locate(0b111).has_value());  // wrong sector
    }
}

TEST_CASE("parity basis vectors are orthonormal and span the sector") {
    for (int length : {6, 7, 10}) {
        const int k = default_up_count(length);
        const auto states = oracle::sector_states(length, k);
        Eigen::MatrixXd e(0, static_cast<Eigen::Index>(states.size()));
        for (bool even : {true, false}) {
            const SectorBasis b(length, k, even ? Parity::Even : Parity::Odd);
            Eigen::MatrixXd block = Eigen::MatrixXd::Zero(b.dimension(), states.size());
            for (std::size_t i = 0; i < b.dimension(); ++i) {
                const auto pos = [&](std::uint64_t c) {
                    return std::lower_bound(states.begin(), states.end(), c) - states.begin();
                };
                const auto c = b.representative(i).bits;
                if (b.parity_class(i) == ParityClass::Palindromic) {
                    block(i, pos(c)) = 1.0;
                } else {
                    block(i, pos(c)) = 1.0 / std::sqrt(2.0);
                    block(i, pos(b.partner(i)->bits)) = (even ? 1.0 : -1.0) / std::sqrt(2.0);
                }
            }
            const Eigen::MatrixXd gram = block * block.transpose();
            CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-14);
            Eigen::MatrixXd grown(e.rows() + block.rows(), e.cols());
            grown << e, block;
            e = grown;
        }
        // even + odd together form an orthogonal matrix on the sector
        REQUIRE(e.rows() == e.cols());
        const Eigen::MatrixXd full = e * e.transpose();
        CHECK((full - Eigen::MatrixXd::Identity(e.rows(), e.rows())).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("basis construction is deterministic") {
    CHECK(build_even_parity_basis(15, 5) == build_even_parity_basis(15, 5));
    CHECK(SectorBasis(12, 4, Parity::Odd) == SectorBasis(12, 4, Parity::Odd));
}
