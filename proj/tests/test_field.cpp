#include <qchain/field.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

#include <random>

using namespace qchain;

namespace {

Mat random_matrix(PrimeField f, std::size_t rows, std::size_t cols, std::mt19937& rng) {
    std::uniform_int_distribution<std::uint32_t> d(0, f.p() - 1);
    std::vector<std::uint32_t> e(rows * cols);
    for (auto& x : e) x = d(rng);
    return Mat(f, rows, cols, std::move(e));
}

}  // namespace

TEST_CASE("prime field construction") {
    CHECK(PrimeField(2).p() == 2);
    CHECK(PrimeField(3).p() == 3);
    CHECK(PrimeField(7919).p() == 7919);
    CHECK_THROWS_AS(PrimeField(1), Error);
    CHECK_THROWS_AS(PrimeField(4), Error);
    CHECK_THROWS_AS(PrimeField(91), Error);  // 7 * 13
}

TEST_CASE("field arithmetic and inverses") {
    PrimeField f5(5);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f5.sub(1, 3) == 3);
    CHECK(f5.neg(0) == 0);
    CHECK(f5.reduce(-7) == 3);
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
        PrimeField f(p);
        for (std::uint32_t a = 1; a < p; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    }
    CHECK_THROWS_AS(f5.inv(0), Error);
}

TEST_CASE("mat_apply basics") {
    PrimeField f3(3), f2(2);
    // identity(3) fixes (1,0,2)
    CHECK(mat_apply(Mat::identity(f3, 3), Vec(f3, {1, 0, 2})) == Vec(f3, {1, 0, 2}));
    // 0x2 matrix maps onto the zero module
    CHECK(mat_apply(Mat::zero(f2, 0, 2), Vec(f2, {1, 1})) == Vec(f2, {}));
    // single row sum mod 2
    CHECK(mat_apply(Mat(f2, 1, 2, {0, 1}), Vec(f2, {1, 1})) == Vec(f2, {1}));
    CHECK_THROWS_AS(mat_apply(Mat::identity(f2, 2), Vec(f2, {1})), DimensionMismatch);
    CHECK_THROWS_AS(mat_apply(Mat::identity(f2, 2), Vec(f3, {1, 1})), FieldMismatch);
}

TEST_CASE("kernel_basis on pinned inputs") {
    PrimeField f2(2), f3(3);
    SECTION("coordinate kernel") {
        auto b = kernel_basis(Mat(f2, 1, 2, {0, 1}));
        REQUIRE(b.size() == 1);
        CHECK(b[0] == Vec(f2, {1, 0}));
    }
    SECTION("injective map has empty kernel") {
        CHECK(kernel_basis(Mat::identity(f3, 2)).empty());
    }
    SECTION("rank-one square matrix") {
        // brute force over all 4 vectors finds kernel {(0,0), (1,1)}
        auto m = Mat(f2, 2, 2, {1, 1, 1, 1});
        auto ker = oracle::brute_kernel(m);
        REQUIRE(ker.size() == 2);
        CHECK(ker[1] == std::vector<std::uint32_t>{1, 1});
        auto b = kernel_basis(m);
        REQUIRE(b.size() == 1);
        CHECK(b[0] == Vec(f2, {1, 1}));
    }
}

TEST_CASE("kernel_basis agrees with brute force", "[property]") {
    std::mt19937 rng(20240811);
    for (std::uint32_t p : {2u, 3u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<std::size_t> dim(0, p == 2 ? 6 : 4);
            Mat m = random_matrix(f, dim(rng), dim(rng), rng);
            auto basis = kernel_basis(m);
            // every basis vector is in the kernel
            for (const auto& v : basis) CHECK(mat_apply(m, v).is_zero());
            // count matches nullity
            CHECK(basis.size() == m.cols - rank(m));
            // span covers every brute-force cycle: each brute vector solves
            // against the basis matrix
            Mat bmat = Mat::from_columns(f, m.cols, basis);
            for (const auto& kv : oracle::brute_kernel(m))
                CHECK(solve(bmat, Vec(f, kv)).has_value());
            // basis vectors are linearly independent
            CHECK(rank(bmat) == basis.size());
        }
    }
}

TEST_CASE("solve on pinned inputs") {
    PrimeField f3(3), f2(2);
    SECTION("identity") {
        auto v = solve(Mat::identity(f3, 2), Vec(f3, {1, 2}));
        REQUIRE(v.has_value());
        CHECK(*v == Vec(f3, {1, 2}));
    }
    SECTION("free variable pinned to zero") {
        // both (0,1) and (1,1) solve the system; the rule picks (0,1)
        auto m = Mat(f2, 1, 2, {0, 1});
        auto sols = oracle::brute_solutions(m, {1});
        REQUIRE(sols.size() == 2);
        auto v = solve(m, Vec(f2, {1}));
        REQUIRE(v.has_value());
        CHECK(*v == Vec(f2, {0, 1}));
    }
    SECTION("zero map misses 1") {
        CHECK_FALSE(solve(Mat::zero(f2, 1, 1), Vec(f2, {1})).has_value());
    }
}

TEST_CASE("solve agrees with brute force", "[property]") {
    std::mt19937 rng(918273);
    for (std::uint32_t p : {2u, 3u}) {
        PrimeField f(p);
        std::uniform_int_distribution<std::uint32_t> res(0, p - 1);
        for (int trial = 0; trial < 60; ++trial) {
            std::uniform_int_distribution<std::size_t> dim(0, p == 2 ? 5 : 4);
            Mat m = random_matrix(f, dim(rng), dim(rng), rng);
            std::vector<std::uint32_t> b(m.rows);
            for (auto& x : b) x = res(rng);
            auto sols = oracle::brute_solutions(m, b);
            auto v = solve(m, Vec(f, b));
            CHECK(v.has_value() == !sols.empty());
            if (v) CHECK(mat_apply(m, *v) == Vec(f, b));
        }
    }
}

TEST_CASE("section_of_surjection") {
    PrimeField f2(2);
    SECTION("identity section") {
        CHECK(section_of_surjection(Mat::identity(f2, 2)) == Mat::identity(f2, 2));
    }
    SECTION("forced preimage") {
        Mat s = section_of_surjection(Mat(f2, 1, 2, {0, 1}));
        CHECK(mat_apply(s, Vec(f2, {1})) == Vec(f2, {0, 1}));
    }
    SECTION("rank deficit rejected") {
        CHECK_THROWS_AS(section_of_surjection(Mat(f2, 2, 2, {1, 0, 0, 0})), NotSurjective);
    }
    SECTION("zero-row matrix is vacuously onto") {
        Mat s = section_of_surjection(Mat::zero(f2, 0, 3));
        CHECK(s.rows == 3);
        CHECK(s.cols == 0);
    }
}

TEST_CASE("sections invert on every input", "[property]") {
    std::mt19937 rng(5551);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 30; ++trial) {
            std::uniform_int_distribution<std::size_t> dim(0, 4);
            std::size_t rows = dim(rng), cols = dim(rng);
            Mat m = random_matrix(f, rows, cols, rng);
            if (rank(m) < rows) continue;
            Mat s = section_of_surjection(m);
            std::size_t count = 1;
            bool exhaustive = true;
            for (std::size_t i = 0; i < rows; ++i) {
                count *= p;
                if (count > 4096) { exhaustive = false; break; }
            }
            if (exhaustive) {
                for (const auto& b : oracle::all_tuples(p, rows))
                    CHECK(mat_apply(m, mat_apply(s, Vec(f, b))) == Vec(f, b));
            } else {
                CHECK(mat_mul(m, s) == Mat::identity(f, rows));
            }
        }
    }
}

TEST_CASE("enumerate_affine") {
    PrimeField f2(2);
    SECTION("zero-dimensional coset") {
        auto vs = enumerate_affine({}, Vec(f2, {1, 0}), 10);
        REQUIRE(vs.size() == 1);
        CHECK(vs[0] == Vec(f2, {1, 0}));
    }
    SECTION("two-element coset in order") {
        auto vs = enumerate_affine({Vec(f2, {1, 0})}, Vec(f2, {0, 1}), 10);
        REQUIRE(vs.size() == 2);
        CHECK(vs[0] == Vec(f2, {0, 1}));
        CHECK(vs[1] == Vec(f2, {1, 1}));
    }
    SECTION("guard trips") {
        std::vector<Vec> big(20, Vec::zero(f2, 20));
        for (std::size_t i = 0; i < 20; ++i) big[i].entries[i] = 1;
        CHECK_THROWS_AS(enumerate_affine(big, Vec::zero(f2, 20), 4096), SizeGuardExceeded);
    }
    SECTION("dependent spanning set is deduplicated") {
        auto vs = enumerate_affine({Vec(f2, {1, 1}), Vec(f2, {1, 1})}, Vec::zero(f2, 2), 10);
        REQUIRE(vs.size() == 2);
        CHECK(vs[0] == Vec(f2, {0, 0}));
        CHECK(vs[1] == Vec(f2, {1, 1}));
    }
}

TEST_CASE("enumerate_vectors covers the whole space in lex order") {
    PrimeField f3(3);
    auto vs = enumerate_vectors(f3, 2, 100);
    REQUIRE(vs.size() == 9);
    CHECK(vs[0] == Vec(f3, {0, 0}));
    CHECK(vs[1] == Vec(f3, {0, 1}));
    CHECK(vs[3] == Vec(f3, {1, 0}));
    CHECK(vs[8] == Vec(f3, {2, 2}));
    CHECK(enumerate_vectors(f3, 0, 100).size() == 1);
    CHECK_THROWS_AS(enumerate_vectors(PrimeField(2), 20, 4096), SizeGuardExceeded);
}
