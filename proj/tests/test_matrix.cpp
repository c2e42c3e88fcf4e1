#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "necw/matrix.hpp"

using namespace necw;

namespace {

Matrix random_matrix(const FieldPtr& f, std::size_t r, std::size_t c, std::mt19937& rng) {
    Matrix m(f, r, c);
    std::uniform_int_distribution<fel> dist(0, f->q() - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = dist(rng);
    return m;
}

}  // namespace

TEST_CASE("rank basics") {
    auto f = Field::make(2, 2);
    CHECK(Matrix::identity(f, 3).rank() == 3);
    CHECK(Matrix(f, 2, 3).rank() == 0);

    // Second row is alpha times the first: rank 1.  Oracle: scalar multiply.
    fel a = 2;
    Matrix m = Matrix::from_rows(f, {{1, a}, {a, f->mul(a, a)}});
    CHECK(m.row(1) == vec_scale(f, a, m.row(0)));
    CHECK(m.rank() == 1);
}

TEST_CASE("rank equals rank of the transpose on random matrices") {
    std::mt19937 rng(7);
    for (auto q : {2u, 4u, 8u}) {
        auto f = q == 2 ? Field::make(2, 1) : (q == 4 ? Field::make(2, 2) : Field::make(2, 3));
        for (int trial = 0; trial < 30; ++trial) {
            Matrix m = random_matrix(f, 1 + trial % 5, 1 + (trial * 3) % 6, rng);
            CHECK(m.rank() == m.transpose().rank());
        }
    }
}

TEST_CASE("left null space basics") {
    auto f = Field::make(2, 2);
    CHECK(Matrix::identity(f, 3).left_null_basis().empty());
    CHECK(Matrix(f, 2, 3).left_null_basis().size() == 2);

    fel a = 2;
    Matrix m = Matrix::from_rows(f, {{1, a}, {a, f->mul(a, a)}});
    auto basis = m.left_null_basis();
    REQUIRE(basis.size() == 1);
    CHECK(is_zero(vec_mat(f, basis[0], m)));

    // Exhaustive oracle over the 16 row vectors: the null space is exactly
    // the scalar multiples of (alpha, 1).
    int null_count = 0;
    bool target_found = false;
    for (fel x0 = 0; x0 < 4; ++x0)
        for (fel x1 = 0; x1 < 4; ++x1) {
            Vec v{x0, x1};
            if (is_zero(vec_mat(f, v, m))) {
                ++null_count;
                if (v == Vec{a, 1}) target_found = true;
            }
        }
    CHECK(null_count == 4);  // dimension 1 over GF(4)
    CHECK(target_found);
    CHECK(projective_normalize(f, basis[0]) ==
          projective_normalize(f, Vec{a, 1}));
}

TEST_CASE("null space dimension matches rank-nullity on random matrices") {
    std::mt19937 rng(11);
    auto f = Field::make(3, 1);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix m = random_matrix(f, 1 + trial % 6, 1 + (trial * 7) % 5, rng);
        auto basis = m.left_null_basis();
        CHECK(basis.size() == m.rows() - m.rank());
        for (const auto& v : basis) CHECK(is_zero(vec_mat(f, v, m)));
        if (!basis.empty()) {
            Matrix b = Matrix::from_rows(f, basis);
            CHECK(b.rank() == basis.size());  // linearly independent
        }
    }
}

TEST_CASE("inverse") {
    auto f = Field::make(2, 2);
    Matrix i3 = Matrix::identity(f, 3);
    CHECK(i3.inverse() == i3);

    // Upper unitriangular inverts to upper unitriangular.
    Matrix u = Matrix::from_rows(f, {{1, 2, 3}, {0, 1, 2}, {0, 0, 1}});
    Matrix ui = u.inverse();
    CHECK(u * ui == i3);
    CHECK(ui * u == i3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ui.at(i, i) == 1);
        for (std::size_t j = 0; j < i; ++j) CHECK(ui.at(i, j) == 0);
    }

    Matrix sing = Matrix::from_rows(f, {{1, 2}, {2, 3}});  // row2 = a*row1
    CHECK_THROWS_AS(sing.inverse(), validation_error);
}

TEST_CASE("inverse round-trips on random nonsingular matrices") {
    std::mt19937 rng(23);
    auto f = Field::make(2, 3);
    int done = 0;
    while (done < 20) {
        Matrix m = random_matrix(f, 4, 4, rng);
        if (m.rank() != 4) continue;
        Matrix mi = m.inverse();
        CHECK(m * mi == Matrix::identity(f, 4));
        CHECK(mi * m == Matrix::identity(f, 4));
        ++done;
    }
}

TEST_CASE("solve_left finds solutions and detects inconsistency") {
    auto f = Field::make(2, 2);
    Matrix m = Matrix::from_rows(f, {{1, 0, 2}, {0, 1, 3}});
    Vec b = vec_add(f, vec_scale(f, 2, m.row(0)), vec_scale(f, 3, m.row(1)));
    auto x = m.solve_left(b);
    REQUIRE(x.has_value());
    CHECK(vec_mat(f, *x, m) == b);

    Vec outside{0, 0, 1};
    CHECK_FALSE(m.in_rowspace(outside));
    CHECK_FALSE(m.solve_left(outside).has_value());
}
