#include <catch2/catch_amalgamated.hpp>

#include "necw/gf.hpp"

using namespace necw;

namespace {

// Independent reference: multiply two packed elements as polynomials over
// GF(p) and reduce by the field polynomial, no tables involved.
fel slow_mul(const Field& f, fel a, fel b) {
    unsigned p = f.p(), m = f.m();
    std::vector<unsigned> pa(m, 0), pb(m, 0), prod(2 * m, 0);
    for (unsigned i = 0; i < m; ++i, a /= p) pa[i] = a % p;
    for (unsigned i = 0; i < m; ++i, b /= p) pb[i] = b % p;
    for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
    const auto& poly = f.poly();
    for (unsigned d = 2 * m - 1; d >= m; --d) {
        unsigned lead = prod[d];
        if (!lead) continue;
        for (unsigned i = 0; i <= m; ++i) {
            unsigned& c = prod[d - m + i];
            c = (c + p - (lead * poly[i]) % p) % p;
        }
    }
    fel r = 0, scale = 1;
    for (unsigned i = 0; i < m; ++i, scale *= p) r += scale * prod[i];
    return r;
}

}  // namespace

TEST_CASE("GF(4) with x^2+x+1 matches hand arithmetic") {
    auto f = Field::make(2, 2, {1, 1, 1});
    REQUIRE(f->q() == 4);
    fel alpha = f->x_element();
    REQUIRE(alpha == 2);
    CHECK(f->mul(alpha, alpha) == 3);                  // alpha^2 = alpha + 1
    CHECK(f->mul(alpha, f->mul(alpha, alpha)) == 1);   // alpha^3 = 1
    CHECK(f->mul(alpha, 3) == slow_mul(*f, alpha, 3)); // alpha * alpha^2

    // inv(alpha) by exhaustive search.
    fel inv = 0;
    for (fel x = 1; x < 4; ++x)
        if (f->mul(alpha, x) == 1) inv = x;
    CHECK(inv == 3);
    CHECK(f->inv(alpha) == inv);
}

TEST_CASE("default polynomials") {
    auto gf2 = Field::make(2, 1);
    CHECK(gf2->q() == 2);
    CHECK(gf2->add(1, 1) == 0);

    auto gf4 = Field::make(2, 2);
    CHECK(gf4->poly() == std::vector<unsigned>{1, 1, 1});

    auto gf8 = Field::make(2, 3);
    CHECK(gf8->poly() == std::vector<unsigned>{1, 1, 0, 1});  // x^3+x+1
}

TEST_CASE("reducible polynomial rejected naming a factor") {
    // Oracle: (x+1)(x^2+x+1) = x^3+1 over GF(2).
    auto prod = detail::poly_mul({1, 1}, {1, 1, 1}, 2);
    CHECK(prod == detail::Poly{1, 0, 0, 1});

    try {
        Field::make(2, 3, {1, 0, 0, 1});
        FAIL("x^3+1 must be rejected");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("reducible") != std::string::npos);
        CHECK(std::string(e.what()).find("divisible") != std::string::npos);
    }
    CHECK_NOTHROW(Field::make(2, 3, {1, 1, 0, 1}));
}

TEST_CASE("non-prime characteristic rejected") {
    CHECK_THROWS_AS(Field::make(4, 1), validation_error);
    CHECK_THROWS_AS(Field::make(6, 2), validation_error);
}

TEST_CASE("inv(0) is an error") {
    auto f = Field::make(2, 2);
    CHECK_THROWS_AS(f->inv(0), validation_error);
}

TEST_CASE("field axioms hold exhaustively for q <= 16") {
    struct P {
        unsigned p, m;
    };
    for (P pm : {P{2, 1}, P{3, 1}, P{2, 2}, P{5, 1}, P{7, 1}, P{2, 3}, P{3, 2}, P{11, 1},
                 P{13, 1}, P{2, 4}}) {
        auto f = Field::make(pm.p, pm.m);
        fel q = f->q();
        for (fel a = 0; a < q; ++a) {
            CHECK(f->add(a, 0) == a);
            CHECK(f->mul(a, 1) == a);
            CHECK(f->add(a, f->neg(a)) == 0);
            if (a) CHECK(f->mul(a, f->inv(a)) == 1);
            for (fel b = 0; b < q; ++b) {
                CHECK(f->add(a, b) == f->add(b, a));
                CHECK(f->mul(a, b) == f->mul(b, a));
                CHECK(f->mul(a, b) == slow_mul(*f, a, b));
                for (fel c = 0; c < q; ++c) {
                    REQUIRE(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
                    REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
                    REQUIRE(f->mul(a, f->add(b, c)) ==
                            f->add(f->mul(a, b), f->mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("field spec strings round-trip") {
    auto f = Field::parse("2^2/1,1,1");
    CHECK(f->q() == 4);
    CHECK(f->spec_string() == "2^2/1,1,1");
    auto g = Field::parse(f->spec_string());
    CHECK(g->same(*f));

    CHECK(Field::parse("4")->q() == 4);
    CHECK(Field::parse("19")->q() == 19);
    CHECK(Field::parse("2^3")->q() == 8);
    CHECK_THROWS_AS(Field::parse("12"), validation_error);
}

TEST_CASE("scalar parse respects the field range") {
    auto f = Field::make(2, 2);
    CHECK(f->parse_scalar("3") == 3);
    CHECK_THROWS_AS(f->parse_scalar("4"), validation_error);
}
