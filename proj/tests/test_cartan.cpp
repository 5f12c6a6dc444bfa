#include <catch2/catch_amalgamated.hpp>

#include "qboson/cartan.hpp"

using namespace qboson;

namespace {

std::vector<std::vector<Rational>> mat(std::vector<std::vector<long>> rows) {
    std::vector<std::vector<Rational>> m;
    for (auto& r : rows) {
        std::vector<Rational> row;
        for (long x : r) row.emplace_back(x);
        m.push_back(row);
    }
    return m;
}

} // namespace

TEST_CASE("A2 datum validates") {
    auto res = validate_datum({"1", "2"}, mat({{2, -1}, {-1, 2}}));
    REQUIRE(res.ok());
    const CartanDatum& d = *res.datum;
    CHECK(d.D == 1);
    CHECK(d.real(0));
    CHECK(d.real(1));
    CHECK(d.a(0, 1) == 1);
    CHECK(d.a(1, 0) == 1);
    CHECK(d.d(0) == 1);
    CHECK(res.warnings.empty());
}

TEST_CASE("B2-type datum with asymmetric a_ij") {
    CartanDatum d = datum_or_throw({"1", "2"}, mat({{2, -2}, {-2, 4}}));
    CHECK(d.a(0, 1) == 2);
    CHECK(d.a(1, 0) == 1);
    CHECK(d.d(1) == 2);
    CHECK(d.D == 1);
}

TEST_CASE("Borcherds datum with an imaginary index") {
    CartanDatum d = datum_or_throw({"1", "2"}, mat({{2, -1}, {-1, 0}}));
    CHECK(d.real(0));
    CHECK(d.imaginary(1));
    CHECK(d.a(0, 1) == 1);
}

TEST_CASE("derived a_ij signs") {
    // off-diagonal a_ij >= 0 for real i (the form's off-diagonal is <= 0);
    // the formula value on the diagonal is -2
    for (auto rows : {mat({{2, -1}, {-1, 2}}), mat({{2, -2}, {-2, 4}}), mat({{2, -1}, {-1, 0}})}) {
        CartanDatum d = datum_or_throw({"1", "2"}, rows);
        for (int i = 0; i < d.n(); ++i) {
            if (!d.real(i)) continue;
            CHECK(d.a(i, i) == -2);
            for (int j = 0; j < d.n(); ++j)
                if (j != i) CHECK(d.a(i, j) >= 0);
        }
    }
}

TEST_CASE("degenerate imaginary rank-1 datum is legal with a warning") {
    auto res = validate_datum({"0"}, mat({{0}}));
    REQUIRE(res.ok());
    CHECK(res.datum->imaginary(0));
    REQUIRE_FALSE(res.warnings.empty());
    CHECK(res.warnings[0].message.find("degenerate") != std::string::npos);
}

TEST_CASE("fractional entries set D") {
    std::vector<std::vector<Rational>> form = {{Rational(1), Rational(-1, 2)},
                                               {Rational(-1, 2), Rational(1)}};
    // 2(i,j)/(i,i) = -1 is integral, so this is a valid real-real datum
    auto res = validate_datum({"1", "2"}, form);
    REQUIRE(res.ok());
    // d_i = 1/2 and (1,2) = -1/2 both need denominator 2
    CHECK(res.datum->D == 2);
    CHECK(res.datum->a(0, 1) == 1);
}

TEST_CASE("rejections") {
    SECTION("not symmetric") {
        auto res = validate_datum({"1", "2"}, mat({{2, -1}, {-2, 2}}));
        REQUIRE_FALSE(res.ok());
        CHECK(res.errors[0].message.find("symmetric") != std::string::npos);
    }
    SECTION("positive off-diagonal") {
        auto res = validate_datum({"1", "2"}, mat({{2, 1}, {1, 2}}));
        REQUIRE_FALSE(res.ok());
    }
    SECTION("non-integral 2(i,j)/(i,i) for a real index") {
        std::vector<std::vector<Rational>> form = {{Rational(2), Rational(-1, 2)},
                                                   {Rational(-1, 2), Rational(2)}};
        auto res = validate_datum({"1", "2"}, form);
        REQUIRE_FALSE(res.ok());
        CHECK(res.errors[0].message.find("integer") != std::string::npos);
    }
    SECTION("duplicate labels") {
        auto res = validate_datum({"1", "1"}, mat({{2, -1}, {-1, 2}}));
        REQUIRE_FALSE(res.ok());
    }
    SECTION("shape mismatch") {
        auto res = validate_datum({"1", "2"}, mat({{2, -1}}));
        REQUIRE_FALSE(res.ok());
    }
}

TEST_CASE("validation is idempotent") {
    for (auto rows : {mat({{2, -1}, {-1, 2}}), mat({{2, -2}, {-2, 4}}), mat({{0}})}) {
        size_t nl = rows.size();
        std::vector<std::string> labels;
        for (size_t i = 0; i < nl; ++i) labels.push_back(std::to_string(i));
        auto first = validate_datum(labels, rows);
        REQUIRE(first.ok());
        auto second = validate_datum(first.datum->labels, first.datum->form);
        REQUIRE(second.ok());
        CHECK(second.datum->labels == first.datum->labels);
        CHECK(second.datum->form == first.datum->form);
        CHECK(second.datum->D == first.datum->D);
    }
}
