#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qboson/scalar.hpp"

using namespace qboson;

namespace {

Poly random_poly(std::mt19937_64& rng, int max_deg, bool nonzero) {
    for (;;) {
        Poly p;
        int deg = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
        for (int k = 0; k <= deg; ++k) {
            long c = static_cast<long>(rng() % 11) - 5;
            p = p + Poly::monomial(k, Rational(c));
        }
        if (!nonzero || !p.is_zero()) return p;
    }
}

} // namespace

TEST_CASE("polynomial arithmetic basics") {
    Poly x = Poly::monomial(1, Rational(1));
    Poly p = x * x - Poly::one();            // v^2 - 1
    Poly q = x - Poly::one();                // v - 1
    auto [quot, rem] = Poly::divrem(p, q);
    CHECK(rem.is_zero());
    CHECK(quot == x + Poly::one());
    CHECK(Poly::gcd(p, q) == q);
    CHECK(p.eval(Rational(3)) == 8);
    CHECK(p.str("v") == "v^2 - 1");
}

TEST_CASE("scalar canonical form") {
    Poly x = Poly::monomial(1, Rational(1));
    // (v^2 - 1)/(v - 1) reduces to v + 1
    Scalar s(x * x - Poly::one(), x - Poly::one());
    CHECK(s == Scalar(x + Poly::one()));
    CHECK(s.str(2) == "v + 1");

    // denominator is made monic
    Scalar t(Poly::one(), Poly::monomial(1, Rational(2)));
    CHECK(t.den() == x);
    CHECK(t.num() == Poly(Rational(1) / 2));
    CHECK(t.str(2) == "(1/2)/(v)");

    CHECK(Scalar(0).is_zero());
    CHECK(Scalar(0).den() == Poly::one());
}

TEST_CASE("x - x = 0 for random scalars") {
    std::mt19937_64 rng(20260817);
    for (int iter = 0; iter < 10000; ++iter) {
        Scalar x(random_poly(rng, 3, false), random_poly(rng, 3, true));
        CHECK((x - x).is_zero());
    }
}

TEST_CASE("field axioms on random scalars") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 200; ++iter) {
        Scalar a(random_poly(rng, 3, false), random_poly(rng, 2, true));
        Scalar b(random_poly(rng, 3, false), random_poly(rng, 2, true));
        Scalar c(random_poly(rng, 2, false), random_poly(rng, 2, true));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == c * (a + b));
        if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
    }
}

TEST_CASE("q_power with fractional exponents") {
    // D = 1: q^-1 is a genuine fraction 1/v
    Scalar qm1 = q_power(Rational(-1), 1);
    CHECK(qm1.num() == Poly::one());
    CHECK(qm1.den() == Poly::monomial(1, Rational(1)));

    CHECK(q_power(Rational(-3), 1) * q_power(Rational(3), 1) == Scalar(1));

    // D = 2: q^(1/2) = v
    CHECK(q_power(Rational(1, 2), 2) == Scalar::v_power(1));
    CHECK_THROWS_AS(q_power(Rational(1, 3), 2), std::invalid_argument);
}

TEST_CASE("quantum integers, balanced convention") {
    // [2]_1 = q + q^-1 = (q^2 + 1)/q
    Scalar two = quantum_integer(2, Rational(1), 1);
    CHECK(two == q_power(Rational(1), 1) + q_power(Rational(-1), 1));
    CHECK(two.str(1) == "(q^2 + 1)/(q)");

    // D = 2, d = 1/2: [2]_{1/2} = q^{1/2} + q^{-1/2} = v + 1/v
    Scalar half = quantum_integer(2, Rational(1, 2), 2);
    CHECK(half == Scalar::v_power(1) + Scalar::v_power(-1));

    CHECK(quantum_integer(1, Rational(1), 1) == Scalar(1));
    CHECK(quantum_integer(3, Rational(1), 1) ==
          q_power(Rational(2), 1) + Scalar(1) + q_power(Rational(-2), 1));
    CHECK_THROWS_AS(quantum_integer(2, Rational(0), 1), std::invalid_argument);
}

TEST_CASE("quantum binomials") {
    // [4 over 2]_1 specializes to binomial(4,2) = 6 at v -> 1
    CHECK(quantum_binomial(4, 2, Rational(1), 1).eval_at_one() == 6);
    CHECK(quantum_binomial(5, 0, Rational(1), 1) == Scalar(1));
    CHECK(quantum_binomial(5, 5, Rational(1), 1) == Scalar(1));
    CHECK_THROWS_AS(quantum_binomial(3, 4, Rational(1), 1), std::invalid_argument);

    SECTION("symmetry and Pascal-type recurrence, m <= 8") {
        for (long m = 1; m <= 8; ++m) {
            for (long t = 0; t <= m; ++t) {
                Rational d(1);
                Scalar lhs = quantum_binomial(m, t, d, 1);
                CHECK(lhs == quantum_binomial(m, m - t, d, 1));
                if (t >= 1 && t <= m - 1) {
                    Scalar rhs = q_power(Rational(t) * d, 1) * quantum_binomial(m - 1, t, d, 1) +
                                 q_power(Rational(-(m - t)) * d, 1) *
                                     quantum_binomial(m - 1, t - 1, d, 1);
                    CHECK(lhs == rhs);
                }
            }
        }
    }

    SECTION("fractional d with matching D") {
        // d = 1/2, D = 2: [2 over 1]_{1/2} = v + 1/v
        CHECK(quantum_binomial(2, 1, Rational(1, 2), 2) ==
              Scalar::v_power(1) + Scalar::v_power(-1));
    }
}

TEST_CASE("geometric sums") {
    // 1 + q^2 + q^4
    Scalar g = q_geometric(3, Rational(2), 1);
    CHECK(g == Scalar(1) + q_power(Rational(2), 1) + q_power(Rational(4), 1));
    // c = 0 degenerates to the plain count
    CHECK(q_geometric(5, Rational(0), 1) == Scalar(5));
    CHECK(q_geometric(0, Rational(2), 1).is_zero());
    // (1 - q^c) * geom(k, c) = 1 - q^{kc}
    for (long k = 0; k <= 5; ++k) {
        Scalar c2 = q_power(Rational(2), 1);
        CHECK((Scalar(1) - c2) * q_geometric(k, Rational(2), 1) ==
              Scalar(1) - q_power(Rational(2 * k), 1));
    }
}

TEST_CASE("scalar strings round-trip through the parser") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        Scalar x(random_poly(rng, 4, false), random_poly(rng, 3, true));
        for (long D : {1L, 2L}) {
            Scalar back = parse_scalar(x.str(D), D);
            CHECK(back == x);
        }
    }
    CHECK(parse_scalar("q^-1", 1) == q_power(Rational(-1), 1));
    CHECK(parse_scalar("(1+q)/(1-q)", 1) ==
          (Scalar(1) + q_power(Rational(1), 1)) / (Scalar(1) - q_power(Rational(1), 1)));
    CHECK(parse_scalar(" 2 * q ^ 3 - 1/2 ", 1) ==
          Scalar(2) * q_power(Rational(3), 1) - Scalar(Rational(1, 2)));
    CHECK_THROWS_AS(parse_scalar("q +", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_scalar("x", 1), std::invalid_argument);
}

TEST_CASE("rational literal parsing") {
    CHECK(rat_parse("3/6") == Rational(1, 2));
    CHECK(rat_parse("-2") == Rational(-2));
    CHECK_THROWS_AS(rat_parse("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
}
