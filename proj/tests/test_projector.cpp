#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "qboson/bplus.hpp"
#include "qboson/omod.hpp"
#include "qboson/projector.hpp"

using namespace qboson;

namespace {

std::shared_ptr<BPlus> mkalg(const std::vector<std::vector<long>>& rows) {
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> form;
    for (size_t i = 0; i < rows.size(); ++i) {
        labels.push_back(std::to_string(i));
        std::vector<Rational> row;
        for (long v : rows[i]) row.emplace_back(v);
        form.push_back(std::move(row));
    }
    return std::make_shared<BPlus>(datum_or_throw(labels, form));
}

Scalar q2(const CartanDatum& d) { return q_power(Rational(2), d.D); }

} // namespace

TEST_CASE("series coefficients are forced by the exchange rule") {
    SECTION("positive norm") {
        auto alg = mkalg({{2}});
        ProjectorSeries p = projector_series(alg->datum(), 0, 4);
        REQUIRE(p.c[0] == Scalar(1));
        REQUIRE(p.c[1] == Scalar(-1));
        // c_2 = q^2 / (1 + q^2)
        Scalar q2v = q2(alg->datum());
        REQUIRE(p.c[2] * (Scalar(1) + q2v) == q2v);
        for (const Scalar& r : p.residual) REQUIRE(r.is_zero());
    }
    SECTION("isotropic norm gives reciprocal factorials") {
        auto alg = mkalg({{0}});
        ProjectorSeries p = projector_series(alg->datum(), 0, 5);
        long fact = 1;
        for (long k = 1; k <= 5; ++k) {
            fact *= k;
            Scalar expect = Scalar((k % 2 == 0) ? 1 : -1) * Scalar(static_cast<int>(fact)).inverse();
            REQUIRE(p.c[static_cast<size_t>(k)] == expect);
        }
        for (const Scalar& r : p.residual) REQUIRE(r.is_zero());
    }
    SECTION("negative norm still closes") {
        auto alg = mkalg({{-2}});
        ProjectorSeries p = projector_series(alg->datum(), 0, 6);
        REQUIRE(p.c[1] == Scalar(-1));
        for (const Scalar& r : p.residual) REQUIRE(r.is_zero());
    }
    SECTION("bad input") {
        auto alg = mkalg({{2}});
        REQUIRE_THROWS_AS(projector_series(alg->datum(), 1, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(projector_series(alg->datum(), 0, -1), std::invalid_argument);
    }
}

TEST_CASE("projector properties on rank-one modules") {
    for (long diag : {2L, 0L, -2L}) {
        DYNAMIC_SECTION("norm " << diag) {
            auto alg = mkalg({{diag}});
            ModuleTrunc v = build_verma(alg, 6);
            ProjectorSeries p = projector_series(alg->datum(), 0, 6);
            ProjectorReport rep = verify_projector(p, v, 6);
            REQUIRE(rep.f_gamma_zero);
            REQUIRE(rep.gamma_e_zero);
            REQUIRE(rep.idempotent);
            REQUIRE(rep.resolution_ok);
            REQUIRE(rep.first_failure_degree == -1);
            REQUIRE(rep.resolution.size() == 7);

            // the resolution weights are reciprocal products of the
            // geometric lowering coefficients
            Scalar prod(1);
            for (int h = 1; h <= 6; ++h) {
                prod = prod * q_geometric(h, Rational(diag), alg->datum().D);
                REQUIRE(rep.resolution[static_cast<size_t>(h)].s * prod == Scalar(1));
                REQUIRE(rep.resolution[static_cast<size_t>(h)].diagonal_only);
            }
            REQUIRE(rep.resolution[0].s == Scalar(1));
        }
    }
}

TEST_CASE("resolution weights at isotropic norm are reciprocal factorials") {
    auto alg = mkalg({{0}});
    ModuleTrunc v = build_verma(alg, 5);
    ProjectorSeries p = projector_series(alg->datum(), 0, 5);
    ProjectorReport rep = verify_projector(p, v, 5);
    REQUIRE(rep.resolution_ok);
    long fact = 1;
    for (int h = 1; h <= 5; ++h) {
        fact *= h;
        REQUIRE(rep.resolution[static_cast<size_t>(h)].s ==
                Scalar(static_cast<int>(fact)).inverse());
    }
}

TEST_CASE("a corrupted coefficient is caught at its own degree") {
    auto alg = mkalg({{2}});
    ModuleTrunc v = build_verma(alg, 4);
    ProjectorSeries p = projector_series(alg->datum(), 0, 4);
    p.c[2] = p.c[2] + Scalar(1);
    ProjectorReport rep = verify_projector(p, v, 4);
    REQUIRE_FALSE(rep.f_gamma_zero);
    REQUIRE(rep.first_failure_degree == 2);
}

TEST_CASE("projector acts through the crossing channel on the two-copy module") {
    auto alg = mkalg({{0, 0, 0}, {0, 2, 0}, {0, 0, 2}});
    std::vector<Scalar> a{Scalar(1), Scalar(2), Scalar(3)};
    ModuleTrunc n = build_counterexample(alg, a, 3);
    ProjectorSeries p = projector_series(alg->datum(), 0, 3);

    ModuleVector u = n.generator();
    ModuleVector got = apply_projector(p, n, u);
    // the lowering of u lands in the second copy, so one correction term:
    // P u = u - E_0 F_0 u
    ModuleVector expect = u - n.e(0, n.f(0, u));
    REQUIRE(got == expect);
    REQUIRE(n.f(0, got).is_zero());
    REQUIRE(apply_projector(p, n, got) == got);

    // the projected vector is still moved by the other lowering letters
    REQUIRE_FALSE(n.f(1, got).is_zero());

    SECTION("bulk properties below the crossing headroom") {
        ProjectorReport rep = verify_projector(p, n, 2);
        REQUIRE(rep.f_gamma_zero);
        REQUIRE(rep.idempotent);
        REQUIRE(rep.gamma_e_zero);
        REQUIRE(rep.resolution.empty()); // gated to rank-one depth-zero modules
    }
}

TEST_CASE("apply errors are loud") {
    SECTION("order too small for the vector") {
        auto alg = mkalg({{2}});
        ModuleTrunc v = build_verma(alg, 3);
        ProjectorSeries p = projector_series(alg->datum(), 0, 1);
        ModuleVector top = v.e(0, v.e(0, v.generator()));
        REQUIRE_THROWS_AS(apply_projector(p, v, top), std::runtime_error);
    }
    SECTION("no headroom for the raising half") {
        auto alg = mkalg({{0, 0, 0}, {0, 2, 0}, {0, 0, 2}});
        std::vector<Scalar> a{Scalar(1), Scalar(1), Scalar(1)};
        ModuleTrunc n = build_counterexample(alg, a, 1);
        ProjectorSeries p = projector_series(alg->datum(), 0, 2);
        // a height-one vector crosses at height one and would raise to two
        ModuleVector v = n.e(0, n.generator());
        REQUIRE_THROWS_AS(apply_projector(p, n, v), std::runtime_error);
    }
}
