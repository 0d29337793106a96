#include <doctest.h>

#include "qig/certifier.hpp"

using namespace qig;

namespace {

CertConfig classical_config() {
    CertConfig c;
    c.n_samples = 2000;
    c.seed = 19;
    return c;
}

}  // namespace

TEST_CASE("stochastic maps contract the classical quantities") {
    const CertConfig c = classical_config();
    SUBCASE("identity sits exactly at ratio one") {
        const ClassicalReport r =
            classical_contraction_test(StochasticMap(RealMatrix::Identity(3, 3)), c);
        CHECK_FALSE(r.fisher_violation);
        CHECK_FALSE(r.entropy_violation);
        CHECK(r.worst_fisher_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.worst_entropy_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("the uniform mixer contracts strictly") {
        const ClassicalReport r = classical_contraction_test(uniform_mixer(3), c);
        CHECK_FALSE(r.fisher_violation);
        CHECK_FALSE(r.entropy_violation);
        CHECK(r.worst_fisher_ratio < 0.5);
    }
    SUBCASE("random stochastic matrices contract both quantities") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ClassicalReport r =
                classical_contraction_test(random_stochastic(3, seed), c);
            CAPTURE(seed);
            CHECK_FALSE(r.fisher_violation);
            CHECK_FALSE(r.entropy_violation);
            CHECK(r.worst_fisher_ratio <= 1.0 + 1e-10);
            CHECK(r.worst_entropy_ratio <= 1.0 + 1e-10);
        }
    }
    SUBCASE("permutations are classical isometries") {
        const ClassicalReport r = classical_contraction_test(permutation_map(4, 3), c);
        CHECK(r.worst_fisher_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.worst_entropy_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("a negative entry produces a boundary witness") {
    const CertConfig c = classical_config();
    const StochasticMap bad = perturbed_stochastic(3, 5, -0.1);
    const ClassicalReport r = classical_contraction_test(bad, c);
    CHECK(r.fisher_violation);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->ratio > 1.0 + c.ratio_tol);
    CHECK(r.witness->eta > 0.0);
    CHECK(r.witness->eta < 0.2);  // near the simplex boundary
    // replay the stored witness
    const RealVector tp = bad.matrix() * r.witness->p;
    const RealVector tdq = bad.matrix() * r.witness->dq;
    const double num = (tdq.array().square() / tp.array()).sum();
    const double den = (r.witness->dq.array().square() / r.witness->p.array()).sum();
    CHECK(std::abs(num / den - r.witness->ratio) <= 1e-8 * r.witness->ratio);
    CHECK_FALSE(r.trace.empty());
}
