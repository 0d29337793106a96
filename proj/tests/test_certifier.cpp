#include <doctest.h>

#include <cmath>

#include "qig/certifier.hpp"
#include "qig/sampling.hpp"

using namespace qig;

namespace {

CertConfig small_config(std::uint64_t seed = 7) {
    CertConfig c;
    c.n_samples = 1500;
    c.seed = seed;
    c.oracle_grid = 1500;
    c.oracle_refine = 30;
    return c;
}

DensityMatrix well_mixed(int d, std::uint64_t seed) {
    return DensityMatrix(Matrix(0.7 * random_density(d, seed).mat() +
                                0.3 * Matrix::Identity(d, d) / static_cast<double>(d)));
}

}  // namespace

TEST_CASE("contraction_ratio reference values") {
    const MonotoneFunction f = MonotoneFunction::sld();
    const DensityMatrix rho = well_mixed(2, 11);
    const HermitianMatrix drho(random_tangent(2, 12, false).mat());

    SUBCASE("identity gives exactly one") {
        const auto r = contraction_ratio(identity_map(2), f, rho, drho);
        REQUIRE(r.has_value());
        CHECK(*r == 1.0);
    }
    SUBCASE("unitary conjugation is an isometry for every catalog f") {
        const LinearMapRep u = unitary_map(random_unitary(3, 21));
        const DensityMatrix rho3 = well_mixed(3, 22);
        const HermitianMatrix drho3(random_tangent(3, 23, false).mat());
        for (const auto& name : monotone_catalog_names()) {
            const auto r = contraction_ratio(u, MonotoneFunction::from_name(name), rho3, drho3);
            REQUIRE(r.has_value());
            CAPTURE(name);
            CHECK(std::abs(*r - 1.0) < 1e-10);
        }
    }
    SUBCASE("scalar maps scale every ratio by c") {
        for (const double c : {0.8, 1.2}) {
            const auto r = contraction_ratio(scalar_map(2, c), f, rho, drho);
            REQUIRE(r.has_value());
            CHECK(std::abs(*r - c) < 1e-10);
        }
    }
    SUBCASE("rescaling any map by c > 0 rescales its ratios by exactly c") {
        const LinearMapRep base = catalog_map("amplitude_damping?gamma=0.3");
        const auto r1 = contraction_ratio(base, f, rho, drho);
        const auto r2 = contraction_ratio(scale_map(base, 1.7), f, rho, drho);
        REQUIRE(r1.has_value());
        REQUIRE(r2.has_value());
        CHECK(std::abs(*r2 - 1.7 * *r1) < 1e-10 * std::max(1.0, *r2));
    }
    SUBCASE("boundary images are skipped, not violations") {
        const auto r = contraction_ratio(reset_map(2), f, rho, drho);
        CHECK_FALSE(r.has_value());
    }
}

TEST_CASE("sample_contraction_test") {
    SUBCASE("CPTP maps never produce a witness") {
        for (const auto& spec : {"depolarizing?p=0.5", "amplitude_damping?gamma=0.3",
                                 "random_cptp?k=3&seed=4"}) {
            CertConfig c = small_config();
            const ContractionOutcome out = sample_contraction_test(catalog_map(spec), c);
            CAPTURE(spec);
            CHECK_FALSE(out.violation);
            CHECK(out.n_effective > 0);
        }
    }
    SUBCASE("transpose is a metric isometry: clean on the base space") {
        CertConfig c = small_config();
        const ContractionOutcome out = sample_contraction_test(transpose_map(2), c);
        CHECK_FALSE(out.violation);
    }
    SUBCASE("scalar(1.2) yields a witness on the first sample") {
        CertConfig c = small_config();
        const ContractionOutcome out = sample_contraction_test(scalar_map(2, 1.2), c);
        REQUIRE(out.violation);
        REQUIRE(out.witness.has_value());
        CHECK(out.n_effective == 1);
        CHECK(std::abs(out.witness->ratio - 1.2) < 1e-9);
        // replay soundness
        const double replay = replay_ratio(scalar_map(2, 1.2), *out.witness);
        CHECK(std::abs(replay - out.witness->ratio) <= 1e-8 * out.witness->ratio);
    }
    SUBCASE("a map with only boundary images violates condition 1") {
        CertConfig c = small_config();
        c.n_samples = 64;
        CHECK_THROWS_AS(sample_contraction_test(reset_map(2), c), Condition1Violated);
    }
    SUBCASE("non-HP maps are rejected up front") {
        Matrix t = identity_map(2).transfer();
        t(0, 3) += Complex(0, 0.4);
        CertConfig c = small_config();
        CHECK_THROWS_AS(sample_contraction_test(LinearMapRep::from_transfer(t), c), DomainError);
    }
}

TEST_CASE("witness_search") {
    SUBCASE("depolarizing(1.5): replayable witness with diverging ratio") {
        CertConfig c = small_config();
        const LinearMapRep map = depolarizing_map(2, 1.5);
        const WitnessSearchResult r = witness_search(map, c);
        REQUIRE(r.found);
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->ratio > 10.0);
        CHECK(std::isfinite(r.witness->eta));
        CHECK(r.witness->eta > 0.0);
        const double replay = replay_ratio(map, *r.witness);
        CHECK(std::abs(replay - r.witness->ratio) <= 1e-8 * r.witness->ratio);
        // the eta trace diverges at least as 1/eta
        CHECK(r.slope <= -0.8);
        CHECK(r.trace.size() >= 10);
    }
    SUBCASE("transpose x id2: the lifted map expands although the base does not") {
        CertConfig c = small_config();
        c.mode = Mode::States;
        const LinearMapRep lifted = tensor_identity(transpose_map(2), 2);
        REQUIRE_FALSE(cp_oracle(transpose_map(2)).is_cp);  // ground truth
        const WitnessSearchResult r = witness_search(lifted, c);
        REQUIRE(r.found);
        CHECK(r.witness->ratio > 10.0);
        const double replay = replay_ratio(lifted, *r.witness);
        CHECK(std::abs(replay - r.witness->ratio) <= 1e-8 * r.witness->ratio);
    }
    SUBCASE("CP maps: the oracle finds no negative direction") {
        CertConfig c = small_config();
        const WitnessSearchResult r = witness_search(depolarizing_map(2, 0.5), c);
        CHECK_FALSE(r.found);
        CHECK_FALSE(r.witness.has_value());
    }
    SUBCASE("witness eta matches the image minimum eigenvalue") {
        CertConfig c = small_config();
        const LinearMapRep map = depolarizing_map(2, 1.5);
        const WitnessSearchResult r = witness_search(map, c);
        REQUIRE(r.found);
        const double min_eig = eig_hermitian(map.apply(r.witness->rho)).eigenvalues(0);
        CHECK(std::abs(min_eig - r.witness->eta) < 1e-12);
    }
}

TEST_CASE("witness_tangent_direction") {
    SUBCASE("maximizes the overlap the proof needs") {
        const LinearMapRep map = depolarizing_map(2, 1.5);
        const Vector psi = random_pure_state(2, 3);
        for (const Mode mode : {Mode::Psd, Mode::States}) {
            const Matrix drho = witness_tangent_direction(map, psi, mode);
            CHECK(std::abs(drho.norm() - 1.0) < 1e-12);
            const double overlap = (psi.adjoint() * map.apply(drho) * psi)(0, 0).real();
            CHECK(overlap > 0.0);
            if (mode == Mode::States) {
                CHECK(std::abs(drho.trace()) < 1e-12);
            }
        }
    }
    SUBCASE("degenerate adjoint is reported as an inconsistency") {
        // maps everything onto the first diagonal entry; the adjoint kills
        // any projector orthogonal to e0
        Matrix t = Matrix::Zero(4, 4);
        t(0, 0) = 1.0;
        t(0, 3) = 1.0;
        const LinearMapRep map = LinearMapRep::from_transfer(t);
        Vector e1 = Vector::Zero(2);
        e1(1) = 1.0;
        CHECK_THROWS_AS(witness_tangent_direction(map, e1, Mode::Psd), DegenerateAdjoint);
    }
}

TEST_CASE("trace_monotonicity_check") {
    CertConfig c = small_config();
    SUBCASE("trace-preserving maps sit at equality") {
        const TraceMonotonicity t = trace_monotonicity_check(depolarizing_map(2, 0.5), c);
        CHECK(t.trace_nonincreasing);
        CHECK(std::abs(t.max_excess) < 1e-10);
        CHECK(t.max_route_gap < 1e-10);
        CHECK(t.n_route_checked > 0);
    }
    SUBCASE("scalar(0.8) decreases strictly and both routes agree") {
        const TraceMonotonicity t = trace_monotonicity_check(scalar_map(2, 0.8), c);
        CHECK(t.trace_nonincreasing);
        CHECK(t.max_excess == doctest::Approx(-0.2).epsilon(1e-10));
        CHECK(t.max_route_gap < 1e-10);
    }
    SUBCASE("scalar(1.2) is flagged") {
        const TraceMonotonicity t = trace_monotonicity_check(scalar_map(2, 1.2), c);
        CHECK_FALSE(t.trace_nonincreasing);
        CHECK(t.max_excess == doctest::Approx(0.2).epsilon(1e-10));
    }
}

TEST_CASE("certify classifies the reference maps") {
    CertConfig c = small_config();
    SUBCASE("amplitude damping is CPTP") {
        const CertReport r = certify(amplitude_damping_map(0.3), c);
        CHECK(r.classification == Classification::Cptp);
        CHECK(r.tp);
        CHECK(r.base.clean);
        CHECK(r.lifted.clean);
        CHECK(r.oracle.is_cp);
    }
    SUBCASE("transpose is positive but not completely positive") {
        const CertReport r = certify(transpose_map(2), c);
        CHECK(r.classification == Classification::PtpNotCp);
        CHECK(r.base.clean);
        CHECK_FALSE(r.lifted.clean);
        REQUIRE(r.lifted.witness.has_value());
        CHECK(r.lifted.witness->ratio > 1.0 + c.ratio_tol);
        CHECK(r.ancilla_used == 2);
    }
    SUBCASE("depolarizing(1.5) is not positive") {
        const CertReport r = certify(depolarizing_map(2, 1.5), c);
        CHECK(r.classification == Classification::NonPositive);
        CHECK_FALSE(r.base.clean);
        REQUIRE(r.base.witness.has_value());
    }
    SUBCASE("scalar(1.2) is flagged on the trace side") {
        const CertReport r = certify(scalar_map(2, 1.2), c);
        CHECK(r.classification == Classification::TraceIncreasing);
    }
    SUBCASE("non-HP maps short-circuit") {
        Matrix t = identity_map(2).transfer();
        t(2, 1) += Complex(0, 0.2);
        const CertReport r = certify(LinearMapRep::from_transfer(t), c);
        CHECK(r.classification == Classification::NotHp);
        CHECK_FALSE(r.base.ran);
    }
    SUBCASE("classification is f-independent") {
        for (const auto& name : {"sld", "kmb", "wy"}) {
            CertConfig cf = small_config();
            cf.f = MonotoneFunction::from_name(name);
            cf.n_samples = 400;
            cf.oracle_grid = 600;
            CAPTURE(name);
            CHECK(certify(transpose_map(2), cf).classification == Classification::PtpNotCp);
            CHECK(certify(depolarizing_map(2, 1.5), cf).classification ==
                  Classification::NonPositive);
        }
    }
}

TEST_CASE("contrast_contraction_test") {
    const ContrastGenerator g = ContrastGenerator::neg_log();
    SUBCASE("identity leaves every divergence exactly invariant") {
        const DensityMatrix rho = well_mixed(2, 31);
        const DensityMatrix sigma = well_mixed(2, 32);
        const double before = contrast_eval(rho, sigma, g).value;
        const Matrix ir = identity_map(2).apply(rho.mat());
        const Matrix is = identity_map(2).apply(sigma.mat());
        const double after = contrast_eval(PsdMatrix(ir), PsdMatrix(is), g).value;
        CHECK(std::abs(after - before) < 1e-12);
        CertConfig c = small_config();
        c.n_samples = 300;
        CHECK_FALSE(contrast_contraction_test(identity_map(2), g, c).violation);
    }
    SUBCASE("random CPTP maps contract H_g") {
        CertConfig c = small_config();
        c.n_samples = 1000;
        for (const auto& spec : {"random_cptp?k=3&seed=6", "depolarizing?p=0.4"}) {
            const ContrastOutcome out = contrast_contraction_test(catalog_map(spec), g, c);
            CAPTURE(spec);
            CHECK_FALSE(out.violation);
            CHECK(out.n_effective > 0);
        }
    }
    SUBCASE("depolarizing(1.5) expands H_g near the boundary, growing as eta shrinks") {
        CertConfig c = small_config();
        const ContrastOutcome out =
            contrast_contraction_test(depolarizing_map(2, 1.5), g, c, /*witness_mode=*/true);
        REQUIRE(out.violation);
        REQUIRE(out.rho.has_value());
        CHECK(out.h_after > out.h_before);
        REQUIRE(out.trace.size() >= 6);
        // the expansion strengthens monotonically over the last schedule steps
        for (std::size_t i = out.trace.size() - 5; i < out.trace.size(); ++i) {
            CHECK(out.trace[i].h_after > out.trace[i - 1].h_after);
        }
    }
}

TEST_CASE("eta schedule and slope fitting") {
    CertConfig c;
    c.eta0 = 0.1;
    c.eta_levels = 3;
    const auto etas = eta_schedule(c);
    REQUIRE(etas.size() == 4);
    CHECK(etas[0] == 0.1);
    CHECK(etas[3] == doctest::Approx(0.0125));

    std::vector<std::pair<double, double>> xy;
    for (const double x : {0.1, 0.05, 0.025, 0.0125}) {
        xy.emplace_back(x, 3.0 / x);
    }
    CHECK(fit_loglog_slope(xy) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::isnan(fit_loglog_slope({{1.0, 2.0}})));
}
