#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "geometry.hpp"
#include "optimize.hpp"
#include "oracles.hpp"
#include "shape_params.hpp"

using namespace rshapes;

namespace {

constexpr double kPi = std::numbers::pi;

// First Robin eigenvalue of the unit disk at beta = 1, frozen from an
// independent multiprecision Bessel-root computation:
// smallest x with J0(x) = x J1(x), squared.
constexpr double kUnitDiskLambda1 = 1.5769927308086067;
// Second Robin eigenvalue of the radius-2 disk at beta = 1 (first angular
// mode), frozen from the same independent computation.
constexpr double kR2DiskLambda2 = 1.8695391582893366;

ShapeParams unit_square_params() {
    return make_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

PlanarDomain unit_square_domain() {
    PlanarDomain d;
    PolygonComponent pc;
    pc.outer = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    d.components.push_back(pc);
    return d;
}

Objective single_lambda1(double p) {
    Objective obj;
    obj.indices = {1};
    obj.combiner = Combiner::Single;
    obj.beta = 1.0;
    obj.mode = ObjectiveMode::Constraint;
    obj.perimeter = p;
    return obj;
}

}  // namespace

TEST_CASE("projection rescales the generalized perimeter exactly") {
    PlanarDomain square = unit_square_domain();

    PlanarDomain big = project_to_perimeter(square, 8.0);
    CHECK(generalized_perimeter(big) == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(area(big) == doctest::Approx(4.0).epsilon(1e-12));

    // A crack counts twice: unit square plus a length-1/2 slit has Prob 5.
    PlanarDomain slit = square;
    slit.cracks.push_back({0, {{0.25, 0.5}, {0.75, 0.5}}});
    CHECK(generalized_perimeter(slit) == doctest::Approx(5.0).epsilon(1e-13));
    PlanarDomain slit2 = project_to_perimeter(slit, 10.0);
    CHECK(generalized_perimeter(slit2) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(area(slit2) == doctest::Approx(4.0).epsilon(1e-12));

    CHECK_THROWS_AS(project_to_perimeter(square, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(project_to_perimeter(square, -2.0), std::invalid_argument);
}

TEST_CASE("constraint evaluation of a near-disk matches the disk transcendental value") {
    // Cross-check the frozen constant against the semi-analytic routine first.
    CHECK(disk_robin_eigenvalues(1.0, 1.0, 1)[0] ==
          doctest::Approx(kUnitDiskLambda1).epsilon(1e-12));

    ShapeParams disk = make_radial_fourier({0.0, 0.0}, 1.0, {}, {});
    Evaluation ev = evaluate(single_lambda1(2.0 * kPi), disk);
    CHECK(ev.feasible);
    CHECK(ev.failure.empty());
    CHECK(ev.prob == doctest::Approx(2.0 * kPi).epsilon(1e-13));
    CHECK(ev.lambdas.size() == 1);
    CHECK(ev.value == ev.lambdas[0]);
    // Polygonization (96-gon) plus mesh discretization stay within 1.5%.
    CHECK(ev.value == doctest::Approx(kUnitDiskLambda1).epsilon(0.015));
    CHECK(ev.dofs > 100);
    CHECK(ev.mesh_h > 0.0);
    CHECK(ev.domain.has_value());
}

TEST_CASE("combiners agree where they must") {
    ShapeParams square = unit_square_params();

    Objective sum;
    sum.indices = {1, 2};
    sum.combiner = Combiner::Sum;
    sum.perimeter = 4.0;  // projection is the identity for the unit square
    Evaluation ev_sum = evaluate(sum, square, 0.1);
    REQUIRE(ev_sum.feasible);
    REQUIRE(ev_sum.lambdas.size() == 2);
    CHECK(ev_sum.prob == doctest::Approx(4.0).epsilon(1e-13));

    Objective pnorm1 = sum;
    pnorm1.combiner = Combiner::PNorm;
    pnorm1.p_norm_q = 1.0;
    Evaluation ev_p1 = evaluate(pnorm1, square, 0.1);
    CHECK(ev_p1.value == doctest::Approx(ev_sum.value).epsilon(1e-12));

    Objective pnorm2 = sum;
    pnorm2.combiner = Combiner::PNorm;
    pnorm2.p_norm_q = 2.0;
    Evaluation ev_p2 = evaluate(pnorm2, square, 0.1);
    const double expected =
        std::sqrt(ev_sum.lambdas[0] * ev_sum.lambdas[0] + ev_sum.lambdas[1] * ev_sum.lambdas[1]);
    CHECK(ev_p2.value == doctest::Approx(expected).epsilon(1e-12));

    Objective single2;
    single2.indices = {2};
    single2.perimeter = 4.0;
    Evaluation ev_s2 = evaluate(single2, square, 0.1);
    CHECK(ev_s2.value == doctest::Approx(ev_sum.lambdas[1]).epsilon(1e-14));

    // Third eigenvalue against the separable rectangle routine.
    Objective single3;
    single3.indices = {3};
    single3.perimeter = 4.0;
    Evaluation ev_s3 = evaluate(single3, square, 0.05);
    const double oracle3 = rectangle_robin_eigenvalues(1.0, 1.0, 1.0, 3)[2];
    CHECK(ev_s3.value == doctest::Approx(oracle3).epsilon(0.03));
}

TEST_CASE("invalid parameters give an infinite infeasible evaluation") {
    // r(theta) = 1 + 1.5 cos(theta) goes negative: realization must fail.
    ShapeParams bad = make_radial_fourier({0.0, 0.0}, 1.0, {1.5}, {});
    Evaluation ev = evaluate(single_lambda1(2.0 * kPi), bad);
    CHECK(!ev.feasible);
    CHECK(std::isinf(ev.value));
    CHECK(!ev.failure.empty());
    CHECK(ev.lambdas.empty());
    CHECK(!ev.domain.has_value());
}

TEST_CASE("objective validation rejects malformed requests") {
    ShapeParams square = unit_square_params();
    Objective obj = single_lambda1(4.0);

    obj.indices = {};
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj.indices = {0};
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj.indices = {2, 1};
    obj.combiner = Combiner::Sum;
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj.indices = {1, 2};
    obj.combiner = Combiner::Single;
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj = single_lambda1(4.0);
    obj.combiner = Combiner::PNorm;
    obj.p_norm_q = 0.5;
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj = single_lambda1(0.0);
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
    obj = single_lambda1(4.0);
    obj.mode = ObjectiveMode::Penalty;
    obj.penalty_weight = 0.0;
    CHECK_THROWS_AS(evaluate(obj, square, 0.2), std::invalid_argument);
}

TEST_CASE("projection makes the evaluation scale invariant") {
    // The same shape at three pre-scales projects to the same domain, so the
    // values agree far beyond the documented 1e-9.
    Objective obj = single_lambda1(8.0);
    ShapeParams base = unit_square_params();
    ShapeParams twice = make_polygon({{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}});
    ShapeParams half = make_polygon({{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}});

    Evaluation e1 = evaluate(obj, base, 0.08);
    Evaluation e2 = evaluate(obj, twice, 0.08);
    Evaluation e3 = evaluate(obj, half, 0.08);
    REQUIRE(e1.feasible);
    CHECK(e2.value == doctest::Approx(e1.value).epsilon(1e-9));
    CHECK(e3.value == doctest::Approx(e1.value).epsilon(1e-9));
    CHECK(e1.prob == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(e2.prob == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("nelder-mead bookkeeping, budget, and determinism") {
    Objective obj = single_lambda1(4.0);
    ShapeParams square = unit_square_params();

    SUBCASE("zero budget still evaluates the initial point") {
        OptimizationRun run = nelder_mead(obj, square, 0, 7, 0.2);
        CHECK(run.evaluations == 1);
        CHECK(run.log.size() == 1);
        CHECK(run.log[0].iter == 0);
        CHECK(run.best_value == run.log[0].objective);
        CHECK(to_vector(run.best_params) == to_vector(square));
        CHECK(std::isfinite(run.polished_value));
    }

    SUBCASE("budget caps total evaluations below a full simplex") {
        OptimizationRun run = nelder_mead(obj, square, 5, 7, 0.2);
        CHECK(run.evaluations == 5);
        CHECK(run.log.size() == 5);
        for (size_t i = 1; i < run.objective_trajectory.size(); ++i)
            CHECK(run.objective_trajectory[i] <= run.objective_trajectory[i - 1]);
        double lowest = std::numeric_limits<double>::infinity();
        for (const EvalRecord& rec : run.log) lowest = std::min(lowest, rec.objective);
        CHECK(run.best_value <= lowest + 1e-12 * std::max(1.0, std::abs(lowest)));
        CHECK(run.params_trajectory.size() == run.objective_trajectory.size());
    }

    SUBCASE("identical seeds replay identically") {
        OptimizationRun a = nelder_mead(obj, square, 12, 42, 0.2);
        OptimizationRun b = nelder_mead(obj, square, 12, 42, 0.2);
        REQUIRE(a.log.size() == b.log.size());
        for (size_t i = 0; i < a.log.size(); ++i) {
            CHECK(a.log[i].objective == b.log[i].objective);
            CHECK(a.log[i].params == b.log[i].params);
        }
        CHECK(a.best_value == b.best_value);
        OptimizationRun c = nelder_mead(obj, square, 12, 43, 0.2);
        CHECK(c.log.size() == a.log.size());  // same budget, different walk
    }
}

TEST_CASE("nelder-mead drives a perturbed disk toward the ball optimum") {
    // Minimizing lambda_1 at fixed boundary length: the ball is optimal, so
    // the search should recover the transcendental disk value from a lopsided
    // starting shape.
    ShapeParams init = make_radial_fourier({0.0, 0.0}, 1.1, {0.08, -0.05}, {0.06}, 64);
    Objective obj = single_lambda1(2.0 * kPi);
    OptimizationRun run = nelder_mead(obj, init, 60);

    CHECK(run.evaluations <= 60);
    CHECK(run.log.size() == static_cast<size_t>(run.evaluations));
    for (size_t i = 1; i < run.objective_trajectory.size(); ++i)
        CHECK(run.objective_trajectory[i] <= run.objective_trajectory[i - 1]);
    CHECK(run.best_value <= run.log[0].objective);  // never worse than the start

    CHECK(run.best_value == doctest::Approx(kUnitDiskLambda1).epsilon(0.02));
    CHECK(run.best_value >= kUnitDiskLambda1 * (1.0 - 0.005));  // can't beat the ball
    REQUIRE(std::isfinite(run.polished_value));
    CHECK(run.polished_value == doctest::Approx(run.best_value).epsilon(0.01));
    CHECK(run.best_domain.has_value());
}

TEST_CASE("two-ball candidate: single ball and symmetric split") {
    SUBCASE("k = 1 keeps the whole perimeter on one ball") {
        TwoBallResult r = two_ball_candidate(1, 1.0, 2.0 * kPi);
        CHECK(r.value == doctest::Approx(kUnitDiskLambda1).epsilon(1e-12));
        CHECK(r.split_index == 0);
        CHECK(r.p1 == 0.0);
        CHECK(r.p2 == doctest::Approx(2.0 * kPi).epsilon(1e-15));
        CHECK(r.lambda1 == 0.0);
        CHECK(r.lambda2 == doctest::Approx(r.value).epsilon(1e-15));
    }

    SUBCASE("k = 2 at p = 4 pi prefers two equal unit balls") {
        TwoBallResult r = two_ball_candidate(2, 1.0, 4.0 * kPi);
        // Frozen from the independent multiprecision computation: the equal
        // split of two unit disks beats the single radius-2 disk.
        CHECK(r.value == doctest::Approx(kUnitDiskLambda1).epsilon(1e-9));
        CHECK(r.split_index == 1);
        CHECK(r.p1 == doctest::Approx(2.0 * kPi).epsilon(1e-6));
        CHECK(r.lambda1 == doctest::Approx(r.lambda2).epsilon(1e-6));
        // Dominance over the one-ball configuration it competed against.
        CHECK(disk_robin_eigenvalues(2.0, 1.0, 2)[1] ==
              doctest::Approx(kR2DiskLambda2).epsilon(1e-12));
        CHECK(r.value < kR2DiskLambda2);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(two_ball_candidate(0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(two_ball_candidate(1, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(two_ball_candidate(1, 1.0, -1.0), std::invalid_argument);
    }
}

TEST_CASE("slit widening: exact perimeters and convergence toward the crack") {
    PlanarDomain square = unit_square_domain();
    Polyline crack = {{0.3, 0.5}, {0.7, 0.5}};

    WideningTable table =
        slit_widening_experiment(square, crack, {0.12, 0.06}, 1.0, 1, 0.05);

    // Prob(host, crack) = 4 + 2 * 0.4.
    CHECK(table.reference_prob == doctest::Approx(4.8).epsilon(1e-13));
    REQUIRE(table.reference_lambdas.size() == 1);
    CHECK(table.reference_lambdas[0] > 0.0);

    REQUIRE(table.rows.size() == 2);
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const WideningRow& row = table.rows[i];
        // Flat-capped channel around a straight crack of length 0.4:
        // perimeter 4 + 2 * (0.4 + w), exactly.
        CHECK(row.perimeter == doctest::Approx(4.0 + 2.0 * (0.4 + row.width)).epsilon(1e-13));
        REQUIRE(row.lambdas.size() == 1);
        CHECK(row.lambdas[0] > 0.0);
    }
    const double ref = table.reference_lambdas[0];
    CHECK(std::abs(table.rows[1].lambdas[0] - ref) < std::abs(table.rows[0].lambdas[0] - ref));

    SUBCASE("input validation") {
        CHECK_THROWS_AS(slit_widening_experiment(square, crack, {}, 1.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(slit_widening_experiment(square, crack, {0.06, 0.12}, 1.0, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(slit_widening_experiment(square, crack, {0.1, -0.05}, 1.0, 1),
                        std::invalid_argument);
    }

    SUBCASE("channel hitting the boundary is an error") {
        Polyline low = {{0.3, 0.04}, {0.7, 0.04}};
        CHECK_THROWS_AS(slit_widening_experiment(square, low, {0.1}, 1.0, 1, 0.1), GeometryError);
    }

    SUBCASE("crack outside the host is an error") {
        Polyline outside = {{5.0, 5.0}, {6.0, 5.0}};
        CHECK_THROWS_AS(slit_widening_experiment(square, outside, {0.1}, 1.0, 1, 0.1), GeometryError);
    }
}

TEST_CASE("cut probe: identity, halving, and degeneracies") {
    PlanarDomain square = unit_square_domain();

    SUBCASE("cut beyond the domain is the identity") {
        std::vector<CutProbeRow> rows = cut_probe(square, {2.0}, 1.0, 2, 0.1);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].section_length == 0.0);
        CHECK(rows[0].cut_lambdas == rows[0].base_lambdas);
        CHECK(rows[0].lambda_diff == 0.0);
        CHECK(rows[0].ratio == 0.0);
    }

    SUBCASE("halving the square matches the rectangle routine") {
        std::vector<CutProbeRow> rows = cut_probe(square, {0.5}, 1.0, 1, 0.04);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].section_length == doctest::Approx(1.0).epsilon(1e-13));
        const double oracle = rectangle_robin_eigenvalues(0.5, 1.0, 1.0, 1)[0];
        CHECK(rows[0].cut_lambdas[0] == doctest::Approx(oracle).epsilon(0.02));
        CHECK(rows[0].lambda_diff > 0.0);  // the x-interval shrank, lambda_1x grew
        CHECK(rows[0].ratio ==
              doctest::Approx(rows[0].lambda_diff / rows[0].section_length).epsilon(1e-13));
    }

    SUBCASE("cut left of the domain leaves nothing") {
        CHECK_THROWS_AS(cut_probe(square, {-1.0}, 1.0, 1, 0.1), GeometryError);
    }

    SUBCASE("a hole crossing the cut line is degenerate") {
        PlanarDomain holed = square;
        holed.components[0].holes.push_back(
            {{0.4, 0.4}, {0.4, 0.6}, {0.6, 0.6}, {0.6, 0.4}});
        CHECK_THROWS_AS(cut_probe(holed, {0.5}, 1.0, 1, 0.1), GeometryError);
    }

    SUBCASE("cracks are truncated short of the cut") {
        PlanarDomain cracked = square;
        cracked.cracks.push_back({0, {{0.2, 0.5}, {0.8, 0.5}}});
        std::vector<CutProbeRow> rows = cut_probe(cracked, {0.5}, 1.0, 1, 0.05);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].section_length == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(rows[0].cut_lambdas[0] > 0.0);
        CHECK(std::isfinite(rows[0].cut_lambdas[0]));
    }
}

TEST_CASE("penalty mode adds the weighted perimeter without projecting") {
    ShapeParams square = unit_square_params();
    Objective obj;
    obj.indices = {1};
    obj.mode = ObjectiveMode::Penalty;
    obj.penalty_weight = 0.5;
    obj.beta = 1.0;
    Evaluation ev = evaluate(obj, square, 0.08);
    REQUIRE(ev.feasible);
    CHECK(ev.prob == doctest::Approx(4.0).epsilon(1e-13));  // untouched by projection
    CHECK(ev.value == doctest::Approx(ev.lambdas[0] + 0.5 * 4.0).epsilon(1e-13));
    const double oracle = rectangle_robin_eigenvalues(1.0, 1.0, 1.0, 1)[0];
    CHECK(ev.lambdas[0] == doctest::Approx(oracle).epsilon(0.03));
}
