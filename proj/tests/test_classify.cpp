#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "meanscope/classify.hpp"
#include "meanscope/serialize.hpp"
#include "test_corpus.hpp"

using namespace meanscope;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

geodesic_measure random_geodesic(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_atoms(1, 5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int k = n_atoms(rng);
    std::vector<geodesic_atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        const double w = -std::log(unif(rng));
        atoms.push_back({w, unif(rng)});
        total += w;
    }
    // Half the samples mix in a uniform continuous component.
    const bool with_density = unif(rng) < 0.5;
    const double density_mass = with_density ? 0.3 : 0.0;
    for (auto& a : atoms) a.weight *= (1.0 - density_mass) / total;
    if (with_density) {
        return geodesic_measure(std::move(atoms),
                                [](double) { return 0.3; });
    }
    return geodesic_measure(std::move(atoms));
}

}  // namespace

TEST_CASE("grid and tolerance validation") {
    grid_spec g;
    g.t_min = 2.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = grid_spec{};
    g.n_points = 2;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = grid_spec{};
    g.r_values = {0.5};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);

    tolerance_config tol;
    tol.fd_step = 0.0;
    CHECK_THROWS_AS(tol.validate(), std::invalid_argument);

    const grid_spec def;
    CHECK(def.r_values.front() == 1.015625);
    CHECK(def.r_values.back() == 10.0);
    const auto xs = def.log_points();
    CHECK(xs.size() == 241);
    CHECK_THAT(xs[120], WithinAbs(0.0, 1e-12));
}

TEST_CASE("gcv and gcc verdicts") {
    // Powers are both geometrically convex and concave.
    for (double alpha : {0.0, 0.3, 1.0}) {
        CHECK(check_gcv(mean_function::power(alpha)).holds());
        CHECK(check_gcc(mean_function::power(alpha)).holds());
    }

    // u_{a,b}: convex side iff |a| >= |b|.
    CHECK(check_gcv(mean_function::uab(1.0, 0.5)).holds());
    CHECK_FALSE(check_gcc(mean_function::uab(1.0, 0.5)).holds());
    CHECK(check_gcc(mean_function::uab(0.3, -0.7)).holds());
    CHECK_FALSE(check_gcv(mean_function::uab(0.3, -0.7)).holds());
    // |a| = |b| collapses to a power, so both hold.
    CHECK(check_gcv(mean_function::uab(0.5, -0.5)).holds());
    CHECK(check_gcc(mean_function::uab(0.5, -0.5)).holds());

    // Stolarsky: convex on [-1,2], concave on [-2,-1].
    for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        CHECK(check_gcv(mean_function::stolarsky(alpha)).holds());
    }
    for (double alpha : {-2.0, -1.5, -1.0}) {
        CHECK(check_gcc(mean_function::stolarsky(alpha)).holds());
    }
    CHECK_FALSE(check_gcv(mean_function::stolarsky(-1.5)).holds());
    CHECK_FALSE(check_gcc(mean_function::stolarsky(1.5)).holds());
}

TEST_CASE("violated verdicts carry reproducible witnesses") {
    const auto rep = check_gcv(mean_function::uab(0.3, -0.7));
    REQUIRE(rep.result == verdict::violated);
    REQUIRE(rep.witness.has_value());
    const auto& w = *rep.witness;
    CHECK(w.value < -rep.tolerances.criterion_slack);

    // Re-evaluating the second difference at the witness reproduces it.
    auto f = mean_function::uab(0.3, -0.7);
    const double h =
        std::log(rep.grid.t_max / rep.grid.t_min) / (rep.grid.n_points - 1);
    const double x = std::log(w.t);
    const auto logf = [&](double v) { return std::log(f(std::exp(v))); };
    const double d2 = (logf(x + h) - 2.0 * logf(x) + logf(x - h)) / (h * h);
    CHECK_THAT(d2, WithinRel(w.value, 1e-9));
}

TEST_CASE("pmi family checks") {
    // Powers satisfy the power inequality with equality.
    for (double alpha : {0.0, 0.5, 1.0}) {
        CHECK(check_pmi(mean_function::power(alpha)).holds());
        CHECK(check_pmd(mean_function::power(alpha)).holds());
    }

    // Geodesic means are pmi.
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        CHECK(check_pmi(mean_function::geodesic(random_geodesic(rng))).holds());
    }

    // The section-5 function fails pmi_r(2) with a small-t witness where the
    // ratio f(t^2)/f(t)^2 approaches 1/2.
    auto s5 = mean_function::section5_example();
    const auto rep = check_pmi_r(s5, 2.0);
    REQUIRE(rep.result == verdict::violated);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->t < 1e-2);
    CHECK(rep.witness->r == 2.0);
    const double ratio = std::exp(rep.witness->value);
    CHECK(ratio < 0.75);  // heading toward 2^{1-r} = 1/2

    // Fixing r = 1 in the grid degenerates to equality for any function.
    grid_spec degenerate;
    degenerate.r_values = {1.0};
    CHECK(check_pmi(mean_function::binomial(-1.0), degenerate).holds());
    CHECK(check_pmd(mean_function::binomial(1.0), degenerate).holds());

    CHECK_THROWS_AS(check_pmi_r(s5, 1.0), std::invalid_argument);
}

TEST_CASE("pmi_inf") {
    tolerance_config tol;

    auto s5 = mean_function::section5_example();
    CHECK_THAT(derivative_at_one(s5, tol), WithinAbs(1.0 / 3.0, 1e-6));
    CHECK(check_pmi_inf(s5).holds());

    for (double alpha : {0.0, 0.5, 1.0}) {
        auto f = mean_function::power(alpha);
        CHECK_THAT(derivative_at_one(f, tol), WithinAbs(alpha, 1e-8));
        CHECK(check_pmi_inf(f).holds());
    }

    // Arithmetic mean: slope 1/2 at 1, and (1+t)/2 >= sqrt(t) is the AM-GM
    // inequality, checked directly as the oracle.
    auto arith = mean_function::binomial(1.0);
    CHECK_THAT(derivative_at_one(arith, tol), WithinAbs(0.5, 1e-8));
    for (double t : {1e-4, 0.1, 1.0, 10.0, 1e4}) {
        REQUIRE((1.0 + t) / 2.0 >= std::sqrt(t));
    }
    CHECK(check_pmi_inf(arith).holds());
}

TEST_CASE("loewner falsifier") {
    tolerance_config tol;

    // f(t) = t: all divided differences are 1; the matrix is singular PSD.
    auto linear = mean_function::power(1.0);
    const double eig = loewner_min_eigenvalue(linear, {0.5, 1.0, 2.0, 4.0}, tol);
    CHECK_THAT(eig, WithinAbs(0.0, 1e-8));

    // f(t) = t^2 is not operator monotone: 2x2 Loewner matrix at {1,2} is
    // [[2,3],[3,4]], whose minimum eigenvalue is 3 - sqrt(10).
    auto square = mean_function::power(2.0);
    const double neg = loewner_min_eigenvalue(square, {1.0, 2.0}, tol);
    CHECK(neg < -0.1);
    CHECK_THAT(neg, WithinAbs(3.0 - std::sqrt(10.0), 1e-6));

    // u_{1,-1/2} lies in Gamma, so random point sets stay PSD.
    auto om = mean_function::uab(1.0, -0.5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> pts;
        for (int i = 0; i < 6; ++i) pts.push_back(std::exp(unif(rng)));
        std::sort(pts.begin(), pts.end());
        bool distinct = true;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (pts[i] == pts[i - 1]) distinct = false;
        }
        if (!distinct) continue;
        REQUIRE(loewner_min_eigenvalue(om, pts, tol) >= -1e-8);
    }

    CHECK_THROWS_AS(loewner_min_eigenvalue(linear, {1.0, 1.0}, tol),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        loewner_min_eigenvalue(linear, std::vector<double>(13, 1.0), tol),
        std::invalid_argument);
    CHECK_THROWS_AS(loewner_min_eigenvalue(linear, {}, tol),
                    std::invalid_argument);
}

TEST_CASE("region scans match the analytic predicates") {
    // Smaller grid keeps the sweep quick; acceptance runs the full one.
    grid_spec grid;
    grid.n_points = 121;

    const auto a_vals = param_range(-2.0, 2.0, 0.5);
    const auto uab_scan = region_scan_uab(property::gcv, a_vals, a_vals, grid);
    CHECK(uab_scan.interior_mismatches == 0);
    CHECK(uab_scan.mismatches().empty());
    CHECK(!uab_scan.rows.empty());

    const auto gcc_scan = region_scan_uab(property::gcc, a_vals, a_vals, grid);
    CHECK(gcc_scan.interior_mismatches == 0);

    const auto st_scan =
        region_scan_stolarsky(property::gcv, param_range(-2.0, 2.0, 0.25), grid);
    CHECK(st_scan.interior_mismatches == 0);
    const auto st_gcc =
        region_scan_stolarsky(property::gcc, param_range(-2.0, 2.0, 0.25), grid);
    CHECK(st_gcc.interior_mismatches == 0);

    const auto bp_scan =
        region_scan_binomial(property::gcv, param_range(-1.0, 1.0, 0.25), grid);
    CHECK(bp_scan.interior_mismatches == 0);
    for (const auto& row : bp_scan.rows) {
        if (row.a > 0.0) CHECK(row.observed);
    }

    CHECK_THROWS_AS(region_scan_stolarsky(property::pmi, {0.5}, grid),
                    std::invalid_argument);

    // CSV shape: fixed header, one line per row.
    const std::string csv = region_scan_csv(uab_scan);
    CHECK(csv.rfind("a,b,predicted,observed\n", 0) == 0);
}

TEST_CASE("duality between convexity and concavity") {
    for (const auto& f : meanscope::testing::om_corpus()) {
        CAPTURE(f.name());
        CHECK(check_gcv(f).holds() == check_gcc(f.adjoint()).holds());
        CHECK(check_pmi(f).holds() == check_pmd(f.adjoint()).holds());
    }
}

TEST_CASE("chain: geodesic -> gcv -> pmi, pmi_r -> pmi_inf") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        auto f = mean_function::geodesic(random_geodesic(rng));
        REQUIRE(check_gcv(f).holds());
    }

    for (const auto& f : meanscope::testing::om_corpus()) {
        CAPTURE(f.name());
        if (check_gcv(f).holds()) {
            CHECK(check_pmi(f).holds());
        }
        if (check_pmi_r(f, 2.0).holds()) {
            CHECK(check_pmi_inf(f).holds());
        }
    }
}

TEST_CASE("gcv closure under the lemma operations") {
    auto f = mean_function::uab(1.0, 0.5);
    auto g = mean_function::binomial(0.5);
    auto h = mean_function::power(0.5);
    REQUIRE(check_gcv(f).holds());
    REQUIRE(check_gcv(g).holds());

    CHECK(check_gcv(f * g).holds());
    CHECK(check_gcv(f.pow(0.5)).holds());
    CHECK(check_gcv(f.pow(2.0)).holds());
    CHECK(check_gcv(mean_function::sigma_compose(f, g, h)).holds());
}

TEST_CASE("inverse flips convexity") {
    auto arith = mean_function::binomial(1.0);
    REQUIRE(check_gcv(arith).holds());
    auto inv = arith.shifted_inverse(1.0);

    // Test on the image grid of t -> t f(t).
    grid_spec grid;
    grid.t_min = 1e-4 * arith(1e-4);
    grid.t_max = 1e4 * arith(1e4);
    grid.n_points = 121;
    CHECK(check_gcc(inv, grid).holds());

    // And the mirrored statement for a gcc seed.
    auto harm = mean_function::binomial(-1.0);
    REQUIRE(check_gcc(harm).holds());
    auto inv2 = harm.shifted_inverse(1.0);
    grid_spec grid2;
    grid2.t_min = 1e-4 * harm(1e-4);
    grid2.t_max = 1e4 * harm(1e4);
    grid2.n_points = 121;
    CHECK(check_gcv(inv2, grid2).holds());
}

TEST_CASE("gcc is not closed under sums") {
    auto harm = mean_function::binomial(-1.0);  // 2t/(t+1)
    auto square = mean_function::power(2.0);
    REQUIRE(check_gcc(harm).holds());
    REQUIRE(check_gcc(square).holds());

    // (harm + square)/2 via sigma composition with the arithmetic mean;
    // scaling does not affect geometric concavity.
    auto sum = mean_function::sigma_compose(harm, square,
                                            mean_function::binomial(1.0));
    const auto rep = check_gcc(sum);
    CHECK(rep.result == verdict::violated);
    REQUIRE(rep.witness.has_value());
}

TEST_CASE("report serialization") {
    const auto rep = check_pmi_r(mean_function::section5_example(), 2.0);
    const json j = to_json(rep);
    CHECK(j.at("property").get<std::string>() == "pmi_r");
    CHECK(j.at("r").get<double>() == 2.0);
    CHECK(j.at("verdict").get<std::string>() == "violated");
    CHECK(j.at("witness").is_object());
    CHECK(j.at("grid").at("n_points").get<int>() == 241);
    CHECK(j.at("tolerances").at("criterion_slack").get<double>() == 1e-10);

    CHECK(property_from_string("gcv") == property::gcv);
    CHECK_FALSE(property_from_string("nope").has_value());
}
