#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmi/io.hpp"
#include "mmi/metrics.hpp"
#include "mmi/spaces.hpp"

using namespace mmi;

TEST_CASE("sphere samples are valid spaces with the geodesic metric") {
    auto X = sphere_sample(2, 1.0, 40, 7);
    CHECK(X.size() == 40);
    CHECK(mass_sum(X.weight) == Mass(1));
    for (std::size_t i = 0; i < X.size(); ++i) {
        double norm = 0;
        for (double c : X.coords[i]) norm += c * c;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0));
        for (std::size_t j = 0; j < X.size(); ++j) {
            CHECK(X.d(i, j) <= M_PI + 1e-9);  // geodesic distance on S^n(1)
            CHECK(X.d(i, j) >= 0.0);
        }
    }
    // radius scales distances linearly
    auto Y = sphere_sample(2, 2.0, 40, 7);
    CHECK(Y.d(0, 1) == doctest::Approx(2.0 * X.d(0, 1)));
}

TEST_CASE("circle samples have mean pairwise distance near pi/2") {
    auto X = sphere_sample(1, 1.0, 1500, 99);
    double sum = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            sum += X.d(i, j);
            ++cnt;
        }
    CHECK(sum / cnt == doctest::Approx(M_PI / 2).epsilon(0.02 / (M_PI / 2)));
}

TEST_CASE("grid cube has the right shape and sup metric") {
    auto G = grid_cube(2, 3);
    CHECK(G.size() == 9);
    CHECK(G.diameter() == doctest::Approx(1.0));
    CHECK(mass_sum(G.weight) == Mass(1));
    CHECK(G.mu(0) == Mass(1, 9));
    // corner to adjacent corner along one axis: distance 1/2 at k=3
    bool found_half = false;
    for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = 0; j < G.size(); ++j)
            if (std::abs(G.d(i, j) - 0.5) < 1e-12) found_half = true;
    CHECK(found_half);
    CHECK_THROWS_AS(grid_cube(7, 4), SizeLimitExceeded);
}

TEST_CASE("random_discrete produces valid seeded spaces") {
    auto A = random_discrete(12, 5);
    auto B = random_discrete(12, 5);
    CHECK(A.dist == B.dist);
    CHECK(A.weight == B.weight);
    CHECK(mass_sum(A.weight) == Mass(1));
    auto r = validate_space(A.labels, A.dist, A.weight);
    CHECK(r.ok());
    CHECK_THROWS_AS(random_discrete(65, 1), SizeLimitExceeded);

    auto biased = random_discrete(8, 5, 0.9);
    CHECK(to_double(biased.max_atom()) > to_double(A.max_atom()) - 1e-12);
}

TEST_CASE("perturb_weights moves at most delta of Prokhorov distance") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto X = random_discrete(6, seed * 3 + 2);
        Mass min_w(1);
        for (auto i : X.support()) min_w = std::min(min_w, X.mu(i));
        for (double delta : {0.1, 0.05, 0.01}) {
            if (mass_from_double(delta) >= min_w) continue;  // precondition
            auto Y = perturb_weights(X, delta, seed);
            CHECK(Y.dist == X.dist);
            CHECK(mass_sum(Y.weight) == Mass(1));
            CHECK(prokhorov(X.dist, X.weight, Y.weight) <= delta + 1e-12);
        }
    }
    auto X = random_discrete(4, 11);
    CHECK_THROWS_AS(perturb_weights(X, 2.0, 1), DeltaTooLarge);
}

TEST_CASE("space documents round trip through JSON") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto X = random_discrete(7, seed);
        auto j = space_to_json(X);
        auto Y = parse_space_document(j);
        CHECK(Y.labels == X.labels);
        CHECK(Y.weight == X.weight);
        CHECK(Y.dist == X.dist);
    }
    auto S = sphere_sample(2, 1.0, 10, 3);
    auto S2 = parse_space_document(space_to_json(S));
    CHECK(S2.coords == S.coords);
}

TEST_CASE("generator documents are honored") {
    Json g;
    g["generator"] = {{"kind", "random_discrete"}, {"count", 6}, {"seed", 9}};
    auto X = parse_space_document(g);
    auto want = random_discrete(6, 9);
    CHECK(X.weight == want.weight);

    Json s;
    s["generator"] = {{"kind", "sphere"}, {"dimension", 2}, {"radius", 1.0},
                      {"count", 12}, {"seed", 4}};
    CHECK(parse_space_document(s).size() == 12);

    Json gr;
    gr["generator"] = {{"kind", "grid"}, {"dimension", 2}, {"k", 3}};
    CHECK(parse_space_document(gr).size() == 9);

    Json p;
    p["generator"] = {{"kind", "perturbed"},
                      {"base", space_to_json(want)},
                      {"delta", 0.05},
                      {"seed", 2}};
    auto P = parse_space_document(p);
    CHECK(P.size() == want.size());

    Json bad;
    bad["generator"] = {{"kind", "nonsense"}};
    CHECK_THROWS_AS(parse_space_document(bad), ParseError);
    CHECK_THROWS_AS(parse_space_document(Json::array()), ParseError);
}

TEST_CASE("weights parse exactly from decimal strings") {
    Json doc;
    doc["labels"] = {"a", "b"};
    doc["dist"] = {{0.0, 1.0}, {1.0, 0.0}};
    doc["weights"] = {"0.125", "0.875"};
    auto X = parse_space_document(doc);
    CHECK(X.mu(0) == Mass(1, 8));
    CHECK(X.mu(1) == Mass(7, 8));
}

TEST_CASE("digest is stable and content sensitive") {
    CHECK(digest("abc") == digest("abc"));
    CHECK(digest("abc") != digest("abd"));
    CHECK_FALSE(digest("").empty());
}

TEST_CASE("run manifest omits wall time in rational mode") {
    RunManifest m;
    m.command = "compute diam";
    m.mode = "rational";
    m.wall_seconds = 1.5;
    auto j = m.to_json();
    CHECK_FALSE(j.contains("wall_seconds"));
    CHECK_FALSE(j.contains("uncertified"));
    m.mode = "exact";
    m.uncertified = true;
    auto j2 = m.to_json();
    CHECK(j2.contains("wall_seconds"));
    CHECK(j2["uncertified"] == true);
}
