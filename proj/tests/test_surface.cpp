#include <doctest.h>

#include "atlas/surface.hpp"

using namespace atlas;

TEST_CASE("euler characteristic of the classical diagrams") {
    CHECK(surface_diagram::from_word("aba'b'").euler_characteristic() == 0);
    CHECK(surface_diagram::from_word("aa'").euler_characteristic() == 2);
    CHECK(surface_diagram::from_word("aba'b'cdc'd'").euler_characteristic() == -2);
    CHECK(surface_diagram::from_word("aa").euler_characteristic() == 1);
    CHECK(surface_diagram::from_word("abab'").euler_characteristic() == 0);
}

TEST_CASE("orientability from exponent signs") {
    CHECK(surface_diagram::from_word("aba'b'").orientable());
    CHECK(surface_diagram::from_word("aa'").orientable());
    CHECK(surface_diagram::from_word("aba'b'cdc'd'").orientable());
    CHECK_FALSE(surface_diagram::from_word("aa").orientable());
    CHECK_FALSE(surface_diagram::from_word("abab'").orientable());
}

TEST_CASE("malformed words are rejected") {
    CHECK_THROWS_AS(surface_diagram::from_word("aab"), config_error);
    CHECK_THROWS_AS(surface_diagram::from_word(""), config_error);
    CHECK_THROWS_AS(surface_diagram::from_word("a3b"), config_error);
    CHECK_THROWS_AS(surface_diagram::from_word("aaa"), config_error);
}

TEST_CASE("conjectured xi values") {
    CHECK(surface_diagram::from_word("aba'b'").conjectured_xi() == 1);
    CHECK(surface_diagram::from_word("abab'").conjectured_xi() == 2);
    CHECK(surface_diagram::from_word("aa'").conjectured_xi() == 0);
    CHECK(surface_diagram::from_word("aba'b'cdc'd'").conjectured_xi() == 2);
    CHECK(surface_diagram::from_word("aa").conjectured_xi() == 1);
}

TEST_CASE("xi is monotone nonincreasing in chi for orientable diagrams") {
    auto sphere = surface_diagram::from_word("aa'");
    auto torus = surface_diagram::from_word("aba'b'");
    auto genus2 = surface_diagram::from_word("aba'b'cdc'd'");
    CHECK(sphere.euler_characteristic() > torus.euler_characteristic());
    CHECK(torus.euler_characteristic() > genus2.euler_characteristic());
    CHECK(sphere.conjectured_xi() <= torus.conjectured_xi());
    CHECK(torus.conjectured_xi() <= genus2.conjectured_xi());
}

TEST_CASE("torus canonicalization wraps identified boundary points") {
    auto t = surface_diagram::from_word("aba'b'");
    point p = t.canonicalize({1.0, 0.3});
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(0.3));
    point q = t.canonicalize({0.2, 0.7});
    CHECK(q.x == doctest::Approx(0.2));
    CHECK(q.y == doctest::Approx(0.7));
    point c = t.canonicalize({1.0, 1.0});
    CHECK(c.x == doctest::Approx(0.0));
    CHECK(c.y == doctest::Approx(0.0));
}

TEST_CASE("canonicalize is idempotent and distance-compatible") {
    auto t = surface_diagram::from_word("aba'b'");
    splitmix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        point p{rng.unit() * 1.2 - 0.1, rng.unit() * 1.2 - 0.1};
        point q{rng.unit(), rng.unit()};
        if (p.x < 0 || p.y < 0) continue;
        point cp = t.canonicalize(p);
        point ccp = t.canonicalize(cp);
        CHECK(cp.x == doctest::Approx(ccp.x).epsilon(1e-9));
        CHECK(cp.y == doctest::Approx(ccp.y).epsilon(1e-9));
        CHECK(t.distance(cp, t.canonicalize(q)) == doctest::Approx(t.distance(p, q)).epsilon(1e-9));
    }
}

TEST_CASE("quotient distance on the torus wraps both ways") {
    auto t = surface_diagram::from_word("aba'b'");
    CHECK(t.distance({0.05, 0.5}, {0.95, 0.5}) == doctest::Approx(0.1));
    CHECK(t.distance({0.5, 0.05}, {0.5, 0.95}) == doctest::Approx(0.1));
    CHECK(t.distance({0.0, 0.0}, {1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("klein bottle glues the top edge with a flip") {
    auto kb = surface_diagram::from_word("abab'");
    // (x,0) ~ (1-x,1) under the doubled letter
    point p = kb.canonicalize({0.75, 1.0});
    point q = kb.canonicalize({0.25, 0.0});
    CHECK(kb.distance(p, q) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("octagon domain membership") {
    auto g2 = surface_diagram::from_word("aba'b'cdc'd'");
    CHECK(g2.in_domain({0.5, 0.5}));
    CHECK(g2.in_domain({0.3, 0.3}));
    CHECK_FALSE(g2.in_domain({0.01, 0.01}));
    CHECK_THROWS_AS(g2.canonicalize({0.01, 0.01}), config_error);
}
