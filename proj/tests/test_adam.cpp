#include <doctest.h>

#include <cmath>
#include <vector>

#include "stiffnet/adam.hpp"

using namespace stiffnet;

TEST_CASE("zero gradient leaves parameters unchanged") {
    std::vector<double> p{1.5, -2.0};
    std::vector<double> g{0.0, 0.0};
    AdamState st(2);
    AdamConfig cfg;
    adam_step(p, g, st, cfg);
    CHECK(p[0] == 1.5);
    CHECK(p[1] == -2.0);
    CHECK(st.step == 1);
}

TEST_CASE("first step moves by about -lr * sign(g)") {
    std::vector<double> p{0.0, 0.0, 0.0};
    std::vector<double> g{0.3, -2.0, 1e-3};
    AdamState st(3);
    AdamConfig cfg;
    cfg.lr = 0.05;
    adam_step(p, g, st, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        const double expect = -cfg.lr * (g[i] > 0 ? 1.0 : -1.0);
        CHECK(p[i] == doctest::Approx(expect).epsilon(1e-4));  // up to eps terms
    }
}

TEST_CASE("two identical steps: frozen trace") {
    // Hand-computed fixture: p0=1, g=0.5, lr=0.1, default betas.
    std::vector<double> p{1.0};
    std::vector<double> g{0.5};
    AdamState st(1);
    AdamConfig cfg;
    cfg.lr = 0.1;

    adam_step(p, g, st, cfg);
    CHECK(p[0] == doctest::Approx(0.900000002).epsilon(1e-14));
    CHECK(st.m[0] == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(st.v[0] == doctest::Approx(2.5e-4).epsilon(1e-14));

    adam_step(p, g, st, cfg);
    CHECK(p[0] == doctest::Approx(0.8000000040000006).epsilon(1e-14));
    CHECK(st.m[0] == doctest::Approx(0.09499999999999997).epsilon(1e-14));
    CHECK(st.v[0] == doctest::Approx(0.0004997500000000004).epsilon(1e-14));
    CHECK(st.step == 2);

    // Constant gradient keeps moving against its sign.
    const double before = p[0];
    adam_step(p, g, st, cfg);
    CHECK(p[0] < before);
}

TEST_CASE("learning-rate decay shrinks later steps") {
    std::vector<double> p1{0.0}, p2{0.0};
    std::vector<double> g{1.0};
    AdamConfig flat;
    flat.lr = 0.1;
    AdamConfig decayed = flat;
    decayed.decay = 0.5;

    AdamState s1(1), s2(1);
    adam_step(p1, g, s1, flat);
    adam_step(p2, g, s2, decayed);
    CHECK(p1[0] == p2[0]);  // decay^0 = 1 on the first step

    adam_step(p1, g, s1, flat);
    adam_step(p2, g, s2, decayed);
    CHECK(std::abs(p2[0]) < std::abs(p1[0]));
}

TEST_CASE("non-finite gradient aborts the step untouched") {
    std::vector<double> p{1.0};
    std::vector<double> g{std::numeric_limits<double>::quiet_NaN()};
    AdamState st(1);
    AdamConfig cfg;
    CHECK_THROWS_AS(adam_step(p, g, st, cfg), NumericError);
    CHECK(p[0] == 1.0);
    CHECK(st.step == 0);
    CHECK(st.m[0] == 0.0);
}

TEST_CASE("size mismatch is rejected") {
    std::vector<double> p{1.0, 2.0};
    std::vector<double> g{0.1};
    AdamState st(2);
    AdamConfig cfg;
    CHECK_THROWS_AS(adam_step(p, g, st, cfg), ConfigError);
}
