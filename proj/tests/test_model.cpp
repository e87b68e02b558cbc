#include "canard/model.hpp"

#include <doctest.h>

#include <random>

using namespace canard;
namespace md = canard::model;

TEST_CASE("load_model accepts a valid planar config") {
    const char* cfg = R"json({
      "name": "toy",
      "states": ["x", "y"],
      "params": {"lambda": 0.0, "eps": 0.05},
      "epsilon_param": "eps",
      "bifurcation_param": "lambda",
      "equations": ["x^2 + x^3/3 - y", "eps*(x - lambda)"]
    })json";
    md::SystemModel m = md::load_model(cfg);
    CHECK(m.dim() == 2);
    CHECK(m.epsilon_param() == "eps");
    Vec z(2);
    z << 1.0, 0.0;
    Vec f = m.bind().rhs(z);
    CHECK(f[0] == doctest::Approx(4.0 / 3.0));
    CHECK(f[1] == doctest::Approx(0.05));
}

TEST_CASE("load_model rejects malformed configs") {
    CHECK_THROWS_AS(md::load_model("{not json"), ConfigError);
    CHECK_THROWS_AS(md::load_model(R"({"name":"m"})"), ConfigError);
    // duplicate state
    CHECK_THROWS_AS(md::load_model(R"({
      "name":"m","states":["x","x"],"params":{"eps":1,"l":0},
      "epsilon_param":"eps","bifurcation_param":"l","equations":["x","x"]})"),
                    ConfigError);
    // equation references undeclared z; the message names it
    try {
        md::load_model(R"({
          "name":"m","states":["x","y"],"params":{"eps":1,"l":0},
          "epsilon_param":"eps","bifurcation_param":"l","equations":["z","x"]})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'z'") != std::string::npos);
    }
    // missing epsilon designation
    CHECK_THROWS_AS(md::load_model(R"({
      "name":"m","states":["x"],"params":{"l":0},
      "epsilon_param":"eps","bifurcation_param":"l","equations":["x"]})"),
                    ConfigError);
    // epsilon == bifurcation
    CHECK_THROWS_AS(md::load_model(R"({
      "name":"m","states":["x"],"params":{"eps":1},
      "epsilon_param":"eps","bifurcation_param":"eps","equations":["x"]})"),
                    ConfigError);
    // state/param collision
    CHECK_THROWS_AS(md::load_model(R"({
      "name":"m","states":["x"],"params":{"x":1,"eps":1,"l":0},
      "epsilon_param":"eps","bifurcation_param":"l","equations":["x"]})"),
                    ConfigError);
    // equation count mismatch
    CHECK_THROWS_AS(md::load_model(R"({
      "name":"m","states":["x","y"],"params":{"eps":1,"l":0},
      "epsilon_param":"eps","bifurcation_param":"l","equations":["x"]})"),
                    ConfigError);
}

TEST_CASE("builtin van der Pol") {
    md::SystemModel m = md::builtin_vdp();
    md::BoundSystem s = m.bind({{"lambda", 0.0}, {"eps", 0.05}});
    Vec z(2);
    z << 0.0, 0.0;
    CHECK(s.rhs(z).norm() == doctest::Approx(0.0));  // canard point is an equilibrium
    z << 1.0, 0.0;
    Vec f = s.rhs(z);
    CHECK(f[0] == doctest::Approx(4.0 / 3.0));
    CHECK(f[1] == doctest::Approx(0.05));
    z << 0.0, 0.0;
    Mat J = s.jac(z);
    CHECK(J(0, 0) == doctest::Approx(0.0));
    CHECK(J(0, 1) == doctest::Approx(-1.0));
    CHECK(J(1, 0) == doctest::Approx(0.05));
    CHECK(J(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("builtin FitzHugh-Nagumo") {
    md::SystemModel m = md::builtin_fhn();
    CHECK(m.dim() == 3);
    CHECK(m.default_params().at("s") == doctest::Approx(1.37));
    CHECK(m.bifurcation_param() == "I");

    // Points on the critical manifold y = x1(x1-1)(0.1-x1) + I have
    // vanishing fast components.
    md::BoundSystem s = m.bind({{"I", 0.07}, {"eps", 0.01}});
    for (double x1 : {-0.3, 0.0, 0.2, 0.5, 0.9}) {
        Vec z(3);
        z << x1, 0.0, x1 * (x1 - 1.0) * (0.1 - x1) + 0.07;
        Vec f = s.rhs(z);
        CHECK(std::abs(f[0]) <= 1e-14);
        CHECK(std::abs(f[1]) <= 1e-14);
    }

    Vec origin = Vec::Zero(3);
    CHECK(m.bind({{"I", 0.0}}).rhs(origin).norm() == doctest::Approx(0.0));

    Vec z(3);
    z << 1.0, 0.0, 0.0;
    Vec f = m.bind({{"I", 0.0}, {"s", 1.37}, {"eps", 0.001}}).rhs(z);
    CHECK(f[2] == doctest::Approx(0.001 / 1.37).epsilon(1e-12));
}

TEST_CASE("native evaluators agree with the parsed expressions") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (md::SystemModel m : {md::builtin_vdp(), md::builtin_fhn()}) {
        REQUIRE(m.has_native());
        md::BoundSystem s = m.bind();
        for (int i = 0; i < 100; ++i) {
            Vec z(m.dim());
            for (int k = 0; k < m.dim(); ++k) z[k] = u(rng);
            Vec a = s.rhs(z);
            Vec b = m.rhs_from_expressions(z);
            for (int k = 0; k < m.dim(); ++k) {
                const double scale = std::max(1.0, std::abs(a[k]));
                CHECK(std::abs(a[k] - b[k]) <= 1e-15 * scale);
            }
        }
    }
}

TEST_CASE("binding with overrides leaves the model untouched") {
    md::SystemModel m = md::builtin_vdp();
    const double before = m.default_params().at("lambda");
    (void)m.bind({{"lambda", 0.7}});
    CHECK(m.default_params().at("lambda") == before);
    CHECK_THROWS_AS(m.bind({{"nosuch", 1.0}}), ConfigError);
}
