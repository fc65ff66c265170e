#include "nrcav/error.hpp"
#include "nrcav/model.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nrcav;

TEST_CASE("coefficients follow the decay and detuning rates")
{
    SystemParams p = passive_reference();
    CHECK(coefficients(p).x1 == cplx(-2.0, 0.0));

    p = SystemParams{};
    const auto c = coefficients(p);
    CHECK(c.x1.real() == doctest::Approx(2.1).epsilon(1e-15));
    CHECK(c.x1.imag() == 0.0);
    CHECK(c.x3 == cplx(-0.05, 0.0));

    p.delta1 = 0.5;
    p.delta2 = 0.25;
    const auto d = coefficients(p);
    CHECK(d.x1.imag() == -0.5);
    CHECK(d.x2.imag() == -0.5);
    CHECK(d.x3.imag() == -0.75);
}

TEST_CASE("undriven ground state is a fixed point")
{
    SystemParams p = passive_reference();
    p.eps_p = 0.0;
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        const auto d = drift(StateVector::ground(), p, dir);
        CHECK(norm(d) == 0.0);
    }
}

TEST_CASE("linear cavity drift matches hand substitution")
{
    SystemParams p = passive_reference();
    p.g = 0.0;
    p.J = 4.0;
    p.eps_p = 0.0;
    StateVector s;
    s.a1 = 1.0;
    const auto d = drift(s, p, Direction::Forward);
    CHECK(d.a1 == cplx(-2.0, 0.0));
    CHECK(d.a2 == cplx(0.0, -4.0));
    CHECK(d.sigma_ge == cplx(0.0, 0.0));
    CHECK(d.sigma_z == 0.0);
}

TEST_CASE("drive enters cavity 1 forward and cavity 2 backward")
{
    SystemParams p;  // eps_p = 0.36, kappa_e = 3.2
    const double drive = std::sqrt(3.2) * 0.36;
    const auto f = drift(StateVector::ground(), p, Direction::Forward);
    CHECK(f.a1.real() == doctest::Approx(drive).epsilon(1e-15));
    CHECK(f.a1.imag() == 0.0);
    CHECK(f.a2 == cplx(0.0, 0.0));
    CHECK(f.sigma_z == 0.0);
    const auto b = drift(StateVector::ground(), p, Direction::Backward);
    CHECK(b.a1 == cplx(0.0, 0.0));
    CHECK(b.a2.real() == doctest::Approx(drive).epsilon(1e-15));
}

TEST_CASE("real and complex state layouts round-trip")
{
    std::mt19937_64 rng(7);
    const auto s = testing::random_state(rng);
    CHECK(complexify(realify(s)) == s);
    const auto y = realify(s);
    CHECK(y(0) == s.a1.real());
    CHECK(y(1) == s.a1.imag());
    CHECK(y(6) == s.sigma_z);
}

TEST_CASE("analytic Jacobian agrees with central finite differences")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        SystemParams p;
        p.g = 0.1 + 5.0 * u(rng);
        p.J = 0.1 + 5.0 * u(rng);
        p.kappa1 = -6.0 + 8.0 * u(rng);
        p.kappa_e = 0.5 + 3.0 * u(rng);
        p.gamma = 0.05 + u(rng);
        p.delta1 = -2.0 + 4.0 * u(rng);
        p.delta2 = -2.0 + 4.0 * u(rng);
        p.eps_p = u(rng);
        const Direction dir = trial % 2 == 0 ? Direction::Forward : Direction::Backward;
        const auto s = testing::random_state(rng);
        const MeanFieldSystem sys(p, dir);
        const RealJacobian jac = sys.jacobian(s);
        const RealState y = realify(s);
        RealJacobian fd;
        for (int k = 0; k < kStateDim; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(y(k)));
            RealState yp = y, ym = y;
            yp(k) += h;
            ym(k) -= h;
            fd.col(k) = (sys.drift(yp) - sys.drift(ym)) / (2.0 * h);
        }
        const double rel = (jac - fd).norm() / std::max(1.0, jac.norm());
        CHECK(rel < 1e-6);
        // The drive is additive, so the Jacobian does not depend on direction.
        CHECK(jacobian(s, p, Direction::Forward) == jacobian(s, p, Direction::Backward));
    }
}

TEST_CASE("without emitter coupling the Jacobian is block diagonal")
{
    SystemParams p;
    p.g = 0.0;
    std::mt19937_64 rng(3);
    const auto jac = jacobian(testing::random_state(rng), p, Direction::Forward);
    CHECK(jac.block<4, 3>(0, 4).norm() == 0.0);
    CHECK(jac.block<3, 4>(4, 0).norm() == 0.0);
}

TEST_CASE("PT balance diagnostic")
{
    CHECK(std::abs(pt_balance(SystemParams{})) <= 1e-12);
    CHECK(pt_balance(passive_reference()) == doctest::Approx(4.0));
    for (double ke : {0.5, 1.0, 3.2, 7.0}) {
        SystemParams p;
        p.kappa_e = ke;
        p.kappa1 = -p.kappa2 - 2.0 * ke;
        CHECK(std::abs(pt_balance(p)) <= 1e-12);
    }
}

TEST_CASE("parameter validation")
{
    SystemParams p;
    CHECK_NOTHROW(validate(p));
    p.gamma = -1.0;
    CHECK_THROWS_AS(validate(p), Error);
    p = SystemParams{};
    p.eps_p = -0.1;
    CHECK_THROWS_AS(validate(p), Error);
    p = SystemParams{};
    p.g = std::nan("");
    CHECK_THROWS_AS(validate(p), Error);
}

TEST_CASE("direction names")
{
    CHECK(parse_direction("forward") == Direction::Forward);
    CHECK(parse_direction("L") == Direction::Backward);
    CHECK_FALSE(parse_direction("sideways").has_value());
    CHECK(to_string(Direction::Backward) == "backward");
}
