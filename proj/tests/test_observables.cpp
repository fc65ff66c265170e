#include "nrcav/observables.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace nrcav;

TEST_CASE("output amplitude leaves through the far cavity")
{
    SystemParams p;
    CHECK(output_amplitude(StateVector::ground(), p, Direction::Forward) == cplx(0.0, 0.0));
    StateVector s;
    s.a1 = 1.0;
    s.a2 = {0.0, 2.0};
    CHECK(output_amplitude(s, p, Direction::Backward).real() ==
          doctest::Approx(std::sqrt(3.2)).epsilon(1e-15));
    CHECK(output_amplitude(s, p, Direction::Forward).imag() ==
          doctest::Approx(2.0 * std::sqrt(3.2)).epsilon(1e-15));
}

TEST_CASE("linear example output and transmission")
{
    const SystemParams p = testing::passive(0.0, 4.0, 1.0);
    const auto b = linear_solve(p, Direction::Forward);
    const cplx out = output_amplitude(b.state, p, Direction::Forward);
    CHECK(std::abs(out.real()) < 1e-15);
    CHECK(out.imag() == doctest::Approx(-0.6).epsilon(1e-14));
    const auto rec = transmission(p, Direction::Forward, b);
    CHECK(rec.T == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(rec.direction == Direction::Forward);
    CHECK(rec.branch_I1 == b.I1);
}

TEST_CASE("transmission needs a drive")
{
    SystemParams p = testing::passive(0.0, 4.0, 0.0);
    CHECK_THROWS_AS(transmission(p, Direction::Forward, linear_solve(p, Direction::Forward)), Error);
}

TEST_CASE("isolation ratio arithmetic")
{
    CHECK(isolation_ratio(0.42, 0.42) == 0.0);
    CHECK(isolation_ratio(0.99, 0.99 * std::pow(10.0, -2.7)) == doctest::Approx(27.0).epsilon(1e-13));
    CHECK(isolation_ratio(0.3, 0.01) == -isolation_ratio(0.01, 0.3));
}

TEST_CASE("isolation ratio undefined cases carry a sign")
{
    try {
        (void)isolation_ratio(0.5, 0.0);
        FAIL("expected UndefinedRatio");
    } catch (const UndefinedRatio& e) {
        CHECK(e.sign() > 0);
    }
    try {
        (void)isolation_ratio(0.0, 0.5);
        FAIL("expected UndefinedRatio");
    } catch (const UndefinedRatio& e) {
        CHECK(e.sign() < 0);
    }
    try {
        (void)isolation_ratio(0.0, 0.0);
        FAIL("expected UndefinedRatio");
    } catch (const UndefinedRatio& e) {
        CHECK(e.sign() == 0);
    }
}

TEST_CASE("reciprocity of the linear system")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        SystemParams p = passive_reference();
        p.g = 0.0;
        p.J = 0.1 + 5.0 * u(rng);
        p.kappa1 = 0.1 + 4.0 * u(rng);
        p.kappa_e = 0.5 + 3.0 * u(rng);
        p.delta1 = -3.0 + 6.0 * u(rng);
        p.eps_p = 0.1 + u(rng);
        const double TR = transmission(p, Direction::Forward, linear_solve(p, Direction::Forward)).T;
        const double TL = transmission(p, Direction::Backward, linear_solve(p, Direction::Backward)).T;
        CHECK(std::abs(TL - TR) < 1e-12);
    }
}
