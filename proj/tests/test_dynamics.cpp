#include "nrcav/dynamics.hpp"
#include "nrcav/steady.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace nrcav;
using nrcav::testing::passive;

TEST_CASE("perturbed stable branches are attractors")
{
    const SystemParams p = passive(4.0, 4.0, 0.5);
    const auto branches = enumerate_branches(p, Direction::Forward);
    REQUIRE(branches.size() == 3);
    for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
        StateVector s = branches[k].state;
        s.a1 *= 1.001;
        s.a2 *= 0.999;
        s.sigma_z *= 1.001;
        const auto r = settle(p, Direction::Forward, s, branches);
        CHECK(r.verdict == Verdict::Settled);
        REQUIRE(r.branch.has_value());
        CHECK(*r.branch == k);
        CHECK(std::abs(r.I1 - branches[k].I1) < 1e-6);
    }
}

TEST_CASE("the unstable branch separates the two attractors")
{
    const SystemParams p = passive(4.0, 4.0, 0.5);
    const auto branches = enumerate_branches(p, Direction::Forward);
    REQUIRE(branches.size() == 3);
    const auto& mid = branches[1];

    const RealJacobian jac = jacobian(mid.state, p, Direction::Forward);
    Eigen::EigenSolver<RealJacobian> es(jac);
    int idx = 0;
    for (int i = 1; i < kStateDim; ++i) {
        if (es.eigenvalues()(i).real() > es.eigenvalues()(idx).real()) idx = i;
    }
    REQUIRE(es.eigenvalues()(idx).real() > 0.0);
    REQUIRE(std::abs(es.eigenvalues()(idx).imag()) < 1e-12);
    RealState v = es.eigenvectors().col(idx).real();
    v.normalize();

    std::vector<std::size_t> ends;
    for (double sign : {+1.0, -1.0}) {
        const RealState y = realify(mid.state) + sign * 1e-6 * v;
        const auto r = settle(p, Direction::Forward, complexify(y), branches);
        REQUIRE(r.verdict == Verdict::Settled);
        REQUIRE(r.branch.has_value());
        CHECK(branches[*r.branch].stability == Stability::Stable);
        ends.push_back(*r.branch);
    }
    CHECK(ends[0] != ends[1]);
}

TEST_CASE("strong gain without stable branch never settles")
{
    const SystemParams p;  // PT point: no stable branch forward
    const auto branches = enumerate_branches(p, Direction::Forward);
    for (const auto& b : branches) {
        CHECK(b.stability == Stability::Unstable);
    }
    SettleOptions opt;
    opt.t_max = 2000.0;
    const auto r = settle(p, Direction::Forward, StateVector::ground(), branches, opt);
    CHECK(r.verdict != Verdict::Settled);
}

TEST_CASE("branch matching")
{
    std::vector<SteadyBranch> b(3);
    b[0].I1 = 0.0;
    b[1].I1 = 1.0;
    b[2].I1 = 1.00005;
    bool amb = false;
    CHECK(match_branch(1e-6, b, 1e-4, &amb) == std::size_t{0});
    CHECK_FALSE(amb);
    CHECK_FALSE(match_branch(1.00002, b, 1e-4, &amb).has_value());
    CHECK(amb);
    CHECK_FALSE(match_branch(0.5, b, 1e-4).has_value());
}

TEST_CASE("up/down schedule")
{
    const auto s = up_down_schedule(0.0, 1.0, 5);
    CHECK(s == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25, 0.0});
}

TEST_CASE("hysteresis loop matches the turning points")
{
    const SystemParams p = passive(4.0, 4.0, 0.0);
    const std::size_t n = 61;
    const double hi = 1.2;
    const double step = hi / static_cast<double>(n - 1);
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
        const auto tp = turning_points(p, dir);
        REQUIRE(tp.size() == 2);
        const auto scan = hysteresis_scan(p, dir, up_down_schedule(0.0, hi, n), 200.0);
        const auto w = hysteresis_window(scan);
        REQUIRE(w.present);
        // The loop covers every grid point strictly inside (tp0, tp1).
        CHECK(std::abs(w.lo - tp[0]) <= step);
        CHECK(std::abs(w.hi - tp[1]) <= step);
    }
}

TEST_CASE("monostable parameters trace the same curve up and down")
{
    const SystemParams p = passive(2.0, 4.0, 0.0);
    const auto scan = hysteresis_scan(p, Direction::Forward, up_down_schedule(0.0, 1.0, 21), 200.0);
    CHECK_FALSE(hysteresis_window(scan).present);
    // The emitter relaxes at gamma/2, so a finite hold may stop short of the
    // settle threshold; it must never run away.
    for (const auto& st : scan) {
        CHECK(st.verdict != Verdict::BlowUp);
    }
}

TEST_CASE("hysteresis scan argument checks")
{
    const SystemParams p = passive(4.0, 4.0, 0.0);
    const std::vector<double> sched{0.1, 0.2};
    CHECK_THROWS_AS(hysteresis_scan(p, Direction::Forward, sched, 10.0), Error);
    const std::vector<double> neg{0.1, -0.2};
    CHECK_THROWS_AS(hysteresis_scan(p, Direction::Forward, neg, 200.0), Error);
}

TEST_CASE("branch selection prefers dynamics and otherwise tracks")
{
    const SystemParams p = passive(4.0, 4.0, 0.0);
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.025 * i);
    const auto path = continuation_sweep(p, Direction::Forward, SweepAxis::EpsPSq, grid);
    const auto sel = select_branches(path);
    REQUIRE(sel.size() == path.size());
    // Without dynamics the tracker stays on the lower branch until it vanishes.
    for (std::size_t k = 0; k < path.size(); ++k) {
        REQUIRE(sel[k].branch.has_value());
        CHECK_FALSE(sel[k].from_dynamics);
        if (path[k].branches.size() == 3) {
            CHECK(*sel[k].branch == 0);
        }
        CHECK(path[k].branches[*sel[k].branch].stability == Stability::Stable);
    }
}
