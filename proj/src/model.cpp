#include "nrcav/model.hpp"

#include <cmath>

namespace nrcav {

namespace {
constexpr cplx I{0.0, 1.0};
}

RealState realify(const StateVector& s)
{
    RealState y;
    y << s.a1.real(), s.a1.imag(), s.a2.real(), s.a2.imag(), s.sigma_ge.real(),
        s.sigma_ge.imag(), s.sigma_z;
    return y;
}

StateVector complexify(const RealState& y)
{
    return {cplx{y[0], y[1]}, cplx{y[2], y[3]}, cplx{y[4], y[5]}, y[6]};
}

double norm(const StateVector& s) { return realify(s).norm(); }

double distance(const StateVector& a, const StateVector& b)
{
    return (realify(a) - realify(b)).norm();
}

DriftCoefficients coefficients(const SystemParams& p)
{
    return {
        -(I * p.delta1 + p.kappa1 / 2.0 + p.kappa_e / 2.0),
        -(I * p.delta1 + p.kappa2 / 2.0 + p.kappa_e / 2.0),
        -I * (p.delta1 + p.delta2) - p.gamma / 2.0,
    };
}

double drive_amplitude(const SystemParams& p) { return std::sqrt(p.kappa_e) * p.eps_p; }

MeanFieldSystem::MeanFieldSystem(const SystemParams& params, Direction dir)
    : params_(params), dir_(dir), coeffs_(coefficients(params))
{
    const double f = drive_amplitude(params);
    drive1_ = dir == Direction::Forward ? f : 0.0;
    drive2_ = dir == Direction::Backward ? f : 0.0;
}

StateVector MeanFieldSystem::drift(const StateVector& s) const
{
    const double g = params_.g;
    const double J = params_.J;
    const double gamma = params_.gamma;
    const auto& [x1, x2, x3] = coeffs_;

    StateVector d;
    d.a1 = x1 * s.a1 - I * J * s.a2 - g * s.sigma_ge + drive1_;
    d.a2 = -I * J * s.a1 + x2 * s.a2 + drive2_;
    // g (sigma* a1 + a1* sigma) = 2 g Re(sigma* a1), real by construction
    d.sigma_z = 2.0 * g * (std::conj(s.sigma_ge) * s.a1).real() - gamma * s.sigma_z -
                gamma / 2.0;
    d.sigma_ge = -2.0 * g * s.sigma_z * s.a1 + x3 * s.sigma_ge;
    return d;
}

RealState MeanFieldSystem::drift(const RealState& y) const
{
    return realify(drift(complexify(y)));
}

RealJacobian MeanFieldSystem::jacobian(const StateVector& s) const
{
    const double g = params_.g;
    const double J = params_.J;
    const double gamma = params_.gamma;
    const double x1r = coeffs_.x1.real(), x1i = coeffs_.x1.imag();
    const double x2r = coeffs_.x2.real(), x2i = coeffs_.x2.imag();
    const double x3r = coeffs_.x3.real(), x3i = coeffs_.x3.imag();
    const double ar = s.a1.real(), ai = s.a1.imag();
    const double sr = s.sigma_ge.real(), si = s.sigma_ge.imag();
    const double sz = s.sigma_z;

    RealJacobian m = RealJacobian::Zero();
    // a1
    m(0, 0) = x1r;  m(0, 1) = -x1i; m(0, 3) = J;  m(0, 4) = -g;
    m(1, 0) = x1i;  m(1, 1) = x1r;  m(1, 2) = -J; m(1, 5) = -g;
    // a2
    m(2, 1) = J;    m(2, 2) = x2r;  m(2, 3) = -x2i;
    m(3, 0) = -J;   m(3, 2) = x2i;  m(3, 3) = x2r;
    // sigma_ge
    m(4, 0) = -2.0 * g * sz; m(4, 4) = x3r; m(4, 5) = -x3i; m(4, 6) = -2.0 * g * ar;
    m(5, 1) = -2.0 * g * sz; m(5, 4) = x3i; m(5, 5) = x3r;  m(5, 6) = -2.0 * g * ai;
    // sigma_z
    m(6, 0) = 2.0 * g * sr;  m(6, 1) = 2.0 * g * si;
    m(6, 4) = 2.0 * g * ar;  m(6, 5) = 2.0 * g * ai;
    m(6, 6) = -gamma;
    return m;
}

StateVector drift(const StateVector& s, const SystemParams& params, Direction dir)
{
    return MeanFieldSystem(params, dir).drift(s);
}

RealJacobian jacobian(const StateVector& s, const SystemParams& params, Direction dir)
{
    return MeanFieldSystem(params, dir).jacobian(s);
}

double pt_balance(const SystemParams& p)
{
    return (p.kappa1 + p.kappa_e) / 2.0 + (p.kappa2 + p.kappa_e) / 2.0;
}

}  // namespace nrcav
