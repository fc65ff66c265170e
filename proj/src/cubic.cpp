#include "nrcav/cubic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nrcav {

double eval_cubic(const std::array<double, 4>& c, double x)
{
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

namespace {

// Newton polish on the original coefficients; keeps the best iterate.
double polish(const std::array<double, 4>& c, double x)
{
    double best = x;
    double best_res = std::abs(eval_cubic(c, x));
    for (int it = 0; it < 8 && best_res > 0.0; ++it) {
        const double dp = (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
        if (dp == 0.0) {
            break;
        }
        x -= eval_cubic(c, x) / dp;
        const double res = std::abs(eval_cubic(c, x));
        if (!(res < best_res)) {
            break;
        }
        best = x;
        best_res = res;
    }
    return best;
}

}  // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0,
                                     double imag_tol)
{
    const std::array<double, 4> coeffs{c3, c2, c1, c0};
    const double cmax = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (cmax == 0.0) {
        return {};
    }

    // Strip negligible leading coefficients: their roots sit beyond 1e14 times
    // the scale of the remaining ones.
    int lead = 0;
    while (lead < 3 && std::abs(coeffs[lead]) <= 1e-14 * cmax) {
        ++lead;
    }
    const int degree = 3 - lead;
    if (degree == 0) {
        return {};
    }

    // Monic coefficients b_k of x^degree + b_1 x^(degree-1) + ... + b_degree.
    std::vector<double> b(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        b[k] = coeffs[lead + k] / coeffs[lead];
    }
    // Fujiwara-style scale: every root satisfies |x| <= 2 * scale.
    double scale = 0.0;
    for (int k = 1; k <= degree; ++k) {
        scale = std::max(scale, std::pow(std::abs(b[k]), 1.0 / k));
    }
    if (scale == 0.0) {
        return std::vector<double>(degree, 0.0);
    }

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int k = 0; k < degree; ++k) {
        companion(0, k) = -b[k + 1] / std::pow(scale, k + 1);
    }
    for (int k = 1; k < degree; ++k) {
        companion(k, k - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& eig = solver.eigenvalues();

    std::vector<double> roots;
    for (int k = 0; k < degree; ++k) {
        if (std::abs(eig[k].imag()) < imag_tol) {
            const double x = eig[k].real() * scale;
            roots.push_back(degree == 3 ? polish(coeffs, x) : x);
        }
    }
    if (degree < 3) {
        // Polish against the reduced polynomial padded to cubic form.
        std::array<double, 4> reduced{0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k <= degree; ++k) {
            reduced[3 - degree + k] = coeffs[lead + k];
        }
        for (double& r : roots) {
            r = polish(reduced, r);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace nrcav
