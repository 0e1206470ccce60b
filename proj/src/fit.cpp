#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "biphoton/hom.hpp"

namespace biphoton {

namespace {

// Solves the 4x4 normal equations by Gaussian elimination with partial
// pivoting; small enough that no library is warranted.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a,
                             std::array<double, 4> b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0) throw std::runtime_error("singular normal equations");
        for (int row = col + 1; row < 4; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int row = 3; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < 4; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

}  // namespace

std::optional<DipFit> fit_dip(const HomScan& scan) {
    const std::size_t n = scan.delays.size();
    if (n < 8 || scan.rates.size() != n)
        throw std::invalid_argument("scan too short to fit");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scan.delays[a] < scan.delays[b]; });

    std::vector<double> tau(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        tau[k] = scan.delays[order[k]];
        y[k] = scan.rates[order[k]];
    }

    // Deterministic initialization: baseline from the outer samples, center
    // from the extremum, width from the second moment of the excursion.
    const std::size_t edge = std::max<std::size_t>(1, n / 10);
    double baseline = 0.0;
    for (std::size_t k = 0; k < edge; ++k) baseline += y[k] + y[n - 1 - k];
    baseline /= 2.0 * static_cast<double>(edge);
    if (!(baseline > 0.0)) throw std::invalid_argument("scan baseline is not positive");

    std::size_t ext = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs(y[k] - baseline) > std::abs(y[ext] - baseline)) ext = k;

    double amp = baseline - y[ext];  // > 0 for a dip, < 0 for a peak
    if (std::abs(amp) < 1e-3 * baseline) return std::nullopt;  // no dip

    double center = tau[ext];
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double wgt = std::abs(y[k] - baseline);
        m0 += wgt;
        m2 += wgt * (tau[k] - center) * (tau[k] - center);
    }
    double width = std::sqrt(m2 / m0);
    if (!(width > 0.0)) throw std::invalid_argument("degenerate scan widths");

    // Levenberg-Marquardt on r(tau) = B - A exp(-(tau-c)^2 / (2 s^2)).
    double b = baseline, a = amp, c = center, s = width;
    double lambda = 1e-3;
    auto chi2 = [&](double pb, double pa, double pc, double ps) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double z = (tau[k] - pc) / ps;
            const double r = pb - pa * std::exp(-0.5 * z * z) - y[k];
            sum += r * r;
        }
        return sum;
    };
    double best = chi2(b, a, c, s);
    for (int iter = 0; iter < 200; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (std::size_t k = 0; k < n; ++k) {
            const double z = (tau[k] - c) / s;
            const double e = std::exp(-0.5 * z * z);
            const double r = b - a * e - y[k];
            const std::array<double, 4> j = {1.0, -e, -a * e * z / s, -a * e * z * z / s};
            for (int p = 0; p < 4; ++p) {
                jtr[p] += j[p] * r;
                for (int q = 0; q < 4; ++q) jtj[p][q] += j[p] * j[q];
            }
        }
        std::array<std::array<double, 4>, 4> damped = jtj;
        for (int p = 0; p < 4; ++p) damped[p][p] *= 1.0 + lambda;
        std::array<double, 4> step{};
        try {
            step = solve4(damped, jtr);
        } catch (const std::runtime_error&) {
            break;
        }
        const double nb = b - step[0], na = a - step[1], nc = c - step[2],
                     ns = std::abs(s - step[3]);
        const double trial = chi2(nb, na, nc, ns);
        if (trial < best) {
            const double rel = std::abs(best - trial) / (best + 1e-300);
            b = nb;
            a = na;
            c = nc;
            s = ns;
            best = trial;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-14) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    if (std::abs(a) < 1e-3 * b) return std::nullopt;
    if (!(tau.front() <= c - 3.0 * s && tau.back() >= c + 3.0 * s))
        throw std::invalid_argument("scan does not cover +/-3 fitted widths");

    DipFit fit;
    fit.center = c;
    fit.rms_width = s;
    fit.baseline = b;
    fit.visibility = a / b;
    fit.fit_residual = std::sqrt(best / static_cast<double>(n));
    return fit;
}

}  // namespace biphoton
