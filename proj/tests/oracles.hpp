#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's solvers: roots come from plain bisection, integrals from composite
// Simpson, stationary laws from a dense linear solve of pi Q = 0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Root of sum_j rho_j c_j / (rho_j + x) = y by 200 bisection steps.
inline double bisect_phi(const std::vector<double>& c, const std::vector<double>& rho, double y) {
    auto g = [&](double x) {
        double s = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) s += rho[j] * c[j] / (rho[j] + x);
        return s - y;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (g(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Generic bisection of a monotone function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int steps = 200) {
    const bool rising = f(hi) > f(lo);
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = f(mid);
        if ((v < 0.0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// H(t) from the implicit relation t = int_{h0}^{H} du / (delta phi(u) - beta),
/// with phi by bisection and the integral by Simpson.
inline double invert_mass_integral(const std::vector<double>& c, const std::vector<double>& rho, double beta,
                                   double delta, double h0, double t) {
    double hinf = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) hinf += rho[j] * c[j] / (rho[j] + beta / delta);
    auto drift = [&](double u) { return delta * bisect_phi(c, rho, u) - beta; };
    auto elapsed = [&](double h) { return simpson([&](double u) { return 1.0 / drift(u); }, h0, h, 2000); };
    // H moves monotonically from h0 toward hinf.
    return bisect([&](double h) { return elapsed(h) - t; }, h0, hinf - (hinf - h0) * 1e-12, 80);
}

/// Stationary law of a finite generator (row-major, rows sum to 0) by
/// Gaussian elimination with partial pivoting on pi Q = 0, sum pi = 1.
inline std::vector<double> stationary_of_generator(const std::vector<std::vector<double>>& Q) {
    const std::size_t n = Q.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) A[i][k] = Q[k][i];
    }
    for (std::size_t k = 0; k < n; ++k) A[n - 1][k] = 1.0;
    A[n - 1][n] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        }
        std::swap(A[col], A[piv]);
        if (std::abs(A[col][col]) < 1e-300) throw std::runtime_error("singular generator");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = A[r][col] / A[col][col];
            if (m == 0.0) continue;
            for (std::size_t k = col; k <= n; ++k) A[r][k] -= m * A[col][k];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = A[i][n] / A[i][i];
    return pi;
}

/// Mean time for a birth-death chain (up rate gamma, down rate down(k)) to go
/// from level `from` to level `to` > from: sum over k of the mean k -> k+1
/// passage, which equals sum_{i<=k} p_i / (gamma p_k) with p the
/// unnormalized birth-death weights.
inline double mean_hitting_time(double gamma, const std::function<double(long)>& down, long from, long to) {
    double total = 0.0;
    for (long k = from; k < to; ++k) {
        // p_i / p_k = prod_{m=i+1}^{k} down(m) / gamma
        double acc = 0.0;
        double ratio = 1.0;
        for (long i = k; i >= 0; --i) {
            acc += ratio;
            if (i > 0) ratio *= down(i) / gamma;
        }
        total += acc / gamma;
    }
    return total;
}

inline double binomial(long n, long k) {
    double r = 1.0;
    for (long i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

inline double factorial(long n) {
    double r = 1.0;
    for (long i = 2; i <= n; ++i) r *= static_cast<double>(i);
    return r;
}

}  // namespace oracle
