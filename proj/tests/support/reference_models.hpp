#pragma once

// Independent reference implementations used as test oracles. These must
// stay decoupled from the production code paths they check: same published
// contract, separately written math.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace refmodels {

// Reference ridge solve: standardize features (population variance, constant
// columns dropped), append an all-ones column, and solve the full augmented
// normal equations (A^T A + lambda * diag(1..1, 0)) b = A^T y with partial
// pivoting. Returns weights in original scale plus intercept, matching the
// published fit_linear contract through a different computation.
struct RefLinear {
    std::vector<double> weights;
    double intercept = 0.0;
};

inline RefLinear ridge_reference(const std::vector<std::vector<double>>& X,
                                 const std::vector<double>& y, double lambda) {
    const std::size_t n = X.size();
    const std::size_t d = X.front().size();

    std::vector<double> mean(d, 0.0), sigma(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < n; ++r) mean[c] += X[r][c];
        mean[c] /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
            sigma[c] += (X[r][c] - mean[c]) * (X[r][c] - mean[c]);
        sigma[c] = std::sqrt(sigma[c] / static_cast<double>(n));
    }
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < d; ++c)
        if (sigma[c] > 0.0) kept.push_back(c);

    const std::size_t k = kept.size();
    const std::size_t m = k + 1; // + intercept column
    std::vector<std::vector<double>> A(n, std::vector<double>(m, 1.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < k; ++c)
            A[r][c] = (X[r][kept[c]] - mean[kept[c]]) / sigma[kept[c]];

    std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
    std::vector<double> aty(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < n; ++r) ata[i][j] += A[r][i] * A[r][j];
        for (std::size_t r = 0; r < n; ++r) aty[i] += A[r][i] * y[r];
    }
    for (std::size_t i = 0; i < k; ++i) ata[i][i] += lambda; // intercept unpenalized

    // partial-pivot elimination
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::fabs(ata[r][col]) > std::fabs(ata[piv][col])) piv = r;
        if (std::fabs(ata[piv][col]) < 1e-13) throw std::runtime_error("ridge_reference: singular");
        std::swap(ata[piv], ata[col]);
        std::swap(aty[piv], aty[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = ata[r][col] / ata[col][col];
            for (std::size_t c = 0; c < m; ++c) ata[r][c] -= f * ata[col][c];
            aty[r] -= f * aty[col];
        }
    }
    std::vector<double> beta(m);
    for (std::size_t i = 0; i < m; ++i) beta[i] = aty[i] / ata[i][i];

    RefLinear out;
    out.weights.assign(d, 0.0);
    out.intercept = beta[k];
    for (std::size_t c = 0; c < k; ++c) {
        out.weights[kept[c]] = beta[c] / sigma[kept[c]];
        out.intercept -= beta[c] * mean[kept[c]] / sigma[kept[c]];
    }
    return out;
}

// Reference metrics, written directly from the definitions.
struct RefMetrics {
    double mape = 0.0;
    double r2 = 0.0;
    double pearson = 0.0;
};

inline RefMetrics metrics_reference(const std::vector<std::pair<double, double>>& pairs) {
    const double n = static_cast<double>(pairs.size());
    RefMetrics m;
    double pm = 0.0, gm = 0.0;
    for (const auto& [p, g] : pairs) {
        m.mape += std::fabs(p - g) / g;
        pm += p;
        gm += g;
    }
    m.mape *= 100.0 / n;
    pm /= n;
    gm /= n;
    double sres = 0.0, stot = 0.0, sp = 0.0, cov = 0.0;
    for (const auto& [p, g] : pairs) {
        sres += (p - g) * (p - g);
        stot += (g - gm) * (g - gm);
        sp += (p - pm) * (p - pm);
        cov += (p - pm) * (g - gm);
    }
    m.r2 = 1.0 - sres / stot;
    m.pearson = cov / std::sqrt(sp * stot);
    return m;
}

// Deterministic test RNG: mt19937_64 (algorithm fixed by the standard) with
// explicit transforms, so generated cases are reproducible everywhere.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1)) %
                        (hi - lo + 1);
    }
    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace refmodels
