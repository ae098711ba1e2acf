#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "otto/qcore.hpp"

namespace otto::support {

inline CMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
    const CMatrix g = random_complex(rng, dim, dim);
    return 0.5 * (g + g.adjoint());
}

// Ginibre-ensemble mixed state of the given rank.
inline DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index dim = 4, Eigen::Index rank = 0) {
    if (rank <= 0) rank = dim;
    const CMatrix g = random_complex(rng, dim, rank);
    return DensityMatrix::normalized(g * g.adjoint());
}

inline CMatrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(rng, dim, dim));
    return qr.householderQ() * CMatrix::Identity(dim, dim);
}

inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j) + 1.0;
        i = j + 1;
    }
    return r;
}

// Spearman rank correlation (Pearson correlation of average ranks).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks(x), ry = ranks(y);
    const double n = double(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline CVector bell_psi_minus() {
    CVector v = CVector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return v;
}

} // namespace otto::support
