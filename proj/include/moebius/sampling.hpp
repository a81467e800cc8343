#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "moebius/equivalence.hpp"
#include "moebius/errors.hpp"
#include "moebius/minkowski.hpp"
#include "moebius/spheres.hpp"

namespace moebius {

/// m-sphere through m+2 Gaussian points of E^n.
inline Sphere random_sphere(std::mt19937_64& rng, int ambient_n, int m, const Tolerances& tol = {}) {
    std::normal_distribution<double> normal;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<ExtendedPoint> pts;
        for (int k = 0; k < m + 2; ++k) {
            Vector y(ambient_n);
            for (int i = 0; i < ambient_n; ++i) y(i) = normal(rng);
            pts.push_back(ExtendedPoint::finite(y));
        }
        try {
            return sphere_from_points(pts, m, tol);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PointsNotInGeneralPosition) throw;
        }
    }
    throw Error(ErrorCode::InternalError, "random_sphere: could not sample points in general position");
}

/**
 * @brief The pair in normal form with prescribed eigenvalues, built from the
 * coordinate frame b_i = e_i.
 *
 * U is spanned by e_{n-l+1}, ..., e_{n+2}; W^perp by the vectors a_i given by
 * the case equations for the eigenvalues. Exactly alpha_1 = 1 selects the
 * tangent normal form.
 */
inline SpherePair pair_from_invariants(int ambient_n, int m, int l, const Vector& alphas, const Tolerances& tol = {}) {
    const int n = ambient_n;
    if (!(n > m && m >= l && l >= 0)) throw Error(ErrorCode::InvalidInput, "need n > m >= l >= 0");
    if (alphas.size() != n - m) throw Error(ErrorCode::InvalidInput, "need exactly n - m eigenvalues");
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        if (alphas(i) < 0) throw Error(ErrorCode::InvalidInput, "eigenvalues must be nonnegative");
        if (i > 0 && alphas(i) > alphas(i - 1)) throw Error(ErrorCode::InvalidInput, "eigenvalues must be descending");
        if (i > 0 && alphas(i) >= 1.0) throw Error(ErrorCode::InvalidInput, "only the largest eigenvalue may reach 1");
    }
    const Eigen::Index big = n + 2;
    const Eigen::Index u0 = n - l;
    const Eigen::Index k = n - m;
    const int common = m + l - n + 2;
    if (common < 0) throw Error(ErrorCode::InvalidInput, "dimensions do not allow general position");
    const double a1 = alphas(0);
    const bool separated = a1 > 1.0;
    const bool tangent = a1 == 1.0;
    if (!separated && !tangent && common < 1) throw Error(ErrorCode::InvalidInput, "these dimensions force alpha_1 > 1");
    if (tangent && common < 1) throw Error(ErrorCode::InvalidInput, "these dimensions force alpha_1 > 1");

    auto e = [&](Eigen::Index i) { return Vector(Vector::Unit(big, i)); };
    Matrix a(big, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double c = std::sqrt(alphas(i));
        if (i == 0 && separated) {
            a.col(0) = e(0) * c + e(big - 1) * std::sqrt(a1 - 1.0);
        } else if (i == 0 && tangent) {
            a.col(0) = e(0) + e(big - 2) + e(big - 1);
        } else if (separated || tangent) {
            a.col(i) = e(i) * c + e(u0 + i - 1) * std::sqrt(1.0 - alphas(i));
        } else {
            a.col(i) = e(i) * c + e(u0 + i) * std::sqrt(1.0 - alphas(i));
        }
    }
    const Matrix u = Matrix::Identity(big, big).rightCols(l + 2);
    const Subspace w_perp(a, tol);
    return {Sphere(complement(w_perp, tol)), Sphere(Subspace(u, tol))};
}

/// Ambient dimension, sphere dimensions and seed of a random pair.
struct RandomPairSpec {
    int ambient_n;
    int m;
    int l;
    std::uint64_t seed;
};

/// Two independent random spheres; deterministic for a fixed seed.
inline SpherePair random_pair(const RandomPairSpec& spec, const Tolerances& tol = {}) {
    std::mt19937_64 rng(spec.seed);
    Sphere s1 = random_sphere(rng, spec.ambient_n, spec.m, tol);
    Sphere s2 = random_sphere(rng, spec.ambient_n, spec.l, tol);
    return {std::move(s1), std::move(s2)};
}

} // namespace moebius
