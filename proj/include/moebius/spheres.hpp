#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/minkowski.hpp"

namespace moebius {

/// A point of the compactified Euclidean space E^n: finite, or the point at infinity.
class ExtendedPoint {
public:
    static ExtendedPoint finite(Vector y) {
        if (y.size() < 1) throw Error(ErrorCode::InvalidInput, "point needs at least one coordinate");
        if (!y.allFinite()) throw Error(ErrorCode::InvalidInput, "point has non-finite coordinates");
        const int n = static_cast<int>(y.size());
        return ExtendedPoint(std::move(y), n);
    }
    static ExtendedPoint infinity(int ambient_n) {
        if (ambient_n < 1) throw Error(ErrorCode::InvalidInput, "ambient dimension must be >= 1");
        return ExtendedPoint(std::nullopt, ambient_n);
    }

    bool is_infinity() const noexcept { return !y_.has_value(); }
    /// Coordinates of a finite point.
    const Vector& coords() const {
        if (!y_) throw Error(ErrorCode::InvalidInput, "the point at infinity has no coordinates");
        return *y_;
    }
    int ambient_n() const noexcept { return n_; }

private:
    ExtendedPoint(std::optional<Vector> y, int n) : y_(std::move(y)), n_(n) {}

    std::optional<Vector> y_;
    int n_;
};

/// Euclidean hypersphere with center and radius.
struct RoundSphere {
    Vector center;
    double radius;
};

/// Euclidean hyperplane <normal, y> = offset.
struct Hyperplane {
    Vector normal;
    double offset;
};

using EuclideanSphereData = std::variant<RoundSphere, Hyperplane>;

/**
 * @brief An m-sphere of S^n, i.e. an (m+2)-dimensional pseudo-Euclidean subspace.
 */
class Sphere {
public:
    explicit Sphere(Subspace subspace) : subspace_(std::move(subspace)) {
        if (subspace_.metric_type() != MetricType::PseudoEuclidean) {
            throw Error(ErrorCode::InvalidInput, "a sphere needs a pseudo-euclidean subspace, got " +
                                                     to_string(subspace_.metric_type()));
        }
        const auto m = static_cast<int>(subspace_.dim()) - 2;
        if (m < 0 || m > subspace_.frame().ambient_n()) {
            throw Error(ErrorCode::InvalidInput, "sphere dimension out of range");
        }
        if (!(subspace_.inertia() == Inertia{m + 1, 1, 0})) {
            throw Error(ErrorCode::InternalError, "sphere subspace has wrong inertia");
        }
    }

    static Sphere from_basis(const Matrix& basis, const Tolerances& tol = {}) { return Sphere(Subspace(basis, tol)); }

    const Subspace& subspace() const noexcept { return subspace_; }
    /// Sphere dimension m.
    int dim() const noexcept { return static_cast<int>(subspace_.dim()) - 2; }
    int ambient_n() const { return subspace_.frame().ambient_n(); }
    MinkowskiFrame frame() const { return subspace_.frame(); }
    bool is_hypersphere() const { return dim() == ambient_n() - 1; }

private:
    Subspace subspace_;
};

inline bool same_sphere(const Sphere& a, const Sphere& b, const Tolerances& tol = {}) {
    return same_span(a.subspace(), b.subspace(), tol);
}

/// Unit spacelike normal n(z, r) of the hypersphere with center z and radius r.
inline Vector hypersphere_normal(const Vector& z, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
    if (z.size() < 1 || !z.allFinite()) throw Error(ErrorCode::InvalidInput, "center must be a finite vector");
    const Eigen::Index n = z.size();
    const double z2 = z.squaredNorm();
    Vector out(n + 2);
    out.head(n) = 2.0 * z;
    out(n) = -1.0 - r * r + z2;
    out(n + 1) = 1.0 - r * r + z2;
    out /= 2.0 * r;
    return out;
}

/// Unit spacelike normal n(b, p) of the hyperplane <b, y> = p.
inline Vector hyperplane_normal(const Vector& b, double p) {
    if (b.size() < 1 || !b.allFinite() || !std::isfinite(p)) {
        throw Error(ErrorCode::InvalidInput, "hyperplane data must be finite");
    }
    const double nb = b.norm();
    if (!(nb > 0.0)) throw Error(ErrorCode::InvalidInput, "hyperplane normal must be nonzero");
    const Eigen::Index n = b.size();
    Vector out(n + 2);
    out.head(n) = b;
    out(n) = p;
    out(n + 1) = p;
    return out / nb;
}

/// The hypersphere [normal]^perp for a spacelike normal vector.
inline Sphere hypersphere_from_normal(const Vector& normal, const Tolerances& tol = {}) {
    if (classify_vector(normal, tol.rank) != VectorKind::Spacelike) {
        throw Error(ErrorCode::InvalidInput, "hypersphere normal must be spacelike");
    }
    Matrix col(normal.size(), 1);
    col.col(0) = normal;
    return Sphere(complement(Subspace(col, tol), tol));
}

inline Sphere hypersphere_from_center_radius(const Vector& z, double r, const Tolerances& tol = {}) {
    const Vector n = hypersphere_normal(z, r);
    if (std::abs(scalar_product(n, n) - 1.0) > 1e-12 * std::max(1.0, n.squaredNorm())) {
        throw Error(ErrorCode::InternalError, "hypersphere normal is not a unit vector");
    }
    return hypersphere_from_normal(n, tol);
}

inline Sphere hypersphere_from_plane(const Vector& b, double p, const Tolerances& tol = {}) {
    return hypersphere_from_normal(hyperplane_normal(b, p), tol);
}

/// Isotropic representative of a point, normalized to last coordinate 1.
inline Vector lift(const ExtendedPoint& q) {
    const Eigen::Index n = q.ambient_n();
    Vector out = Vector::Zero(n + 2);
    out(n + 1) = 1.0;
    if (q.is_infinity()) {
        out(n) = 1.0;
        return out;
    }
    const Vector& y = q.coords();
    const double y2 = y.squaredNorm();
    out.head(n) = 2.0 * y / (y2 + 1.0);
    out(n) = (y2 - 1.0) / (y2 + 1.0);
    return out;
}

/**
 * @brief Stereographic projection of an isotropic vector from the north pole.
 *
 * Uses (x_{n+2} - x_{n+1})(x_{n+2} + x_{n+1}) = |x'|^2 on the light cone to
 * avoid cancellation near the pole. A vector on the north side whose
 * spacelike part is at most `pole_tol` * |x_{n+2}| maps to infinity.
 */
inline ExtendedPoint stereographic(const Vector& x, double isotropy_tol = 1e-9, double pole_tol = 1e-14) {
    if (classify_vector(x, isotropy_tol) != VectorKind::Isotropic) {
        throw Error(ErrorCode::InvalidInput, "stereographic: vector is not isotropic");
    }
    const Eigen::Index n = x.size() - 2;
    const double t = x(n + 1);
    const double s = x(n);
    const auto space = x.head(n);
    if (s * t > 0.0) {
        const double r = space.norm();
        if (r <= pole_tol * std::abs(t)) return ExtendedPoint::infinity(static_cast<int>(n));
        return ExtendedPoint::finite(space * ((t + s) / (r * r)));
    }
    if (t - s == 0.0) return ExtendedPoint::infinity(static_cast<int>(n));
    return ExtendedPoint::finite(space / (t - s));
}

/// The sphere through m+2 points in general position.
inline Sphere sphere_from_points(const std::vector<ExtendedPoint>& points, int m, const Tolerances& tol = {}) {
    if (m < 0) throw Error(ErrorCode::InvalidInput, "sphere dimension must be >= 0");
    if (points.size() != static_cast<std::size_t>(m) + 2) {
        throw Error(ErrorCode::InvalidInput, "an m-sphere needs exactly m+2 points");
    }
    const int n = points.front().ambient_n();
    if (m > n) throw Error(ErrorCode::InvalidInput, "sphere dimension exceeds ambient dimension");
    Matrix lifted(n + 2, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].ambient_n() != n) throw Error(ErrorCode::InvalidInput, "points of mixed dimension");
        const Vector v = lift(points[i]);
        lifted.col(static_cast<Eigen::Index>(i)) = v / v.norm();
    }
    const Subspace span = Subspace::span(lifted, tol);
    if (span.dim() != m + 2) {
        throw Error(ErrorCode::PointsNotInGeneralPosition, "points lie on a sphere of lower dimension");
    }
    if (span.metric_type() != MetricType::PseudoEuclidean) {
        throw Error(ErrorCode::InternalError, "span of distinct sphere points is not pseudo-euclidean");
    }
    return Sphere(span);
}

/**
 * @brief m-sphere with Euclidean center z and radius r inside the affine
 * (m+1)-plane through z spanned by the columns of `directions`.
 */
inline Sphere sphere_from_center_radius(const Vector& z, double r, const Matrix& directions,
                                        const Tolerances& tol = {}) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
    if (directions.rows() != z.size() || directions.cols() < 1) {
        throw Error(ErrorCode::InvalidInput, "direction matrix has wrong shape");
    }
    const Matrix d = detail::column_span(directions, tol.rank);
    if (d.cols() != directions.cols()) throw Error(ErrorCode::InvalidInput, "directions are dependent");
    const int m = static_cast<int>(d.cols()) - 1;
    std::vector<ExtendedPoint> pts;
    for (Eigen::Index k = 0; k < d.cols(); ++k) pts.push_back(ExtendedPoint::finite(z + r * d.col(k)));
    pts.push_back(ExtendedPoint::finite(z - r * d.col(0)));
    return sphere_from_points(pts, m, tol);
}

/// Sign-normalized unit normal of a hypersphere.
inline Vector unit_normal(const Sphere& s, const Tolerances& tol = {}) {
    if (!s.is_hypersphere()) throw Error(ErrorCode::InvalidInput, "unit_normal: not a hypersphere");
    const Subspace perp = complement(s.subspace(), tol);
    Vector n = perp.orthonormal().col(0);
    n /= std::sqrt(scalar_product(n, n));
    return detail::sign_normalized(n);
}

/// Center/radius or hyperplane description of a hypersphere in E^n.
inline EuclideanSphereData euclidean_data(const Sphere& s, const Tolerances& tol = {}) {
    Vector nv = unit_normal(s, tol);
    const Eigen::Index n = s.ambient_n();
    // coefficient of (a_{n+2} - a_{n+1}) equals half of this difference
    const double c = nv(n + 1) - nv(n);
    if (std::abs(0.5 * c) > 1e-9) {
        if (c < 0) nv = -nv;
        const double diff = std::abs(c);
        const double r = 1.0 / diff;
        return RoundSphere{nv.head(n) * r, r};
    }
    const Vector b = nv.head(n);
    const double nb = b.norm();
    return Hyperplane{b / nb, 0.5 * (nv(n) + nv(n + 1)) / nb};
}

inline bool contains(const Sphere& s, const ExtendedPoint& q, const Tolerances& tol = {}) {
    if (q.ambient_n() != s.ambient_n()) throw Error(ErrorCode::InvalidInput, "contains: dimension mismatch");
    return contains(s.subspace(), lift(q), tol);
}

} // namespace moebius
