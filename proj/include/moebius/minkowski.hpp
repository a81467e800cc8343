#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/symmetric_eigen.hpp"

namespace moebius {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * @brief The (n+2)-dimensional real vector space with the scalar product of
 * signature (n+1, 1).
 *
 * Coordinates refer to a fixed orthogonal basis: the first n+1 basis vectors
 * are spacelike unit vectors and the last one is a timelike unit vector.
 */
class MinkowskiFrame {
public:
    explicit MinkowskiFrame(int ambient_n) : n_(ambient_n) {
        if (ambient_n < 1) throw Error(ErrorCode::InvalidInput, "ambient dimension must be >= 1");
    }

    /// Frame whose vectors have `vector_dim` coordinates.
    static MinkowskiFrame for_vector_dim(Eigen::Index vector_dim) {
        if (vector_dim < 3) throw Error(ErrorCode::InvalidInput, "Minkowski vectors need at least 3 coordinates");
        return MinkowskiFrame(static_cast<int>(vector_dim) - 2);
    }

    int ambient_n() const noexcept { return n_; }
    Eigen::Index dim() const noexcept { return n_ + 2; }

    double signature(Eigen::Index i) const noexcept { return i == dim() - 1 ? -1.0 : 1.0; }

    /// Diagonal Gram matrix J of the coordinate basis.
    Matrix metric() const {
        Matrix j = Matrix::Identity(dim(), dim());
        j(dim() - 1, dim() - 1) = -1.0;
        return j;
    }

    /// Unit coordinate vector e_i (0-based).
    Vector basis_vector(Eigen::Index i) const { return Vector::Unit(dim(), i); }

    friend bool operator==(const MinkowskiFrame&, const MinkowskiFrame&) = default;

private:
    int n_;
};

/// J x: the metric applied to a vector (negates the timelike coordinate).
inline Vector lower(const Vector& x) {
    Vector y = x;
    y(y.size() - 1) = -y(y.size() - 1);
    return y;
}

/// J M: the metric applied to every column.
inline Matrix lower(const Matrix& m) {
    Matrix y = m;
    if (y.rows() > 0) y.row(y.rows() - 1) *= -1.0;
    return y;
}

/// <x, y> = sum_{i<=n+1} x_i y_i - x_{n+2} y_{n+2}
inline double scalar_product(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidInput, "scalar_product: dimension mismatch");
    if (x.size() < 3) throw Error(ErrorCode::InvalidInput, "scalar_product: vectors need at least 3 coordinates");
    const Eigen::Index last = x.size() - 1;
    return x.head(last).dot(y.head(last)) - x(last) * y(last);
}

/// Gram matrix of the scalar product over the columns of `a` and `b`.
inline Matrix gram(const Matrix& a, const Matrix& b) { return a.transpose() * lower(b); }
inline Matrix gram(const Matrix& a) { return gram(a, a); }

enum class VectorKind { Spacelike, Timelike, Isotropic };

inline VectorKind classify_vector(const Vector& x, double tol = 1e-9) {
    const double norm2 = x.squaredNorm();
    if (!(std::sqrt(norm2) > tol)) throw Error(ErrorCode::InvalidInput, "classify_vector: zero vector");
    const double q = scalar_product(x, x);
    if (q > tol * norm2) return VectorKind::Spacelike;
    if (q < -tol * norm2) return VectorKind::Timelike;
    return VectorKind::Isotropic;
}

enum class MetricType { Euclidean, PseudoEuclidean, Isotropic };

inline std::string to_string(MetricType t) {
    switch (t) {
    case MetricType::Euclidean: return "euclidean";
    case MetricType::PseudoEuclidean: return "pseudo-euclidean";
    case MetricType::Isotropic: return "isotropic";
    }
    return "unknown";
}

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

namespace detail {

/// Euclidean-orthonormal basis of the column span, discarding directions whose
/// singular value is below `rank_tol` times the largest.
inline Matrix column_span(const Matrix& vectors, double rank_tol) {
    const Eigen::Index rows = vectors.rows();
    if (vectors.cols() == 0) return Matrix(rows, 0);
    Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return Matrix(rows, 0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > rank_tol * s(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

/// Euclidean-orthonormal basis of {x : m^T x = 0}, i.e. the null space of m^T.
inline Matrix null_space_of_transpose(const Matrix& m, double rank_tol) {
    const Eigen::Index rows = m.rows();
    if (m.cols() == 0) return Matrix::Identity(rows, rows);
    Eigen::JacobiSVD<Matrix> svd(m.transpose(), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        while (rank < s.size() && s(rank) > rank_tol * s(0)) ++rank;
    }
    return svd.matrixV().rightCols(rows - rank);
}

inline Inertia inertia_of(const Vector& eigenvalues, double rank_tol) {
    Inertia out;
    const double scale = std::max(1.0, eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0);
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double v = eigenvalues(i);
        if (std::abs(v) < rank_tol * scale) ++out.zero;
        else if (v > 0) ++out.positive;
        else ++out.negative;
    }
    return out;
}

/// Flip the sign so that the first coordinate exceeding `tol` in magnitude is positive.
inline Vector sign_normalized(Vector v, double tol = 1e-9) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol) {
            if (v(i) < 0) v = -v;
            break;
        }
    }
    return v;
}

} // namespace detail

/**
 * @brief A linear subspace of Minkowski space, stored by an explicit basis.
 *
 * The metric type and inertia are computed once at construction from the
 * Gram matrix of a Euclidean-orthonormal basis of the span, which keeps the
 * zero threshold independent of how the caller scaled the basis.
 */
class Subspace {
public:
    /// Validates that `basis` has independent columns.
    explicit Subspace(Matrix basis, const Tolerances& tol = {}) : basis_(std::move(basis)) {
        const auto frame = MinkowskiFrame::for_vector_dim(basis_.rows());
        (void)frame;
        if (!basis_.allFinite()) throw Error(ErrorCode::InvalidInput, "subspace basis has non-finite entries");
        if (basis_.cols() > basis_.rows()) throw Error(ErrorCode::InvalidInput, "subspace basis has too many vectors");
        orthonormal_ = detail::column_span(basis_, tol.rank);
        if (orthonormal_.cols() != basis_.cols()) {
            throw Error(ErrorCode::InvalidInput, "subspace basis vectors are linearly dependent");
        }
        classify(tol);
    }

    /// Span of arbitrary (possibly dependent) vectors.
    static Subspace span(const Matrix& vectors, const Tolerances& tol = {}) {
        return Subspace(detail::column_span(vectors, tol.rank), tol);
    }

    static Subspace zero(const MinkowskiFrame& frame) { return Subspace(Matrix(frame.dim(), 0)); }
    static Subspace whole(const MinkowskiFrame& frame) { return Subspace(Matrix::Identity(frame.dim(), frame.dim())); }

    const Matrix& basis() const noexcept { return basis_; }
    /// Euclidean-orthonormal basis of the same span.
    const Matrix& orthonormal() const noexcept { return orthonormal_; }

    Eigen::Index dim() const noexcept { return basis_.cols(); }
    MinkowskiFrame frame() const { return MinkowskiFrame::for_vector_dim(basis_.rows()); }
    MetricType metric_type() const noexcept { return type_; }
    const Inertia& inertia() const noexcept { return inertia_; }
    int gram_rank() const noexcept { return inertia_.positive + inertia_.negative; }
    /// Gram eigenvalues (descending) on the orthonormal basis.
    const Vector& gram_eigenvalues() const noexcept { return gram_eigenvalues_; }

private:
    void classify(const Tolerances& tol) {
        if (dim() == 0) {
            gram_eigenvalues_ = Vector(0);
            inertia_ = {};
            type_ = MetricType::Euclidean;
            return;
        }
        gram_eigenvalues_ = symmetric_eigen(gram(orthonormal_)).values;
        inertia_ = detail::inertia_of(gram_eigenvalues_, tol.rank);
        if (inertia_.negative > 1) throw Error(ErrorCode::InternalError, "subspace of index > 1 in a Minkowski space");
        if (inertia_.zero > 0) type_ = MetricType::Isotropic;
        else if (inertia_.negative == 1) type_ = MetricType::PseudoEuclidean;
        else type_ = MetricType::Euclidean;
    }

    Matrix basis_;
    Matrix orthonormal_;
    Vector gram_eigenvalues_;
    Inertia inertia_;
    MetricType type_ = MetricType::Euclidean;
};

struct Orthonormalization {
    Matrix basis; // Gram matrix diagonal with entries +1, -1 or 0
    Inertia inertia;
};

/**
 * @brief Gram-Schmidt for the indefinite scalar product.
 *
 * At each step the remaining vector with the largest |<v,v>| (relative to its
 * Euclidean length) becomes the next pivot. When every remaining vector is
 * null but two of them pair non-trivially, their sum is used instead. Only a
 * residual block whose Gram matrix vanishes entirely is reported as isotropic.
 */
inline Orthonormalization orthonormalize(const Subspace& s, const Tolerances& tol = {}) {
    std::vector<Vector> work;
    for (Eigen::Index i = 0; i < s.dim(); ++i) work.emplace_back(s.orthonormal().col(i));

    std::vector<Vector> out;
    Inertia inertia;
    while (!work.empty()) {
        std::size_t best = 0;
        double best_q = -1.0;
        for (std::size_t i = 0; i < work.size(); ++i) {
            const double q = std::abs(scalar_product(work[i], work[i])) / work[i].squaredNorm();
            if (q > best_q) {
                best_q = q;
                best = i;
            }
        }
        if (best_q < tol.rank) {
            double best_pair = 0.0;
            std::size_t pi = 0, pj = 0;
            for (std::size_t i = 0; i < work.size(); ++i) {
                for (std::size_t j = i + 1; j < work.size(); ++j) {
                    const double c = std::abs(scalar_product(work[i], work[j])) / (work[i].norm() * work[j].norm());
                    if (c > best_pair) {
                        best_pair = c;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (best_pair < tol.rank) break;
            const double sign = scalar_product(work[pi], work[pj]) > 0 ? 1.0 : -1.0;
            work[pi] = work[pi] / work[pi].norm() + sign * work[pj] / work[pj].norm();
            continue;
        }
        Vector pivot = work[best];
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(best));
        const double q = scalar_product(pivot, pivot);
        const double sign = q > 0 ? 1.0 : -1.0;
        pivot /= std::sqrt(std::abs(q));
        for (auto& w : work) w -= sign * scalar_product(w, pivot) * pivot;
        out.push_back(pivot);
        if (sign > 0) ++inertia.positive;
        else ++inertia.negative;
    }

    Matrix null_part(s.frame().dim(), static_cast<Eigen::Index>(work.size()));
    for (std::size_t i = 0; i < work.size(); ++i) null_part.col(static_cast<Eigen::Index>(i)) = work[i];
    const Matrix null_basis = detail::column_span(null_part, tol.rank);
    if (null_basis.cols() != null_part.cols()) {
        throw Error(ErrorCode::InvalidInput, "orthonormalize: dependent basis");
    }
    inertia.zero = static_cast<int>(null_basis.cols());

    Orthonormalization result{Matrix(s.frame().dim(), s.dim()), inertia};
    Eigen::Index k = 0;
    for (const auto& v : out) result.basis.col(k++) = v;
    for (Eigen::Index i = 0; i < null_basis.cols(); ++i) result.basis.col(k++) = null_basis.col(i);
    return result;
}

/// S^perp, computed as the null space of the metric-lowered basis.
inline Subspace complement(const Subspace& s, const Tolerances& tol = {}) {
    return Subspace(detail::null_space_of_transpose(lower(s.orthonormal()), tol.rank), tol);
}

inline Subspace sum(const Subspace& a, const Subspace& b, const Tolerances& tol = {}) {
    if (a.frame() != b.frame()) throw Error(ErrorCode::InvalidInput, "sum: frame mismatch");
    Matrix all(a.frame().dim(), a.dim() + b.dim());
    all << a.orthonormal(), b.orthonormal();
    return Subspace::span(all, tol);
}

/// (S1^perp + S2^perp)^perp
inline Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol = {}) {
    if (a.frame() != b.frame()) throw Error(ErrorCode::InvalidInput, "intersect: frame mismatch");
    return complement(sum(complement(a, tol), complement(b, tol), tol), tol);
}

/// Whether x lies in the span of s, by the relative Euclidean residual.
inline bool contains(const Subspace& s, const Vector& x, const Tolerances& tol = {}) {
    if (x.size() != s.frame().dim()) throw Error(ErrorCode::InvalidInput, "contains: dimension mismatch");
    const double nx = x.norm();
    if (nx == 0.0) return true;
    const Matrix& q = s.orthonormal();
    const Vector residual = x - q * (q.transpose() * x);
    return residual.norm() <= tol.membership * nx;
}

/// Largest relative residual of the columns of `inner` outside `outer`.
inline double containment_residual(const Subspace& outer, const Subspace& inner) {
    const Matrix& q = outer.orthonormal();
    const Matrix& v = inner.orthonormal();
    if (v.cols() == 0) return 0.0;
    return (v - q * (q.transpose() * v)).colwise().norm().maxCoeff();
}

inline bool contains(const Subspace& outer, const Subspace& inner, const Tolerances& tol = {}) {
    return containment_residual(outer, inner) <= tol.membership;
}

/// Residual of span equality; infinite when the dimensions differ.
inline double span_distance(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim() || a.frame() != b.frame()) return std::numeric_limits<double>::infinity();
    return std::max(containment_residual(a, b), containment_residual(b, a));
}

inline bool same_span(const Subspace& a, const Subspace& b, const Tolerances& tol = {}) {
    return span_distance(a, b) <= tol.membership;
}

/// Component of x in s for the splitting V = s (+) s^perp.
inline Vector project(const Vector& x, const Subspace& s) {
    if (s.metric_type() == MetricType::Isotropic) {
        throw Error(ErrorCode::DegenerateSubspace, "project: subspace is isotropic");
    }
    if (x.size() != s.frame().dim()) throw Error(ErrorCode::InvalidInput, "project: dimension mismatch");
    if (s.dim() == 0) return Vector::Zero(x.size());
    const Matrix& q = s.orthonormal();
    const Matrix g = gram(q);
    const Vector rhs = q.transpose() * lower(x);
    const Vector coeffs = g.fullPivLu().solve(rhs);
    return q * coeffs;
}

/// Projection onto a subspace given by a basis with Gram matrix diag(+-1).
inline Vector project_onto_orthonormal(const Vector& x, const Matrix& basis) {
    Vector out = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        const double norm = scalar_product(basis.col(i), basis.col(i));
        out += (scalar_product(x, basis.col(i)) / norm) * basis.col(i);
    }
    return out;
}

} // namespace moebius
