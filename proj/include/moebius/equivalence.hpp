#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "moebius/errors.hpp"
#include "moebius/minkowski.hpp"
#include "moebius/pairs.hpp"
#include "moebius/spheres.hpp"

namespace moebius {

/// Pseudo-orthogonality defect |G^T J G - J| (Frobenius).
inline double moebius_defect(const Matrix& g) {
    const auto frame = MinkowskiFrame::for_vector_dim(g.rows());
    return (g.transpose() * frame.metric() * g - frame.metric()).norm();
}

inline bool is_moebius(const Matrix& g, double tol = 1e-9) {
    if (g.rows() != g.cols() || g.rows() < 3) throw Error(ErrorCode::InvalidInput, "is_moebius: wrong matrix size");
    return moebius_defect(g) <= tol;
}

/**
 * @brief A Möbius transformation as an element of O(n+1,1).
 *
 * G and -G act identically on spheres and points.
 */
class MoebiusMap {
public:
    explicit MoebiusMap(Matrix g, double tol = 1e-9) : g_(std::move(g)) {
        if (!is_moebius(g_, tol)) {
            throw Error(ErrorCode::InvalidInput, "matrix does not preserve the Minkowski form");
        }
    }

    static MoebiusMap identity(int ambient_n) { return MoebiusMap(Matrix::Identity(ambient_n + 2, ambient_n + 2)); }

    const Matrix& matrix() const noexcept { return g_; }
    int ambient_n() const noexcept { return static_cast<int>(g_.rows()) - 2; }
    MinkowskiFrame frame() const { return MinkowskiFrame(ambient_n()); }

    /// G^{-1} = J G^T J
    MoebiusMap inverse() const {
        const Matrix j = frame().metric();
        return MoebiusMap(j * g_.transpose() * j);
    }

    friend MoebiusMap operator*(const MoebiusMap& a, const MoebiusMap& b) {
        if (a.g_.rows() != b.g_.rows()) throw Error(ErrorCode::InvalidInput, "composition of maps on different spaces");
        return MoebiusMap(a.g_ * b.g_);
    }

    /// +1 if orientation of the underlying vector space is preserved.
    int determinant_sign() const { return g_.determinant() > 0 ? 1 : -1; }

private:
    Matrix g_;
};

inline Sphere apply(const MoebiusMap& g, const Sphere& s, const Tolerances& tol = {}) {
    if (g.frame() != s.frame()) throw Error(ErrorCode::InvalidInput, "apply: frame mismatch");
    Sphere out(Subspace(Matrix(g.matrix() * s.subspace().orthonormal()), tol));
    if (out.dim() != s.dim()) throw Error(ErrorCode::InternalError, "apply changed the sphere dimension");
    return out;
}

inline ExtendedPoint apply(const MoebiusMap& g, const ExtendedPoint& q) {
    if (q.ambient_n() != g.ambient_n()) throw Error(ErrorCode::InvalidInput, "apply: dimension mismatch");
    return stereographic(g.matrix() * lift(q));
}

/// Boost of the given rapidity in the plane of a unit spacelike direction u and the timelike axis.
inline MoebiusMap boost(const Vector& u_spacelike, double rapidity) {
    const Eigen::Index d = u_spacelike.size();
    const Vector u = u_spacelike / u_spacelike.norm();
    Matrix g = Matrix::Identity(d + 1, d + 1);
    g.topLeftCorner(d, d) += (std::cosh(rapidity) - 1.0) * u * u.transpose();
    g.topRightCorner(d, 1) = std::sinh(rapidity) * u;
    g.bottomLeftCorner(1, d) = std::sinh(rapidity) * u.transpose();
    g(d, d) = std::cosh(rapidity);
    return MoebiusMap(g);
}

/// y -> factor * y on E^n.
inline MoebiusMap dilation(int ambient_n, double factor) {
    if (!(factor > 0.0)) throw Error(ErrorCode::InvalidInput, "dilation factor must be positive");
    return boost(Vector::Unit(ambient_n + 1, ambient_n), std::log(factor));
}

/// y -> y + shift on E^n (fixes infinity).
inline MoebiusMap translation(const Vector& shift) {
    const Eigen::Index n = shift.size();
    Matrix g = Matrix::Identity(n + 2, n + 2);
    // null coordinates u = x_{n+2} + x_{n+1}, v = x_{n+2} - x_{n+1}:
    // x' -> x' + v c, v -> v, u -> u + 2<x', c> + v |c|^2
    const double c2 = shift.squaredNorm();
    for (Eigen::Index j = 0; j < n + 2; ++j) {
        const Vector e = Vector::Unit(n + 2, j);
        const double v = e(n + 1) - e(n);
        const double u = e(n + 1) + e(n);
        const Vector xs = e.head(n) + v * shift;
        const double u2 = u + 2.0 * e.head(n).dot(shift) + v * c2;
        Vector col(n + 2);
        col.head(n) = xs;
        col(n) = 0.5 * (u2 - v);
        col(n + 1) = 0.5 * (u2 + v);
        g.col(j) = col;
    }
    return MoebiusMap(g);
}

/// Orthogonal map of E^n extended to the sphere (fixes 0 and infinity).
inline MoebiusMap rotation(const Matrix& orthogonal) {
    const Eigen::Index n = orthogonal.rows();
    Matrix g = Matrix::Identity(n + 2, n + 2);
    g.topLeftCorner(n, n) = orthogonal;
    return MoebiusMap(g);
}

namespace detail {

inline Matrix random_orthogonal(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i)
        if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

} // namespace detail

/// A rotation of the spacelike block composed with a boost of rapidity at most `max_rapidity`.
inline MoebiusMap random_moebius(std::mt19937_64& rng, int ambient_n, double max_rapidity = 2.0) {
    if (ambient_n < 1) throw Error(ErrorCode::InvalidInput, "ambient dimension must be >= 1");
    const Eigen::Index d = ambient_n + 1;
    Matrix rot = Matrix::Identity(d + 1, d + 1);
    rot.topLeftCorner(d, d) = detail::random_orthogonal(d, rng);
    std::normal_distribution<double> normal;
    Vector u(d);
    for (Eigen::Index i = 0; i < d; ++i) u(i) = normal(rng);
    std::uniform_real_distribution<double> rapid(-max_rapidity, max_rapidity);
    const double beta = rapid(rng);
    return MoebiusMap(rot * boost(u, beta).matrix());
}

inline MoebiusMap random_moebius(int ambient_n, std::uint64_t seed, double max_rapidity = 2.0) {
    std::mt19937_64 rng(seed);
    return random_moebius(rng, ambient_n, max_rapidity);
}

using SpherePair = std::pair<Sphere, Sphere>;

inline SpherePair apply(const MoebiusMap& g, const SpherePair& p, const Tolerances& tol = {}) {
    return {apply(g, p.first, tol), apply(g, p.second, tol)};
}

/**
 * @brief Whether two pairs are Möbius equivalent.
 *
 * Sphere dimensions and the dimension of the smallest common sphere must
 * match; then the descending eigenvalue vectors are compared componentwise.
 */
inline bool equivalent(const SpherePair& pa, const SpherePair& pb, double eig_tol = 1e-8, const Tolerances& tol = {}) {
    if (pa.first.ambient_n() != pb.first.ambient_n() || pa.second.ambient_n() != pb.second.ambient_n() ||
        pa.first.ambient_n() != pa.second.ambient_n()) {
        throw Error(ErrorCode::IncomparablePairs, "pairs live in spaces of different dimension");
    }
    if (pa.first.dim() != pb.first.dim() || pa.second.dim() != pb.second.dim()) return false;
    const bool equal_a = same_sphere(pa.first, pa.second, tol);
    const bool equal_b = same_sphere(pb.first, pb.second, tol);
    if (equal_a || equal_b) return equal_a && equal_b;

    const PairAnalysis a = invariants(pa.first, pa.second, tol);
    const PairAnalysis b = invariants(pb.first, pb.second, tol);
    if (a.ambient_n != b.ambient_n) return false;
    if (a.eigenvalues.size() != b.eigenvalues.size()) return false;
    for (Eigen::Index i = 0; i < a.eigenvalues.size(); ++i) {
        if (std::abs(a.eigenvalues(i) - b.eigenvalues(i)) > eig_tol) return false;
    }
    if (a.case_tag != b.case_tag) {
        throw Error(ErrorCode::InconsistentClassification, "equal invariants but different cases");
    }
    return true;
}

struct Witness {
    MoebiusMap map;
    double residual;  // max span distance between g(A_i) and B_i
    bool retried;     // eigenbasis was re-aligned on near-tied eigenvalues
};

namespace detail {

/// Full basis of the input space with Gram diag(J_k, I): adapted frame, then T^perp.
inline Matrix full_frame(const WorkingPair& w, const AdaptedFrames& fr, const Tolerances& tol) {
    if (!w.reduction) return fr.b;
    const Matrix& e = w.reduction->embedding;
    const Matrix inner = e * fr.b;
    const Subspace span(e, tol);
    const Matrix outer = euclidean_basis(complement(span, tol), tol);
    Matrix out(e.rows(), e.rows());
    out << inner, outer;
    return out;
}

inline Matrix full_gram(const WorkingPair& w) {
    const Eigen::Index big = w.reduction ? w.reduction->embedding.rows() : w.first.frame().dim();
    Matrix d = Matrix::Identity(big, big);
    d(w.first.frame().dim() - 1, w.first.frame().dim() - 1) = -1.0;
    return d;
}

inline double witness_residual(const Matrix& g, const SpherePair& pa, const SpherePair& pb, const Tolerances& tol) {
    const Subspace a1(Matrix(g * pa.first.subspace().orthonormal()), tol);
    const Subspace a2(Matrix(g * pa.second.subspace().orthonormal()), tol);
    return std::max(span_distance(a1, pb.first.subspace()), span_distance(a2, pb.second.subspace()));
}

/// Polar factor of a square matrix.
inline Matrix polar_factor(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

} // namespace detail

/**
 * @brief An explicit Möbius map carrying pair A onto pair B.
 *
 * Matches adapted frames b_i -> b^_i. When eigenvalues of B nearly coincide
 * and the first attempt fails verification, B's eigenbasis is rotated within
 * each near-tied block to best match the image of A's eigenbasis, and the
 * construction is repeated once.
 */
inline Witness witness(const SpherePair& pa, const SpherePair& pb, double residual_tol = 1e-8,
                       const Tolerances& tol = {}) {
    if (!equivalent(pa, pb, 1e-8, tol)) throw Error(ErrorCode::WitnessFailed, "pairs are not equivalent");
    if (same_sphere(pa.first, pa.second, tol)) {
        throw Error(ErrorCode::EqualSpheres, "witness for coinciding spheres is not supported");
    }
    const WorkingPair wa = prepare_pair(pa.first, pa.second, tol);
    const WorkingPair wb = prepare_pair(pb.first, pb.second, tol);
    const PairAnalysis ana = invariants(pa.first, pa.second, tol);

    const AdaptedFrames fa = adapted_frames(wa.first, wa.second, ana.case_tag, tol);
    const Matrix full_a = detail::full_frame(wa, fa, tol);
    const Matrix d = detail::full_gram(wa);
    auto build = [&](const AdaptedFrames& fb) {
        const Matrix full_b = detail::full_frame(wb, fb, tol);
        // G full_a = full_b, full_a^{-1} = D full_a^T J
        const Matrix j = MinkowskiFrame::for_vector_dim(full_a.rows()).metric();
        return Matrix(full_b * d * full_a.transpose() * j);
    };

    const AdaptedFrames fb = adapted_frames(wb.first, wb.second, ana.case_tag, tol);
    Matrix g = build(fb);
    double res = detail::witness_residual(g, pa, pb, tol);
    bool retried = false;
    if (!(res <= residual_tol) && fa.a.cols() > 1) {
        retried = true;
        const OperatorA op_b = operator_A(wb.first, wb.second, tol);
        const Spectrum eig = spectrum(op_b);
        // image of A's eigenvectors, in B's W^perp coordinates (working space of B)
        const Matrix ea = wa.reduction ? Matrix(wa.reduction->embedding * fa.a) : fa.a;
        Matrix image = g * ea;
        if (wb.reduction) {
            Matrix reduced(wb.reduction->embedding.cols(), image.cols());
            for (Eigen::Index i = 0; i < image.cols(); ++i)
                reduced.col(i) = detail::coordinates_in(wb.reduction->embedding, image.col(i));
            image = reduced;
        }
        const Matrix target_coords = op_b.source.transpose() * lower(image);
        Matrix v = eig.vectors;
        for (Eigen::Index i = 0; i < v.cols();) {
            Eigen::Index j = i + 1;
            while (j < v.cols() && eig.values(j - 1) - eig.values(j) < 1e-7) ++j;
            if (j - i > 1) {
                const Matrix block = v.middleCols(i, j - i);
                const Matrix r = detail::polar_factor(block.transpose() * target_coords.middleCols(i, j - i));
                v.middleCols(i, j - i) = block * r;
            }
            i = j;
        }
        FrameOptions opts;
        opts.eigenvectors = v;
        opts.gram_tol = 1e-6;
        opts.case_tol = 1e-6;
        g = build(adapted_frames(wb.first, wb.second, ana.case_tag, tol, opts));
        res = detail::witness_residual(g, pa, pb, tol);
    }
    if (!(res <= residual_tol) || !is_moebius(g, 1e-9 * std::max(1.0, g.squaredNorm()))) {
        throw Error(ErrorCode::WitnessFailed, "witness verification failed (residual " + detail::sci(res) + ")");
    }
    return Witness{MoebiusMap(g, 1e-9 * std::max(1.0, g.squaredNorm())), res, retried};
}

} // namespace moebius
