#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/minkowski.hpp"
#include "moebius/spheres.hpp"
#include "moebius/symmetric_eigen.hpp"

namespace moebius {

/// Mutual position of two subspheres in general position.
enum class PairCase {
    Separated = 1,    // disjoint, separable by disjoint hyperspheres
    Intersecting = 2, // meet in a subsphere
    Interlaced = 3,   // disjoint, not separable
    Tangent = 4,      // meet in exactly one point
};

inline std::string to_string(PairCase c) {
    switch (c) {
    case PairCase::Separated: return "separated";
    case PairCase::Intersecting: return "intersecting";
    case PairCase::Interlaced: return "interlaced";
    case PairCase::Tangent: return "tangent";
    }
    return "unknown";
}

struct StationaryAngle {
    enum class Kind { Circular, Hyperbolic, Parabolic };
    Kind kind;
    double beta;  // radians for Circular, rapidity for Hyperbolic, 0 for Parabolic
    double alpha; // the eigenvalue it was derived from
};

inline std::string to_string(StationaryAngle::Kind k) {
    switch (k) {
    case StationaryAngle::Kind::Circular: return "circular";
    case StationaryAngle::Kind::Hyperbolic: return "hyperbolic";
    case StationaryAngle::Kind::Parabolic: return "parabolic";
    }
    return "unknown";
}

/**
 * @brief Orthogonal frames adapted to a pair of spheres.
 *
 * `a` holds the orthonormal eigenbasis of the operator on W^perp (columns,
 * descending eigenvalues). `b` is a full basis of the ambient space with Gram
 * matrix J; its first n-l columns span U^perp and the rest span U.
 */
struct AdaptedFrames {
    Matrix a;
    Matrix b;
    double gram_residual = 0.0; // max |b^T J b - J| entry
    double case_residual = 0.0; // max Euclidean residual of the case equations
};

/// The pair re-expressed inside the smallest sphere containing both.
struct Reduction {
    Sphere ambient;   // W + U, in the original space
    Matrix embedding; // columns: basis of W + U with Gram J, timelike last
    int reduced_n;
};

struct PairAnalysis {
    int ambient_n = 0; // of the space where the pair was analysed (reduced if applicable)
    int m = 0;
    int l = 0;
    bool swapped = false;
    bool general_position = true; // of the input pair
    std::optional<Reduction> reduction;
    Vector eigenvalues;           // descending, refined as |p21(a_i)|^2 (hence >= 0)
    Vector raw_eigenvalues;       // as returned by the eigensolver
    int rank_A = 0;
    std::vector<StationaryAngle> angles;
    PairCase case_tag = PairCase::Intersecting;
    int common_dim = 0;           // dim U cap W
    MetricType common_type = MetricType::Euclidean;
    int intersection_dim = -1;    // sphere dimension of S1 cap S2, -1 when not a subsphere
    bool contained = false;       // the smaller sphere lies in the larger one
    std::optional<ExtendedPoint> tangency_point; // Tangent case, original coordinates
    std::optional<AdaptedFrames> frames;         // working coordinates
};

/// W + U = V, cross-checked against W^perp + U^perp being direct.
inline bool general_position(const Sphere& s1, const Sphere& s2, const Tolerances& tol = {}) {
    if (s1.frame() != s2.frame()) throw Error(ErrorCode::InvalidInput, "spheres live in different spaces");
    const Eigen::Index full = s1.frame().dim();
    const bool by_sum = sum(s1.subspace(), s2.subspace(), tol).dim() == full;
    const Subspace p1 = complement(s1.subspace(), tol);
    const Subspace p2 = complement(s2.subspace(), tol);
    const bool by_perp = sum(p1, p2, tol).dim() == p1.dim() + p2.dim();
    if (by_sum != by_perp) {
        throw Error(ErrorCode::InconsistentClassification, "general position tests disagree");
    }
    return by_sum;
}

struct ReducedPair {
    Reduction reduction;
    Sphere first;
    Sphere second;
};

namespace detail {

/// Basis of a pseudo-euclidean subspace with Gram diag(1,...,1,-1).
inline Matrix minkowski_basis(const Subspace& s, const Tolerances& tol) {
    const auto on = orthonormalize(s, tol);
    if (!(on.inertia == Inertia{static_cast<int>(s.dim()) - 1, 1, 0})) {
        throw Error(ErrorCode::InternalError, "expected a pseudo-euclidean subspace");
    }
    Matrix out(on.basis.rows(), on.basis.cols());
    Eigen::Index k = 0;
    Eigen::Index timelike = -1;
    for (Eigen::Index i = 0; i < on.basis.cols(); ++i) {
        if (scalar_product(on.basis.col(i), on.basis.col(i)) < 0) timelike = i;
        else out.col(k++) = on.basis.col(i);
    }
    out.col(k) = on.basis.col(timelike);
    return out;
}

/// Form-orthonormal basis of a euclidean subspace.
inline Matrix euclidean_basis(const Subspace& s, const Tolerances& tol) {
    const auto on = orthonormalize(s, tol);
    if (on.inertia.negative != 0 || on.inertia.zero != 0) {
        throw Error(ErrorCode::InternalError, "expected a euclidean subspace");
    }
    return on.basis;
}

/// Coordinates of x relative to a basis E with Gram J_k.
inline Vector coordinates_in(const Matrix& e, const Vector& x) { return lower(Vector(e.transpose() * lower(x))); }

} // namespace detail

/**
 * @brief Re-express a pair that is not in general position inside the
 * smallest sphere containing both.
 */
inline ReducedPair reduce_to_span(const Sphere& s1, const Sphere& s2, const Tolerances& tol = {}) {
    if (same_sphere(s1, s2, tol)) throw Error(ErrorCode::EqualSpheres, "the two spheres coincide");
    const Subspace span = sum(s1.subspace(), s2.subspace(), tol);
    if (span.metric_type() != MetricType::PseudoEuclidean) {
        throw Error(ErrorCode::InternalError, "span of two spheres is not pseudo-euclidean");
    }
    const Matrix e = detail::minkowski_basis(span, tol);
    auto reduce = [&](const Sphere& s) {
        const Matrix& q = s.subspace().orthonormal();
        Matrix coords(e.cols(), q.cols());
        for (Eigen::Index i = 0; i < q.cols(); ++i) coords.col(i) = detail::coordinates_in(e, q.col(i));
        return Sphere(Subspace(coords, tol));
    };
    const int reduced_n = static_cast<int>(span.dim()) - 2;
    return ReducedPair{Reduction{Sphere(span), e, reduced_n}, reduce(s1), reduce(s2)};
}

/// The operator A = p12 o p21 on W^perp together with the bases it was built on.
struct OperatorA {
    Matrix matrix;  // (n-m) x (n-m), symmetric
    Matrix source;  // form-orthonormal basis of W^perp (columns)
    Matrix target;  // form-orthonormal basis of U^perp (columns)
};

/// p21: W^perp -> U^perp; with `target` form-orthonormal this is the orthogonal projection.
inline Vector project_to(const Matrix& target, const Vector& x) { return project_onto_orthonormal(x, target); }

/**
 * @brief Matrix of A = p12 o p21 on an orthonormal basis of the first
 * sphere's normal space W^perp.
 */
inline OperatorA operator_A(const Sphere& s1, const Sphere& s2, const Tolerances& tol = {}) {
    if (!general_position(s1, s2, tol)) {
        throw Error(ErrorCode::NotGeneralPosition, "operator_A needs a pair in general position");
    }
    OperatorA op;
    op.source = detail::euclidean_basis(complement(s1.subspace(), tol), tol);
    op.target = detail::euclidean_basis(complement(s2.subspace(), tol), tol);
    const Eigen::Index k = op.source.cols();
    op.matrix = Matrix::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Vector image = project_to(op.source, project_to(op.target, op.source.col(j)));
        for (Eigen::Index i = 0; i < k; ++i) op.matrix(i, j) = scalar_product(op.source.col(i), image);
    }
    const double asym = k > 0 ? (op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (k > 0 && asym > 1e-11 * std::max(1.0, op.matrix.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::InternalError, "operator A is not self-adjoint");
    }
    op.matrix = 0.5 * (op.matrix + op.matrix.transpose());
    return op;
}

/**
 * @brief Eigen-decomposition of A with eigenvalues refined as |p21(a_i)|^2.
 *
 * <a, A a> = <p21 a, p21 a> for unit eigenvectors, and the right-hand side
 * keeps relative accuracy for eigenvalues near zero, where the Jacobi values
 * carry absolute rounding noise.
 */
struct Spectrum {
    Vector values;  // refined, descending
    Vector raw;     // as returned by the eigensolver
    Matrix vectors; // coordinates relative to OperatorA::source
};

inline Spectrum spectrum(const OperatorA& op, const std::optional<Matrix>& vectors_override = std::nullopt) {
    Spectrum out;
    Matrix v;
    if (vectors_override) {
        v = *vectors_override;
        out.raw = (v.transpose() * op.matrix * v).diagonal();
    } else {
        const auto eig = symmetric_eigen(op.matrix);
        v = eig.vectors;
        out.raw = eig.values;
    }
    const Eigen::Index k = v.cols();
    Vector refined(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Vector p = project_onto_orthonormal(Vector(op.source * v.col(i)), op.target);
        refined(i) = std::max(scalar_product(p, p), 0.0);
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    // caller-supplied vectors keep their order
    if (!vectors_override) {
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return refined(a) > refined(b); });
    }
    out.values.resize(k);
    out.vectors.resize(v.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        out.values(i) = refined(order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

/// Near the tangency band the Gram test and the eigenvalue test may legitimately disagree.
inline constexpr double kBoundarySlack = 1e3;

/**
 * @brief Case of a general-position pair from the largest eigenvalue,
 * cross-checked against the metric type of U cap W.
 */
inline PairCase classify(const Vector& eigenvalues, const Subspace& common, const Tolerances& tol = {}) {
    const auto k = common.dim();
    // With no eigenvalues the smaller sphere lies inside the larger; U cap W = U.
    const double alpha1 = eigenvalues.size() ? eigenvalues(0) : 0.0;
    const double gap = alpha1 - 1.0;
    const MetricType type = common.metric_type();
    const bool soft = std::abs(gap) <= kBoundarySlack * tol.case_band;
    auto inconsistent = [&](const char* what) {
        throw Error(ErrorCode::InconsistentClassification,
                    std::string(what) + " (alpha1 = " + detail::sci(alpha1) + ", U cap W " + to_string(type) + ")");
    };

    if (std::abs(gap) <= tol.case_band) {
        if (type != MetricType::Isotropic) {
            const double smallest = common.gram_eigenvalues().size()
                                        ? common.gram_eigenvalues().cwiseAbs().minCoeff()
                                        : 0.0;
            if (k == 0 || smallest > kBoundarySlack * tol.case_band) inconsistent("tangent eigenvalue without isotropic intersection");
        }
        return PairCase::Tangent;
    }
    if (gap > 0) {
        if (type == MetricType::PseudoEuclidean || (type == MetricType::Isotropic && !soft)) {
            inconsistent("alpha1 > 1 but U cap W is not euclidean");
        }
        return PairCase::Separated;
    }
    if (type == MetricType::Euclidean || (type == MetricType::Isotropic && !soft)) {
        inconsistent("alpha1 < 1 but U cap W is not pseudo-euclidean");
    }
    if (k >= 2) return PairCase::Intersecting;
    if (k == 1) return PairCase::Interlaced;
    inconsistent("alpha1 < 1 with trivial intersection");
    return PairCase::Intersecting;
}

inline std::vector<StationaryAngle> stationary_angles(const Vector& eigenvalues, const Tolerances& tol = {}) {
    std::vector<StationaryAngle> out;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double a = eigenvalues(i);
        if (std::abs(a - 1.0) <= tol.case_band) {
            out.push_back({StationaryAngle::Kind::Parabolic, 0.0, a});
        } else if (a > 1.0) {
            out.push_back({StationaryAngle::Kind::Hyperbolic, std::acosh(std::sqrt(a)), a});
        } else {
            out.push_back({StationaryAngle::Kind::Circular, std::acos(std::sqrt(std::max(a, 0.0))), a});
        }
    }
    return out;
}

struct FrameOptions {
    std::optional<Matrix> eigenvectors; // override: columns in W^perp coordinates of `source`
    double gram_tol = 1e-10;
    double case_tol = 1e-9;
};

namespace detail {

/// Orthogonal basis (Gram diag +-1) of {x in U : <x, used_i> = 0}, spacelike first.
inline Matrix complete_in(const Subspace& u, const std::vector<Vector>& used, const Tolerances& tol) {
    const Matrix& q = u.orthonormal();
    Matrix constraints(q.rows(), static_cast<Eigen::Index>(used.size()));
    for (std::size_t i = 0; i < used.size(); ++i) constraints.col(static_cast<Eigen::Index>(i)) = used[i];
    // c such that (J constraints)^T q c = 0
    const Matrix coeff_constraints = q.transpose() * lower(constraints);
    const Matrix kernel = null_space_of_transpose(coeff_constraints, tol.rank);
    if (kernel.cols() == 0) return Matrix(q.rows(), 0);
    const Subspace rest(q * kernel, tol);
    const auto on = orthonormalize(rest, tol);
    if (on.inertia.zero != 0) throw Error(ErrorCode::FrameConstructionFailed, "degenerate frame completion");
    Matrix out(q.rows(), on.basis.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < on.basis.cols(); ++i)
        if (scalar_product(on.basis.col(i), on.basis.col(i)) > 0) out.col(k++) = on.basis.col(i);
    for (Eigen::Index i = 0; i < on.basis.cols(); ++i)
        if (scalar_product(on.basis.col(i), on.basis.col(i)) < 0) out.col(k++) = on.basis.col(i);
    return out;
}

} // namespace detail

/**
 * @brief Adapted frames for a general-position pair with dim first >= dim second.
 *
 * The b-vectors in U^perp come from p21 of the eigenvectors plus a basis of
 * U^perp cap W. The U-part is built from q = id - p21 according to the case:
 * a normalized timelike q(a_1) when separated, the isotropic q(a_1) split into
 * b_{n+1} + b_{n+2} when tangent, and normalized q(a_i) otherwise.
 */
inline AdaptedFrames adapted_frames(const Sphere& first, const Sphere& second, PairCase case_tag,
                                    const Tolerances& tol = {}, const FrameOptions& opts = {}) {
    if (first.dim() < second.dim()) throw Error(ErrorCode::InvalidInput, "adapted_frames expects m >= l");
    const OperatorA op = operator_A(first, second, tol);
    const int n = first.ambient_n();
    const int m = first.dim();
    const int l = second.dim();
    const Eigen::Index big_n = n + 2;
    const Eigen::Index k = n - m;

    const Spectrum spec = spectrum(op, opts.eigenvectors);
    const Matrix& v = spec.vectors;
    const Vector& alpha = spec.values;

    AdaptedFrames fr;
    fr.a = Matrix(big_n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const Vector coords = detail::sign_normalized(v.col(i));
        fr.a.col(i) = op.source * coords;
    }
    fr.b = Matrix::Zero(big_n, big_n);

    // U^perp part
    Eigen::Index rank_a = 0;
    while (rank_a < k && std::sqrt(alpha(rank_a)) > tol.rank) ++rank_a;
    std::vector<Vector> p21(static_cast<std::size_t>(k));
    std::vector<Vector> q(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        p21[static_cast<std::size_t>(i)] = project_to(op.target, fr.a.col(i));
        q[static_cast<std::size_t>(i)] = fr.a.col(i) - p21[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index j = 0; j < rank_a; ++j) fr.b.col(j) = p21[static_cast<std::size_t>(j)] / std::sqrt(alpha(j));
    {
        // U^perp cap W: coordinates in `target` orthogonal to b_1..b_rA
        const Matrix coeff = op.target.transpose() * lower(Matrix(fr.b.leftCols(rank_a)));
        const Matrix kernel = detail::null_space_of_transpose(coeff, tol.rank);
        if (kernel.cols() != (n - l) - rank_a) {
            throw Error(ErrorCode::FrameConstructionFailed, "unexpected dimension of U^perp cap W");
        }
        fr.b.middleCols(rank_a, kernel.cols()) = op.target * kernel;
    }

    // U part
    const Subspace& u = second.subspace();
    const Eigen::Index u0 = n - l; // first column belonging to U
    std::vector<Vector> used;
    auto put = [&](Eigen::Index col, const Vector& x) {
        fr.b.col(col) = x;
        used.push_back(x);
    };
    auto fill_rest = [&](Eigen::Index from, Eigen::Index to_exclusive, bool allow_timelike_last) {
        const Matrix rest = detail::complete_in(u, used, tol);
        if (rest.cols() != to_exclusive - from) {
            throw Error(ErrorCode::FrameConstructionFailed, "frame completion has the wrong dimension");
        }
        for (Eigen::Index i = 0; i < rest.cols(); ++i) {
            const bool timelike = scalar_product(rest.col(i), rest.col(i)) < 0;
            if (timelike && !(allow_timelike_last && from + i == big_n - 1)) {
                throw Error(ErrorCode::FrameConstructionFailed, "timelike vector in a spacelike slot");
            }
            fr.b.col(from + i) = rest.col(i);
        }
    };
    auto unit_q = [&](Eigen::Index i) {
        return Vector(q[static_cast<std::size_t>(i)] / std::sqrt(std::max(1.0 - alpha(i), 0.0)));
    };

    switch (case_tag) {
    case PairCase::Separated: {
        put(big_n - 1, q[0] / std::sqrt(alpha(0) - 1.0));
        for (Eigen::Index i = 1; i < k; ++i) put(u0 + i - 1, unit_q(i));
        fill_rest(u0 + k - 1, big_n - 1, false);
        break;
    }
    case PairCase::Intersecting:
    case PairCase::Interlaced: {
        for (Eigen::Index i = 0; i < k; ++i) put(u0 + i, unit_q(i));
        fill_rest(u0 + k, big_n, true);
        break;
    }
    case PairCase::Tangent: {
        for (Eigen::Index i = 1; i < k; ++i) put(u0 + i - 1, unit_q(i));
        const Vector& z = q[0];
        // timelike Gram-eigendirection of the complement of q(a_2..) inside U
        const Matrix plane = detail::complete_in(u, used, tol);
        const Matrix g = gram(plane);
        const auto eig = symmetric_eigen(g);
        Vector t = plane * eig.vectors.col(eig.vectors.cols() - 1);
        t /= std::sqrt(-scalar_product(t, t));
        double c = scalar_product(t, z);
        if (c > 0) {
            t = -t;
            c = -c;
        }
        if (!(std::abs(c) > 0.0)) throw Error(ErrorCode::FrameConstructionFailed, "isotropic direction orthogonal to timelike");
        // boost t inside span{t, z} so that <t', z> = -1 and <t', t'> = -1
        const double lambda = -1.0 / c;
        const double mu = (lambda * lambda - 1.0) / (2.0 * lambda * c);
        const Vector t2 = lambda * t + mu * z;
        put(big_n - 1, t2);
        put(big_n - 2, z - t2);
        fill_rest(u0 + k - 1, big_n - 2, false);
        break;
    }
    }

    // verification
    const Matrix jn = MinkowskiFrame(n).metric();
    fr.gram_residual = (gram(fr.b) - jn).cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double ca = std::sqrt(alpha(i));
        Vector expected(big_n);
        if (case_tag == PairCase::Separated && i == 0) {
            expected = fr.b.col(0) * ca + fr.b.col(big_n - 1) * std::sqrt(alpha(0) - 1.0);
        } else if (case_tag == PairCase::Tangent && i == 0) {
            expected = fr.b.col(0) + fr.b.col(big_n - 2) + fr.b.col(big_n - 1);
        } else if (case_tag == PairCase::Separated || case_tag == PairCase::Tangent) {
            expected = fr.b.col(i) * ca + fr.b.col(u0 + i - 1) * std::sqrt(std::max(1.0 - alpha(i), 0.0));
        } else {
            expected = fr.b.col(i) * ca + fr.b.col(u0 + i) * std::sqrt(std::max(1.0 - alpha(i), 0.0));
        }
        worst = std::max(worst, (fr.a.col(i) - expected).norm());
    }
    fr.case_residual = worst;
    if (fr.gram_residual > opts.gram_tol || fr.case_residual > opts.case_tol) {
        throw Error(ErrorCode::FrameConstructionFailed,
                    "adapted frame residuals too large (gram " + detail::sci(fr.gram_residual) + ", case " +
                        detail::sci(fr.case_residual) + ")");
    }
    return fr;
}

struct WorkingPair {
    Sphere first;  // the larger dimension
    Sphere second;
    bool swapped;
    bool general_position;
    std::optional<Reduction> reduction;
};

/// Reduce (if needed) and order a pair for analysis.
inline WorkingPair prepare_pair(const Sphere& s1, const Sphere& s2, const Tolerances& tol = {}) {
    if (s1.frame() != s2.frame()) throw Error(ErrorCode::InvalidInput, "spheres live in different spaces");
    if (same_sphere(s1, s2, tol)) throw Error(ErrorCode::EqualSpheres, "the two spheres coincide");
    const bool gp = general_position(s1, s2, tol);
    const bool swap = s1.dim() < s2.dim();
    if (gp) {
        return swap ? WorkingPair{s2, s1, true, true, std::nullopt} : WorkingPair{s1, s2, false, true, std::nullopt};
    }
    ReducedPair r = reduce_to_span(s1, s2, tol);
    if (!general_position(r.first, r.second, tol)) {
        throw Error(ErrorCode::InternalError, "reduced pair is not in general position");
    }
    if (swap) return WorkingPair{r.second, r.first, true, false, std::move(r.reduction)};
    return WorkingPair{r.first, r.second, false, false, std::move(r.reduction)};
}

/// Map a vector of the working space back to the input space.
inline Vector to_input_space(const WorkingPair& w, const Vector& x) {
    return w.reduction ? Vector(w.reduction->embedding * x) : x;
}

/**
 * @brief The complete Möbius invariants of a pair of spheres.
 *
 * Pairs that are not in general position are first reduced to the smallest
 * sphere containing both. Eigenvalues are refined Rayleigh quotients; the
 * eigensolver's raw values are kept for diagnostics.
 */
inline PairAnalysis invariants(const Sphere& s1, const Sphere& s2, const Tolerances& tol = {},
                               bool with_frames = false) {
    const WorkingPair w = prepare_pair(s1, s2, tol);
    PairAnalysis out;
    out.ambient_n = w.first.ambient_n();
    out.m = w.first.dim();
    out.l = w.second.dim();
    out.swapped = w.swapped;
    out.general_position = w.general_position;
    out.reduction = w.reduction;

    const OperatorA op = operator_A(w.first, w.second, tol);
    const Spectrum eig = spectrum(op);
    out.raw_eigenvalues = eig.raw;
    out.eigenvalues = eig.values;
    out.rank_A = 0;
    while (out.rank_A < out.eigenvalues.size() && std::sqrt(out.eigenvalues(out.rank_A)) > tol.rank) ++out.rank_A;
    out.angles = stationary_angles(out.eigenvalues, tol);

    const Subspace common = intersect(w.first.subspace(), w.second.subspace(), tol);
    out.common_dim = static_cast<int>(common.dim());
    out.common_type = common.metric_type();
    if (out.common_dim != out.m + out.l - out.ambient_n + 2) {
        throw Error(ErrorCode::InconsistentClassification, "dim(U cap W) violates the dimension law");
    }
    out.case_tag = classify(out.eigenvalues, common, tol);
    out.contained = out.eigenvalues.size() == 0;
    if (out.case_tag == PairCase::Intersecting) {
        out.intersection_dim = out.contained ? out.l : out.m + out.l - out.ambient_n;
    }
    if (out.case_tag == PairCase::Tangent) {
        const Vector a1 = op.source * eig.vectors.col(0);
        const Vector z = a1 - project_to(op.target, a1);
        out.tangency_point = stereographic(to_input_space(w, z), 1e-6);
    }
    if (with_frames) out.frames = adapted_frames(w.first, w.second, out.case_tag, tol);
    return out;
}

/// Frames of the working pair of an existing analysis.
inline AdaptedFrames adapted_frames(const Sphere& s1, const Sphere& s2, const PairAnalysis& analysis,
                                    const Tolerances& tol = {}) {
    const WorkingPair w = prepare_pair(s1, s2, tol);
    if (w.first.dim() != analysis.m || w.second.dim() != analysis.l) {
        throw Error(ErrorCode::InvalidInput, "analysis does not belong to this pair");
    }
    return adapted_frames(w.first, w.second, analysis.case_tag, tol);
}

/// Signed <n, m> of two hyperspheres from Euclidean data, by closed form.
inline double hypersphere_inclination(const EuclideanSphereData& d1, const EuclideanSphereData& d2) {
    struct Visitor {
        double operator()(const RoundSphere& a, const RoundSphere& b) const {
            const double d2 = (a.center - b.center).squaredNorm();
            return (a.radius * a.radius + b.radius * b.radius - d2) / (2.0 * a.radius * b.radius);
        }
        double operator()(const Hyperplane& p, const RoundSphere& s) const {
            return (p.normal.dot(s.center) - p.offset) / (s.radius * p.normal.norm());
        }
        double operator()(const RoundSphere& s, const Hyperplane& p) const { return (*this)(p, s); }
        double operator()(const Hyperplane& a, const Hyperplane& b) const {
            return a.normal.dot(b.normal) / (a.normal.norm() * b.normal.norm());
        }
    };
    return std::visit(Visitor{}, d1, d2);
}

} // namespace moebius
