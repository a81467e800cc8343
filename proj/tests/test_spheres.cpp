#include <gtest/gtest.h>

#include <random>

#include "moebius/spheres.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace moebius;
using testing_util::random_vector;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

ExtendedPoint pt(std::initializer_list<double> v) { return ExtendedPoint::finite(vec(v)); }

/// Random point at distance r from z.
Vector on_sphere(std::mt19937_64& rng, const Vector& z, double r) {
    Vector d = random_vector(rng, z.size());
    return z + r * d / d.norm();
}

} // namespace

TEST(HypersphereNormal, UnitSphereAtOrigin) {
    for (int n = 1; n <= 5; ++n) {
        const Vector nv = hypersphere_normal(Vector::Zero(n), 1.0);
        Vector expect = Vector::Zero(n + 2);
        expect(n) = -1.0;
        EXPECT_LT((nv - expect).norm(), 1e-15);
    }
}

TEST(HypersphereNormal, MatchesWrittenOutFormula) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const Vector z = random_vector(rng, 3);
        const double r = 0.1 + std::abs(random_vector(rng, 1)(0));
        const auto ref = oracle::normal_vector({z(0), z(1), z(2)}, r);
        const Vector nv = hypersphere_normal(z, r);
        for (int i = 0; i < 5; ++i) EXPECT_NEAR(nv(i), ref[static_cast<std::size_t>(i)], 1e-12);
        EXPECT_NEAR(oracle::minkowski(ref, ref), 1.0, 1e-12);
    }
}

TEST(HypersphereNormal, RejectsNonPositiveRadius) {
    EXPECT_THROW(hypersphere_from_center_radius(Vector::Zero(2), 0.0), Error);
    EXPECT_THROW(hypersphere_from_center_radius(Vector::Zero(2), -1.0), Error);
    EXPECT_THROW(hypersphere_from_plane(Vector::Zero(2), 1.0), Error);
}

TEST(HypersphereNormal, UnitAndOrthogonalToLiftedPoints) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Vector z = random_vector(rng, n);
        const double r = 0.05 + 3.0 * std::abs(random_vector(rng, 1)(0));
        const Vector nv = hypersphere_normal(z, r);
        EXPECT_NEAR(scalar_product(nv, nv), 1.0, 1e-12);
        const Sphere s = hypersphere_from_center_radius(z, r);
        EXPECT_EQ(s.dim(), n - 1);
        EXPECT_EQ(s.subspace().inertia(), (Inertia{n, 1, 0}));
        for (int k = 0; k < 20; ++k) {
            const auto y = ExtendedPoint::finite(on_sphere(rng, z, r));
            EXPECT_NEAR(scalar_product(lift(y), nv), 0.0, 1e-10);
            EXPECT_TRUE(contains(s, y));
        }
    }
}

TEST(HyperplaneNormal, Examples) {
    const Vector nv = hyperplane_normal(vec({1, 0}), 0.0);
    EXPECT_LT((nv - vec({1, 0, 0, 0})).norm(), 1e-15);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        Vector b = random_vector(rng, 3), bh = random_vector(rng, 3);
        b.normalize();
        bh.normalize();
        const double p = random_vector(rng, 1)(0), ph = random_vector(rng, 1)(0);
        EXPECT_NEAR(scalar_product(hyperplane_normal(b, p), hyperplane_normal(bh, ph)), b.dot(bh), 1e-12);
        // points of the hyperplane lift orthogonally; infinity lies on it
        const Sphere s = hypersphere_from_plane(b, p);
        Vector y = random_vector(rng, 3);
        y += (p - b.dot(y)) * b;
        EXPECT_NEAR(scalar_product(lift(ExtendedPoint::finite(y)), hyperplane_normal(b, p)), 0.0, 1e-12);
        EXPECT_TRUE(contains(s, ExtendedPoint::finite(y)));
        EXPECT_TRUE(contains(s, ExtendedPoint::infinity(3)));
    }
}

TEST(Lift, Examples) {
    EXPECT_LT((lift(pt({0, 0})) - vec({0, 0, -1, 1})).norm(), 1e-15);
    EXPECT_LT((lift(ExtendedPoint::infinity(2)) - vec({0, 0, 1, 1})).norm(), 0.0 + 1e-300);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const Vector y = 5.0 * random_vector(rng, 4);
        const Vector x = lift(ExtendedPoint::finite(y));
        EXPECT_NEAR(scalar_product(x, x), 0.0, 1e-12);
    }
}

TEST(Stereographic, Examples) {
    const auto o = stereographic(vec({0, 0, -1, 1}));
    ASSERT_FALSE(o.is_infinity());
    EXPECT_LT(o.coords().norm(), 1e-15);
    EXPECT_TRUE(stereographic(vec({0, 0, 1, 1})).is_infinity());
    EXPECT_THROW(stereographic(vec({1, 0, 0, 0})), Error);
}

TEST(Stereographic, RoundTripAndRescaling) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const double scale = std::pow(10.0, static_cast<double>(rng() % 13) - 6.0);
        const Vector y = scale * random_vector(rng, 3);
        const auto back = stereographic(lift(ExtendedPoint::finite(y)));
        ASSERT_FALSE(back.is_infinity());
        EXPECT_LE((back.coords() - y).norm(), 1e-12 * std::max(1.0, y.norm()));
        // any nonzero multiple of the lift projects to the same point
        const double c = -0.37 * scale;
        const auto scaled = stereographic(c * lift(ExtendedPoint::finite(y)));
        EXPECT_LE((scaled.coords() - y).norm(), 1e-12 * std::max(1.0, y.norm()));
    }
}

TEST(Stereographic, LiftOfProjectionIsProportional) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) {
        const Vector y = random_vector(rng, 4);
        Vector x = -2.5 * lift(ExtendedPoint::finite(y));
        const Vector back = lift(stereographic(x));
        // proportional: x / x_last == back / back_last
        EXPECT_LT((x / x(x.size() - 1) - back / back(back.size() - 1)).norm(), 1e-10);
    }
}

TEST(SphereFromPoints, UnitCircleFromThreePoints) {
    const Sphere s = sphere_from_points({pt({1, 0}), pt({0, 1}), pt({-1, 0})}, 1);
    EXPECT_TRUE(same_sphere(s, hypersphere_from_center_radius(Vector::Zero(2), 1.0)));
    const auto data = euclidean_data(s);
    ASSERT_TRUE(std::holds_alternative<RoundSphere>(data));
    EXPECT_NEAR(std::get<RoundSphere>(data).radius, 1.0, 1e-10);
    EXPECT_LT(std::get<RoundSphere>(data).center.norm(), 1e-10);
}

TEST(SphereFromPoints, PointPair) {
    const Sphere s = sphere_from_points({pt({1, 2, 3}), pt({-1, 0, 4})}, 0);
    EXPECT_EQ(s.dim(), 0);
    EXPECT_TRUE(contains(s, pt({1, 2, 3})));
    EXPECT_TRUE(contains(s, pt({-1, 0, 4})));
    EXPECT_FALSE(contains(s, pt({0, 0, 0})));
}

TEST(SphereFromPoints, CollinearPointsGiveALine) {
    const Sphere s = sphere_from_points({pt({0, 1}), pt({1, 1}), pt({3, 1})}, 1);
    EXPECT_TRUE(same_sphere(s, hypersphere_from_plane(vec({0, 1}), 1.0)));
    EXPECT_TRUE(contains(s, ExtendedPoint::infinity(2)));
    const auto data = euclidean_data(s);
    ASSERT_TRUE(std::holds_alternative<Hyperplane>(data));
    const auto& hp = std::get<Hyperplane>(data);
    EXPECT_NEAR(hp.normal.dot(vec({0, 1})) * hp.offset, 1.0, 1e-10);
}

TEST(SphereFromPoints, Errors) {
    try {
        sphere_from_points({pt({0, 0}), pt({0, 0}), pt({1, 0})}, 1);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::PointsNotInGeneralPosition);
    }
    EXPECT_THROW(sphere_from_points({pt({0, 0}), pt({1, 0})}, 1), Error);
    // four concyclic points do not span a 2-sphere
    try {
        sphere_from_points({pt({1, 0, 0}), pt({0, 1, 0}), pt({-1, 0, 0}), pt({0, -1, 0})}, 2);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::PointsNotInGeneralPosition);
    }
}

TEST(SphereFromPoints, AgreesWithCenterRadius) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const Vector z = random_vector(rng, n);
        const double r = 0.2 + std::abs(random_vector(rng, 1)(0));
        std::vector<ExtendedPoint> pts;
        for (int k = 0; k < n + 1; ++k) pts.push_back(ExtendedPoint::finite(on_sphere(rng, z, r)));
        const Sphere s = sphere_from_points(pts, n - 1);
        EXPECT_TRUE(same_sphere(s, hypersphere_from_center_radius(z, r)));
        EXPECT_EQ(s.subspace().inertia(), (Inertia{n, 1, 0}));
    }
}

TEST(EuclideanData, Examples) {
    Vector nv = Vector::Zero(4);
    nv(2) = -1.0;
    const auto d = euclidean_data(hypersphere_from_normal(nv));
    ASSERT_TRUE(std::holds_alternative<RoundSphere>(d));
    EXPECT_NEAR(std::get<RoundSphere>(d).radius, 1.0, 1e-12);

    const auto p = euclidean_data(hypersphere_from_normal(vec({1, 0, 0, 0})));
    ASSERT_TRUE(std::holds_alternative<Hyperplane>(p));
    EXPECT_NEAR(std::get<Hyperplane>(p).normal(0), 1.0, 1e-12);
    EXPECT_NEAR(std::get<Hyperplane>(p).offset, 0.0, 1e-12);
}

TEST(EuclideanData, RoundTrip) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const Vector z = random_vector(rng, n);
        const double r = 0.2 + 2.0 * std::abs(random_vector(rng, 1)(0));
        const auto d = euclidean_data(hypersphere_from_center_radius(z, r));
        ASSERT_TRUE(std::holds_alternative<RoundSphere>(d));
        EXPECT_NEAR(std::get<RoundSphere>(d).radius, r, 1e-10);
        EXPECT_LT((std::get<RoundSphere>(d).center - z).norm(), 1e-10);

        Vector b = random_vector(rng, n);
        b.normalize();
        const double p = random_vector(rng, 1)(0);
        const auto h = euclidean_data(hypersphere_from_plane(b, p));
        ASSERT_TRUE(std::holds_alternative<Hyperplane>(h));
        const auto& hp = std::get<Hyperplane>(h);
        const double sign = hp.normal.dot(b) > 0 ? 1.0 : -1.0;
        EXPECT_LT((sign * hp.normal - b).norm(), 1e-10);
        EXPECT_NEAR(sign * hp.offset, p, 1e-10);
    }
}

TEST(Contains, Examples) {
    const Sphere unit = hypersphere_from_center_radius(Vector::Zero(2), 1.0);
    EXPECT_TRUE(contains(unit, pt({1, 0})));
    EXPECT_FALSE(contains(unit, pt({2, 0})));
    EXPECT_FALSE(contains(unit, ExtendedPoint::infinity(2)));
    EXPECT_TRUE(contains(hypersphere_from_plane(vec({1, 1}), 3.0), ExtendedPoint::infinity(2)));
}

TEST(Sphere, RejectsNonPseudoEuclideanSubspace) {
    Matrix b(4, 2);
    b.col(0) = vec({1, 0, 0, 0});
    b.col(1) = vec({0, 1, 0, 0});
    EXPECT_THROW(Sphere::from_basis(b), Error);
}

TEST(SphereFromCenterRadius, LowerDimensionalSphere) {
    Matrix dirs(3, 2);
    dirs << 1, 0, 0, 1, 0, 0;
    const Sphere c = sphere_from_center_radius(vec({0, 0, 1}), 2.0, dirs);
    EXPECT_EQ(c.dim(), 1);
    EXPECT_TRUE(contains(c, pt({2, 0, 1})));
    EXPECT_TRUE(contains(c, pt({0, -2, 1})));
    EXPECT_TRUE(contains(c, pt({std::sqrt(2.0), std::sqrt(2.0), 1})));
    EXPECT_FALSE(contains(c, pt({0, 0, 3})));
}
