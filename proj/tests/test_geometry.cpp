// SPDX-License-Identifier: Apache-2.0
// Rigid transforms, direction conventions, steering phases, and grid layout.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>

#include "rfscene/geometry.hpp"
#include "rfscene/random.hpp"

using namespace rfscene;

namespace {

Pose random_pose(Rng& rng) {
  const Eigen::Vector3d axis =
      Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
  Pose p;
  p.rotation = Eigen::AngleAxisd(rng.uniform(-3.0, 3.0), axis).toRotationMatrix();
  p.translation = Eigen::Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  return p;
}

}  // namespace

TEST_CASE("two-way range advanced per tap") {
  // c / (2 * 1.2288 GHz), frozen independently.
  CHECK(range_resolution(1.2288e9) == doctest::Approx(0.12198586344401041).epsilon(1e-14));
  CHECK(range_resolution(0.5e9) == doctest::Approx(299792458.0 / 1e9).epsilon(1e-14));
}

TEST_CASE("direction vector axis cases and unit norm") {
  CHECK((direction_vector(0, 0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  CHECK((direction_vector(M_PI / 2, 0) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK((direction_vector(0, M_PI / 2) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);

  // Frozen at azimuth 30 deg, elevation 20 deg.
  const Eigen::Vector3d u = direction_vector(deg2rad(30), deg2rad(20));
  CHECK(u.x() == doctest::Approx(0.46984631039295416).epsilon(1e-14));
  CHECK(u.y() == doctest::Approx(0.8137976813493738).epsilon(1e-14));
  CHECK(u.z() == doctest::Approx(0.3420201433256687).epsilon(1e-14));

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double az = rng.uniform(-M_PI / 2, M_PI / 2);
    const double el = rng.uniform(-M_PI / 2, M_PI / 2);
    CHECK(std::abs(direction_vector(az, el).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("alternate direction convention") {
  const Eigen::Vector3d v =
      direction_vector(deg2rad(30), deg2rad(20), DirectionFormula::trig_x_boresight);
  CHECK(v.x() == doctest::Approx(0.8137976813493738).epsilon(1e-14));
  CHECK(v.y() == doctest::Approx(0.29619813272602386).epsilon(1e-14));
  CHECK(v.z() == doctest::Approx(0.3420201433256687).epsilon(1e-14));
  // Not unit length away from the axes; that is the point of keeping it
  // behind an explicit switch.
  CHECK(std::abs(v.norm() - 1.0) > 1e-3);
}

TEST_CASE("spherical coordinates round-trip through direction vectors") {
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const double az = rng.uniform(-1.4, 1.4);
    const double el = rng.uniform(-1.4, 1.4);
    const double r = rng.uniform(0.1, 9.0);
    double az2, el2, r2;
    spherical_of_point(r * direction_vector(az, el), az2, el2, r2);
    CHECK(az2 == doctest::Approx(az).epsilon(1e-12));
    CHECK(el2 == doctest::Approx(el).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("compose applies right operand first") {
  Rng rng(13);
  const Pose a = random_pose(rng);
  const Pose b = random_pose(rng);
  const Pose ab = compose(a, b);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4));
    CHECK((ab.apply(p) - a.apply(b.apply(p))).norm() < 1e-12);
  }
}

TEST_CASE("compose is associative and inverse cancels") {
  Rng rng(14);
  for (int i = 0; i < 25; ++i) {
    const Pose a = random_pose(rng);
    const Pose b = random_pose(rng);
    const Pose c = random_pose(rng);
    const Pose lhs = compose(compose(a, b), c);
    const Pose rhs = compose(a, compose(b, c));
    CHECK((lhs.rotation - rhs.rotation).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((lhs.translation - rhs.translation).norm() < 1e-9);

    const Pose id = compose(a, inverse(a));
    CHECK((id.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(id.translation.norm() < 1e-9);
  }
}

TEST_CASE("relative transform maps between frames through the world") {
  Rng rng(15);
  for (int i = 0; i < 25; ++i) {
    const Pose ref = random_pose(rng);
    const Pose frame = random_pose(rng);
    const Pose rel = relative_transform(ref, frame);

    // Same physical point expressed in both frames.
    const Eigen::Vector3d p_frame(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Eigen::Vector3d p_world = frame.apply(p_frame);
    const Eigen::Vector3d p_ref = inverse(ref).apply(p_world);
    CHECK((rel.apply(p_frame) - p_ref).norm() < 1e-9);
  }
  const Pose g = random_pose(rng);
  const Pose self = relative_transform(g, g);
  CHECK((self.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(self.translation.norm() < 1e-9);

  // Reference at the origin returns the frame pose unchanged.
  const Pose from_id = relative_transform(Pose{}, g);
  CHECK((from_id.rotation - g.rotation).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((from_id.translation - g.translation).norm() < 1e-12);
}

TEST_CASE("rigid transforms preserve pairwise distances") {
  Rng rng(16);
  const Pose g = random_pose(rng);
  CHECK(is_rigid(g));
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d x(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4));
    const Eigen::Vector3d y(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4));
    CHECK(std::abs((g.apply(x) - g.apply(y)).norm() - (x - y).norm()) < 1e-9);
  }
  Pose sheared;
  sheared.rotation(0, 1) = 0.2;
  CHECK_FALSE(is_rigid(sheared));
}

TEST_CASE("euler conversion matches the frozen matrix and round-trips") {
  const Pose p = pose_from_euler({1, 2, 3}, 20.0, 10.0, 5.0);
  // Rotation entries frozen from an independent computation of
  // Rz(20 deg) * Rx(10 deg) * Ry(5 deg).
  const double expect[3][3] = {
      {0.9309405247267303, -0.33682408883346515, 0.14106478158288235},
      {0.3549403711578553, 0.9254165783983234, -0.13274595793418248},
      {-0.08583165117743129, 0.17364817766693033, 0.9810602621904069},
  };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      CHECK(p.rotation(r, c) == doctest::Approx(expect[r][c]).epsilon(1e-12));
    }
  }
  CHECK(is_rigid(p));

  double yaw, pitch, roll;
  euler_from_pose(p, yaw, pitch, roll);
  CHECK(yaw == doctest::Approx(20.0).epsilon(1e-10));
  CHECK(pitch == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(roll == doctest::Approx(5.0).epsilon(1e-10));

  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const double y0 = rng.uniform(-179, 179);
    const double p0 = rng.uniform(-89, 89);
    const double r0 = rng.uniform(-179, 179);
    double y1, p1, r1;
    euler_from_pose(pose_from_euler({0, 0, 0}, y0, p0, r0), y1, p1, r1);
    CHECK(y1 == doctest::Approx(y0).epsilon(1e-9));
    CHECK(p1 == doctest::Approx(p0).epsilon(1e-9));
    CHECK(r1 == doctest::Approx(r0).epsilon(1e-9));
  }
}

TEST_CASE("steering weight phase cases") {
  const double lam = 0.004996540966666667;
  const Eigen::Vector3d u = direction_vector(deg2rad(25), deg2rad(-10));

  // Co-located elements or a baseline orthogonal to the look direction leave
  // the phase untouched.
  CHECK(std::abs(steering_weight(u, {0, 0, 0}, {0, 0, 0}, lam) - std::complex<double>(1, 0)) <
        1e-12);
  Eigen::Vector3d ortho = u.cross(Eigen::Vector3d::UnitZ());
  CHECK(std::abs(steering_weight(u, 0.25 * ortho, 0.25 * ortho, lam) -
                 std::complex<double>(1, 0)) < 1e-9);

  // Half-wavelength sum along the look direction flips the sign.
  const Eigen::Vector3d half = 0.5 * lam * u;
  CHECK(std::abs(steering_weight(u, 0.5 * half, 0.5 * half, lam) -
                 std::complex<double>(-1, 0)) < 1e-12);

  // Frozen spot value: lambda 5 mm, direction (20 deg, 10 deg),
  // tx (1.25 mm, 0, 0), rx (0, 0, 2.5 mm).
  const std::complex<double> w = steering_weight(direction_vector(deg2rad(20), deg2rad(10)),
                                                 {0.00125, 0, 0}, {0, 0, 0.0025}, 0.005);
  CHECK(w.real() == doctest::Approx(0.47607183443023127).epsilon(1e-12));
  CHECK(w.imag() == doctest::Approx(-0.8794063955090584).epsilon(1e-12));

  Rng rng(18);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d d = direction_vector(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
    const Eigen::Vector3d tx(rng.uniform(-0.01, 0.01), 0, 0);
    const Eigen::Vector3d rx(0, 0, rng.uniform(-0.01, 0.01));
    CHECK(std::abs(std::abs(steering_weight(d, tx, rx, lam)) - 1.0) < 1e-12);
  }
}

TEST_CASE("uniform array layout tiles a centered virtual aperture") {
  const double lam = 0.005;
  const AntennaArray a = make_uniform_array(8, 4, lam);
  REQUIRE(a.tx_positions.size() == 8);
  REQUIRE(a.rx_positions.size() == 4);
  CHECK(a.pair_count() == 32);
  for (int i = 0; i < 8; ++i) {
    CHECK(a.tx_positions[i].x() == doctest::Approx((i - 3.5) * 0.5 * lam).epsilon(1e-15));
    CHECK(a.tx_positions[i].y() == 0.0);
    CHECK(a.tx_positions[i].z() == 0.0);
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(a.rx_positions[j].z() == doctest::Approx((j - 1.5) * 0.5 * lam).epsilon(1e-15));
    CHECK(a.rx_positions[j].x() == 0.0);
  }
  // Centered: pairwise sums average to zero.
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& t : a.tx_positions)
    for (const auto& r : a.rx_positions) mean += t + r;
  CHECK(mean.norm() / static_cast<double>(a.pair_count()) < 1e-15);

  CHECK_THROWS(make_uniform_array(0, 4, lam));
  CHECK_THROWS(make_uniform_array(4, 4, -1.0));
}

TEST_CASE("spherical grid covers the field of view and positive ranges") {
  const SphericalGrid g = make_spherical_grid(-60, 60, 2, -30, 30, 2, 7.0, 1.2288e9);
  CHECK(g.azimuths.size() == 61);
  CHECK(g.elevations.size() == 31);
  CHECK(g.azimuths.front() == doctest::Approx(deg2rad(-60)).epsilon(1e-12));
  CHECK(g.azimuths.back() == doctest::Approx(deg2rad(60)).epsilon(1e-12));
  CHECK(g.range_resolution == doctest::Approx(0.12198586344401041).epsilon(1e-14));

  // Taps start at 1 and stop at the last tap center inside max range.
  REQUIRE_FALSE(g.taps.empty());
  CHECK(g.taps.front() == 1);
  CHECK(g.taps.back() == 57);
  CHECK(g.taps.back() * g.range_resolution <= 7.0);
  CHECK((g.taps.back() + 1) * g.range_resolution > 7.0);
  CHECK(g.tap_range(0) == doctest::Approx(g.range_resolution).epsilon(1e-14));
  CHECK(g.cell_count() == 57u * 61u * 31u);

  const Fov fov = g.fov();
  CHECK(fov.contains(deg2rad(59.9), deg2rad(29.9)));
  CHECK_FALSE(fov.contains(deg2rad(60.1), 0.0));
}
