#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace evflight {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Mat3 {
    // row-major
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }
    static Mat3 rotation_z(double angle_rad);

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
    double det() const;
};

struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

// True iff R is orthonormal with det +1, to within tol.
bool is_rotation(const Mat3& r, double tol = 1e-9);

// Pinhole model. Camera frame: +Z perpendicular to the sensor plane pointing
// at the scene, origin at the camera; +X maps to +u (right), +Y to +v.
struct CameraModel {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    RigidTransform world_to_cam;

    void validate() const;  // fx,fy > 0; rotation orthonormal to 1e-9
};

// u = fx*X/Z + cx, v = fy*Y/Z + cy. Throws DataError for Z <= 0.
Vec2 project(const Vec3& point_cam, const CameraModel& cam);

// Inverse of project at a known depth.
Vec3 backproject(const Vec2& pixel, double depth, const CameraModel& cam);

// Flat key-value text file: fx, fy, cx, cy, r00..r22 row-major, tx, ty, tz.
CameraModel load_camera(const std::string& path);
void save_camera(const CameraModel& cam, const std::string& path);

// Timestamped object position in the camera frame.
struct TrajectorySample {
    double t = 0.0;  // seconds
    Vec3 position;   // meters
};

// Polar impact discretization: 12 theta bins of 30 degrees starting at 0
// measured from +X toward +Y, 4 radius bins with lower-inclusive edges
// {0, 60, 91, 121} mm (last bin open above).
inline constexpr int kNumThetaBins = 12;
inline constexpr int kNumRadiusBins = 4;
inline constexpr double kRadiusBinEdgesMm[4] = {0.0, 60.0, 91.0, 121.0};

int theta_bin_of(double theta_rad);
int radius_bin_of(double radius_m);

struct ImpactInfo {
    double t_impact = 0.0;  // seconds
    Vec2 point;             // meters, camera-plane (X, Y)
    double radius_m = 0.0;
    double theta_rad = 0.0;  // [0, 2*pi)
    int r_bin = 0;
    int theta_bin = 0;
};

ImpactInfo impact_from_point(double t_impact, const Vec2& xy);

// Finds the Z=0 crossing by linear interpolation of the bracketing samples.
// Throws DataError when the trajectory never reaches the camera plane.
ImpactInfo impact_solve(const std::vector<TrajectorySample>& samples);

// (t_i, tau_i) with tau = T_impact - t_i >= 0; post-impact samples dropped.
struct TimeToCollisionLabel {
    double t = 0.0;
    double tau = 0.0;
};
std::vector<TimeToCollisionLabel> label_timesteps(const std::vector<TrajectorySample>& samples,
                                                  double t_impact);

}  // namespace evflight
