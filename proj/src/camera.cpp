#include "evflight/camera.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "evflight/common.hpp"
#include "evflight/config.hpp"

namespace evflight {

Mat3 Mat3::rotation_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += m[i * 3 + k] * o.m[k * 3 + j];
            r.m[i * 3 + j] = acc;
        }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[j * 3 + i] = m[i * 3 + j];
    return r;
}

double Mat3::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool is_rotation(const Mat3& r, double tol) {
    const Mat3 rtr = r.transposed() * r;
    const Mat3 id = Mat3::identity();
    for (int i = 0; i < 9; ++i)
        if (std::abs(rtr.m[i] - id.m[i]) > tol) return false;
    return std::abs(r.det() - 1.0) <= tol;
}

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0))
        throw DataError("camera: focal lengths must be positive");
    if (!is_rotation(world_to_cam.rotation))
        throw DataError("camera: world_to_cam rotation is not orthonormal (det 1, tol 1e-9)");
}

Vec2 project(const Vec3& p, const CameraModel& cam) {
    if (!(p.z > 0.0)) throw DataError("project: point behind camera plane (Z <= 0)");
    return {cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy};
}

Vec3 backproject(const Vec2& px, double depth, const CameraModel& cam) {
    return {(px.x - cam.cx) / cam.fx * depth, (px.y - cam.cy) / cam.fy * depth, depth};
}

CameraModel load_camera(const std::string& path) {
    KeyValueConfig kv = KeyValueConfig::from_file(path);
    CameraModel cam;
    cam.fx = kv.get_double("fx", 0.0);
    cam.fy = kv.get_double("fy", 0.0);
    cam.cx = kv.get_double("cx", 0.0);
    cam.cy = kv.get_double("cy", 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            char key[4] = {'r', char('0' + i), char('0' + j), 0};
            cam.world_to_cam.rotation.m[i * 3 + j] = kv.get_double(key, i == j ? 1.0 : 0.0);
        }
    cam.world_to_cam.translation.x = kv.get_double("tx", 0.0);
    cam.world_to_cam.translation.y = kv.get_double("ty", 0.0);
    cam.world_to_cam.translation.z = kv.get_double("tz", 0.0);
    cam.validate();
    return cam;
}

void save_camera(const CameraModel& cam, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write camera file: " + path);
    char buf[64];
    auto emit = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out << buf;
    };
    emit("fx", cam.fx);
    emit("fy", cam.fy);
    emit("cx", cam.cx);
    emit("cy", cam.cy);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            char key[4] = {'r', char('0' + i), char('0' + j), 0};
            emit(key, cam.world_to_cam.rotation.m[i * 3 + j]);
        }
    emit("tx", cam.world_to_cam.translation.x);
    emit("ty", cam.world_to_cam.translation.y);
    emit("tz", cam.world_to_cam.translation.z);
}

int theta_bin_of(double theta_rad) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double t = std::fmod(theta_rad, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    int bin = int(t / (kTwoPi / kNumThetaBins));
    return bin >= kNumThetaBins ? kNumThetaBins - 1 : bin;  // guard t == 2*pi rounding
}

int radius_bin_of(double radius_m) {
    const double mm = radius_m * 1000.0;
    for (int b = kNumRadiusBins - 1; b > 0; --b)
        if (mm >= kRadiusBinEdgesMm[b]) return b;
    return 0;
}

ImpactInfo impact_from_point(double t_impact, const Vec2& xy) {
    ImpactInfo info;
    info.t_impact = t_impact;
    info.point = xy;
    info.radius_m = std::hypot(xy.x, xy.y);
    double theta = std::atan2(xy.y, xy.x);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    if (theta < 0.0) theta += kTwoPi;
    info.theta_rad = theta;
    info.theta_bin = theta_bin_of(theta);
    info.r_bin = radius_bin_of(info.radius_m);
    return info;
}

ImpactInfo impact_solve(const std::vector<TrajectorySample>& samples) {
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        const double z0 = samples[i].position.z;
        const double z1 = samples[i + 1].position.z;
        const bool crossing = (z0 > 0.0 && z1 <= 0.0) || (z0 < 0.0 && z1 >= 0.0) || z0 == 0.0;
        if (!crossing) continue;
        double lambda = 0.0;
        if (z0 != z1) lambda = z0 / (z0 - z1);
        const TrajectorySample& a = samples[i];
        const TrajectorySample& b = samples[i + 1];
        const double t = a.t + lambda * (b.t - a.t);
        Vec2 xy{a.position.x + lambda * (b.position.x - a.position.x),
                a.position.y + lambda * (b.position.y - a.position.y)};
        return impact_from_point(t, xy);
    }
    throw DataError("impact_solve: trajectory does not reach camera plane");
}

std::vector<TimeToCollisionLabel> label_timesteps(const std::vector<TrajectorySample>& samples,
                                                  double t_impact) {
    std::vector<TimeToCollisionLabel> out;
    out.reserve(samples.size());
    for (const TrajectorySample& s : samples) {
        if (s.t > t_impact) continue;
        out.push_back({s.t, t_impact - s.t});
    }
    return out;
}

}  // namespace evflight
