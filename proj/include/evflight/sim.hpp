#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evflight/camera.hpp"
#include "evflight/config.hpp"
#include "evflight/event.hpp"

namespace evflight {

enum class ObjectKind { ball, dart };

const char* to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& s);

struct ObjectSpec {
    ObjectKind kind = ObjectKind::ball;
    double radius_m = 0.025;  // ball radius, or dart shaft radius (default 2 cm diameter)
    double length_m = 0.0;    // dart body length

    static ObjectSpec ball(double radius_m = 0.025);
    static ObjectSpec dart(double radius_m = 0.01, double length_m = 0.12);
    void validate() const;
};

// Contrast-event emission model; the silhouette occupancy change is the
// event source (high-contrast object against a static background).
struct SimConfig {
    int events_per_crossing = 1;
    bool leading_positive = true;   // newly covered pixels emit +1
    double noise_rate_hz_per_px = 0.1;
    uint64_t micro_dt_us = 100;     // must stay at or below the 200 us filter step
    double timestamp_jitter = 1.0;  // fraction of micro step used for event time jitter
    uint64_t seed = 1;

    void validate() const;
};

// Linear interpolation, clamped at the ends.
Vec3 trajectory_position_at(const std::vector<TrajectorySample>& samples, double t);

// Free fall toward the camera plane: Z(t) = h - g/2 t^2, X/Y drift linearly.
// Sampled at 1 kHz (phase-jittered by seed) until just past the Z=0 crossing.
std::vector<TrajectorySample> gen_ball_trajectory(double drop_height_m, Vec2 lateral_offset_m,
                                                  Vec2 lateral_velocity_mps, uint64_t seed,
                                                  double min_height_m = 0.4,
                                                  double max_height_m = 1.2);

// Near-straight shot at the camera with gravity sag, aimed so the Z=0
// crossing lands at aim_point. Sampled at 10 kHz.
std::vector<TrajectorySample> gen_dart_trajectory(double speed_mps, Vec2 aim_point_m,
                                                  double launch_distance_m, uint64_t seed,
                                                  double min_speed_mps = 16.0,
                                                  double max_speed_mps = 23.4);

struct SynthesisResult {
    EventStream stream;
    bool object_visible = false;
    uint64_t signal_events = 0;
    uint64_t noise_events = 0;
    uint64_t occupancy_changes = 0;  // covered + uncovered pixel transitions
};

// Rasterizes the projected silhouette (disk for ball, capsule for dart) at
// each micro step; occupancy changes emit events, Poisson background noise is
// added, output is sorted by timestamp.
SynthesisResult synthesize_events(const std::vector<TrajectorySample>& trajectory,
                                  const ObjectSpec& object, const CameraModel& cam,
                                  uint16_t sensor_width, uint16_t sensor_height,
                                  const SimConfig& sim);

struct Recording {
    std::string name;
    ObjectKind kind = ObjectKind::ball;
    EventStream stream;
    std::vector<TrajectorySample> trajectory;
    ImpactInfo impact;
    std::vector<TimeToCollisionLabel> labels;
    CameraModel camera;
    KeyValueConfig meta;
};

// Scene-level knobs shared by dataset generation.
struct SceneConfig {
    CameraModel camera;
    uint16_t sensor_width = 640;
    uint16_t sensor_height = 480;
    ObjectSpec object;
    SimConfig sim;

    // ball parameter ranges
    double drop_height_min_m = 0.4;
    double drop_height_max_m = 1.2;
    double lateral_speed_max_mps = 0.3;
    // dart parameter ranges
    double dart_speed_min_mps = 16.0;
    double dart_speed_max_mps = 23.4;
    double dart_distance_min_m = 0.6;
    double dart_distance_max_m = 1.0;
    double dart_duration_min_s = 0.026;
    double dart_duration_max_s = 0.046;
    // impact points are sampled in this disk around the camera origin
    double impact_disk_radius_m = 0.16;

    static SceneConfig full_scale(ObjectKind kind);
    static SceneConfig desk_scale(ObjectKind kind);  // quarter-scale sensor, 60x60 profile
};

struct Dataset {
    std::vector<Recording> recordings;
    std::vector<int> train_indices;
    std::vector<int> test_indices;
};

// Whole-trajectory 80/20 split, test share rounded up. Deterministic in seed.
Dataset build_dataset(int n_trajectories, ObjectKind kind, const SceneConfig& scene,
                      uint64_t split_seed);

// Recording directory layout:
//   events.evf, trajectory.csv (t,x,y,z), labels.csv (t,tau,r_bin,theta_bin),
//   camera.txt, meta.txt
void save_recording(const Recording& rec, const std::string& dir);
Recording load_recording(const std::string& dir);

}  // namespace evflight
