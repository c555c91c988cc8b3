#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evflight/event.hpp"

namespace evflight {

// The ten encoding periods, microseconds, fastest first.
std::vector<double> default_time_constants_us();

// alpha_i = exp(-dt/T_i). Throws DataError for T < dt or a non-increasing list.
std::vector<double> alphas_from_time_constants(const std::vector<double>& time_constants_us,
                                               uint64_t dt_us);

struct FilterBankConfig {
    std::vector<double> time_constants_us = default_time_constants_us();
    uint64_t dt_us = 200;             // filter update step
    uint64_t output_period_us = 3000; // snapshot cadence (3 ms ball, 1 ms dart)
    uint16_t crop_width = 240;
    uint16_t crop_height = 240;
    double x_cap = 4.0;               // per-pixel per-step input cap

    int num_scales() const { return int(time_constants_us.size()); }
    int channels() const { return 2 * num_scales(); }
    void validate() const;
    std::vector<double> alphas() const { return alphas_from_time_constants(time_constants_us, dt_us); }
};

// Quantized network input plus labels.
// File format .smp: header (channels u16, H u16, W u16, t_us u64, tau_ms f64,
// r_bin u8, theta_bin u8) followed by raw channel-major bytes.
struct SampleTensor {
    uint16_t channels = 0;
    uint16_t height = 0;
    uint16_t width = 0;
    uint64_t t_us = 0;
    double tau_ms = 0.0;
    uint8_t r_bin = 0;
    uint8_t theta_bin = 0;
    std::vector<uint8_t> data;  // channels * height * width

    uint8_t at(int c, int y, int x) const {
        return data[(size_t(c) * height + y) * width + x];
    }
};

SampleTensor read_sample(const std::string& path);
void write_sample(const SampleTensor& sample, const std::string& path);

// Per-pixel, per-polarity first-order lowpass bank: y[n] = a*y[n-1] + (1-a)*x[n],
// evaluated at full sensor resolution on capped event counts.
//
// Channel layout: 0..S-1 positive polarity (fastest scale first), S..2S-1
// negative polarity.
//
// Internally each channel stores y = scale * z with one shared scale factor;
// a step costs O(active pixels) instead of O(grid), and the scale folds into
// the snapshot quantization constant. The scale is renormalized into the grid
// before it can underflow.
class FilterBank {
  public:
    FilterBank(const FilterBankConfig& config, uint16_t sensor_width, uint16_t sensor_height,
               uint64_t t_start_us = 0);

    // Frame must cover exactly [now, now + dt) and match sensor dimensions.
    void step(const CountFrame& frame);

    // Current filter value; materializes scale * z.
    double value(int channel, uint16_t x, uint16_t y) const;

    // 2x2 average pool, center crop, q = round(255 * clamp(y / x_cap, 0, 1)).
    // Labels are left zeroed for the caller to fill in.
    SampleTensor snapshot() const;

    uint64_t now_us() const { return t_now_; }
    uint16_t sensor_width() const { return width_; }
    uint16_t sensor_height() const { return height_; }
    const FilterBankConfig& config() const { return config_; }

  private:
    struct Channel {
        double alpha = 0.0;
        double scale = 1.0;
        std::vector<double> z;
    };

    void renormalize(Channel& ch) const;

    FilterBankConfig config_;
    uint16_t width_ = 0;
    uint16_t height_ = 0;
    uint64_t t_now_ = 0;
    std::vector<Channel> channels_;
};

// Drives a bank over a stream in dt steps from t_start to t_end, calling
// on_snapshot at every multiple of output_period (after that step). Returns
// the number of events fed to the bank.
uint64_t run_filterbank(const EventStream& stream, FilterBank& bank, uint64_t t_end_us,
                        const std::function<void(const FilterBank&, uint64_t)>& on_snapshot);

// Events/second sustained through the bin+step path (no snapshots).
struct ThroughputReport {
    uint64_t events = 0;
    double seconds = 0.0;
    double events_per_second = 0.0;
    uint64_t steps = 0;
};
ThroughputReport measure_throughput(const EventStream& stream, const FilterBankConfig& config);

// The no-filter ablation arm: raw event counts binned over a fixed trailing
// window, same downscale/crop/quantization, 2 channels (pos, neg).
struct BinnedEncoderConfig {
    uint64_t bin_us = 477;
    uint16_t crop_width = 240;
    uint16_t crop_height = 240;
    double x_cap = 4.0;
};

SampleTensor binned_snapshot(const EventStream& stream, const BinnedEncoderConfig& config,
                             uint64_t t_us);

}  // namespace evflight
