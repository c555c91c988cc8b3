#include "evflight/filterbank.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#include "evflight/common.hpp"

namespace evflight {

std::vector<double> default_time_constants_us() {
    return {200.0, 477.0, 1130.0, 2710.0, 6470.0, 15440.0, 36840.0, 87871.0, 200000.0, 500000.0};
}

std::vector<double> alphas_from_time_constants(const std::vector<double>& time_constants_us,
                                               uint64_t dt_us) {
    if (time_constants_us.empty()) throw DataError("filterbank: no time constants");
    std::vector<double> alphas;
    alphas.reserve(time_constants_us.size());
    double prev = 0.0;
    for (double t : time_constants_us) {
        if (t < double(dt_us))
            throw DataError("filterbank: time constant " + std::to_string(t) +
                            " us is below the step " + std::to_string(dt_us) + " us");
        if (t <= prev) throw DataError("filterbank: time constants must be strictly increasing");
        prev = t;
        const double a = std::exp(-double(dt_us) / t);
        if (!(a > 0.0 && a < 1.0)) throw DataError("filterbank: alpha out of (0,1)");
        alphas.push_back(a);
    }
    return alphas;
}

void FilterBankConfig::validate() const {
    alphas();  // throws on bad constants
    if (dt_us == 0) throw DataError("filterbank: dt must be positive");
    if (output_period_us == 0 || output_period_us % dt_us != 0)
        throw DataError("filterbank: output period must be a positive multiple of dt");
    if (!(x_cap > 0.0)) throw DataError("filterbank: x_cap must be positive");
    if (crop_width == 0 || crop_height == 0) throw DataError("filterbank: empty crop");
}

FilterBank::FilterBank(const FilterBankConfig& config, uint16_t sensor_width,
                       uint16_t sensor_height, uint64_t t_start_us)
    : config_(config), width_(sensor_width), height_(sensor_height), t_now_(t_start_us) {
    config_.validate();
    if (sensor_width < 2 * config_.crop_width || sensor_height < 2 * config_.crop_height)
        throw DataError("filterbank: sensor " + std::to_string(sensor_width) + "x" +
                        std::to_string(sensor_height) + " smaller than the " +
                        std::to_string(2 * config_.crop_width) + "x" +
                        std::to_string(2 * config_.crop_height) + " region needed");
    const auto alphas = config_.alphas();
    channels_.resize(config_.channels());
    const size_t npix = size_t(width_) * height_;
    for (int c = 0; c < config_.channels(); ++c) {
        channels_[c].alpha = alphas[c % config_.num_scales()];
        channels_[c].z.assign(npix, 0.0);
    }
}

void FilterBank::renormalize(Channel& ch) const {
    const double s = ch.scale;
    for (double& v : ch.z) {
        v *= s;
        if (v < 1e-300) v = 0.0;  // flush: value already decayed to nothing
    }
    ch.scale = 1.0;
}

void FilterBank::step(const CountFrame& frame) {
    if (frame.width != width_ || frame.height != height_)
        throw DataError("filterbank: frame dimensions mismatch");
    if (frame.t_start != t_now_ || frame.t_end != t_now_ + config_.dt_us)
        throw DataError("filterbank: frame window [" + std::to_string(frame.t_start) + "," +
                        std::to_string(frame.t_end) + ") does not cover [" +
                        std::to_string(t_now_) + "," + std::to_string(t_now_ + config_.dt_us) +
                        ")");
    const int scales = config_.num_scales();
    const double cap = config_.x_cap;
    for (int c = 0; c < 2 * scales; ++c) {
        Channel& ch = channels_[c];
        ch.scale *= ch.alpha;
        if (ch.scale < 1e-120) renormalize(ch);
        const bool positive = c < scales;
        const double gain = (1.0 - ch.alpha) / ch.scale;
        const auto& counts = positive ? frame.pos : frame.neg;
        for (uint32_t idx : frame.active) {
            const uint16_t n = counts[idx];
            if (n == 0) continue;
            ch.z[idx] += gain * std::min(double(n), cap);
        }
    }
    t_now_ += config_.dt_us;
}

double FilterBank::value(int channel, uint16_t x, uint16_t y) const {
    const Channel& ch = channels_.at(size_t(channel));
    return ch.scale * ch.z[size_t(y) * width_ + x];
}

SampleTensor FilterBank::snapshot() const {
    SampleTensor out;
    out.channels = uint16_t(config_.channels());
    out.height = config_.crop_height;
    out.width = config_.crop_width;
    out.t_us = t_now_;
    out.data.resize(size_t(out.channels) * out.height * out.width);

    // Center crop in the pooled (half-resolution) grid.
    const int pooled_w = width_ / 2;
    const int pooled_h = height_ / 2;
    const int x0 = (pooled_w - config_.crop_width) / 2;
    const int y0 = (pooled_h - config_.crop_height) / 2;
    const double inv_cap = 1.0 / config_.x_cap;

    uint8_t* dst = out.data.data();
    for (const Channel& ch : channels_) {
        const double k = ch.scale * 0.25 * inv_cap;  // fold scale into the pool+quantize constant
        const double* z = ch.z.data();
        for (int r = 0; r < config_.crop_height; ++r) {
            const size_t row0 = size_t(2 * (y0 + r)) * width_ + size_t(2 * x0);
            const size_t row1 = row0 + width_;
            for (int c = 0; c < config_.crop_width; ++c) {
                const size_t i = size_t(2 * c);
                double v = (z[row0 + i] + z[row0 + i + 1] + z[row1 + i] + z[row1 + i + 1]) * k;
                if (v > 1.0) v = 1.0;
                *dst++ = uint8_t(std::lround(v * 255.0));
            }
        }
    }
    return out;
}

uint64_t run_filterbank(const EventStream& stream, FilterBank& bank, uint64_t t_end_us,
                        const std::function<void(const FilterBank&, uint64_t)>& on_snapshot) {
    const uint64_t dt = bank.config().dt_us;
    const uint64_t period = bank.config().output_period_us;
    const uint64_t t0 = bank.now_us();
    if (t_end_us < t0) throw DataError("run_filterbank: end before start");

    CountFrame frame;
    frame.init(bank.sensor_width(), bank.sensor_height(), t0, t0 + dt);
    size_t cursor = 0;
    const auto& events = stream.events;
    while (cursor < events.size() && events[cursor].t_us < t0) ++cursor;

    uint64_t fed = 0;
    for (uint64_t t = t0; t + dt <= t_end_us; t += dt) {
        frame.reset_window(t, t + dt);
        while (cursor < events.size() && events[cursor].t_us < t + dt) {
            frame.add(events[cursor]);
            ++cursor;
            ++fed;
        }
        bank.step(frame);
        if (on_snapshot && (t + dt - t0) % period == 0) on_snapshot(bank, t + dt);
    }
    return fed;
}

ThroughputReport measure_throughput(const EventStream& stream, const FilterBankConfig& config) {
    if (stream.empty()) throw DataError("throughput: empty stream");
    const uint64_t t_end = ((stream.events.back().t_us / config.dt_us) + 1) * config.dt_us;
    FilterBank bank(config, stream.width, stream.height, 0);
    ThroughputReport rep;
    const auto start = std::chrono::steady_clock::now();
    rep.events = run_filterbank(stream, bank, t_end, nullptr);
    const auto stop = std::chrono::steady_clock::now();
    rep.steps = t_end / config.dt_us;
    rep.seconds = std::chrono::duration<double>(stop - start).count();
    rep.events_per_second = rep.seconds > 0.0 ? double(rep.events) / rep.seconds : 0.0;
    return rep;
}

SampleTensor binned_snapshot(const EventStream& stream, const BinnedEncoderConfig& config,
                             uint64_t t_us) {
    if (stream.width < 2 * config.crop_width || stream.height < 2 * config.crop_height)
        throw DataError("binned encoder: sensor smaller than the crop region needed");
    const uint64_t t0 = t_us >= config.bin_us ? t_us - config.bin_us : 0;

    std::vector<CountFrame> frames = bin_events(stream, std::max<uint64_t>(t_us - t0, 1), t0, t_us);
    const CountFrame* frame = frames.empty() ? nullptr : &frames.front();

    SampleTensor out;
    out.channels = 2;
    out.height = config.crop_height;
    out.width = config.crop_width;
    out.t_us = t_us;
    out.data.assign(size_t(2) * out.height * out.width, 0);

    const int pooled_w = stream.width / 2;
    const int pooled_h = stream.height / 2;
    const int x0 = (pooled_w - config.crop_width) / 2;
    const int y0 = (pooled_h - config.crop_height) / 2;
    const double k = 0.25 / config.x_cap;

    if (!frame) return out;
    uint8_t* dst = out.data.data();
    for (int pol = 0; pol < 2; ++pol) {
        const auto& counts = pol == 0 ? frame->pos : frame->neg;
        for (int r = 0; r < config.crop_height; ++r) {
            const size_t row0 = size_t(2 * (y0 + r)) * stream.width + size_t(2 * x0);
            const size_t row1 = row0 + stream.width;
            for (int c = 0; c < config.crop_width; ++c) {
                const size_t i = size_t(2 * c);
                double v = (double(counts[row0 + i]) + counts[row0 + i + 1] + counts[row1 + i] +
                            counts[row1 + i + 1]) * k;
                if (v > 1.0) v = 1.0;
                *dst++ = uint8_t(std::lround(v * 255.0));
            }
        }
    }
    return out;
}

namespace {

void put_u16(std::string& buf, uint16_t v) {
    buf.push_back(char(v & 0xff));
    buf.push_back(char(v >> 8));
}

void put_u64(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

uint16_t get_u16(const unsigned char* p) { return uint16_t(p[0] | (p[1] << 8)); }

uint64_t get_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

constexpr size_t kSmpHeaderBytes = 24;

}  // namespace

SampleTensor read_sample(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open sample file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < kSmpHeaderBytes) throw DataError(path + ": truncated sample header");
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());

    SampleTensor s;
    s.channels = get_u16(p);
    s.height = get_u16(p + 2);
    s.width = get_u16(p + 4);
    s.t_us = get_u64(p + 6);
    uint64_t tau_bits = get_u64(p + 14);
    std::memcpy(&s.tau_ms, &tau_bits, 8);
    s.r_bin = p[22];
    s.theta_bin = p[23];

    const size_t n = size_t(s.channels) * s.height * s.width;
    if (data.size() != kSmpHeaderBytes + n)
        throw DataError(path + ": sample payload size mismatch (expected " + std::to_string(n) +
                        " bytes, have " + std::to_string(data.size() - kSmpHeaderBytes) + ")");
    s.data.assign(p + kSmpHeaderBytes, p + kSmpHeaderBytes + n);
    return s;
}

void write_sample(const SampleTensor& s, const std::string& path) {
    std::string buf;
    buf.reserve(kSmpHeaderBytes + s.data.size());
    put_u16(buf, s.channels);
    put_u16(buf, s.height);
    put_u16(buf, s.width);
    put_u64(buf, s.t_us);
    uint64_t tau_bits = 0;
    std::memcpy(&tau_bits, &s.tau_ms, 8);
    put_u64(buf, tau_bits);
    buf.push_back(char(s.r_bin));
    buf.push_back(char(s.theta_bin));
    buf.append(reinterpret_cast<const char*>(s.data.data()), s.data.size());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write sample file: " + path);
    out.write(buf.data(), std::streamsize(buf.size()));
    if (!out) throw DataError("short write: " + path);
}

}  // namespace evflight
