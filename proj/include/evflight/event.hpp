#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evflight {

// One sensor event. Polarity is exposed as -1/+1 (sign of the light change);
// the on-disk encoding is 0/1.
struct Event {
    uint16_t x = 0;
    uint16_t y = 0;
    int8_t polarity = 1;  // +1 or -1
    uint64_t t_us = 0;
};

struct EventStream {
    uint16_t width = 0;
    uint16_t height = 0;
    std::vector<Event> events;  // sorted non-decreasing in t_us, all in bounds

    size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
};

// Throws DataError on out-of-bounds pixels, bad polarity, or non-monotone t.
void validate_stream(const EventStream& stream);

// .evf binary format, little-endian, fixed 14-byte records:
//   header: magic "EVF1", version u16, width u16, height u16, count u64,
//           reserved 6 bytes (zero) -- 24 bytes total
//   record: x u16, y u16, p u8 (0/1), pad u8, t u64
EventStream read_events(const std::string& path);
void write_events(const EventStream& stream, const std::string& path);

inline constexpr char kEvfMagic[4] = {'E', 'V', 'F', '1'};
inline constexpr uint16_t kEvfVersion = 1;
inline constexpr size_t kEvfHeaderBytes = 24;
inline constexpr size_t kEvfRecordBytes = 14;

// Per-pixel event counts over one time window, split by polarity. Counts
// saturate at 65535; wraparound would silently corrupt filter input.
struct CountFrame {
    uint64_t t_start = 0;
    uint64_t t_end = 0;
    uint16_t width = 0;
    uint16_t height = 0;
    std::vector<uint16_t> pos;     // row-major, height*width
    std::vector<uint16_t> neg;
    std::vector<uint32_t> active;  // unique linear indices with any count

    void init(uint16_t w, uint16_t h, uint64_t t0, uint64_t t1);
    // Keeps the allocation, zeroes only previously active pixels.
    void reset_window(uint64_t t0, uint64_t t1);
    void add(const Event& e);

    uint16_t pos_at(uint16_t x, uint16_t y) const { return pos[size_t(y) * width + x]; }
    uint16_t neg_at(uint16_t x, uint16_t y) const { return neg[size_t(y) * width + x]; }
    uint64_t total() const;
};

// Frame k covers [t0 + k*dt, t0 + (k+1)*dt); events at t >= t1 are excluded.
std::vector<CountFrame> bin_events(const EventStream& stream, uint64_t dt_us,
                                   uint64_t t0, uint64_t t1);

}  // namespace evflight
