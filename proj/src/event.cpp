#include "evflight/event.hpp"

#include <cstring>
#include <fstream>

#include "evflight/common.hpp"

namespace evflight {

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

}  // namespace

void validate_stream(const EventStream& stream) {
    uint64_t prev_t = 0;
    for (size_t i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        if (e.x >= stream.width || e.y >= stream.height)
            throw DataError("event out of bounds at index " + std::to_string(i) + ": (" +
                            std::to_string(e.x) + "," + std::to_string(e.y) + ") vs sensor " +
                            std::to_string(stream.width) + "x" + std::to_string(stream.height));
        if (e.polarity != 1 && e.polarity != -1)
            throw DataError("event polarity must be -1 or +1 at index " + std::to_string(i));
        if (i > 0 && e.t_us < prev_t)
            throw DataError("non-monotone timestamps at index " + std::to_string(i));
        prev_t = e.t_us;
    }
}

EventStream read_events(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open event file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());

    if (data.size() < kEvfHeaderBytes)
        throw DataError(path + ": truncated header (" + std::to_string(data.size()) + " bytes)");
    if (std::memcmp(p, kEvfMagic, 4) != 0)
        throw DataError(path + ": bad magic at byte 0");
    const uint16_t version = get_u16(p + 4);
    if (version != kEvfVersion)
        throw DataError(path + ": unsupported version " + std::to_string(version));

    EventStream s;
    s.width = get_u16(p + 6);
    s.height = get_u16(p + 8);
    const uint64_t count = get_u64(p + 10);

    const size_t expected = kEvfHeaderBytes + count * kEvfRecordBytes;
    if (data.size() < expected) {
        const size_t complete = (data.size() - kEvfHeaderBytes) / kEvfRecordBytes;
        throw DataError(path + ": truncated record at byte " +
                        std::to_string(kEvfHeaderBytes + complete * kEvfRecordBytes) + " (have " +
                        std::to_string(complete) + " of " + std::to_string(count) + " events)");
    }

    s.events.resize(count);
    uint64_t prev_t = 0;
    for (uint64_t i = 0; i < count; ++i) {
        const unsigned char* r = p + kEvfHeaderBytes + i * kEvfRecordBytes;
        const size_t offset = kEvfHeaderBytes + i * kEvfRecordBytes;
        Event& e = s.events[i];
        e.x = get_u16(r);
        e.y = get_u16(r + 2);
        const uint8_t pol = r[4];
        if (pol > 1)
            throw DataError(path + ": bad polarity byte at byte " + std::to_string(offset + 4));
        e.polarity = pol ? 1 : -1;
        e.t_us = get_u64(r + 6);
        if (e.x >= s.width || e.y >= s.height)
            throw DataError(path + ": event out of bounds at byte " + std::to_string(offset));
        if (i > 0 && e.t_us < prev_t)
            throw DataError(path + ": non-monotone timestamps at byte " + std::to_string(offset));
        prev_t = e.t_us;
    }
    return s;
}

void write_events(const EventStream& stream, const std::string& path) {
    validate_stream(stream);
    std::string buf;
    buf.reserve(kEvfHeaderBytes + stream.events.size() * kEvfRecordBytes);
    buf.append(kEvfMagic, 4);
    put_u16(buf, kEvfVersion);
    put_u16(buf, stream.width);
    put_u16(buf, stream.height);
    put_u64(buf, stream.events.size());
    buf.append(6, '\0');
    for (const Event& e : stream.events) {
        put_u16(buf, e.x);
        put_u16(buf, e.y);
        buf.push_back(e.polarity > 0 ? char(1) : char(0));
        buf.push_back('\0');
        put_u64(buf, e.t_us);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write event file: " + path);
    out.write(buf.data(), std::streamsize(buf.size()));
    if (!out) throw DataError("short write: " + path);
}

void CountFrame::init(uint16_t w, uint16_t h, uint64_t t0, uint64_t t1) {
    width = w;
    height = h;
    t_start = t0;
    t_end = t1;
    pos.assign(size_t(w) * h, 0);
    neg.assign(size_t(w) * h, 0);
    active.clear();
}

void CountFrame::reset_window(uint64_t t0, uint64_t t1) {
    for (uint32_t idx : active) {
        pos[idx] = 0;
        neg[idx] = 0;
    }
    active.clear();
    t_start = t0;
    t_end = t1;
}

void CountFrame::add(const Event& e) {
    const size_t idx = size_t(e.y) * width + e.x;
    uint16_t& c = (e.polarity > 0) ? pos[idx] : neg[idx];
    if (pos[idx] == 0 && neg[idx] == 0) active.push_back(uint32_t(idx));
    if (c != 0xffff) ++c;  // saturate
}

uint64_t CountFrame::total() const {
    uint64_t n = 0;
    for (uint32_t idx : active) n += uint64_t(pos[idx]) + neg[idx];
    return n;
}

std::vector<CountFrame> bin_events(const EventStream& stream, uint64_t dt_us,
                                   uint64_t t0, uint64_t t1) {
    if (dt_us == 0) throw DataError("bin_events: dt must be positive");
    if (t0 > t1) throw DataError("bin_events: t0 must not exceed t1");
    const uint64_t n_frames = (t1 - t0 + dt_us - 1) / dt_us;
    std::vector<CountFrame> frames(n_frames);
    for (uint64_t k = 0; k < n_frames; ++k)
        frames[k].init(stream.width, stream.height, t0 + k * dt_us, t0 + (k + 1) * dt_us);
    for (const Event& e : stream.events) {
        if (e.t_us < t0 || e.t_us >= t1) continue;
        frames[(e.t_us - t0) / dt_us].add(e);
    }
    return frames;
}

}  // namespace evflight
