#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace evflight {

// Flat "key = value" config with section-prefixed keys (sim.*, filter.*, ...).
// Canonical rendering (sorted keys) keeps run manifests trivially diffable.
class KeyValueConfig {
  public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list of reals.
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;

    // Throws UsageError naming the offenders and listing valid keys.
    void require_known_keys(const std::set<std::string>& valid) const;

    std::string render() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

// Every command writes one of these next to its outputs; re-running with an
// identical manifest must reproduce the outputs byte for byte.
struct RunManifest {
    std::string command;
    uint64_t seed = 0;
    KeyValueConfig resolved;

    void write(const std::string& path) const;
};

}  // namespace evflight
