#include "skewstream/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace skewstream::log {

namespace {

Level from_env() {
    const char* raw = std::getenv("SKEWSTREAM_LOG");
    if (raw == nullptr) return Level::warn;
    const std::string v(raw);
    if (v == "debug") return Level::debug;
    if (v == "info") return Level::info;
    if (v == "error") return Level::error;
    if (v == "off") return Level::off;
    return Level::warn;
}

std::atomic<Level>& current() {
    static std::atomic<Level> level{from_env()};
    return level;
}

constexpr const char* kNames[] = {"debug", "info", "warn", "error"};

}  // namespace

Level threshold() { return current().load(std::memory_order_relaxed); }

void set_threshold(Level level) { current().store(level, std::memory_order_relaxed); }

void write(Level level, std::string_view message) {
    if (level < threshold() || level == Level::off) return;
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << "[skewstream " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace skewstream::log
