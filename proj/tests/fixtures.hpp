#pragma once

#include <filesystem>
#include <string>
#include <unistd.h>

#include "adlmine/ingest.hpp"

namespace adlmine::testing {

inline Instant at(const char* iso) { return parse_instant(iso); }

inline SensorEvent contact(const char* sensor, const char* when, double v = 1.0, const char* pid = "P1") {
  return SensorEvent{pid, sensor, parse_instant(when), SensorKind::Contact, std::nullopt, v};
}
inline SensorEvent motion(const char* sensor, const char* when, const char* pid = "P1") {
  return SensorEvent{pid, sensor, parse_instant(when), SensorKind::Motion, std::nullopt, 1.0};
}
inline SensorEvent plug(const char* sensor, const char* when, double watts, const char* pid = "P1") {
  return SensorEvent{pid, sensor, parse_instant(when), SensorKind::SmartPlug, std::nullopt, watts};
}
inline SensorEvent multi(const char* sensor, Channel ch, const char* when, double v, const char* pid = "P1") {
  return SensorEvent{pid, sensor, parse_instant(when), SensorKind::MultiEnvironment, ch, v};
}

// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(std::filesystem::temp_directory_path() / ("adlmine_test_" + tag + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace adlmine::testing
