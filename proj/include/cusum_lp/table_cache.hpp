#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <thread>

#include "cusum_lp/limit_laws.hpp"
#include "cusum_lp/table.hpp"

namespace cusum_lp {

/// Cache location: $CUSUM_LP_CACHE_DIR, else $XDG_CACHE_HOME/cusum-lp, else
/// $HOME/.cache/cusum-lp. Empty when none of them is set.
inline std::optional<std::filesystem::path> default_cache_directory() {
  if (const char* dir = std::getenv("CUSUM_LP_CACHE_DIR"); dir && *dir) return std::filesystem::path(dir);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "cusum-lp";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "cusum-lp";
  }
  return std::nullopt;
}

/// Everything that determines a simulated sample. The bridge grid only
/// matters for the general law; the Wiener-tail laws carry their grid step.
inline json sample_identity(const law_family& law, std::size_t grid, std::size_t reps, std::uint64_t seed) {
  if (!std::holds_alternative<general_law>(law)) grid = 0;
  json id;
  id["tool_version"] = tool_version;
  id["format_version"] = table_format_version;
  id["law"] = to_json(law);
  id["grid"] = grid;
  id["reps"] = reps;
  id["seed"] = seed;
  return id;
}

/// FNV-1a over the canonical dump of the identity.
inline std::string cache_key(const json& identity) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : identity.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

/// Exclusive lock held through an O_EXCL lock file.
class file_lock {
 public:
  explicit file_lock(std::filesystem::path path) : path_(std::move(path)) {
    using namespace std::chrono_literals;
    const auto deadline = std::chrono::steady_clock::now() + 10min;
    for (;;) {
      const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        ::close(fd);
        return;
      }
      if (std::chrono::steady_clock::now() > deadline) {
        // presumed stale: a writer died holding it
        std::filesystem::remove(path_);
        continue;
      }
      std::this_thread::sleep_for(50ms);
    }
  }
  ~file_lock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  file_lock(const file_lock&) = delete;
  file_lock& operator=(const file_lock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace detail

struct cache_result {
  limit_sample sample;
  bool hit = false;
  std::optional<std::filesystem::path> file;
};

/// Returns the cached sample for `identity`, or runs `make` and stores its result.
/// Unreadable or mismatching cache files are regenerated.
inline cache_result cached_sample(const json& identity, const std::function<limit_sample()>& make,
                                  const std::optional<std::filesystem::path>& dir) {
  if (!dir) return {make(), false, std::nullopt};
  std::error_code ec;
  std::filesystem::create_directories(*dir, ec);
  if (ec) return {make(), false, std::nullopt};

  const auto file = *dir / ("sample-" + cache_key(identity) + ".csv");
  detail::file_lock lock(file.string() + ".lock");
  if (std::ifstream in(file); in) {
    try {
      auto sample = read_sample(in);
      if (sample_identity(sample.family, sample.grid_size, sample.replications, sample.seed) == identity) {
        return {std::move(sample), true, file};
      }
    } catch (const std::exception&) {
      // fall through and regenerate
    }
  }
  auto sample = make();
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    write_sample(out, sample);
    if (!out) return {std::move(sample), false, std::nullopt};
  }
  std::filesystem::rename(tmp, file, ec);
  return {std::move(sample), false, ec ? std::nullopt : std::optional(file)};
}

}  // namespace cusum_lp
