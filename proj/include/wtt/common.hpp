#ifndef WTT_COMMON_HPP
#define WTT_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wtt {

// Seconds since epoch.
using Timestamp = std::int64_t;

// Input that does not satisfy a module's parameter invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent data (unsorted traces, singular degree matrix, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.3.1";

}  // namespace wtt

#endif
