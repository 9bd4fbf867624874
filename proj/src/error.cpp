#include "vortex/error.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace vortex {
namespace {

std::mutex warnings_mutex;
std::vector<std::string> pending_warnings;

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(warnings_mutex);
  if (std::find(pending_warnings.begin(), pending_warnings.end(), message) != pending_warnings.end()) return;
  std::cerr << "warning: " << message << '\n';
  pending_warnings.push_back(message);
}

std::vector<std::string> take_warnings() {
  std::lock_guard lock(warnings_mutex);
  return std::exchange(pending_warnings, {});
}

}  // namespace vortex
