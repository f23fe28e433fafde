#include "blastvox/fluidcore/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string>

#include <tbb/global_control.h>

namespace blastvox::parallel {

namespace {

bool envDeterministic() {
  const char* v = std::getenv("BLASTVOX_DETERMINISTIC");
  if (v == nullptr) return true;
  const std::string s(v);
  return !(s == "0" || s == "false" || s == "off");
}

std::atomic<bool>& deterministicFlag() {
  static std::atomic<bool> flag{envDeterministic()};
  return flag;
}

}  // namespace

int configuredWorkers() {
  const char* v = std::getenv("BLASTVOX_THREADS");
  if (v == nullptr) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || n < 0) return 0;
  return static_cast<int>(n);
}

bool deterministicMode() { return deterministicFlag().load(std::memory_order_relaxed); }

void setDeterministicMode(bool on) { deterministicFlag().store(on, std::memory_order_relaxed); }

struct WorkerLimit::Impl {
  std::unique_ptr<tbb::global_control> control;
};

WorkerLimit::WorkerLimit(int workers) : impl_(std::make_unique<Impl>()) {
  if (workers > 0) {
    impl_->control = std::make_unique<tbb::global_control>(
        tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(workers));
  }
}

WorkerLimit::~WorkerLimit() = default;

WorkerLimit fromEnvironment() { return WorkerLimit(configuredWorkers()); }

}  // namespace blastvox::parallel
