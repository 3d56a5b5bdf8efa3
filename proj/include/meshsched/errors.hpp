#pragma once

#include <stdexcept>
#include <string>

namespace meshsched {

// Failure kinds that callers may need to dispatch on. The sweep harness
// records the name of the code in a per-row status column instead of
// aborting, so failed instances stay visible in the output as data.
enum class errc {
  generation_budget_exhausted,
  pairing_exhausted,
  period_not_found,
  not_converged,
  zero_throughput_window,
  buffer_overflow_attempt,
  instance_too_large,
  insufficient_samples,
  missing_artifacts,
  bad_input,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::generation_budget_exhausted: return "generation-budget-exhausted";
    case errc::pairing_exhausted: return "pairing-exhausted";
    case errc::period_not_found: return "period-not-found";
    case errc::not_converged: return "not-converged";
    case errc::zero_throughput_window: return "zero-throughput-window";
    case errc::buffer_overflow_attempt: return "buffer-overflow-attempt";
    case errc::instance_too_large: return "instance-too-large";
    case errc::insufficient_samples: return "insufficient-samples";
    case errc::missing_artifacts: return "missing-artifacts";
    case errc::bad_input: return "bad-input";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace meshsched
