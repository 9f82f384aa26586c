#pragma once

#include <string>

#include "mid/bytes.hpp"

namespace mid {

enum class EstimateMode {
  unconditional,
  conditional_via_soi,
  exact_bounded,
};

const char* estimate_mode_name(EstimateMode m);

struct ComplexityEstimate {
  double bits = 0.0;  // >= 0
  std::string source;
  EstimateMode mode = EstimateMode::unconditional;
};

// Anything that can assign a bit cost to a byte string. Implementations must
// be deterministic: equal input, equal result.
class ComplexitySource {
 public:
  virtual ~ComplexitySource() = default;
  virtual double size_bits(const Bytes& data) = 0;
  virtual std::string id() const = 0;
};

}  // namespace mid
