#pragma once

#include <string>
#include <vector>

#include "mid/complexity.hpp"
#include "mid/compressor.hpp"

namespace mid {

struct ExternalCommand {
  std::vector<std::string> argv;   // argv[0] resolved via PATH
  double timeout_seconds = 60.0;
};

// Split on whitespace; no quoting — compressor invocations are simple.
ExternalCommand parse_command(const std::string& spec, double timeout_seconds);

// Stdin/stdout filter adapter: the input is piped to the process and the
// size of its stdout is the complexity. Errors carry the exit status and a
// stderr excerpt. Nondeterministic filters are refused by audit().
class ExternalCompressor final : public ComplexitySource {
 public:
  explicit ExternalCompressor(ExternalCommand cmd);

  double size_bits(const Bytes& data) override;
  std::string id() const override { return id_; }
  CompressorProfile profile() const;

  // Raw single run, no policy checks on the output size.
  Bytes run_once(const Bytes& input) const;

  // Compress `sample` twice; throws ProcessError("nondeterministic
  // compressor ...") when the outputs differ.
  void audit_determinism(const Bytes& sample) const;

 private:
  ExternalCommand cmd_;
  std::string id_;
};

}  // namespace mid
