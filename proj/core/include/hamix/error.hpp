#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hamix {

enum class ErrorCode {
  kInvalidArgument,
  kMisaligned,
  kIo,
  kNotWav,
  kUnsupportedCodec,
  kTruncatedFile,
  kEmptyAudio,
  kUndefinedLoudness,
  kParse,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error; code() lets callers
// (and the batch runner's per-job records) distinguish the causes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hamix
