#include "hamix/error.hpp"

namespace hamix {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kMisaligned: return "misaligned";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNotWav: return "not_wav";
    case ErrorCode::kUnsupportedCodec: return "unsupported_codec";
    case ErrorCode::kTruncatedFile: return "truncated_file";
    case ErrorCode::kEmptyAudio: return "empty_audio";
    case ErrorCode::kUndefinedLoudness: return "undefined_loudness";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

}  // namespace hamix
