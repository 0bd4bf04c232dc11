#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iota {

enum class ErrorCode {
  NotAComplex,
  MixedCoset,
  TruncationTooSmall,
  NotLocal,
  ParityViolation,
  SearchCapExceeded,
  InvalidInput,
  InvalidRoot,
  BadResidue,
  InvalidStaircase,
  Unsorted,
  TruncationUnstable,
};

constexpr std::string_view error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::MixedCoset: return "MixedCoset";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::NotLocal: return "NotLocal";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::SearchCapExceeded: return "SearchCapExceeded";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidRoot: return "InvalidRoot";
    case ErrorCode::BadResidue: return "BadResidue";
    case ErrorCode::InvalidStaircase: return "InvalidStaircase";
    case ErrorCode::Unsorted: return "Unsorted";
    case ErrorCode::TruncationUnstable: return "TruncationUnstable";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iota
