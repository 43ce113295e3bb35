#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vsa {

enum class ErrorCode {
    unreachable,
    singular,
    missing_angles,
    too_short,
    channel_mismatch,
    empty_template,
    degenerate,
    layout_mismatch,
    length_mismatch,
    insufficient_genuine,
    empty_scores,
    parse_error,
    missing_manifest,
    invalid_argument,
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. `code()` is stable and is what
/// the CLI writes into its machine-readable error record.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Law-of-cosines argument out of range. Carries the trajectory sample index
/// once extraction has attached it.
class UnreachableError : public Error {
public:
    explicit UnreachableError(const std::string& message,
                              std::optional<std::size_t> sample = std::nullopt)
        : Error(ErrorCode::unreachable, message), sample_(sample) {}

    std::optional<std::size_t> sample() const noexcept { return sample_; }

private:
    std::optional<std::size_t> sample_;
};

class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& reason)
        : Error(ErrorCode::parse_error,
                file + ":" + std::to_string(line) + ": " + reason),
          file_(std::move(file)), line_(line), reason_(reason) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string file_;
    std::size_t line_;
    std::string reason_;
};

}  // namespace vsa
