#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stance {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class LeakageError : public Error {
public:
    using Error::Error;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration (the CLI maps this to exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class StanceLabel : std::uint8_t { Support = 0, Deny = 1, Query = 2, Comment = 3 };

inline constexpr std::size_t kNumLabels = 4;
inline constexpr std::array<StanceLabel, kNumLabels> kAllLabels{
    StanceLabel::Support, StanceLabel::Deny, StanceLabel::Query, StanceLabel::Comment};

constexpr std::size_t index_of(StanceLabel l) noexcept { return static_cast<std::size_t>(l); }

std::string_view to_string(StanceLabel label) noexcept;

/// Case-insensitive; accepts support/deny/query/comment and the
/// supporting/denying/questioning/commenting synonyms.
std::optional<StanceLabel> parse_label(std::string_view text) noexcept;

std::string to_lower_ascii(std::string_view s);

// --- hashing -------------------------------------------------------------

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b));
}

std::string to_hex(std::uint64_t v);
std::optional<std::uint64_t> from_hex(std::string_view s) noexcept;

// --- logging -------------------------------------------------------------

namespace log {

enum class Level { Info, Warning };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink (default writes to stderr); returns the old one.
Sink set_sink(Sink sink);

void info(std::string_view message);
void warn(std::string_view message);

}  // namespace log

}  // namespace stance
