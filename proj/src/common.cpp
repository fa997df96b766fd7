#include "stance/common.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <mutex>

namespace stance {

std::string_view to_string(StanceLabel label) noexcept {
    switch (label) {
        case StanceLabel::Support: return "support";
        case StanceLabel::Deny: return "deny";
        case StanceLabel::Query: return "query";
        case StanceLabel::Comment: return "comment";
    }
    return "?";
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::optional<StanceLabel> parse_label(std::string_view text) noexcept {
    const std::string s = to_lower_ascii(text);
    if (s == "support" || s == "supporting") return StanceLabel::Support;
    if (s == "deny" || s == "denying") return StanceLabel::Deny;
    if (s == "query" || s == "questioning") return StanceLabel::Query;
    if (s == "comment" || s == "commenting") return StanceLabel::Comment;
    return std::nullopt;
}

std::string to_hex(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::optional<std::uint64_t> from_hex(std::string_view s) noexcept {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

namespace log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](Level level, std::string_view msg) {
        std::cerr << (level == Level::Warning ? "warning: " : "") << msg << '\n';
    };
    return sink;
}

void emit(Level level, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(level, message);
}

}  // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    std::swap(current_sink(), sink);
    return sink;
}

void info(std::string_view message) { emit(Level::Info, message); }
void warn(std::string_view message) { emit(Level::Warning, message); }

}  // namespace log
}  // namespace stance
