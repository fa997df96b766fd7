#include "stance/timeutil.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "stance/common.hpp"

namespace stance {
namespace {

using namespace std::chrono;

int read_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
    if (pos + len > text.size()) throw ParseError("timestamp too short: '" + std::string(text) + "'");
    int v = 0;
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len) {
        throw ParseError("bad " + std::string(what) + " in timestamp '" + std::string(text) + "'");
    }
    return v;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw ParseError("malformed timestamp '" + std::string(text) + "'");
    }
}

Timestamp civil_to_epoch(int y, int mo, int d, int h, int mi, int s, std::string_view text) {
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        throw ParseError("out-of-range field in timestamp '" + std::string(text) + "'");
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<Timestamp>(days) * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
    const int y = read_int(text, 0, 4, "year");
    expect(text, 4, '-');
    const int mo = read_int(text, 5, 2, "month");
    expect(text, 7, '-');
    const int d = read_int(text, 8, 2, "day");
    if (text.size() == 10) return civil_to_epoch(y, mo, d, 0, 0, 0, text);

    if (text.size() < 11 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
        throw ParseError("malformed timestamp '" + std::string(text) + "'");
    }
    const int h = read_int(text, 11, 2, "hour");
    expect(text, 13, ':');
    const int mi = read_int(text, 14, 2, "minute");
    expect(text, 16, ':');
    const int s = read_int(text, 17, 2, "second");
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("empty fraction in timestamp '" + std::string(text) + "'");
    }
    Timestamp offset = 0;
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = read_int(text, pos + 1, 2, "offset hour");
        expect(text, pos + 3, ':');
        const int om = read_int(text, pos + 4, 2, "offset minute");
        offset = sign * (oh * 3600 + om * 60);
        pos += 6;
    } else {
        throw ParseError("missing UTC offset in timestamp '" + std::string(text) + "'");
    }
    if (pos != text.size()) throw ParseError("trailing characters in timestamp '" + std::string(text) + "'");
    return civil_to_epoch(y, mo, d, h, mi, s, text) - offset;
}

Timestamp parse_twitter_time(std::string_view text) {
    // Www Mmm DD HH:MM:SS +ZZZZ YYYY
    static constexpr std::array<std::string_view, 12> months{
        "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    if (text.size() != 30) throw ParseError("malformed Twitter timestamp '" + std::string(text) + "'");
    const std::string_view mon = text.substr(4, 3);
    int mo = 0;
    for (std::size_t i = 0; i < months.size(); ++i) {
        if (months[i] == mon) mo = static_cast<int>(i) + 1;
    }
    if (mo == 0) throw ParseError("bad month in Twitter timestamp '" + std::string(text) + "'");
    const int d = read_int(text, 8, 2, "day");
    const int h = read_int(text, 11, 2, "hour");
    const int mi = read_int(text, 14, 2, "minute");
    const int s = read_int(text, 17, 2, "second");
    const int sign = text[20] == '-' ? -1 : 1;
    if (text[20] != '+' && text[20] != '-') throw ParseError("bad offset in Twitter timestamp '" + std::string(text) + "'");
    const int oh = read_int(text, 21, 2, "offset hour");
    const int om = read_int(text, 23, 2, "offset minute");
    const int y = read_int(text, 26, 4, "year");
    return civil_to_epoch(y, mo, d, h, mi, s, text) - sign * (oh * 3600 + om * 60);
}

std::string format_rfc3339(Timestamp t) {
    const auto days = static_cast<int>((t >= 0 ? t : t - (kSecondsPerDay - 1)) / kSecondsPerDay);
    const Timestamp rem = t - static_cast<Timestamp>(days) * kSecondsPerDay;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60), static_cast<int>(rem % 60));
    return buf;
}

std::string format_date(Timestamp t) { return format_rfc3339(t).substr(0, 10); }

std::int64_t days_between(Timestamp from, Timestamp to) noexcept {
    const Timestamp diff = to - from;
    return diff >= 0 ? diff / kSecondsPerDay : -((-diff + kSecondsPerDay - 1) / kSecondsPerDay);
}

}  // namespace stance
