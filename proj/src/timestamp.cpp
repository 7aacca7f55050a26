#include "cegmine/timestamp.hpp"

#include <cstdio>
#include <cstdlib>

#include "cegmine/errors.hpp"

namespace cegmine {

namespace {

constexpr std::int64_t kMicrosPerSecond = 1000000;
constexpr std::int64_t kSecondsPerDay = 86400;

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  // Reads exactly `width` digits.
  bool digits(int width, std::int64_t& out) {
    out = 0;
    for (int i = 0; i < width; ++i) {
      if (done() || s[pos] < '0' || s[pos] > '9') return false;
      out = out * 10 + (s[pos] - '0');
      ++pos;
    }
    return true;
  }
};

[[noreturn]] void fail(std::string_view text) {
  throw DataError("unparseable timestamp: \"" + std::string(text) + "\"");
}

bool is_integer(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  // Trim surrounding spaces.
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (text.empty()) fail(text);

  if (is_integer(text)) {
    errno = 0;
    char* end = nullptr;
    std::string buf(text);
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) fail(text);
    return static_cast<std::int64_t>(v);
  }

  Cursor c{text};
  std::int64_t year, month, day;
  if (!c.digits(4, year) || !c.eat('-') || !c.digits(2, month) ||
      !c.eat('-') || !c.digits(2, day))
    fail(text);
  if (month < 1 || month > 12 || day < 1 || day > 31) fail(text);

  std::int64_t hour = 0, minute = 0, second = 0, frac_micros = 0;
  std::int64_t offset_seconds = 0;
  if (!c.done()) {
    if (!c.eat('T') && !c.eat(' ')) fail(text);
    if (!c.digits(2, hour) || !c.eat(':') || !c.digits(2, minute)) fail(text);
    if (c.eat(':')) {
      if (!c.digits(2, second)) fail(text);
      if (c.eat('.')) {
        std::int64_t scale = 100000;
        int ndigits = 0;
        while (!c.done() && c.peek() >= '0' && c.peek() <= '9') {
          if (ndigits < 6) frac_micros += (c.peek() - '0') * scale;
          scale /= 10;
          ++ndigits;
          ++c.pos;
        }
        if (ndigits == 0) fail(text);
      }
    }
    if (hour > 23 || minute > 59 || second > 60) fail(text);

    if (c.eat('Z')) {
      // UTC marker, nothing to add.
    } else if (c.peek() == '+' || c.peek() == '-') {
      int sign = c.peek() == '-' ? -1 : 1;
      ++c.pos;
      std::int64_t oh, om = 0;
      if (!c.digits(2, oh)) fail(text);
      if (c.eat(':')) {
        if (!c.digits(2, om)) fail(text);
      } else if (!c.done()) {
        if (!c.digits(2, om)) fail(text);
      }
      if (oh > 23 || om > 59) fail(text);
      offset_seconds = sign * (oh * 3600 + om * 60);
    }
  }
  if (!c.done()) fail(text);

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                      static_cast<unsigned>(day));
  std::int64_t seconds =
      days * kSecondsPerDay + hour * 3600 + minute * 60 + second;
  seconds -= offset_seconds;  // local time minus offset gives UTC
  return seconds * kMicrosPerSecond + frac_micros;
}

std::string format_timestamp(std::int64_t micros) {
  std::int64_t seconds = micros / kMicrosPerSecond;
  std::int64_t frac = micros % kMicrosPerSecond;
  if (frac < 0) {
    frac += kMicrosPerSecond;
    seconds -= 1;
  }
  std::int64_t days = seconds / kSecondsPerDay;
  std::int64_t rem = seconds % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    days -= 1;
  }
  std::int64_t year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                static_cast<long long>(year), month, day,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60),
                static_cast<long long>(rem % 60),
                static_cast<long long>(frac));
  return buf;
}

}  // namespace cegmine
