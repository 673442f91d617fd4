#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fdcp/errors.hpp"
#include "fdcp/renewal.hpp"
#include "fdcp/window.hpp"

namespace fdcp {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Event file: `# horizon=<value>` header, then one ascending time per line.
/// Other `#` lines and blank lines are ignored. Without a horizon header the
/// last event time is taken as the horizon.
inline EventSequence read_events(std::istream& in) {
  std::vector<double> times;
  std::optional<double> horizon;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      constexpr std::string_view key = "horizon=";
      const auto body = detail::trim(text.substr(1));
      if (body.substr(0, key.size()) == key) {
        horizon = detail::parse_double(detail::trim(body.substr(key.size())));
        if (!horizon || !(*horizon >= 0.0)) throw ParseError("line " + std::to_string(lineno) + ": bad horizon", lineno);
      }
      continue;
    }
    const auto v = detail::parse_double(text);
    if (!v || !(*v > 0.0)) {
      throw ParseError("line " + std::to_string(lineno) + ": '" + std::string(text) + "' is not a positive time", lineno);
    }
    if (!times.empty() && !(*v > times.back())) {
      throw ParseError("line " + std::to_string(lineno) + ": event time " + std::string(text) +
                           (*v == times.back() ? " duplicates the previous event" : " is not ascending"),
                       lineno);
    }
    if (horizon && *v > *horizon) {
      throw ParseError("line " + std::to_string(lineno) + ": event beyond the horizon", lineno);
    }
    times.push_back(*v);
  }
  const double h = horizon.value_or(times.empty() ? 0.0 : times.back());
  return EventSequence::from_times(std::move(times), h);
}

inline EventSequence read_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event file '" + path + "'");
  return read_events(in);
}

/// Shortest round-trip decimals, so a re-read sequence is bit-identical.
inline void write_events(std::ostream& out, const EventSequence& seq) {
  out << "# horizon=" << detail::format_double(seq.horizon()) << '\n';
  for (double t : seq.times()) out << detail::format_double(t) << '\n';
}

inline void write_events(const std::string& path, const EventSequence& seq) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write event file '" + path + "'");
  write_events(out, seq);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fdcp
