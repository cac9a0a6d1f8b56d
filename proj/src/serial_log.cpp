#include <charconv>
#include <cmath>
#include <cstdio>

#include "pointlab/sensing.hpp"

namespace pointlab::sensing {

namespace {

Error line_error(std::size_t line, const std::string& what) {
  return Error("line " + std::to_string(line) + ": " + what);
}

double parse_field(std::string_view field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw line_error(line, "invalid number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<ImuSample> parse_serial_log(std::string_view text) {
  if (text.empty()) throw Error("serial log is empty");

  std::vector<ImuSample> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!saw_header) {
      if (line != kSerialLogHeader) {
        throw line_error(line_no, "expected header '" + std::string(kSerialLogHeader) + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string_view, 7> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view f = line.substr(start, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - start);
      if (count < fields.size()) fields[count] = f;
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != 7) {
      throw line_error(line_no, "expected 7 fields, got " + std::to_string(count));
    }

    ImuSample s;
    s.t = parse_field(fields[0], line_no);
    for (int i = 0; i < 3; ++i) s.accel[i] = parse_field(fields[1 + i], line_no);
    for (int i = 0; i < 3; ++i) s.gyro[i] = parse_field(fields[4 + i], line_no);
    if (s.t < 0.0) throw line_error(line_no, "negative timestamp");
    if (!out.empty() && !(s.t > out.back().t)) {
      throw line_error(line_no, "timestamps must strictly increase");
    }
    out.push_back(s);
  }
  if (!saw_header) throw Error("serial log is empty");
  if (out.empty()) throw Error("serial log has no samples");
  return out;
}

std::string serialize_serial_log(std::span<const ImuSample> samples) {
  std::string out(kSerialLogHeader);
  out += '\n';
  char buf[4096];  // fits seven %.6f renderings of DBL_MAX
  for (const auto& s : samples) {
    const int n = std::snprintf(buf, sizeof buf, "%.*f,%.*f,%.*f,%.*f,%.*f,%.*f,%.*f\n",
                                kSerialLogDecimals, s.t, kSerialLogDecimals, s.accel[0],
                                kSerialLogDecimals, s.accel[1], kSerialLogDecimals, s.accel[2],
                                kSerialLogDecimals, s.gyro[0], kSerialLogDecimals, s.gyro[1],
                                kSerialLogDecimals, s.gyro[2]);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace pointlab::sensing
