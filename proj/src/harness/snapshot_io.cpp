#include <bit>
#include <cmath>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kschur/harness.hpp"

namespace kschur {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

template <class T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

RealMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const std::size_t comma = rest.find(',');
      std::string_view tok = rest.substr(0, comma);
      while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
      while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
      if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                                        std::string(tok) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(rows.front().size()) + " values, found " +
                                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) fail(ErrorCode::IoError, "read failure on " + path.string());
  if (rows.empty()) fail(ErrorCode::ParseError, path.string() + ": no data rows");
  // One row per time sample; snapshots become columns.
  RealMatrix out(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t i = 0; i < rows[t].size(); ++i) out(static_cast<Index>(i), static_cast<Index>(t)) = rows[t][i];
  }
  return out;
}

RealMatrix load_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::uint64_t header[2];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) {
    fail(ErrorCode::ParseError, path.string() + ": truncated header");
  }
  const std::uint64_t rows = to_little_endian(header[0]);
  const std::uint64_t cols = to_little_endian(header[1]);
  if (rows == 0 || cols == 0) fail(ErrorCode::ParseError, path.string() + ": empty matrix in header");
  in.seekg(0, std::ios::end);
  const std::uint64_t payload = static_cast<std::uint64_t>(in.tellg()) - sizeof header;
  if (rows > payload / 8 || payload / 8 / rows != cols || payload % 8 != 0 || payload != rows * cols * 8) {
    fail(ErrorCode::ParseError, path.string() + ": payload size does not match header");
  }
  in.seekg(sizeof header);
  RealMatrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  if (!in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(payload))) {
    fail(ErrorCode::IoError, "read failure on " + path.string());
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (Index k = 0; k < out.size(); ++k) out.data()[k] = to_little_endian(out.data()[k]);
  }
  require_finite(out, "raw snapshot payload");
  return out;
}

}  // namespace

RealMatrix load_snapshots(const std::filesystem::path& path, SnapshotFormat format) {
  return format == SnapshotFormat::Csv ? load_csv(path) : load_raw(path);
}

void save_snapshots(const std::filesystem::path& path, const RealMatrix& trajectory, SnapshotFormat format) {
  if (format == SnapshotFormat::Csv) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    for (Index t = 0; t < trajectory.cols(); ++t) {
      for (Index i = 0; i < trajectory.rows(); ++i) {
        if (i > 0) out << ',';
        out << format_double(trajectory(i, t));
      }
      out << '\n';
    }
    if (!out) fail(ErrorCode::IoError, "write failure on " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  const std::uint64_t header[2] = {to_little_endian(static_cast<std::uint64_t>(trajectory.rows())),
                                   to_little_endian(static_cast<std::uint64_t>(trajectory.cols()))};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (Index k = 0; k < trajectory.size(); ++k) {
    const double v = to_little_endian(trajectory.data()[k]);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  if (!out) fail(ErrorCode::IoError, "write failure on " + path.string());
}

}  // namespace kschur
