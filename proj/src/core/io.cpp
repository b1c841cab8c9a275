#include "rmt/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rmt::io {

namespace {

constexpr unsigned char kRmtxMagic[4] = {0x52, 0x4D, 0x54, 0x58};
constexpr unsigned char kRvecMagic[4] = {0x52, 0x56, 0x45, 0x43};
constexpr unsigned char kVersion = 0x01;
constexpr std::size_t kHeaderBytes = 4 + 1 + 8;

void put_u64(unsigned char* p, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) p[b] = static_cast<unsigned char>(v >> (8 * b));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

std::vector<unsigned char> encode(const unsigned char (&magic)[4], std::uint64_t n,
                                  std::span<const double> values) {
  std::vector<unsigned char> out(kHeaderBytes + 8 * values.size());
  std::copy(magic, magic + 4, out.begin());
  out[4] = kVersion;
  put_u64(out.data() + 5, n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    put_u64(out.data() + kHeaderBytes + 8 * i, std::bit_cast<std::uint64_t>(values[i]));
  }
  return out;
}

// Validates the header and payload size; returns n.
std::uint64_t check_header(std::span<const unsigned char> bytes, const unsigned char (&magic)[4],
                           const char* format, bool square) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (i >= bytes.size()) throw FormatError(std::string(format) + ": truncated magic", i);
    if (bytes[i] != magic[i]) throw FormatError(std::string(format) + ": bad magic", i);
  }
  if (bytes.size() < 5) throw FormatError(std::string(format) + ": missing version byte", 4);
  if (bytes[4] != kVersion) throw FormatError(std::string(format) + ": unsupported version", 4);
  if (bytes.size() < kHeaderBytes) {
    throw FormatError(std::string(format) + ": truncated dimension field", bytes.size());
  }
  const std::uint64_t n = get_u64(bytes.data() + 5);
  if (n == 0) throw FormatError(std::string(format) + ": dimension must be positive", 5);
  const std::uint64_t limit = (bytes.size() - kHeaderBytes) / 8;
  const std::uint64_t count = square ? (n <= limit / n ? n * n : limit + 1) : n;
  if (count > limit) {
    throw FormatError(std::string(format) + ": payload shorter than declared dimension", bytes.size());
  }
  if (kHeaderBytes + 8 * count != bytes.size()) {
    throw FormatError(std::string(format) + ": trailing bytes after payload", kHeaderBytes + 8 * count);
  }
  return n;
}

}  // namespace

std::vector<unsigned char> encode_rmtx(std::uint64_t n, std::span<const double> entries) {
  if (entries.size() != n * n) throw RejectedInput("encode_rmtx: expected n*n entries");
  return encode(kRmtxMagic, n, entries);
}

RawMatrix decode_rmtx(std::span<const unsigned char> bytes) {
  RawMatrix m;
  m.n = check_header(bytes, kRmtxMagic, "RMTX", true);
  m.entries.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const std::size_t offset = kHeaderBytes + 8 * i;
    m.entries[i] = get_f64(bytes.data() + offset);
    if (!std::isfinite(m.entries[i])) throw FormatError("RMTX: non-finite entry", offset);
  }
  return m;
}

void write_rmtx(const std::filesystem::path& path, const SymmetricMatrix& a) {
  const auto bytes = encode_rmtx(a.size(), a.data());
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_rmtx(const std::filesystem::path& path, const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw RejectedInput("write_rmtx: matrix must be square");
  const auto bytes = encode_rmtx(a.rows(), a.data());
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

RawMatrix read_rmtx_raw(const std::filesystem::path& path) { return decode_rmtx(read_bytes(path)); }

SymmetricMatrix read_rmtx(const std::filesystem::path& path) {
  RawMatrix raw = read_rmtx_raw(path);
  return SymmetricMatrix::from_entries(raw.n, std::move(raw.entries));
}

std::vector<unsigned char> encode_rvec(std::span<const double> v) { return encode(kRvecMagic, v.size(), v); }

std::vector<double> decode_rvec(std::span<const unsigned char> bytes) {
  const std::uint64_t n = check_header(bytes, kRvecMagic, "RVEC", false);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = get_f64(bytes.data() + kHeaderBytes + 8 * i);
  return v;
}

void write_rvec(const std::filesystem::path& path, std::span<const double> v) {
  const auto bytes = encode_rvec(v);
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::vector<double> read_rvec(const std::filesystem::path& path) { return decode_rvec(read_bytes(path)); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw RejectedInput("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw RejectedInput("write_csv: header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw RejectedInput("write_csv: ragged columns");
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns[c][r]);
    }
    out += '\n';
  }
  write_text(path, out);
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::vector<std::string>* header) {
  const auto bytes = read_bytes(path);
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::vector<std::vector<double>> columns;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t width = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (true) {
      const std::size_t comma = line.find(',', f);
      fields.push_back(line.substr(f, comma == std::string_view::npos ? std::string_view::npos : comma - f));
      if (comma == std::string_view::npos) break;
      f = comma + 1;
    }
    if (line_no++ == 0) {
      width = fields.size();
      columns.assign(width, {});
      if (header) {
        header->clear();
        for (auto h : fields) header->emplace_back(h);
      }
      continue;
    }
    if (fields.size() != width) throw FormatError("CSV: wrong field count", line_start);
    for (std::size_t c = 0; c < width; ++c) {
      try {
        columns[c].push_back(parse_double(fields[c]));
      } catch (const RejectedInput&) {
        throw FormatError("CSV: unparseable number", line_start);
      }
    }
  }
  if (line_no == 0) throw FormatError("CSV: missing header", 0);
  return columns;
}

void write_spectrum_csv(const std::filesystem::path& path, const EmpiricalSpectrum& s) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = s.weight(i);
  write_csv(path, {"eigenvalue", "weight"}, {s.values, w});
}

EmpiricalSpectrum read_spectrum_csv(const std::filesystem::path& path) {
  std::vector<std::string> header;
  auto cols = read_csv(path, &header);
  if (header.empty() || header[0] != "eigenvalue") throw FormatError("spectrum CSV: expected 'eigenvalue' header", 0);
  EmpiricalSpectrum s;
  s.values = std::move(cols[0]);
  if (cols.size() > 1) {
    const double uniform = 1.0 / static_cast<double>(s.values.size());
    bool all_uniform = true;
    for (double w : cols[1]) all_uniform = all_uniform && w == uniform;
    if (!all_uniform) s.weights = std::move(cols[1]);
  }
  s.validate();
  return s;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NumericFailure("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw NumericFailure("write failed for '" + path.string() + "'");
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NumericFailure("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace rmt::io
