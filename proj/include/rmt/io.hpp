#pragma once

// File formats.
//
// RMTX: bytes 'R' 'M' 'T' 'X', version byte 0x01, u64 little-endian n, then
//       n*n float64 little-endian values in row-major order.
// RVEC: bytes 'R' 'V' 'E' 'C', version byte 0x01, u64 little-endian n, then
//       n float64 little-endian values. Used by the streaming-operator protocol.
// Spectrum CSV: header `eigenvalue,weight`, one row per eigenvalue, shortest
//       round-trip decimal formatting.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/core.hpp"

namespace rmt::io {

/// Malformed input file; carries the byte offset where parsing failed.
class FormatError : public NumericFailure {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : NumericFailure(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

struct RawMatrix {
  std::uint64_t n = 0;
  std::vector<double> entries;
};

std::vector<unsigned char> encode_rmtx(std::uint64_t n, std::span<const double> entries);
RawMatrix decode_rmtx(std::span<const unsigned char> bytes);

void write_rmtx(const std::filesystem::path& path, const SymmetricMatrix& a);
void write_rmtx(const std::filesystem::path& path, const DenseMatrix& a);
RawMatrix read_rmtx_raw(const std::filesystem::path& path);
/// Reads and symmetrizes; asymmetry beyond 1e-8 relative is rejected.
SymmetricMatrix read_rmtx(const std::filesystem::path& path);

std::vector<unsigned char> encode_rvec(std::span<const double> v);
std::vector<double> decode_rvec(std::span<const unsigned char> bytes);
void write_rvec(const std::filesystem::path& path, std::span<const double> v);
std::vector<double> read_rvec(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

void write_spectrum_csv(const std::filesystem::path& path, const EmpiricalSpectrum& s);
EmpiricalSpectrum read_spectrum_csv(const std::filesystem::path& path);

/// Writes `header` then one row per entry of the columns (all columns equal length).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
/// Returns columns keyed by header order.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header = nullptr);

void write_text(const std::filesystem::path& path, std::string_view text);
std::vector<unsigned char> read_bytes(const std::filesystem::path& path);

}  // namespace rmt::io
