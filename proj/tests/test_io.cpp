#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "rmt/io.hpp"
#include "rmt/rng.hpp"
#include "temp_dir.hpp"

namespace {

using rmt::io::FormatError;

std::uint64_t offset_of(const std::vector<unsigned char>& bytes, bool rvec = false) {
  try {
    if (rvec) {
      rmt::io::decode_rvec(bytes);
    } else {
      rmt::io::decode_rmtx(bytes);
    }
  } catch (const FormatError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no FormatError";
  return 0;
}

TEST(Rmtx, ByteLayoutIsExact) {
  const std::vector<double> v{1.0, -2.5, 0.0, 3.25};
  const auto bytes = rmt::io::encode_rmtx(2, v);
  ASSERT_EQ(bytes.size(), 13u + 32u);
  EXPECT_EQ(bytes[0], 0x52);
  EXPECT_EQ(bytes[1], 0x4D);
  EXPECT_EQ(bytes[2], 0x54);
  EXPECT_EQ(bytes[3], 0x58);
  EXPECT_EQ(bytes[4], 0x01);
  EXPECT_EQ(bytes[5], 2);
  for (int i = 6; i < 13; ++i) EXPECT_EQ(bytes[static_cast<std::size_t>(i)], 0);
  // IEEE-754 1.0 little-endian: 00 .. 00 F0 3F.
  EXPECT_EQ(bytes[13 + 6], 0xF0);
  EXPECT_EQ(bytes[13 + 7], 0x3F);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[13 + 8 * i + static_cast<std::size_t>(b)]) << (8 * b);
    double x;
    std::memcpy(&x, &bits, 8);
    EXPECT_EQ(x, v[i]);
  }
}

TEST(Rmtx, FileRoundTripIsExact) {
  TempDir dir;
  rmt::RngStream rng(1, 0);
  std::vector<double> e(25);
  for (double& x : e) x = rng.normal();
  const rmt::DenseMatrix dense(5, 5, e);
  rmt::io::write_rmtx(dir / "d.rmtx", dense);
  const auto raw = rmt::io::read_rmtx_raw(dir / "d.rmtx");
  EXPECT_EQ(raw.n, 5u);
  EXPECT_EQ(raw.entries, e);

  const auto sym = rmt::SymmetricMatrix::from_dense(multiply(dense, dense.transposed()));
  rmt::io::write_rmtx(dir / "s.rmtx", sym);
  EXPECT_EQ(rmt::io::read_rmtx(dir / "s.rmtx"), sym);
}

TEST(Rmtx, MalformedInputsReportByteOffsets) {
  const std::vector<double> v{1.0, 2.0, 2.0, 1.0};
  const auto good = rmt::io::encode_rmtx(2, v);

  auto bad_magic = good;
  bad_magic[2] = 'X';
  EXPECT_EQ(offset_of(bad_magic), 2u);

  auto bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(offset_of(bad_version), 4u);

  EXPECT_EQ(offset_of(std::vector<unsigned char>(good.begin(), good.begin() + 9)), 9u);

  auto zero_dim = good;
  zero_dim[5] = 0;
  EXPECT_EQ(offset_of(zero_dim), 5u);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(offset_of(truncated), truncated.size());

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(offset_of(trailing), good.size());

  auto nan_entry = rmt::io::encode_rmtx(2, std::vector<double>{1.0, 2.0, std::nan(""), 1.0});
  EXPECT_EQ(offset_of(nan_entry), 13u + 16u);

  // A dimension whose square overflows must not wrap around.
  auto huge = good;
  for (int i = 5; i < 13; ++i) huge[static_cast<std::size_t>(i)] = 0xFF;
  EXPECT_EQ(offset_of(huge), good.size());
}

TEST(Rmtx, FormatErrorIsANumericFailure) {
  EXPECT_THROW(rmt::io::decode_rmtx(std::vector<unsigned char>{}), rmt::NumericFailure);
}

TEST(Rmtx, AsymmetricPayloadIsRejectedAsSymmetric) {
  TempDir dir;
  rmt::io::write_rmtx(dir / "a.rmtx", rmt::DenseMatrix(2, 2, {1.0, 5.0, 0.0, 1.0}));
  EXPECT_THROW(rmt::io::read_rmtx(dir / "a.rmtx"), rmt::RejectedInput);
}

TEST(Rvec, RoundTripAndErrors) {
  TempDir dir;
  const std::vector<double> v{0.1, -0.0, 1e300, 5e-324};
  rmt::io::write_rvec(dir / "v.rvec", v);
  const auto back = rmt::io::read_rvec(dir / "v.rvec");
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(std::memcmp(&back[i], &v[i], 8), 0);

  auto bytes = rmt::io::encode_rvec(v);
  bytes[0] = 'X';
  EXPECT_EQ(offset_of(bytes, true), 0u);
  auto rmtx_magic = rmt::io::encode_rmtx(1, std::vector<double>{1.0});
  EXPECT_EQ(offset_of(rmtx_magic, true), 1u);
}

TEST(Csv, FloatFormattingRoundTrips) {
  rmt::RngStream rng(2, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, static_cast<double>(i % 40 - 20));
    EXPECT_EQ(rmt::io::parse_double(rmt::io::format_double(x)), x);
  }
  EXPECT_EQ(rmt::io::format_double(0.1), "0.1");
  EXPECT_EQ(rmt::io::parse_double(" +2.5\r"), 2.5);
  EXPECT_THROW(rmt::io::parse_double("2.5x"), rmt::RejectedInput);
  EXPECT_TRUE(std::isinf(rmt::io::parse_double("-inf")));
}

TEST(Csv, SpectrumRoundTrip) {
  TempDir dir;
  const rmt::EmpiricalSpectrum uniform({-1.5, 0.0, 1.0 / 3.0});
  rmt::io::write_spectrum_csv(dir / "u.csv", uniform);
  const auto u = rmt::io::read_spectrum_csv(dir / "u.csv");
  EXPECT_EQ(u.values, uniform.values);
  EXPECT_TRUE(u.weights.empty());

  const rmt::EmpiricalSpectrum weighted({1.0, 2.0, 3.0}, {0.2, 0.3, 0.5});
  rmt::io::write_spectrum_csv(dir / "w.csv", weighted);
  const auto w = rmt::io::read_spectrum_csv(dir / "w.csv");
  EXPECT_EQ(w.values, weighted.values);
  EXPECT_EQ(w.weights, weighted.weights);
}

TEST(Csv, HeaderAndValuesOnly) {
  TempDir dir;
  rmt::io::write_text(dir / "s.csv", "eigenvalue\n2\n1\n");
  EXPECT_THROW(rmt::io::read_spectrum_csv(dir / "s.csv"), rmt::RejectedInput);  // unsorted
  rmt::io::write_text(dir / "t.csv", "eigenvalue\n1\n2\n");
  EXPECT_EQ(rmt::io::read_spectrum_csv(dir / "t.csv").values, (std::vector<double>{1.0, 2.0}));
}

TEST(Csv, MalformedRowsReportLineOffsets) {
  TempDir dir;
  rmt::io::write_text(dir / "bad.csv", "x,y\n1,2\n3\n");
  try {
    rmt::io::read_csv(dir / "bad.csv");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
  rmt::io::write_text(dir / "nan.csv", "x\nabc\n");
  EXPECT_THROW(rmt::io::read_csv(dir / "nan.csv"), FormatError);
  rmt::io::write_text(dir / "wrong.csv", "x,weight\n1,1\n");
  EXPECT_THROW(rmt::io::read_spectrum_csv(dir / "wrong.csv"), FormatError);
}

TEST(Csv, GenericColumnsRoundTrip) {
  TempDir dir;
  const std::vector<std::vector<double>> cols{{1.0, 2.0}, {std::numeric_limits<double>::min(), -7e-9}};
  rmt::io::write_csv(dir / "g.csv", {"a", "b"}, cols);
  std::vector<std::string> header;
  EXPECT_EQ(rmt::io::read_csv(dir / "g.csv", &header), cols);
  EXPECT_EQ(header, (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(rmt::io::write_csv(dir / "r.csv", {"a"}, cols), rmt::RejectedInput);
}

TEST(Files, MissingFileIsANumericFailure) {
  TempDir dir;
  EXPECT_THROW(rmt::io::read_bytes(dir / "absent"), rmt::NumericFailure);
}

}  // namespace
