#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "oracles.hpp"
#include "sr1/bench/synth.hpp"
#include "sr1/io/decomposition_io.hpp"
#include "sr1/io/matrix_io.hpp"

using namespace sr1;
using namespace sr1::io;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sr1_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return to_string(e.code());
  }
  return "no error";
}

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0.0));
  EXPECT_EQ(parse_complex(" 2+3i "), Complex(2.0, 3.0));
  EXPECT_EQ(parse_complex("2-3i"), Complex(2.0, -3.0));
  EXPECT_EQ(parse_complex("-4i"), Complex(0.0, -4.0));
  EXPECT_EQ(parse_complex("1e-3+2.5e+2j"), Complex(1e-3, 250.0));
  EXPECT_EQ(parse_complex("-1E2-1e-2i"), Complex(-100.0, -0.01));
  EXPECT_EQ(code_of([] { parse_complex("abc"); }), "Parse");
  EXPECT_EQ(code_of([] { parse_complex(""); }), "Parse");
  EXPECT_EQ(code_of([] { parse_complex("1+2"); }), "Parse");
}

TEST(ParseComplex, FormatRoundTripBitExact) {
  oracle::Random rng(1);
  for (int t = 0; t < 200; ++t) {
    const Complex z{rng.gauss() * std::pow(10.0, rng.gauss() * 5), rng.gauss()};
    EXPECT_EQ(parse_complex(format_complex(z)), z);
  }
  EXPECT_EQ(format_complex({1.0, 0.0}), "1");
  EXPECT_EQ(format_complex({1.0, -2.0}), "1-2i");
}

TEST(Csv, RoundTripAndShape) {
  oracle::Random rng(2);
  const auto a = rng.matrix(4, 3);
  std::stringstream ss;
  write_csv(ss, a);
  EXPECT_EQ(read_csv(ss), a);
  std::stringstream text("1,2+1i\n# comment\n\n3-1i,4\n");
  const auto b = read_csv(text);
  ASSERT_EQ(b.rows(), 2u);
  ASSERT_EQ(b.cols(), 2u);
  EXPECT_EQ(b(0, 1), Complex(2.0, 1.0));
  EXPECT_EQ(b(1, 0), Complex(3.0, -1.0));
  std::stringstream ragged("1,2\n3\n");
  EXPECT_EQ(code_of([&] { read_csv(ragged); }), "Parse");
}

TEST(Binary, RoundTripBitExact) {
  oracle::Random rng(3);
  const auto a = rng.matrix(7, 5);
  std::stringstream ss;
  write_binary(ss, a);
  EXPECT_EQ(ss.str().size(), 4u + 8u + 7u * 5u * 16u);
  EXPECT_EQ(ss.str().substr(0, 4), "SR1M");
  EXPECT_EQ(read_binary(ss), a);
  std::stringstream bad("XXXX");
  EXPECT_EQ(code_of([&] { read_binary(bad); }), "Parse");
}

TEST(Binary, LittleEndianHeaderAndColumnMajor) {
  ComplexMatrix a(2, 1);
  a(0, 0) = {1.0, 2.0};
  a(1, 0) = {3.0, 4.0};
  std::stringstream ss;
  write_binary(ss, a);
  const std::string s = ss.str();
  EXPECT_EQ(static_cast<unsigned char>(s[4]), 2u);
  EXPECT_EQ(static_cast<unsigned char>(s[8]), 1u);
  double first[4];
  std::memcpy(first, s.data() + 12, sizeof first);
  if constexpr (std::endian::native == std::endian::little) {
    EXPECT_EQ(first[2], 3.0);
  }
}

TEST(Pgm, WidthIsColumnsHeightIsRows) {
  std::stringstream ss;
  ss << "P5\n# frames as columns\n3 2\n255\n";
  const unsigned char px[] = {0, 51, 255, 102, 153, 204};
  ss.write(reinterpret_cast<const char*>(px), sizeof px);
  const auto a = read_pgm(ss);
  ASSERT_EQ(a.rows(), 2u);
  ASSERT_EQ(a.cols(), 3u);
  EXPECT_EQ(a(0, 2), Complex(1.0, 0.0));
  EXPECT_NEAR(a(1, 0).real(), 0.4, 1e-15);
  std::stringstream out;
  write_pgm(out, a);
  EXPECT_EQ(read_pgm(out), a);
}

TEST(Pgm, SixteenBitAndErrors) {
  std::stringstream ss;
  ss << "P5 1 1 65535\n";
  ss.put(static_cast<char>(0x80));
  ss.put(0);
  EXPECT_NEAR(read_pgm(ss)(0, 0).real(), 32768.0 / 65535.0, 1e-15);
  std::stringstream p2("P2 1 1 255\n0");
  EXPECT_EQ(code_of([&] { read_pgm(p2); }), "Parse");
  std::stringstream trunc("P5 2 2 255\n\x01");
  EXPECT_EQ(code_of([&] { read_pgm(trunc); }), "Parse");
}

TEST(MatrixFiles, FormatByExtension) {
  oracle::Random rng(4);
  const auto a = rng.matrix(3, 3);
  for (const char* name : {"m.csv", "m.bin"}) {
    write_matrix(scratch(name), a);
    EXPECT_EQ(read_matrix(scratch(name)), a) << name;
  }
  EXPECT_EQ(code_of([] { read_matrix(scratch("missing.csv")); }), "Parse");
  EXPECT_EQ(parse_matrix_format("rawBinary"), MatrixFormat::RawBinary);
  EXPECT_THROW(parse_matrix_format("tiff"), Error);
}

TEST(DecompositionFile, RoundTripBitExact) {
  bench::SynthSpec spec;
  spec.rows = 9;
  spec.cols = 6;
  spec.components = 3;
  spec.seed = 8;
  const auto truth = *bench::generate(spec).truth;
  save_decomposition(scratch("d.json"), truth);
  const auto back = load_decomposition(scratch("d.json"));
  EXPECT_EQ(back.rows, truth.rows);
  EXPECT_EQ(back.cols, truth.cols);
  ASSERT_EQ(back.components.size(), truth.components.size());
  for (std::size_t l = 0; l < truth.components.size(); ++l) {
    EXPECT_EQ(back.components[l].sigma, truth.components[l].sigma);
    EXPECT_EQ(back.components[l].u, truth.components[l].u);
    EXPECT_EQ(back.components[l].v, truth.components[l].v);
    EXPECT_EQ(back.components[l].lambda, truth.components[l].lambda);
  }
  EXPECT_EQ(back.residual_history, truth.residual_history);
}

TEST(DecompositionFile, MalformedIsParseError) {
  using nlohmann::json;
  Decomposition d;
  d.rows = 2;
  d.cols = 2;
  d.components.push_back({1.0, ComplexVector(2, 1.0), ComplexVector(2, 1.0), ShiftVector(2, 2)});
  d.residual_history = {1.0, 0.0};
  auto j = to_json(d);
  EXPECT_NO_THROW(from_json(j));
  auto bad = j;
  bad["components"][0]["lambda"] = {0, 2};
  EXPECT_EQ(code_of([&] { from_json(bad); }), "Parse");
  bad = j;
  bad["components"][0]["u"] = json::array({json::array({1.0, 0.0})});
  EXPECT_EQ(code_of([&] { from_json(bad); }), "Parse");
  bad = j;
  bad["version"] = 99;
  EXPECT_EQ(code_of([&] { from_json(bad); }), "Parse");
  bad = j;
  bad.erase("M");
  EXPECT_EQ(code_of([&] { from_json(bad); }), "Parse");
  {
    std::ofstream os(scratch("garbage.json"));
    os << "{not json";
  }
  EXPECT_EQ(code_of([] { load_decomposition(scratch("garbage.json")); }), "Parse");
}

TEST(Tracks, RowsPerColumn) {
  Decomposition d;
  d.rows = 4;
  d.cols = 4;
  d.components.push_back({1.0, ComplexVector(4, 0.5), ComplexVector(4, 0.5), ShiftVector(4, {0, 1, 2, 3})});
  std::ostringstream os;
  write_tracks(os, d);
  EXPECT_EQ(os.str(), "component_index,column_index,shift\n0,0,0\n0,1,1\n0,2,2\n0,3,3\n");
}

TEST(Tracks, EmptyIsHeaderOnly) {
  Decomposition d;
  d.rows = 3;
  d.cols = 2;
  std::ostringstream os;
  write_tracks(os, d);
  EXPECT_EQ(os.str(), "component_index,column_index,shift\n");
}
