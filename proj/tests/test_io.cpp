#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "cbk/errors.hpp"
#include "cbk/io.hpp"
#include "cbk/random.hpp"

using namespace cbk;
using cbk::io::json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, MatrixRoundTrip) {
  const ComplexMatrix m{{1.0, {0.0, -2.5}}, {{3.0, 4.0}, 0.125}, {0.0, 1e-17}};
  EXPECT_EQ(io::matrix_from_json(io::to_json(m)), m);
  EXPECT_EQ(io::to_json(m)["rows"], 3);
}

TEST(Io, KernelRoundTrip) {
  Rng rng(1);
  const Kernel k = random_kernel(rng, 3, 2, 1);
  const Kernel back = io::kernel_from_json(io::parse(io::to_json(k).dump(), "mem"));
  EXPECT_EQ(back.labels(), k.labels());
  EXPECT_EQ(kernel_distance(back, k), 0.0);
}

TEST(Io, DecompAndChainRoundTrip) {
  Rng rng(2);
  const KolDecomp d = random_decomp(rng, 2, 2, 1, 2, random_hermitian(rng, 4));
  const KolDecomp back = io::decomp_from_json(io::to_json(d));
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.j, d.j);
  EXPECT_EQ(kernel_distance(reconstruct(back), reconstruct(d)), 0.0);

  const SubsetChain c{default_labels(3), {{"x0"}, {"x0", "x2"}}};
  const SubsetChain cb = io::chain_from_json(io::to_json(c));
  EXPECT_EQ(cb.ground, c.ground);
  EXPECT_EQ(cb.chain, c.chain);
}

TEST(Io, SchemaErrorsNameTheLocation) {
  Rng rng(3);
  json j = io::to_json(random_kernel(rng, 2, 1, 1));
  json bad = j;
  bad["values"][1][0]["choi"]["data"][0] = "oops";
  const std::string msg = error_of([&] { io::kernel_from_json(bad); });
  EXPECT_NE(msg.find("values[1][0]"), std::string::npos) << msg;

  json shape = j;
  shape["values"][0][0]["choi"]["rows"] = 7;
  EXPECT_THROW(io::kernel_from_json(shape), PreconditionError);

  json missing = j;
  missing.erase("labels");
  EXPECT_THROW(io::kernel_from_json(missing), PreconditionError);
}

TEST(Io, SyntaxErrorsReportLineAndColumn) {
  const std::string msg = error_of([] { io::parse("{\n  \"rows\": 1,\n  oops\n}", "input.json"); });
  EXPECT_NE(msg.find("input.json:3:"), std::string::npos) << msg;
  EXPECT_THROW(io::read_file("/nonexistent/kernel.json"), PreconditionError);
}

TEST(Io, FileRoundTripIsDeterministic) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "cbk_io_a.json").string(), b = (dir / "cbk_io_b.json").string();
  Rng r1(9), r2(9);
  io::write_file(a, io::to_json(random_cp_kernel(r1, 2, 2, 2)));
  io::write_file(b, io::to_json(random_cp_kernel(r2, 2, 2, 2)));
  EXPECT_EQ(io::read_file(a).dump(), io::read_file(b).dump());
  const Kernel k = io::kernel_from_json(io::read_file(a));
  EXPECT_TRUE(is_cp_kernel(k));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
