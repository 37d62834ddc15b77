#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "burgers/errors.hpp"
#include "burgers/io.hpp"

using namespace burgers;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "burgers_io_test";
  fs::create_directories(d);
  return d;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv headers") {
  const GridPtr g = make_grid(SpectralConfig{.n_r = 128, .n_modes = 2});
  const fs::path d = scratch_dir();
  const ModeField w = BandLimitedField::random(2, 4).sample(g);

  io::write_profile_csv(d / "p.csv", w);
  CHECK(first_line(d / "p.csv") == "r,mode_re_0,mode_im_0,mode_re_1,mode_im_1,mode_re_2,mode_im_2");

  io::write_field_csv(d / "f.csv", w);
  CHECK(first_line(d / "f.csv") == "x1,x2,value");

  io::write_trajectory_csv(d / "t.csv", {{0.0, 1.0, 2.0, 0.0}, {0.1, 0.9, 1.8, 0.0}});
  CHECK(first_line(d / "t.csv") == "t,norm_X,energy,mean");
  std::ifstream in(d / "t.csv");
  int lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("unwritable output directory") {
  const fs::path blocker = scratch_dir() / "plain_file";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(io::ensure_writable_dir(blocker / "sub"), IoError);
  CHECK_THROWS_AS(io::write_json(blocker / "sub" / "a.json", io::Json::object()), IoError);
  CHECK_NOTHROW(io::ensure_writable_dir(scratch_dir() / "fresh"));
}

TEST_CASE("json summaries are deterministic with fixed keys") {
  const GridPtr g = make_grid(SpectralConfig{.n_r = 128, .n_modes = 4});
  const VortexSolution a = picard_solve(g, 1.0, 0.05);
  const VortexSolution b = picard_solve(g, 1.0, 0.05);
  const fs::path d = scratch_dir();
  io::write_json(d / "a.json", io::solution_summary(a));
  io::write_json(d / "b.json", io::solution_summary(b));
  CHECK(slurp(d / "a.json") == slurp(d / "b.json"));

  std::vector<std::string> keys;
  const io::Json summary = io::solution_summary(a);
  for (const auto& item : summary.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"alpha", "lambda", "residual", "norm_Y", "iterations",
                                         "contraction_max"});

  const io::Json e = io::error_json("convergence", "stalled", {1.0, 0.5});
  CHECK(e["error"] == "convergence");
  CHECK(e["residual_history"].size() == 2);
  CHECK(!io::error_json("io", "x").contains("residual_history"));
}
