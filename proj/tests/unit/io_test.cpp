#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace edelay;

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e7) == "1e+07");
  CHECK(io::format_double(123456.0) == "123456");
  CHECK(io::format_double(-2.5e-8) == "-2.5e-08");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("trajectory CSV has the fixed header and honours the stride") {
  Trajectory traj({1.0, 2.0});
  for (int k = 0; k < 5; ++k) traj.append(k * 0.5, CompartmentState{2, 0, 1, 0, 0, 0}, CompartmentState{});
  std::ostringstream out;
  io::write_trajectory_csv(out, traj, 3);
  CHECK(out.str() == "t,S,L,I,RT,RP,D,N\n0,2,0,1,0,0,0,3\n1.5,2,0,1,0,0,0,3\n2,2,0,1,0,0,0,3\n");
  std::ostringstream extra;
  const io::Column col{"G", [](std::size_t k) { return static_cast<double>(k); }};
  io::write_trajectory_csv(extra, traj, 4, std::span<const io::Column>(&col, 1));
  CHECK(extra.str().substr(0, 21) == "t,S,L,I,RT,RP,D,N,G\n0");
  CHECK_THROWS_AS(io::write_trajectory_csv(out, traj, 0), std::invalid_argument);
}

TEST_CASE("comb CSV") {
  std::ostringstream out;
  io::write_comb_csv(out, discretize(KernelDensity::uniform(1, 3), 3, 2));
  CHECK(out.str() == "node,weight\n1.5,0.5\n2.5,0.5\n");
}

TEST_CASE("report CSV without timing is reproducible") {
  ConvergenceReport r;
  SweepEntry ok;
  ok.pair = {1, 2};
  ok.sup_err = {1, 2, 3, 4, 5, 6};
  ok.rel_sup_err = {0, 0, 0.5, 0, 0, 0};
  ok.wall_seconds = 0.123;
  SweepEntry bad;
  bad.pair = {2, 4};
  bad.failure = "step too large, really";
  bad.sup_err.fill(std::nan(""));
  bad.rel_sup_err.fill(std::nan(""));
  r.entries = {ok, bad};
  std::ostringstream plain, timed;
  io::write_report_csv(plain, r, false);
  io::write_report_csv(timed, r, true);
  CHECK(plain.str() ==
        "n_tau,n_rho,err_S,err_L,err_I,err_RT,err_RP,err_D,rel_err_I,status\n"
        "1,2,1,2,3,4,5,6,0.5,ok\n"
        "2,4,nan,nan,nan,nan,nan,nan,nan,step too large  really\n");
  CHECK(timed.str().find("rel_err_I,wall_ms,status\n1,2,1,2,3,4,5,6,0.5,123,ok") != std::string::npos);
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const auto dir = std::filesystem::temp_directory_path() / "edelay_io_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "x.csv";
  io::atomic_write(file, "first");
  io::atomic_write(file, "second");
  std::ifstream in(file);
  std::string content;
  std::getline(in, content);
  CHECK(content == "second");
  CHECK_FALSE(std::filesystem::exists(dir / "x.csv.tmp"));
  CHECK_THROWS(io::atomic_write(dir / "missing" / "y.csv", "z"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
