#include "accel/harness.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("accel-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the installed binary and returns its exit status.
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(ACCEL_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kLasso = std::string("lasso:") + ACCEL_DATA_DIR + "/lasso5.json";

}  // namespace

TEST(Cli, RunSucceeds) {
  const fs::path dir = scratch_dir("ok");
  EXPECT_EQ(run_cli("run --problem quad2d --algo m-nag --step 0.4 --r 2 --iters 200 --certify "
                  "--trace " + (dir / "t.csv").string(),
                  dir / "log"),
            0);
  EXPECT_NE(slurp(dir / "log").find("certificate PASS"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "t.csv"));
}

TEST(Cli, UsageErrorsExitOne) {
  const fs::path dir = scratch_dir("usage");
  EXPECT_EQ(run_cli("run --problem quad2d --algo nag --step 0.4", dir / "log"), 1);
  EXPECT_NE(slurp(dir / "log").find("--r"), std::string::npos);
  EXPECT_EQ(run_cli("run --problem quad2d --algo nag --step 0.6 --r 2", dir / "log"), 1);
  EXPECT_NE(slurp(dir / "log").find("step"), std::string::npos);
  EXPECT_EQ(run_cli("run --problem nowhere --algo gd --step 0.1", dir / "log"), 1);
  EXPECT_EQ(run_cli("preset fig3", dir / "log"), 1);
  EXPECT_EQ(run_cli("frobnicate", dir / "log"), 1);
  EXPECT_EQ(run_cli("", dir / "log"), 1);
  EXPECT_EQ(run_cli("--help", dir / "log"), 0);
}

TEST(Cli, CertificationFailureExitsTwo) {
  const fs::path dir = scratch_dir("fail");
  const fs::path trace = dir / "t.json";
  ASSERT_EQ(run_cli("run --problem quad2d --algo nag --step 0.4 --r 2 --iters 100 --format json "
                  "--trace " + trace.string(),
                  dir / "log"),
            0);
  EXPECT_EQ(run_cli("certify --trace " + trace.string() + " --problem quad2d", dir / "log"), 0);

  // Push one late objective far above the rate bound.
  auto doc = nlohmann::json::parse(slurp(trace));
  doc["records"][60]["objective"] = 1.0;
  std::ofstream(dir / "bad.json") << doc.dump();
  EXPECT_EQ(run_cli("certify --trace " + (dir / "bad.json").string() + " --problem quad2d "
                  "--certificate " + (dir / "c.json").string(),
                  dir / "log"),
            2);
  // E(59) reads F(x_60), so the decrease check from k = 58 is the first to break.
  EXPECT_NE(slurp(dir / "log").find("FAIL at k=58"), std::string::npos);
  const auto cert = nlohmann::json::parse(slurp(dir / "c.json"));
  EXPECT_FALSE(cert["pass"].get<bool>());
}

TEST(Cli, LassoFistaCertifies) {
  const fs::path dir = scratch_dir("lasso");
  for (const char* algo : {"fista", "m-fista"}) {
    EXPECT_EQ(run_cli(std::string("run --problem ") + kLasso + " --algo " + algo +
                        " --step 0.07 --r 3 --iters 500 --certify",
                    dir / "log"),
              0)
        << slurp(dir / "log");
  }
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const fs::path a = scratch_dir("det-a");
  const fs::path b = scratch_dir("det-b");
  ASSERT_EQ(run_cli("preset fig1 --outdir " + a.string(), a / "log"), 0);
  ASSERT_EQ(run_cli("preset fig1 --outdir " + b.string(), b / "log"), 0);
  for (const char* name : {"fig1-nag.csv", "fig1-m-nag.csv", "fig1-nag.certificate.json",
                           "fig1-m-nag.certificate.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_EQ(slurp(a / "log"), slurp(b / "log"));
}

TEST(Cli, InProcessEntryPoint) {
  std::ostringstream out;
  std::ostringstream err;
  const char* argv[] = {"accel", "run", "--problem", "quad2d", "--algo", "gd", "--step", "0.1",
                        "--iters", "5"};
  EXPECT_EQ(accel::cli_main(10, argv, out, err), accel::kExitOk);
  EXPECT_NE(out.str().find("gd on quad2d: 5 iterations"), std::string::npos);
}
