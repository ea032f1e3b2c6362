#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(FACTOR_PRICE_BIN) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("factor_price_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::filesystem::path dir_;
};

double field(const std::string& csv_line, int index) {
  std::size_t start = 0;
  for (int k = 0; k < index; ++k) start = csv_line.find(',', start) + 1;
  return std::stod(csv_line.substr(start, csv_line.find(',', start) - start));
}

std::string second_line(const std::string& text) {
  const auto a = text.find('\n') + 1;
  return text.substr(a, text.find('\n', a) - a);
}

}  // namespace

TEST_F(CliTest, Tightness) {
  const CliRun r = run("tightness --rho 7.389056");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ratio             2.99999"), std::string::npos) << r.out;
  const CliRun c = run("tightness --rho 7.389056 --csv");
  EXPECT_NEAR(field(second_line(c.out), 3), 3.0, 1e-4);
}

TEST_F(CliTest, GeneratePriceBoundRoundTrip) {
  ASSERT_EQ(run("generate --family lcmnl --n 3 --m 2 --seed 4 --out " + path("m.json")).code, 0);
  const CliRun p = run("price -i " + path("m.json") + " --strategy robust --save-factor " + path("f.json"));
  ASSERT_EQ(p.code, 0) << p.out;
  const CliRun b = run("bound -i " + path("m.json") + " --factor file --factor-file " + path("f.json") + " --csv");
  ASSERT_EQ(b.code, 0) << b.out;
  const CliRun r = run("bound -i " + path("m.json") + " --factor robust --csv");
  EXPECT_EQ(second_line(b.out).substr(4), second_line(r.out).substr(6));
}

TEST_F(CliTest, UniformEqualsPersonalizedForOneTypeOneProduct) {
  ASSERT_EQ(run("generate --family linear --n 1 --m 1 --seed 9 --out " + path("m.json")).code, 0);
  const CliRun u = run("price -i " + path("m.json") + " --strategy uniform --csv");
  const CliRun p = run("price -i " + path("m.json") + " --strategy personalized --csv");
  ASSERT_EQ(u.code, 0);
  ASSERT_EQ(p.code, 0);
  const std::string last = p.out.substr(p.out.rfind("aggregate"));
  EXPECT_NEAR(field(second_line(u.out), 2), field(last, 2), 1e-7);
}

TEST_F(CliTest, RobustBoundOnTwoTypeExample) {
  write("m.json", R"({"n": 1, "model": "linear", "segments": [
      {"theta": 0.5, "a": [2], "B": [[1]]}, {"theta": 0.5, "a": [8], "B": [[1]]}]})");
  const CliRun r = run("bound -i " + path("m.json") + " --factor robust --csv");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(field(second_line(r.out), 4), 1.0 + std::log(4.0), 1e-12);
}

TEST_F(CliTest, CheckAndCluster) {
  ASSERT_EQ(run("generate --family linear --n 3 --m 4 --seed 2 --out " + path("m.json")).code, 0);
  const CliRun c = run("check -i " + path("m.json") + " --factor economic --dump-gh " + path("gh.csv"));
  EXPECT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("verified-on-grid"), std::string::npos);
  std::ifstream gh(path("gh.csv"));
  std::string header;
  std::getline(gh, header);
  EXPECT_EQ(header, "q,G,H");
  const CliRun k = run("cluster -i " + path("m.json") + " --k 2 --method kmeans --seed 3 --out " + path("p.csv"));
  EXPECT_EQ(k.code, 0) << k.out;
  EXPECT_TRUE(std::filesystem::exists(path("p.csv")));
}

TEST_F(CliTest, ExperimentMatchesAcrossThreads) {
  write("c.json", R"({"family": "linear", "n_values": [2], "m_values": [2, 3], "instances_per_cell": 3,
                      "seed": 5, "strategies": ["uniform", "economic"]})");
  ASSERT_EQ(run("experiment --config " + path("c.json") + " --threads 1 --out " + path("a.csv")).code, 0);
  ASSERT_EQ(run("experiment --config " + path("c.json") + " --threads 3 --out " + path("b.csv")).code, 0);
  std::ifstream a(path("a.csv")), b(path("b.csv"));
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(sa.rfind("family,n,m,strategy", 0), 0u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("tightness --rho 2 --bogus").code, 1);
  const CliRun usage = run("price --nope");
  EXPECT_EQ(usage.code, 1);
  EXPECT_NE(usage.out.find("Usage"), std::string::npos);
  EXPECT_EQ(run("tightness --rho 0.5").code, 1);
  EXPECT_EQ(run("price -i /nonexistent.json").code, 1);

  write("bad.json", R"({"n": 1, "model": "linear", "segments": [{"theta": 1, "a": [1], "B": [[-1]]}]})");
  const CliRun bad = run("price -i " + path("bad.json"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("segments[0]"), std::string::npos) << bad.out;
}
