#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = WEYL_CLI_PATH;
const std::string kDir = WEYL_SCENARIO_DIR;

int run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("weyl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify " + kDir + "/free_particle.scn"), 0);
  EXPECT_EQ(run("verify " + kDir + "/corrupted_potential.scn"), 1);
}

TEST_F(Cli, UsageAndValidationErrors) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("explode " + kDir + "/fig3_k.scn"), 2);
  EXPECT_EQ(run("verify"), 2);
  EXPECT_EQ(run("verify " + path("missing.scn")), 2);
  EXPECT_EQ(run("simulate " + kDir + "/fig3_k.scn --dt -1"), 2);
  EXPECT_EQ(run("simulate " + kDir + "/fig3_k.scn --bogus"), 2);
  EXPECT_EQ(run("simulate " + kDir + "/fig3_k.scn --paper-literal-field --out " + path("x.csv")), 2);
  EXPECT_EQ(run("verify " + write("q0.scn", "helicity = positive\nq = 0\n")), 2);
  EXPECT_EQ(run("control " + write("pole.scn", "helicity = positive\nq = 1\ncontrol.mode = azimuthal\n")), 2);
}

TEST_F(Cli, SimulateIsByteIdentical) {
  ASSERT_EQ(run("simulate " + kDir + "/fig3_k.scn --seed 5 --out " + path("a.csv")), 0);
  ASSERT_EQ(run("simulate " + kDir + "/fig3_k.scn --seed 5 --out " + path("b.csv")), 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_GT(a.size(), 1000u);
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(a.substr(0, a.find('\n')), "t,x,y,z,vx,vy,vz,theta,phi,k,E0,px,py,pz,Ex,Ey,Ez,constraint_residual");
}

TEST_F(Cli, OverridesApply) {
  ASSERT_EQ(run("simulate " + kDir + "/straight_line.scn --dt 0.5 --t-end 2 --out " + path("s.csv")), 0);
  EXPECT_EQ(slurp(path("s.csv")),
            "t,x,y,z,vx,vy,vz,theta,phi,k,E0,px,py,pz,Ex,Ey,Ez,constraint_residual\n"
            "0,0,0,0,0,0,1,0,0,0,0,0,0,0,0,0,0,0\n"
            "0.5,0,0,0.5,0,0,1,0,0,0,0,0,0,0,0,0,0,0\n"
            "1,0,0,1,0,0,1,0,0,0,0,0,0,0,0,0,0,0\n"
            "1.5,0,0,1.5,0,0,1,0,0,0,0,0,0,0,0,0,0,0\n"
            "2,0,0,2,0,0,1,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST_F(Cli, ConstraintViolationExitsOneWithPartialCsv) {
  const std::string sc = write("bad.scn",
                               "helicity = positive\nq = 1\ntheta0 = pi/2\nomega2 = 1\n"
                               "field = expr\nfield.Ex = 0.1*t\nt_end = 2\ndt = 0.01\n");
  EXPECT_EQ(run("simulate " + sc + " --out " + path("bad.csv")), 1);
  const std::string csv = slurp(path("bad.csv"));
  EXPECT_NE(csv.find("constraint_residual\n"), std::string::npos);
  EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST_F(Cli, FiguresWritesThreeFiles) {
  ASSERT_EQ(run("figures " + kDir + "/fig3_k.scn --out " + path("fig")), 0);
  EXPECT_EQ(slurp(path("fig_velocity.csv")).substr(0, 12), "t,vx,vy,vz\n0");
  EXPECT_EQ(slurp(path("fig_trajectory.csv")).substr(0, 9), "t,x,y,z\n0");
  EXPECT_EQ(slurp(path("fig_k.csv")).substr(0, 5), "t,k\n0");
}

TEST_F(Cli, ControlAndSiReport) {
  ASSERT_EQ(run("control " + kDir + "/control_azimuthal.scn --si --out " + path("c.csv")), 0);
  const std::string csv = slurp(path("c.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,Ex,Ey,Ez,target,achieved");
  const std::string report = path("report.txt");
  const std::string cmd = "\"" + kCli + "\" simulate " + kDir + "/fig3_k.scn --si --out " + path("f.csv") + " > " +
                          report + " 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const std::string text = slurp(report);
  EXPECT_NE(text.find("si_rate_eV_per_second"), std::string::npos);
  EXPECT_EQ(slurp(path("f.csv")).find("eV"), std::string::npos);
}

}  // namespace
