#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / ("mcwin_cli_out_" + std::to_string(::getpid()));
  const std::string cmd = std::string(MCWIN_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write_cfg(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

const std::string kAbsorbing =
    "receiver = absorbing\nsymbol_time = 0.2\nisi_length = 4\nmolecules = 2000\ntrials = 20000\n"
    "metric_grid_steps = 80\nber_grid_steps = 20\ntau_steps = 20\n";

}  // namespace

TEST(Cli, OptimizePrintsClosedForm) {
  const auto cfg = write_cfg("mcwin_cli_ab.cfg", kAbsorbing);
  const CliResult r = run("optimize -c " + cfg.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("method=Prop3\n"), std::string::npos);
  EXPECT_NE(r.out.find("regime=AboveQhat\n"), std::string::npos);
  EXPECT_NE(r.out.find("q_hat=879\n"), std::string::npos);
  EXPECT_NE(r.out.find("analytic_ber="), std::string::npos);
}

TEST(Cli, SimulateExplicitWindow) {
  const auto cfg = write_cfg("mcwin_cli_ab.cfg", kAbsorbing);
  const CliResult r = run("simulate -c " + cfg.string() + " --t1 0.03 --t2 0.13 --threshold 200");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("window_source=explicit\n"), std::string::npos);
  EXPECT_NE(r.out.find("mc_trials=20000\n"), std::string::npos);
  EXPECT_NE(r.out.find("threshold=200\n"), std::string::npos);
}

TEST(Cli, SweepCsvIsDeterministic) {
  const auto cfg = write_cfg("mcwin_cli_ab.cfg", kAbsorbing + "q_values = 200,2000\nschemes = closed_form,full\n");
  const fs::path a = fs::temp_directory_path() / "mcwin_cli_a.csv";
  const fs::path b = fs::temp_directory_path() / "mcwin_cli_b.csv";
  ASSERT_EQ(run("--workers 1 sweep -c " + cfg.string() + " -o " + a.string()).code, 0);
  ASSERT_EQ(run("--workers 3 sweep -c " + cfg.string() + " -o " + b.string()).code, 0);
  const std::string ta = read(a);
  EXPECT_EQ(ta, read(b));
  EXPECT_EQ(first_line(ta),
            "receiver,symbol_time,isi_length,q,scheme,method,status,t1,t2,n1,n2,shift,threshold,analytic_ber,"
            "mc_ber,mc_ci_halfwidth,mc_trials,mc_errors,regime,q_hat");
  EXPECT_EQ(std::count(ta.begin(), ta.end(), '\n'), 5);
}

TEST(Cli, MetricsToStdout) {
  const auto cfg = write_cfg("mcwin_cli_pa.cfg",
                             "receiver = passive\nsymbol_time = 1\nisi_length = 2\nmolecules = 1000\n");
  const CliResult r = run("metrics -c " + cfg.string() + " -o -");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(first_line(r.out), "n1,n2,sir,sid,sinar,msinar,msid");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 29 * 30 / 2);
}

TEST(Cli, ConfigRoundTrip) {
  const auto cfg = write_cfg("mcwin_cli_ab.cfg", kAbsorbing + "seed = 5\n");
  const CliResult first = run("config -c " + cfg.string() + " --set molecules=777");
  ASSERT_EQ(first.code, 0);
  EXPECT_NE(first.out.find("molecules = 777\n"), std::string::npos);
  const auto again = write_cfg("mcwin_cli_again.cfg", first.out);
  EXPECT_EQ(run("config -c " + again.string()).out, first.out);
}

TEST(Cli, ReproduceWritesBundle) {
  const fs::path dir = fs::temp_directory_path() / "mcwin_cli_repro";
  fs::remove_all(dir);
  const auto cfg = write_cfg("mcwin_cli_repro.cfg",
                             "q_values = 100,1000\nsimulate = false\nmetric_grid_steps = 40\nber_grid_steps = 10\n");
  const CliResult r = run("reproduce conv-ab -o " + dir.string() + " -c " + cfg.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rows=16\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "conv-ab.csv"));
  EXPECT_EQ(read(dir / "conv-ab.manifest.csv"), "file,schema,figure,rows\nconv-ab.csv,conv-ab/1,conv-ab,16\n");
  EXPECT_TRUE(fs::exists(dir / "conv-ab.cfg"));
  fs::remove_all(dir);
}

TEST(Cli, ShippedConfigsParse) {
  for (const char* name : {"absorbing.cfg", "passive.cfg"}) {
    const fs::path p = fs::path(MCWIN_SOURCE_DIR) / "configs" / name;
    EXPECT_EQ(run("config -c " + p.string()).code, 0) << name;
  }
}

TEST(Cli, ExitCodes) {
  const auto cfg = write_cfg("mcwin_cli_ab.cfg", kAbsorbing);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("optimize -c " + cfg.string() + " --set colour=red").code, 2);
  EXPECT_EQ(run("optimize -c " + cfg.string() + " --set symbol_time=-1").code, 2);
  EXPECT_EQ(run("optimize -c " + cfg.string() + " --scheme nope").code, 2);
  EXPECT_EQ(run("optimize -c /nonexistent/x.cfg").code, 4);
  EXPECT_EQ(run("sweep -c " + cfg.string() + " -o /nonexistent/dir/out.csv").code, 4);
  // Too short a symbol for the closed form.
  EXPECT_EQ(run("optimize -c " + cfg.string() + " --set symbol_time=0.04 --set isi_length=1").code, 3);
  EXPECT_EQ(run("simulate -c " + cfg.string() + " --t1 0.1 --t2 0.05").code, 3);
  const auto bad_rule = write_cfg("mcwin_cli_rule.cfg",
                                  "receiver = passive\nsymbol_time = 1\nisi_length = 2\nsample_rule = floored_seconds\n");
  EXPECT_EQ(run("optimize -c " + bad_rule.string()).code, 2);
}
