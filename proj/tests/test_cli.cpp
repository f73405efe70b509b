// End-to-end checks of the fluidbound command line tool: exit codes, CSV
// schemas, frozen reference values, config file precedence, run manifests,
// and byte-level reproducibility. Each check spawns the installed binary in
// a scratch directory under the system temp path.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, interleaved
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "fluidbound_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "cannot read " << path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = work_dir() / ("run" + std::to_string(counter++) + ".log");
  const std::string cmd = std::string("\"") + FLUIDBOUND_CLI_PATH + "\" " +
                          args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  if (status != -1 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.output = read_file(log);
  return result;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cells.push_back(cell);
  }
  return cells;
}

std::vector<double> row_values(const std::string& line) {
  std::vector<double> values;
  for (const auto& cell : split_cells(line)) {
    values.push_back(cell.empty() ? std::nan("") : std::stod(cell));
  }
  return values;
}

std::string first_line(const std::string& text) {
  const auto pos = text.find('\n');
  return pos == std::string::npos ? text : text.substr(0, pos);
}

// Pull the 16-digit hash out of a manifest without parsing the whole JSON.
std::string manifest_hash(const fs::path& manifest_path) {
  const std::string text = read_file(manifest_path);
  const std::string key = "\"fnv1a64\": \"";
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return text.substr(pos + key.size(), 16);
}

}  // namespace

TEST_CASE("copy-bound prints closed-form values and maps guard failures") {
  auto r = run_cli("copy-bound --eps0 0.1 --epsf 0.5 --delta 0.1");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.output) == "8.9999999999999982");

  r = run_cli("copy-bound --eps0 0.1 --epsf 0.5 --delta 0.1 "
              "--kind history --T 3");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.output) == "2.9999999999999996");

  const fs::path out = work_dir() / "copy_bound.csv";
  r = run_cli("copy-bound --eps0 0.1 --epsf 0.5 --delta 0.1 --out \"" +
              out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "eps0,epsf,delta,kind,T,value");
  CHECK(lines[1].find(",final,0,8.9999999999999982") != std::string::npos);
  CHECK(fs::exists(out.string() + ".manifest.json"));

  // delta must stay below epsf / 2 for a nontrivial bound
  r = run_cli("copy-bound --eps0 0.1 --epsf 0.4 --delta 0.2");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("delta") != std::string::npos);

  r = run_cli("copy-bound --eps0 0.1 --epsf 0.5 --delta 0.1 --kind history");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("--T") != std::string::npos);

  r = run_cli("copy-bound --eps0 0.1 --epsf 0.5 --bogus 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("growth-bounds emits the frozen reference row and a manifest") {
  const fs::path out = work_dir() / "growth.csv";
  const auto r = run_cli("growth-bounds --m 2 --u0 1 --out \"" +
                         out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "m,k,u0,gamma_l,gamma_u,gamma_root,unstable");
  CHECK(lines[1] ==
        "2,1,1,0.51162946150740085,0.54772255750516607,"
        "0.52249847915074277,1");

  const std::string manifest = read_file(out.string() + ".manifest.json");
  CHECK(manifest.find("\"command\": \"growth-bounds\"") != std::string::npos);
  CHECK(manifest.find("\"fnv1a64\"") != std::string::npos);
  CHECK(manifest.find("\"tool_version\"") != std::string::npos);

  // invalid wavenumber ranges are rejected before any work happens
  const auto bad = run_cli("growth-bounds --m 2 --k-min 3 --out \"" +
                           out.string() + "\"");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("k_min") != std::string::npos);
}

TEST_CASE("eigenmode row count follows the truncation") {
  const fs::path out = work_dir() / "eigenmode.csv";
  const auto r = run_cli("eigenmode --m 2 --k 1 --truncation 64 --out \"" +
                         out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() == 66);  // header plus j = -64, -62, ..., 64
  CHECK(lines[0] == "j,re_c,im_c,re_b,im_b");
  CHECK(lines[1].rfind("-64,", 0) == 0);
  CHECK(lines[65].rfind("64,", 0) == 0);
  CHECK(r.output.find("gamma") != std::string::npos);

  // the truncation must be a multiple of m and at least 16 m
  const auto bad = run_cli("eigenmode --m 2 --k 1 --truncation 8 --out \"" +
                           out.string() + "\"");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("bound-curves honors a config file with command line precedence") {
  const fs::path cfg = work_dir() / "curves.cfg";
  {
    std::ofstream out(cfg);
    out << "# pinned-envelope configuration\n"
        << "n-samples = 24\n"
        << "eps = 1e-6\n"
        << "kappa = 1e-6\n"
        << "exponent-K = 2\n";
  }

  const fs::path a = work_dir() / "curves_a.csv";
  auto r = run_cli("bound-curves --config \"" + cfg.string() + "\" --out \"" +
                   a.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(split_lines(read_file(a)).size() == 25);

  const fs::path b = work_dir() / "curves_b.csv";
  r = run_cli("bound-curves --config \"" + cfg.string() +
              "\" --n-samples 20 --out \"" + b.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(split_lines(read_file(b)).size() == 21);

  const std::string manifest = read_file(a.string() + ".manifest.json");
  CHECK(manifest.find("\"config\"") != std::string::npos);
  CHECK(manifest.find("\"kappa_source\": \"override\"") != std::string::npos);

  const fs::path bad = work_dir() / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "bogus-key = 1\n";
  }
  r = run_cli("bound-curves --config \"" + bad.string() + "\"");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("bogus-key") != std::string::npos);

  r = run_cli("bound-curves --config \"" +
              (work_dir() / "missing.cfg").string() + "\"");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("cannot open") != std::string::npos);
}

TEST_CASE("identical runs produce identical artifacts") {
  const std::string args =
      "bound-curves --eps 1e-6 --kappa 1e-6 --exponent-K 2 --n-samples 64";
  const fs::path a = work_dir() / "repeat_a.csv";
  const fs::path b = work_dir() / "repeat_b.csv";
  CHECK(run_cli(args + " --out \"" + a.string() + "\"").exit_code == 0);
  CHECK(run_cli(args + " --out \"" + b.string() + "\"").exit_code == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(manifest_hash(a.string() + ".manifest.json") ==
        manifest_hash(b.string() + ".manifest.json"));
}

TEST_CASE("invalid parameters exit with code 2 and a diagnostic") {
  auto r = run_cli("bound-curves --n-samples 8 --kappa 1e-6 --exponent-K 2 "
                   "--eps 1e-6");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("n_samples >= 16") != std::string::npos);

  r = run_cli("bound-curves --exponent-K 2 --eps 1e-6");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("--kappa") != std::string::npos);

  r = run_cli("scaling --eps-list 1e-3 --kappa 1e-6 --exponent-K 2");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("violates the validity condition") != std::string::npos);
}

TEST_CASE("unwritable output paths exit with code 3") {
  const auto r = run_cli(
      "growth-bounds --m 2 --out /nonexistent_dir_fb/growth.csv");
  CHECK(r.exit_code == 3);
}

TEST_CASE("unstable time steps exit with code 4") {
  const fs::path out = work_dir() / "kdv_blowup.csv";
  const auto r = run_cli("kdv --delta 0.05 --mode numeric --dt 1 "
                         "--t-final 2 --resolution 256 --out \"" +
                         out.string() + "\"");
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("stability limit") != std::string::npos);
}

TEST_CASE("kdv both mode keeps analytic and numeric trajectories together") {
  const fs::path out = work_dir() / "kdv_both.csv";
  const auto r = run_cli("kdv --delta 0.05 --mode both --t-final 0.5 "
                         "--dt 1e-3 --resolution 512 --sample-every 100 "
                         "--out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() >= 7);  // header plus samples at steps 0, 100, ..., 500
  CHECK(lines[0] == "t,overlap_analytic,overlap_numeric,norm_drift,deviation");

  // at t = 0 the offset soliton nearly coincides with the reference one
  const auto row0 = row_values(lines[1]);
  REQUIRE(row0.size() == 5);
  CHECK(row0[0] == 0.0);
  CHECK(row0[1] > 0.999);
  CHECK(row0[2] == doctest::Approx(row0[1]).epsilon(1e-9));

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = row_values(lines[i]);
    REQUIRE(row.size() == 5);
    CHECK(row[3] <= 1e-10);  // numeric L2 norm drift
    CHECK(row[4] <= 1e-6);   // analytic vs numeric deviation
  }
}

TEST_CASE("kdv analytic mode reproduces the frozen decayed overlap") {
  const fs::path out = work_dir() / "kdv_analytic.csv";
  const auto r = run_cli("kdv --delta 0.05 --mode analytic --t-final 40 "
                         "--out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() >= 2);
  const auto last = row_values(lines.back());
  REQUIRE(last.size() == 5);
  CHECK(last[0] == doctest::Approx(40.0));
  CHECK(last[1] == doctest::Approx(0.67372588483138518).epsilon(1e-12));
  CHECK(std::isnan(last[2]));  // no numeric trajectory in analytic mode
}

TEST_CASE("euler-sim keeps every sampled row inside its bounds") {
  const fs::path out = work_dir() / "euler_short.csv";
  const auto r = run_cli("euler-sim --m 2 --k 1 --eps 1e-3 --truncation 64 "
                         "--grid-n 256 --dt 0.002 --t-max 0.1 "
                         "--sample-every 10 --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(read_file(out));
  REQUIRE(lines.size() == 7);  // header plus samples at steps 0, 10, ..., 50
  CHECK(lines[0] ==
        "t,overlap_nonlinear,overlap_linear,f_t,g_t,h_t,H_tilde_t,eta_l2,"
        "eta_bound,energy,enstrophy_l4,pressure_l2");

  const double energy0 = row_values(lines[1])[9];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = row_values(lines[i]);
    REQUIRE(row.size() == 12);
    CHECK(row[1] <= row[6] + 1e-12);          // nonlinear overlap under H_tilde
    CHECK(row[2] >= row[4] - 1e-6);           // linear overlap above g
    CHECK(row[2] <= row[3] + 1e-6);           // linear overlap below f
    CHECK(row[7] <= row[8] + 1e-12);          // eta under its envelope
    CHECK(std::abs(row[9] - energy0) <= 1e-6 * std::abs(energy0));
  }

  const std::string manifest = read_file(out.string() + ".manifest.json");
  CHECK(manifest.find("\"kappa_source\": \"computed\"") != std::string::npos);
}
