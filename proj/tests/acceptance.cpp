// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <xyzent/xyzent.hpp>

namespace fs = std::filesystem;
using namespace xyzent;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  [%2d] %-46s %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

VerifyOptions opts(std::size_t samples, double tol) {
  VerifyOptions o;
  o.samples = samples;
  o.seed = 42;
  o.tol = tol;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Reads a two-axis CSV written by write_grid back into a grid.
SweepGrid read_grid_csv(const fs::path& p, const SweepSpec& spec) {
  SweepGrid g{spec, {}};
  std::ifstream in(p);
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    g.values.push_back(std::stod(line.substr(last + 1)));
  }
  return g;
}

void criterion_1() {
  const auto closed = verify_gibbs_oracle(opts(1000, 1e-10));
  const auto routes = verify_oracle_routes(opts(1000, 1e-12));
  report(1, closed.passed && routes.passed && closed.checked == 1000,
         "closed-form Gibbs state vs numeric oracle",
         "closed-oracle " + sci(closed.max_deviation) + " (<=1e-10), spectral-series " +
             sci(routes.max_deviation) + " (<=1e-12)");
}

void criterion_2() {
  const auto r = verify_concurrence_routes(opts(1000, 1e-12));
  report(2, r.passed && r.checked == 1000, "three concurrence routes agree",
         "max " + sci(r.max_deviation) + " (<=1e-12)");
}

void criterion_3() {
  const auto r = verify_zero_temperature_limit(opts(1000, 1e-3));
  report(3, r.passed && r.checked > 0, "T=0 branches vs C(T=1e-3)",
         "max " + sci(r.max_deviation) + " over " + std::to_string(r.checked) + " draws (<=1e-3)");
}

void criterion_4() {
  bool ok = true;
  double worst = 0;
  std::vector<double> bcs;
  for (double gamma : {0.2, 0.6, 0.9}) {
    const ModelParams p{1, gamma, -1, 0, 0};
    const auto formula = critical_b(p);
    const auto bisected = bisect_critical_b(p, 5.0);
    if (!formula || !bisected) {
      ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(*formula - *bisected));
    bcs.push_back(*formula);
  }
  ok = ok && worst <= 1e-6 && bcs.size() == 3;
  ok = ok && std::abs(bcs[0] - 0.663325) <= 1e-6;
  ok = ok && bcs[0] < bcs[1] && bcs[1] < bcs[2];
  report(4, ok, "critical field b_c, bisection and monotonicity",
         "b_c = " + fixed(bcs.size() > 0 ? bcs[0] : NAN) + ", " + fixed(bcs.size() > 1 ? bcs[1] : NAN) +
             ", " + fixed(bcs.size() > 2 ? bcs[2] : NAN) + "; |formula-bisect| " + sci(worst));
}

void criterion_5() {
  const ModelParams p{1, 0.2, -1, 0.8, 0};
  const auto r = detect_revival(p, std::nullopt, 4.0, 401);
  const double eta = energy_scales(p).eta;
  const double plateau = p.J * p.gamma / eta;
  const double peak = p.J / (eta - p.Jz);
  const bool ok = r.has_revival && r.larger_revival &&
                  std::abs(r.plateau_value - plateau) <= 1e-6 &&
                  std::abs(r.revival_peak_value - peak) <= 1e-6 &&
                  std::abs(plateau - 0.242536) <= 1e-6;
  report(5, ok, "larger revival at B=0.8, Jz=-1, gamma=0.2",
         "plateau " + fixed(r.plateau_value) + " (" + fixed(plateau) + "), peak " +
             fixed(r.revival_peak_value) + " (" + fixed(peak) + "), larger=" +
             (r.larger_revival ? "true" : "false"));
}

void criterion_6() {
  const auto r = verify_larger_revival(opts(200, 0));
  report(6, r.passed && r.checked == 200, "larger-revival predicate vs detected revival",
         std::to_string(r.checked - static_cast<std::size_t>(r.max_deviation > 0 ? 1 : 0)) +
             (r.passed ? "/200 agree" : " failing: " + r.failure));
}

void criterion_7() {
  const ModelParams xx{1, 0, 0, 0, 0};
  const double c = thermal_concurrence(xx, Temperature::from_T(1));
  const auto tc = critical_temperature(xx, 10);
  const double root = 1.0 / std::asinh(1.0);
  const bool ok = std::abs(c - 0.068894) <= 1e-5 && tc && std::abs(tc->value - 1.134593) <= 1e-5 &&
                  std::abs(tc->value - root) <= 1e-5;
  report(7, ok, "XX checkpoint C(T=1) and T_c",
         "C " + fixed(c) + ", T_c " + fixed(tc ? tc->value : NAN) + " (root " + fixed(root) + ")");
}

void criterion_8() {
  std::string detail = "T_c(b=4..7):";
  bool ok = true;
  double prev = -1;
  for (double b : {4.0, 5.0, 6.0, 7.0}) {
    const auto tc = critical_temperature({1, 0.2, 1, 4, b}, 10);
    const double v = tc ? tc->value : 0.0;
    ok = ok && tc.has_value() && v >= prev;
    prev = v;
    detail += " " + fixed(v);
  }
  report(8, ok, "T_c nondecreasing in b", detail);
}

void criterion_9() {
  const auto r = verify_symmetries(opts(1000, 1e-12));
  report(9, r.passed && r.checked == 1000, "C invariant under gamma->-gamma, J->-J",
         "max " + sci(r.max_deviation) + " (<=1e-12)");
}

// Checked literally on the normalized roots. The detail also reports the
// same comparison on Z*l1,2, which is the part that is truly b-free.
void criterion_10() {
  DrawSource src(42);
  double normalized = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    auto moved = d.p;
    moved.b = src.uniform(-5.0, 5.0);
    const auto r0 = block_roots_closed(d.p, t);
    const auto r1 = block_roots_closed(moved, t);
    normalized = std::max({normalized, std::abs(r0.corner[0] - r1.corner[0]),
                           std::abs(r0.corner[1] - r1.corner[1])});
  }
  const auto scaled = verify_b_independence(opts(1000, 1e-12));
  report(10, normalized <= 1e-12, "lambda_1,2 independent of b",
         "max " + sci(normalized) + " (<=1e-12); Z*lambda_1,2 rel " + sci(scaled.max_deviation));
}

void criterion_11() {
  const auto r = verify_state_validity(opts(1000, 1e-12));
  report(11, r.passed && r.checked == 1000, "states valid: trace, block PSD, C in [0,1]",
         "worst violation " + sci(r.max_deviation));
}

void criterion_12() {
  const std::string cli = XYZENT_CLI_PATH;
  const fs::path base = fs::temp_directory_path() / "xyzent_acceptance_figures";
  fs::remove_all(base);
  bool ok = true;
  double first_run_seconds = 0;
  for (const char* run : {"a", "b"}) {
    const auto start = std::chrono::steady_clock::now();
    for (auto name : figure_names) {
      const std::string cmd = cli + " figure " + std::string(name) + " --out " +
                              (base / run).string() + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) ok = false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (std::string(run) == "a") first_run_seconds = secs;
  }

  std::size_t files = 0;
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    ++files;
    const auto twin = base / "b" / entry.path().filename();
    identical = identical && fs::exists(twin) && slurp(entry.path()) == slurp(twin);
  }

  const auto fig4 = figure_preset("fig4");
  const auto grid = read_grid_csv(base / "a" / "fig4.csv", fig4.curves[0].spec);
  const int regions =
      grid.values.size() == grid_size(fig4.curves[0].spec) ? count_regions(grid, 1e-3) : -1;

  // Same fig4 plane on a finer grid, reported for diagnosis only: the zero
  // valley separating the regions becomes thinner than one preset cell.
  auto fine = fig4.curves[0].spec;
  fine.axes[0].count = 601;
  fine.axes[1].count = 201;
  const int fine_regions = count_regions(run_sweep(fine), 1e-3);

  ok = ok && files == 11 && identical && first_run_seconds < 30.0 && regions == 2;
  report(12, ok, "figure regression",
         std::to_string(files) + " CSVs in " + fixed(first_run_seconds).substr(0, 5) + " s, " +
             (identical ? "byte-identical" : "DIFFERENT") + ", fig4 regions " +
             std::to_string(regions) + " (601x201 grid: " + std::to_string(fine_regions) + ")");
}

} // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion_1, criterion_2,  criterion_3,
                                                    criterion_4, criterion_5,  criterion_6,
                                                    criterion_7, criterion_8,  criterion_9,
                                                    criterion_10, criterion_11, criterion_12};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL  criterion threw: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
