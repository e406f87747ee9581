// Acceptance checks. Prints one line per criterion and exits non-zero if any
// criterion fails. Skipped criteria do not fail the run; neither do criteria
// named with --known-failure N, which are still reported as FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "../support/golden.hpp"
#include "../support/oracles.hpp"
#include "tempovis/cli.hpp"
#include "tempovis/tempovis.hpp"

namespace fs = std::filesystem;
using namespace tempovis;

namespace {

enum class Outcome { pass, fail, skip };

struct Result {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Result spline_cdf_estimator() {
  const auto t0 = Clock::now();
  std::mt19937_64 g(2024);
  double worst_knot = 0.0, worst_slope = 0.0, lo_mass = 1.0, hi_mass = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 200 + static_cast<std::size_t>(g() % 801);
    const bool bimodal = trial % 2 == 1;
    const double mu = 40.0 + static_cast<double>(g() % 120);
    const auto data = bimodal ? oracle::mixture(g(), n, {0.3, 0.7}, {mu, mu + 80.0}, {6.0, 15.0})
                              : oracle::mixture(g(), n, {1.0}, {mu}, {4.0 + static_cast<double>(g() % 20)});
    const auto r = spline_pdf(data);

    // ECDF knots rebuilt from the histogram counts.
    const auto& h = r.histogram;
    std::vector<double> xs{h.edges.front() - 1e-3}, Fs{0.0};
    double cum = 0.0;
    const double total = static_cast<double>(n);
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      cum += static_cast<double>(h.counts[k]);
      xs.push_back(0.5 * (h.edges[k] + h.edges[k + 1]));
      Fs.push_back(cum / total);
    }
    xs.push_back(h.edges.back() + 1e-3);
    Fs.push_back(1.0);
    for (std::size_t i = 0; i < xs.size(); ++i)
      worst_knot = std::max(worst_knot, std::abs(r.spline.value(xs[i]) - Fs[i]));
    worst_slope = std::max({worst_slope, std::abs(r.spline.derivative(xs.front())),
                            std::abs(r.spline.derivative(xs.back()))});
    const double mass = oracle::trapezoid(r.pdf.grid, r.pdf.density);
    lo_mass = std::min(lo_mass, mass);
    hi_mass = std::max(hi_mass, mass);
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_knot < 1e-9 && worst_slope < 1e-9 && lo_mass >= 0.97 && hi_mass <= 1.03 &&
                  secs < 5.0;
  return {ok ? Outcome::pass : Outcome::fail,
          "knot residual " + fmt("%.2e", worst_knot) + ", end slope " + fmt("%.2e", worst_slope) +
              ", mass [" + fmt("%.4f", lo_mass) + ", " + fmt("%.4f", hi_mass) + "], " +
              fmt("%.2f", secs) + " s"};
}

Result bimodality_recovery() {
  const auto t0 = Clock::now();
  // 80 draws near 37 BPM and 320 near 140 BPM.
  auto data = oracle::mixture(0, 80, {1.0}, {37.0}, {5.0});
  const auto fast = oracle::mixture(1, 320, {1.0}, {140.0}, {20.0});
  data.insert(data.end(), fast.begin(), fast.end());
  const auto r = spline_pdf(data);
  const auto found = oracle::modes(r.pdf.grid, r.pdf.density, 0.25);
  const double secs = seconds_since(t0);
  std::string where;
  for (const auto& m : found) where += (where.empty() ? "" : ", ") + fmt("%.1f", m.x);
  bool ok = found.size() == 2 && secs < 1.0;
  if (found.size() == 2) {
    ok = ok && std::abs(found[0].x - 37.0) <= 6.0 && std::abs(found[1].x - 140.0) <= 6.0;
  }
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(found.size()) + " modes at [" + where + "] BPM, " + fmt("%.3f", secs) + " s"};
}

Result derivative_oracle() {
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const std::size_t k = 5 + static_cast<std::size_t>(g() % 20);
    std::vector<double> xs{0.0}, ys;
    for (std::size_t i = 1; i < k; ++i) xs.push_back(xs.back() + 0.2 + u(g));
    for (std::size_t i = 0; i < k; ++i) ys.push_back(2.0 * u(g) - 1.0);
    const ClampedSpline sp(xs, ys, {2.0 * u(g) - 1.0, 2.0 * u(g) - 1.0});
    for (int p = 0; p < 100; ++p) {
      const double h = 1e-6;
      const double x = xs.front() + h + (xs.back() - xs.front() - 2.0 * h) * u(g);
      const double fd = (sp.value(x + h) - sp.value(x - h)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - sp.derivative(x)));
    }
  }
  return {worst < 1e-4 ? Outcome::pass : Outcome::fail, "max |S' - FD| " + fmt("%.2e", worst)};
}

Result kde_mass() {
  const auto data = oracle::mixture(11, 500, {0.25, 0.75}, {40.0, 140.0}, {5.0, 18.0});
  double m = 0.0;
  for (double v : data) m += v;
  m /= static_cast<double>(data.size());
  double ss = 0.0;
  for (double v : data) ss += (v - m) * (v - m);
  const double h = 0.07 * std::sqrt(ss / static_cast<double>(data.size()));
  const double lo = *std::min_element(data.begin(), data.end()) - 5.0 * h;
  const double hi = *std::max_element(data.begin(), data.end()) + 5.0 * h;
  const auto k = gaussian_kde(data, 0.07, lo, hi, 4000);
  const double mass = oracle::trapezoid(k.grid, k.density);
  const bool ok = std::abs(mass - 1.0) <= 0.02 && std::abs(k.bandwidth - h) <= 1e-9 * h;
  return {ok ? Outcome::pass : Outcome::fail,
          "mass " + fmt("%.5f", mass) + ", bandwidth " + fmt("%.4f", k.bandwidth)};
}

TempoSeries random_series(std::mt19937_64& g, int bars) {
  std::uniform_real_distribution<double> dur(0.3, 6.0);
  TempoSeries s{"r", {}};
  for (int b = 1; b <= bars; ++b) {
    const int n = 2 + static_cast<int>(g() % 5);
    const double d = dur(g);
    s.bars.push_back({b, n, d, bpm_from_bar(n, d)});
  }
  return s;
}

SectionMap random_map(std::mt19937_64& g, int bars) {
  SectionMap m;
  int start = 1, idx = 0;
  while (start <= bars) {
    const int len = 1 + static_cast<int>(g() % static_cast<unsigned>(std::max(1, bars / 3)));
    const int end = std::min(bars, start + len - 1);
    m.sections.push_back({"s" + std::to_string(idx++), start, end});
    start = end + 1;
  }
  return m;
}

Result sectional_additivity() {
  std::mt19937_64 g(5);
  double worst_sum = 0.0, worst_refine = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int bars = 5 + static_cast<int>(g() % 500);
    const auto s = random_series(g, bars);
    const auto map = random_map(g, bars);
    const auto d = section_durations(s, map);
    long double total = 0.0L;
    for (const auto& b : s.bars) total += b.duration_s;
    worst_sum = std::max(worst_sum, std::abs(d.total() - static_cast<double>(total)));

    // Split every section with more than one bar at a random point.
    SectionMap fine;
    std::vector<std::size_t> parent;
    for (std::size_t i = 0; i < map.size(); ++i) {
      const auto& sec = map.sections[i];
      if (sec.end_bar > sec.start_bar) {
        const int cut = sec.start_bar + static_cast<int>(g() % static_cast<unsigned>(sec.end_bar - sec.start_bar));
        fine.sections.push_back({sec.name + "a", sec.start_bar, cut});
        fine.sections.push_back({sec.name + "b", cut + 1, sec.end_bar});
        parent.insert(parent.end(), {i, i});
      } else {
        fine.sections.push_back(sec);
        parent.push_back(i);
      }
    }
    const auto df = section_durations(s, fine);
    std::vector<double> merged(map.size(), 0.0);
    for (std::size_t j = 0; j < df.entries.size(); ++j) merged[parent[j]] += df.entries[j].second;
    for (std::size_t i = 0; i < map.size(); ++i)
      worst_refine = std::max(worst_refine, std::abs(merged[i] - d.entries[i].second));
  }
  const bool ok = worst_sum <= 1e-6 && worst_refine <= 1e-6;
  return {ok ? Outcome::pass : Outcome::fail,
          "sum error " + fmt("%.2e", worst_sum) + " s, refinement error " + fmt("%.2e", worst_refine) + " s"};
}

Result bpm_round_trip() {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> logd(std::log(0.05), std::log(60.0));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 1 + static_cast<int>(g() % 16);
    const double dt = std::exp(logd(g));
    const double back = duration_from_bpm(n, bpm_from_bar(n, dt));
    worst = std::max(worst, std::abs(back - dt) / dt);
  }
  return {worst <= 1e-12 ? Outcome::pass : Outcome::fail, "max relative error " + fmt("%.2e", worst)};
}

Result golden_files() {
  const auto t0 = Clock::now();
  const fs::path out_dir = fs::temp_directory_path() / "tempovis_acceptance_golden";
  fs::create_directories(out_dir);
  int mismatched = 0, malformed = 0;
  std::string names;
  for (const auto& inv : golden::invocations()) {
    const fs::path out = out_dir / inv.golden;
    std::ostringstream o, e;
    const int code = golden::run(inv, TEMPOVIS_TEST_DATA_DIR, out.string(), o, e);
    const std::string got = code == 0 ? golden::slurp(out) : std::string{};
    const std::string want = golden::slurp(fs::path(TEMPOVIS_GOLDEN_DIR) / inv.golden);
    if (code != 0 || want.empty() || got != want) {
      ++mismatched;
      names += " " + inv.golden;
    }
    try {
      boost::property_tree::ptree tree;
      std::istringstream in(got);
      boost::property_tree::read_xml(in, tree);
      if (tree.get_child_optional("svg") == boost::none) ++malformed;
    } catch (const std::exception&) {
      ++malformed;
    }
  }
  fs::remove_all(out_dir);
  const double secs = seconds_since(t0);
  const bool ok = mismatched == 0 && malformed == 0 && secs < 10.0;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(golden::invocations().size()) + " subcommands, " + std::to_string(mismatched) +
              " differ," + (names.empty() ? "" : names + ",") + " " + std::to_string(malformed) +
              " malformed, " + fmt("%.2f", secs) + " s"};
}

Result published_values() {
  const char* env = std::getenv("TEMPOVIS_CORPUS_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(TEMPOVIS_CORPUS_DIR);
  const fs::path timing = dir / "op5n1_mvt1.csv";
  if (!fs::exists(timing)) return {Outcome::skip, "corpus not found at " + timing.string()};

  const auto all = parse_timing_csv(read_file(timing.string()));
  const auto find = [&](const std::string& id) -> const TempoSeries* {
    for (const auto& s : all)
      if (s.recording_id == id) return &s;
    return nullptr;
  };
  const auto* casals = find("casals");
  const auto* isserlis = find("isserlis");
  if (!casals || !isserlis) return {Outcome::fail, "corpus lacks 'casals' or 'isserlis'"};

  const BarRange allegro{35, 400};
  const auto c_all = summary_stats(*casals), i_all = summary_stats(*isserlis);
  const auto c = summary_stats(*casals, allegro), i = summary_stats(*isserlis, allegro);
  const bool ok = std::abs(c_all.total_duration_s - 905.0) <= 1.0 &&
                  std::abs(c.mean_bpm - 138.8) <= 0.1 && std::abs(c.std_bpm - 23.8) <= 0.1 &&
                  std::abs(i.mean_bpm - 144.4) <= 0.1 && std::abs(i.std_bpm - 23.4) <= 0.1 &&
                  std::abs(i_all.total_duration_s - 851.0) <= 1.0;
  return {ok ? Outcome::pass : Outcome::fail,
          "Casals " + fmt("%.1f", c_all.total_duration_s) + " s, " + fmt("%.2f", c.mean_bpm) + "/" +
              fmt("%.2f", c.std_bpm) + " BPM; Isserlis " + fmt("%.1f", i_all.total_duration_s) +
              " s, " + fmt("%.2f", i.mean_bpm) + "/" + fmt("%.2f", i.std_bpm) + " BPM"};
}

Result legibility_bound() {
  const fs::path csv = fs::temp_directory_path() / "tempovis_six_recordings.csv";
  const fs::path svg = fs::temp_directory_path() / "tempovis_six_recordings.svg";
  {
    std::ofstream f(csv);
    f << "recording_id,bar_index,n_beats,bpm\n";
    for (int r = 0; r < 6; ++r)
      for (int b = 1; b <= 10; ++b) f << "rec" << r << "," << b << ",3," << 100 + r + b << "\n";
  }
  const std::string in = csv.string(), out = svg.string();

  const char* six[] = {"tempovis", "tempograph", "--input", in.c_str(), "--out", out.c_str()};
  std::ostringstream o6, e6;
  const int code6 = cli::run(6, six, o6, e6);
  const bool wrote = fs::exists(svg);

  const char* five[] = {"tempovis", "tempograph", "--input", in.c_str(), "--out", out.c_str(),
                        "--recordings", "rec0,rec1,rec2,rec3,rec4"};
  std::ostringstream o5, e5;
  const int code5 = cli::run(8, five, o5, e5);
  fs::remove(csv);
  fs::remove(svg);

  const bool points = e6.str().find("multiples") != std::string::npos;
  const bool ok = code6 == 1 && points && !wrote && code5 == 0;
  return {ok ? Outcome::pass : Outcome::fail,
          "6 recordings: exit " + std::to_string(code6) + (points ? ", suggests multiples" : ", no hint") +
              "; 5 recordings: exit " + std::to_string(code5)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) != "--known-failure") {
      std::fprintf(stderr, "usage: acceptance [--known-failure N]...\n");
      return 2;
    }
    known.insert(std::atoi(argv[i + 1]));
  }
  if (argc % 2 == 0) {
    std::fprintf(stderr, "usage: acceptance [--known-failure N]...\n");
    return 2;
  }
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "spline-CDF estimator correctness", spline_cdf_estimator},
      {2, "bimodality recovery", bimodality_recovery},
      {3, "spline derivative vs finite differences", derivative_oracle},
      {4, "Gaussian KDE mass", kde_mass},
      {5, "sectional additivity", sectional_additivity},
      {6, "BPM round trip", bpm_round_trip},
      {7, "golden SVG determinism", golden_files},
      {8, "published Op. 5 No. 1 values", published_values},
      {9, "tempograph legibility bound", legibility_bound},
  };
  int failed = 0, tolerated = 0;
  for (const auto& c : criteria) {
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.outcome == Outcome::pass ? "PASS" : r.outcome == Outcome::fail ? "FAIL" : "SKIP";
    const bool excused = r.outcome == Outcome::fail && known.count(c.id);
    if (r.outcome == Outcome::fail) ++(excused ? tolerated : failed);
    std::printf("[%s] criterion %d: %s (%s)%s\n", tag, c.id, c.name, r.detail.c_str(),
                excused ? " [known failure]" : "");
  }
  for (int id : known) {
    bool listed = false;
    for (const auto& c : criteria) listed = listed || c.id == id;
    if (!listed) std::printf("warning: --known-failure %d names no criterion\n", id);
  }
  std::printf("%d failed, %d known failures\n", failed, tolerated);
  std::fflush(stdout);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
