#include <catch_amalgamated.hpp>

#include <random>

#include "tempovis/ingest.hpp"
#include "tempovis/section_stats.hpp"

using namespace tempovis;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

TempoSeries from_bpm(std::vector<double> bpm, int beats = 4) {
  TempoSeries s{"r", {}};
  for (std::size_t i = 0; i < bpm.size(); ++i) {
    s.bars.push_back({static_cast<int>(i) + 1, beats, duration_from_bpm(beats, bpm[i]), bpm[i]});
  }
  return s;
}

}  // namespace

TEST_CASE("summary of constant tempo") {
  const auto s = from_bpm(std::vector<double>(10, 120.0));
  const auto all = summary_stats(s);
  CHECK(all.mean_bpm == 120.0);
  CHECK(all.std_bpm == 0.0);
  CHECK(all.n_bars == 10);
  CHECK(all.total_duration_s == 20.0);
  const auto part = summary_stats(s, BarRange{3, 5});
  CHECK(part.n_bars == 3);
  CHECK(part.total_duration_s == 6.0);
}

TEST_CASE("population standard deviation") {
  const auto st = summary_stats(from_bpm({100, 140}));
  CHECK(st.mean_bpm == 120.0);
  CHECK(st.std_bpm == 20.0);
}

TEST_CASE("mean is per bar, not beats over time") {
  const auto s = from_bpm({60, 180});  // 4 s and 1.333 s
  CHECK(summary_stats(s).mean_bpm == 120.0);
  CHECK(8 * 60.0 / summary_stats(s).total_duration_s != 120.0);
}

TEST_CASE("summary rejects bad ranges") {
  const auto s = from_bpm({100, 110, 120});
  CHECK_THROWS_AS(summary_stats(s, BarRange{2, 4}), domain_error);
  CHECK_THROWS_AS(summary_stats(s, BarRange{3, 2}), domain_error);
  CHECK_THROWS_AS(summary_stats(TempoSeries{"e", {}}), domain_error);
}

TEST_CASE("section durations") {
  const auto s = from_bpm(std::vector<double>(10, 120.0));
  const auto one = section_durations(s, SectionMap{{{"All", 1, 10}}});
  CHECK(one.entries.size() == 1);
  CHECK(one.entries[0].second == 20.0);
  const auto two = section_durations(s, SectionMap{{{"A", 1, 4}, {"B", 5, 10}}});
  CHECK(two.entries[0] == std::pair<std::string, double>{"A", 8.0});
  CHECK(two.entries[1].second == 12.0);
  CHECK(two.total() == one.total());
}

TEST_CASE("section map must cover the series") {
  const auto s = from_bpm(std::vector<double>(10, 120.0));
  CHECK_THROWS_WITH(section_durations(s, SectionMap{{{"A", 1, 8}}}),
                    ContainsSubstring("bars 9-10"));
  CHECK_THROWS_WITH(section_durations(s, SectionMap{{{"A", 1, 12}}}),
                    ContainsSubstring("extends to bar 12"));
  CHECK_THROWS_AS(section_durations(s, SectionMap{}), domain_error);
}

TEST_CASE("additivity on random partitions") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> bpm(30.0, 220.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + g() % 400);
    for (double& x : v) x = bpm(g);
    const auto s = from_bpm(v, 3);
    SectionMap m;
    int start = 1;
    while (start <= static_cast<int>(v.size())) {
      const int end = std::min<int>(static_cast<int>(v.size()), start + static_cast<int>(g() % 60));
      m.sections.push_back({"s" + std::to_string(start), start, end});
      start = end + 1;
    }
    CHECK_THAT(section_durations(s, m).total(), WithinAbs(summary_stats(s).total_duration_s, 1e-6));
  }
}

TEST_CASE("whole series map") {
  const auto s = from_bpm({100, 110, 120});
  const auto m = whole_series_map(s);
  REQUIRE(m.size() == 1);
  CHECK(m.sections[0].name == "Movement");
  CHECK(m.sections[0].end_bar == 3);
}
