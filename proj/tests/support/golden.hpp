#pragma once

// The chart invocations pinned by golden files. Shared by the golden test,
// the acceptance run and the regeneration tool so the three cannot drift.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tempovis/cli.hpp"

namespace golden {

struct Invocation {
  std::string golden;                // file name under tests/golden
  std::vector<std::string> args;     // after the program name, before --out
};

inline const std::vector<Invocation>& invocations() {
  static const std::vector<Invocation> list{
      {"tempograph.svg", {"tempograph", "--input", "@two_recordings.csv", "--sections",
                          "@op5n1_sections.csv", "--meta", "@meta.csv"}},
      {"multiples.svg", {"multiples", "--input", "@two_recordings.csv", "--meta", "@meta.csv"}},
      {"histogram.svg", {"histogram", "--input", "@two_recordings.csv", "--meta", "@meta.csv",
                         "--seed", "0"}},
      {"ridgeline.svg", {"ridgeline", "--input", "@two_recordings.csv", "--meta", "@meta.csv"}},
      {"stackedbar.svg", {"stackedbar", "--input", "@two_recordings.csv", "--sections",
                          "@op5n1_sections.csv", "--meta", "@meta.csv"}},
      {"combo.svg", {"combo", "--input", "@two_recordings.csv", "--meta", "@meta.csv", "--bars",
                     "35-400"}},
      {"panel.svg", {"panel", "--input", "@two_recordings.csv", "--sections",
                     "@op5n1_sections.csv", "--meta", "@meta.csv", "--seed", "0", "--bars",
                     "35-400"}},
  };
  return list;
}

/// Runs one invocation in-process; '@name' arguments resolve against data_dir.
inline int run(const Invocation& inv, const std::filesystem::path& data_dir,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args{"tempovis"};
  for (const auto& a : inv.args) {
    args.push_back(!a.empty() && a[0] == '@' ? (data_dir / a.substr(1)).string() : a);
  }
  args.push_back("--out");
  args.push_back(out_path);
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return tempovis::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace golden
