// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_TESTS_SUPPORT_FIXTURES_HPP_
#define METALAB_TESTS_SUPPORT_FIXTURES_HPP_

// Pinned regression constants in tests/fixtures/pinned.txt (key=value lines).
// With METALAB_PIN_FIXTURES=1 in the environment, measured values are written
// back instead of compared.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace metalab::fixtures {

inline std::string fixture_path() { return std::string(METALAB_FIXTURE_DIR) + "/pinned.txt"; }

inline std::map<std::string, double> load_fixtures() {
  std::map<std::string, double> out;
  std::ifstream in(fixture_path());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
  }
  return out;
}

inline bool pinning() {
  const char* env = std::getenv("METALAB_PIN_FIXTURES");
  return env != nullptr && std::string(env) == "1";
}

/// Returns the pinned value for key; in pinning mode stores `measured` first.
inline std::optional<double> pinned(const std::string& key, double measured) {
  auto all = load_fixtures();
  if (pinning()) {
    all[key] = measured;
    std::ofstream out(fixture_path());
    out << "# metalab pinned regression constants (key=value)\n" << std::setprecision(17);
    for (const auto& [k, v] : all) out << k << '=' << v << '\n';
  }
  const auto it = all.find(key);
  if (it == all.end()) return std::nullopt;
  return it->second;
}

}  // namespace metalab::fixtures

#endif  // METALAB_TESTS_SUPPORT_FIXTURES_HPP_
