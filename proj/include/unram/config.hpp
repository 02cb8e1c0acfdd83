#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "unram/characters.hpp"
#include "unram/integrals.hpp"

namespace unram {

struct ConfigError : std::invalid_argument { using std::invalid_argument::invalid_argument; };

/*
 * Flat key-value configuration.  "[section]" lines prefix the keys that
 * follow, '#' starts a comment:
 *
 *   [group]      name, p
 *   [character]  name (corpus entry or "trivial"), level, coords "A:B1,B2;A:..."
 *   [run]        N, r, nu "1,-1", window "N,B,c", verify "volume,matching",
 *                seed, threads, out
 *
 * A corpus character fixes group and p; giving them as well must agree.
 */
struct RunConfig {
  std::string group;
  int p = 0;
  int N = 6;
  int r = 1;
  std::string character = "trivial";
  int level = 1;
  std::vector<CoordSpec> coords;
  IVec nu;  // empty: alpha^vee in rank one, the minimal regular dominant cocharacter otherwise
  Window window{6, 0, 0};
  std::vector<std::string> verify;
  std::string out;
  uint64_t seed = 20240611;
  int threads = 1;

  SmoothCharacter make_character() const;
  IVec cocharacter() const;
  // one "key = value" line per field in a fixed order; the config hash reads this
  std::string canonical() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// p does not divide |W_E|, precision and r within range; ConfigError otherwise
void validate(const RunConfig& cfg);

// verification names in the order run executes them
const std::vector<std::string>& verification_names();

struct VerificationReport {
  std::string name;
  std::string identity;  // what a failure refutes
  bool pass = false;
  std::vector<std::string> lines;
};

struct ReportBundle {
  std::string config_hash;
  std::string version;
  std::vector<VerificationReport> reports;
  bool pass = true;
  std::string serialize() const;  // JSON, keys sorted
};

ReportBundle run(const RunConfig& cfg);

// entity: group, type, center or support
std::string describe(const std::string& entity, const RunConfig& cfg);

}  // namespace unram
