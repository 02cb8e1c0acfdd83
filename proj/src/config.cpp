#include "unram/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "unram/bernstein.hpp"
#include "unram/census.hpp"
#include "unram/corpus.hpp"
#include "unram/types_builder.hpp"
#include "unram/verify.hpp"

namespace unram {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

int64_t to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an integer: '" + v + "'");
  }
}

IVec to_ivec(const std::string& key, const std::string& v) {
  IVec out;
  if (trim(v).empty()) return out;
  for (const auto& x : split(v, ',')) out.push_back(static_cast<int>(to_int(key, x)));
  return out;
}

std::string ivec_text(const IVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// "A:B1,B2;A:..." one coordinate per ';'
std::vector<CoordSpec> to_coords(const std::string& v) {
  std::vector<CoordSpec> out;
  for (const auto& part : split(v, ';')) {
    auto colon = part.find(':');
    CoordSpec c;
    c.A = to_int("character.coords", trim(part.substr(0, colon)));
    if (colon != std::string::npos)
      for (int b : to_ivec("character.coords", part.substr(colon + 1))) c.B.push_back(b);
    out.push_back(c);
  }
  return out;
}

std::string coords_text(const std::vector<CoordSpec>& coords) {
  std::string s;
  for (size_t i = 0; i < coords.size(); ++i) {
    s += (i ? ";" : "") + std::to_string(coords[i].A) + ":";
    for (size_t k = 0; k < coords[i].B.size(); ++k) s += (k ? "," : "") + std::to_string(coords[i].B[k]);
  }
  return s;
}

std::string fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool is_corpus_name(const std::string& name) {
  for (const auto& c : character_corpus())
    if (c.name == name) return true;
  return false;
}

SmoothCharacter character_at(const RunConfig& cfg, int N) {
  RunConfig c = cfg;
  c.N = N;
  return c.make_character();
}

bool rank_one(const RunConfig& cfg) { return cfg.group == "SL2" || cfg.group == "GL2"; }

void need_rank_one(const RunConfig& cfg, const std::string& what) {
  if (!rank_one(cfg)) throw ConfigError(what + " is implemented for SL2 and GL2, not " + cfg.group);
}

struct Report {
  VerificationReport& rep;
  void check(bool ok, const std::string& s) {
    rep.pass = rep.pass && ok;
    rep.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + s);
  }
};

using Verification = std::function<void(const RunConfig&, Report&)>;

void v_types(const RunConfig& cfg, Report& out) {
  auto chi = cfg.make_character();
  const RootDatum& d = chi.datum();
  TypeDatum t = build_type(chi);
  bool sums = true;
  for (int a = 0; a < d.num_roots(); ++a) sums = sums && t.f.f[a] + t.f.f[d.neg(a)] == t.f.cond[a];
  out.check(sums, "f(a) + f(-a) = cond(a) on every root");
  out.check(is_concave(d, t.f.f), "f is concave");
  if (character_depth(chi) == 0) out.check(t.is_iwahori(), "depth zero gives J = I");
}

void v_relations(const RunConfig& cfg, Report& out) {
  const RootDatum& d = build_root_datum(cfg.group);
  RelationReport rep = chevalley_relations(d, RingSpec::get(cfg.p, base_degree(d), 4), 200, cfg.seed);
  out.check(rep.pass, rep.str());
}

void v_lemma(const RunConfig& cfg, Report& out) {
  LemmaReport rep = commutator_lemma(character_at(cfg, std::max(cfg.N, 8)), 50, cfg.seed);
  out.check(rep.pass, rep.str());
}

void v_axiom(const RunConfig& cfg, Report& out) {
  auto chi = cfg.make_character();
  WeylGroup W(chi.datum());
  for (int w : W.min_coset_reps(0)) {
    AxiomCensus rep = verify_axiom_u(chi, w);
    out.check(rep.pass, "w=" + std::to_string(w) + " cosets=" + std::to_string(rep.cosets) +
                            " satisfying=" + std::to_string(rep.satisfying) + " failing=" +
                            std::to_string(rep.failing) + " constructive=" + std::to_string(rep.constructive) +
                            (rep.stable ? " stable" : " UNSTABLE"));
  }
}

void v_support(const RunConfig& cfg, Report& out) {
  need_rank_one(cfg, "the support census");
  SupportCensus rep = support_census(cfg.make_character(), 2, 7);
  out.check(rep.pass, rep.str());
}

void v_volume(const RunConfig& cfg, Report& out) {
  VolumeReport rep = volume_check(cfg.make_character(), cfg.cocharacter(), cfg.r, cfg.group == "SL2");
  out.check(rep.pass && (rep.full < 0 || rep.full == rep.predicted), rep.str());
}

void v_orbital(const RunConfig& cfg, Report& out) {
  need_rank_one(cfg, "the orbital integral check");
  ElementaryFunction phi(cfg.make_character(), cfg.r, cfg.cocharacter());
  int64_t equal = 0, n = 0;
  for (const auto& cls : compact_torus_classes(phi.gl2(), phi.layer(cfg.window.N), 2)) {
    TorusClass delta{cls.m, cfg.cocharacter()};
    OrbitalReport rep = brute_twisted_orbital(phi, delta, cfg.window, cfg.threads);
    ++n;
    if (rep.stable && rep.value == closed_form_orbital(phi, delta)) ++equal;
    else out.check(false, rep.str());
  }
  out.check(equal == n, "TO = chi_r^{-1}(m) on " + std::to_string(equal) + "/" + std::to_string(n) + " classes");
}

void v_matching(const RunConfig& cfg, Report& out) {
  need_rank_one(cfg, "matching");
  MatchingReport rep = verify_matching(cfg.make_character(), cfg.cocharacter(), cfg.r, cfg.window, cfg.threads);
  std::istringstream lines(rep.str());
  std::string first;
  std::getline(lines, first);
  out.check(rep.pass, std::to_string(rep.rows.size()) + " classes, " + std::to_string(rep.non_norm.size()) +
                          " non-norm classes: " + first);
}

void v_descent(const RunConfig& cfg, Report& out) {
  if (cfg.group != "GL2") throw ConfigError("descent is implemented for GL2, not " + cfg.group);
  auto chi = cfg.make_character();
  const RingSpec& L = RingSpec::get(cfg.p, cfg.r, cfg.N);
  int checked = 0;
  for (const auto& cls : compact_torus_classes(false, L, 2)) {
    if (checked == 6) break;
    try {
      DescentReport rep = verify_descent(chi, cfg.r, {TElem(L, 1), cls.m[0]}, cfg.N, cfg.threads);
      out.check(rep.pass, rep.str());
      ++checked;
    } catch (const NotSemisimpleNorm&) {
    } catch (const WindowTooSmall&) {
    }
  }
}

void v_index(const RunConfig& cfg, Report& out) {
  if (cfg.group != "SL2") throw ConfigError("the [I:J] comparison is implemented for SL2, not " + cfg.group);
  IndexComparison rep = compare_index_unit(cfg.make_character(), cfg.r);
  out.check(rep.pass && rep.index_IJ == RingSpec::get(cfg.p, 1, 2).q(), rep.str());
}

void v_base_change(const RunConfig& cfg, Report& out) {
  if (cfg.r < 2) throw ConfigError("base change needs r >= 2");
  auto chi = character_at(cfg, 4);
  auto chi_r = chi.pullback_norm(cfg.r);
  const RootDatum& d = chi.datum();
  int n = static_cast<int>(d.rel_basis.size());
  WeylGroup W(d);
  auto rel = relative_weyl(W);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> ex(-2, 2), co(-3, 3), ord(1, 6), num(1, 5);
  int ok = 0;
  const int trials = 20;
  for (int i = 0; i < trials; ++i) {
    LaurentPoly poly(n);
    for (int t = 0; t < 3; ++t) {
      IVec e(n);
      for (int& x : e) x = ex(rng);
      int M = ord(rng);
      poly.add_term(e, Cyclo::root(RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))) *
                           mpq_class(co(rng)));
    }
    CenterElement Z = CenterElement::symmetrize(chi_r, poly);
    std::vector<ScaledRoot> eta;
    for (int k = 0; k < n; ++k) {
      int M = ord(rng) * 2;
      eta.push_back({mpq_class(num(rng), num(rng)), RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))});
    }
    int w = rel[std::uniform_int_distribution<size_t>(0, rel.size() - 1)(rng)];
    ExtendedCharacter xi = ExtendedCharacter(chi, eta).weyl_act(W, w);
    if (action_scalar(base_change_br(Z, chi, cfg.r), xi) == action_scalar(Z, xi.compose_norm(cfg.r))) ++ok;
  }
  out.check(ok == trials, "action_scalar(b_r Z, xi) = action_scalar(Z, xi o N_r) on " + std::to_string(ok) + "/" +
                              std::to_string(trials) + " random pairs");
}

struct Entry {
  std::string name;
  std::string identity;
  Verification fn;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"types", "type construction (concave depths, depth-zero Iwahori)", v_types},
      {"relations", "Chevalley commutator relations", v_relations},
      {"lemma", "commutator lemma closure", v_lemma},
      {"axiom-u", "axiom for u", v_axiom},
      {"support", "Hecke support of the type", v_support},
      {"volume", "volume identity", v_volume},
      {"orbital", "closed-form orbital integrals", v_orbital},
      {"matching", "matching of stable orbital integrals", v_matching},
      {"descent", "descent formula for the unit", v_descent},
      {"index", "[I:J] comparison", v_index},
      {"base-change", "base-change contract", v_base_change},
  };
  return e;
}

int criterion_id(const std::string& name) {
  if (name.size() < 2 || name[0] != 'c') return 0;
  try {
    int id = std::stoi(name.substr(1));
    return id >= 1 && id <= kCriteria && name == "c" + std::to_string(id) ? id : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

SmoothCharacter RunConfig::make_character() const {
  const RootDatum& d = build_root_datum(group);
  const RingSpec& ring = RingSpec::get(p, base_degree(d), N);
  if (is_corpus_name(character)) {
    const CorpusEntry& c = corpus_entry(character);
    return SmoothCharacter::from_coords(d, ring, c.level, c.coords);
  }
  if (coords.empty()) return SmoothCharacter::trivial(d, ring);
  return SmoothCharacter::from_coords(d, ring, level, coords);
}

IVec RunConfig::cocharacter() const {
  if (!nu.empty()) return nu;
  if (group == "SL2") return {1};
  if (group == "GL2") return {1, -1};
  return minimal_regular_dominant(build_root_datum(group));
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  std::string verify_list;
  for (size_t i = 0; i < verify.size(); ++i) verify_list += (i ? "," : "") + verify[i];
  os << "group.name = " << group << "\ngroup.p = " << p << "\ncharacter.name = " << character
     << "\ncharacter.level = " << level << "\ncharacter.coords = " << coords_text(coords) << "\nrun.N = " << N
     << "\nrun.r = " << r << "\nrun.nu = " << ivec_text(cocharacter()) << "\nrun.window = " << window.N << ","
     << window.B << "," << window.c << "\nrun.verify = " << verify_list << "\nrun.seed = " << seed << "\n";
  return os.str();
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = trim(line.substr(eq + 1));
  }

  bool group_given = false, p_given = false;
  for (const auto& [key, v] : kv) {
    if (key == "group.name") cfg.group = v, group_given = true;
    else if (key == "group.p") cfg.p = static_cast<int>(to_int(key, v)), p_given = true;
    else if (key == "character.name") cfg.character = v;
    else if (key == "character.level") cfg.level = static_cast<int>(to_int(key, v));
    else if (key == "character.coords") cfg.coords = to_coords(v);
    else if (key == "run.N") cfg.N = static_cast<int>(to_int(key, v));
    else if (key == "run.r") cfg.r = static_cast<int>(to_int(key, v));
    else if (key == "run.nu") cfg.nu = to_ivec(key, v);
    else if (key == "run.window") {
      IVec w = to_ivec(key, v);
      if (w.size() != 3) throw ConfigError("run.window needs N,B,c");
      cfg.window = {w[0], w[1], w[2]};
    } else if (key == "run.verify") {
      cfg.verify.clear();
      for (const auto& name : split(v, ','))
        if (!name.empty()) cfg.verify.push_back(name);
    } else if (key == "run.seed") cfg.seed = static_cast<uint64_t>(to_int(key, v));
    else if (key == "run.threads") cfg.threads = static_cast<int>(to_int(key, v));
    else if (key == "run.out") cfg.out = v;
    else throw ConfigError("unknown key " + key);
  }

  if (is_corpus_name(cfg.character)) {
    const CorpusEntry& c = corpus_entry(cfg.character);
    if (group_given && cfg.group != c.group)
      throw ConfigError("character " + c.name + " lives on " + c.group + ", not " + cfg.group);
    if (p_given && cfg.p != c.p)
      throw ConfigError("character " + c.name + " is defined at p = " + std::to_string(c.p));
    cfg.group = c.group;
    cfg.p = c.p;
    cfg.level = c.level;
    cfg.coords = c.coords;
  } else if (cfg.character != "trivial" && cfg.character != "custom") {
    throw ConfigError("unknown character " + cfg.character + " (corpus name, trivial or custom)");
  }
  if (cfg.group.empty()) throw ConfigError("group.name is required");
  if (cfg.p == 0) throw ConfigError("group.p is required");
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
  auto names = catalog_names();
  if (std::find(names.begin(), names.end(), cfg.group) == names.end())
    throw ConfigError("unknown group " + cfg.group);
  const RootDatum& d = build_root_datum(cfg.group);
  if (cfg.p < 2) throw ConfigError("p must be a prime");
  for (int k = 2; k * k <= cfg.p; ++k)
    if (cfg.p % k == 0) throw ConfigError("p = " + std::to_string(cfg.p) + " is not prime");
  if (!prime_allowed(d, cfg.p))
    throw ConfigError("p = " + std::to_string(cfg.p) + " divides |W_E| = " + std::to_string(d.weyl_order) + " for " +
                      cfg.group);
  if (cfg.r < 1 || cfg.r > 3) throw ConfigError("r must be 1, 2 or 3");
  if (cfg.N < cfg.level + 3) throw ConfigError("N must be at least level + 3");
  if (cfg.N * std::log2(static_cast<double>(cfg.p)) >= 29) throw ConfigError("p^N exceeds the supported precision");
  if (!cfg.nu.empty() && static_cast<int>(cfg.nu.size()) != d.rank)
    throw ConfigError("nu needs " + std::to_string(d.rank) + " coordinates");
  if (cfg.threads < 1) throw ConfigError("threads must be positive");
  for (const auto& v : cfg.verify) {
    bool known = criterion_id(v) != 0;
    for (const auto& e : entries()) known = known || e.name == v;
    if (!known) throw ConfigError("unknown verification " + v);
  }
}

const std::vector<std::string>& verification_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : entries()) n.push_back(e.name);
    for (int k = 1; k <= kCriteria; ++k) n.push_back("c" + std::to_string(k));
    return n;
  }();
  return names;
}

std::string ReportBundle::serialize() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["pass"] = pass;
  j["reports"] = nlohmann::json::array();
  int passed = 0;
  for (const auto& r : reports) {
    j["reports"].push_back({{"name", r.name}, {"identity", r.identity}, {"pass", r.pass}, {"lines", r.lines}});
    passed += r.pass;
  }
  j["summary"] = std::to_string(passed) + "/" + std::to_string(reports.size()) + " passed";
  return j.dump(2) + "\n";
}

ReportBundle run(const RunConfig& cfg) {
  validate(cfg);
  ReportBundle bundle;
  bundle.config_hash = fnv1a(cfg.canonical());
  bundle.version = kVersion;
  for (const auto& name : verification_names()) {
    if (std::find(cfg.verify.begin(), cfg.verify.end(), name) == cfg.verify.end()) continue;
    VerificationReport rep;
    rep.name = name;
    rep.pass = true;
    if (int id = criterion_id(name)) {
      CriterionResult c = run_criterion(id, {cfg.threads, cfg.seed});
      rep.identity = c.name;
      rep.pass = c.pass;
      rep.lines = c.lines;
    } else {
      auto it = std::find_if(entries().begin(), entries().end(), [&](const Entry& e) { return e.name == name; });
      rep.identity = it->identity;
      Report out{rep};
      try {
        it->fn(cfg, out);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw std::runtime_error(name + " (" + it->identity + "): " + e.what());
      }
    }
    if (!rep.pass) rep.lines.push_back("refuted: " + rep.identity);
    bundle.pass = bundle.pass && rep.pass;
    bundle.reports.push_back(std::move(rep));
  }
  return bundle;
}

std::string describe(const std::string& entity, const RunConfig& cfg) {
  validate(cfg);
  const RootDatum& d = build_root_datum(cfg.group);
  std::ostringstream os;
  if (entity == "group") {
    os << "group " << d.name << " rank " << d.rank << " |W| " << d.weyl_order << (d.is_split() ? " split" : " quasi-split")
       << "\npositive roots " << d.npos << "\n";
    for (int a = 0; a < d.npos; ++a)
      os << "  " << a << " root (" << ivec_text(d.roots[a]) << ") coroot (" << ivec_text(d.coroots[a]) << ") height "
         << d.height[a] << "\n";
    return os.str();
  }
  TypeDatum t = build_type(cfg.make_character());
  if (entity == "type") {
    os << type_report(t);
    if (t.is_iwahori()) os << "J = Iwahori\n";
    return os.str();
  }
  if (entity == "center") {
    os << "W0chi order " << t.stabilizer.finite.size() << "\nrelative Weyl group order "
       << relative_weyl(*t.weyl).size() << "\nX_*(A) rank " << d.rel_basis.size() << "\n";
    return os.str();
  }
  if (entity == "support") {
    os << "W~_0chi = X_*(A) x W0chi, W0chi order " << t.stabilizer.finite.size() << "\n";
    if (t.stabilizer.finite.size() == 1) os << "translation-only\n";
    for (int g : t.stabilizer.generators) {
      os << "generator";
      for (int s : (*t.weyl)[g].word) os << " s" << s;
      os << "\n";
    }
    return os.str();
  }
  throw ConfigError("describe takes group, type, center or support, not " + entity);
}

}  // namespace unram
