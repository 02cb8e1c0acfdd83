#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "unram/config.hpp"
#include "unram/corpus.hpp"
#include "unram/integrals.hpp"
#include "unram/types_builder.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// UNRAM_OUT_DIR is the one environment override: it relocates relative output paths
std::string output_path(const std::string& out) {
  const char* dir = std::getenv("UNRAM_OUT_DIR");
  if (!dir || out.empty() || out.front() == '/') return out;
  return std::string(dir) + "/" + out;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(output_path(out));
  if (!f) throw unram::ConfigError("cannot write " + out);
  f << text;
}

// elementary-function orbital integrals per second on the configured character
std::string bench(const unram::RunConfig& cfg) {
  using namespace unram;
  if (cfg.group != "SL2" && cfg.group != "GL2") throw ConfigError("bench runs the rank-one kernel: SL2 or GL2");
  ElementaryFunction phi(cfg.make_character(), cfg.r, cfg.cocharacter());
  auto classes = compact_torus_classes(phi.gl2(), phi.layer(cfg.window.N), 2);
  int64_t points = 0, evaluations = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& cls : classes)
    twisted_orbital_value(phi, {cls.m, cfg.cocharacter()}, cfg.window, cfg.threads, &points, &evaluations);
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << "classes " << classes.size() << "\nunipotent points " << points << "\ncoset evaluations " << evaluations
     << "\nseconds " << s << "\ncosets/second " << (s > 0 ? evaluations / s : 0) << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Types, base change and orbital integrals for unramified groups at desk scale"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path, out, verify_list, entity;
  uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "flat key-value configuration file")->required();
  app.add_option("--seed", seed, "random seed, overrides run.seed");
  app.add_option("--threads", threads, "worker threads, overrides run.threads");
  app.add_option("--out", out, "output file, overrides run.out");
  app.add_option("--verify", verify_list, "comma-separated verifications, overrides run.verify");

  auto* describe = app.add_subcommand("describe", "dump group, type, center or support data");
  describe->add_option("entity", entity, "group | type | center | support")->required();
  auto* build = app.add_subcommand("build", "build the type of the configured character");
  auto* verify = app.add_subcommand("verify", "run the selected verifications and write the report bundle");
  auto* bench_cmd = app.add_subcommand("bench", "time the orbital-integral kernel");

  CLI11_PARSE(app, argc, argv);

  try {
    unram::RunConfig cfg = unram::load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--threads")) cfg.threads = threads;
    if (app.count("--out")) cfg.out = out;
    if (app.count("--verify")) cfg.verify = split_list(verify_list);
    unram::validate(cfg);

    if (*describe) {
      emit(unram::describe(entity, cfg), cfg.out);
    } else if (*build) {
      emit(unram::type_report(unram::build_type(cfg.make_character())), cfg.out);
    } else if (*verify) {
      unram::ReportBundle bundle = unram::run(cfg);
      emit(bundle.serialize(), cfg.out);
      if (!cfg.out.empty()) std::cerr << (bundle.pass ? "all verifications passed\n" : "verification FAILED\n");
      return bundle.pass ? 0 : 1;
    } else if (*bench_cmd) {
      emit(bench(cfg), cfg.out);
    }
  } catch (const unram::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
