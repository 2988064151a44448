// Command-line front end: flag parsing and dispatch only; all numeric work
// lives in the library headers.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "ffm/cli.hpp"

namespace {

void add_common_flags(CLI::App* sub, ffm::RunConfig* cfg, std::string* config_path) {
  sub->set_help_flag("--help", "print help");
  sub->add_option("--q", cfg->q, "field cardinality (odd prime)");
  sub->add_option("--g", cfg->g, "genus; discriminants have degree 2g+1");
  sub->add_option("--n", cfg->n, "degree for prime-family runs (odd)");
  sub->add_option("--k", cfg->k, "moment order");
  sub->add_option("--x", cfg->x, "truncation degree override");
  sub->add_option("--dmax", cfg->dmax, "degree bound (series order / product truncation)");
  sub->add_option("--L", cfg->harmonic_cutoff, "harmonic sum cutoff");
  sub->add_option("--tol", cfg->tol, "root-circle tolerance");
  sub->add_option("--budget", cfg->budget, "max objects any enumeration may visit");
  sub->add_option("--threads", cfg->threads, "worker threads (0 = hardware)");
  sub->add_option("--out", cfg->out, "output path ('-' = stdout)");
  sub->add_option("--format", cfg->format, "csv | json");
  sub->add_option("--cache", cfg->cache, "L-polynomial cache file");
  sub->add_option("--config", *config_path, "key=value config file; flags win");
  sub->add_option("--f", cfg->f_text, "fixed polynomial, text format (e.g. q3:10)");
  sub->add_option("--r", cfg->r_text, "square-free part for harmonic sums");
  sub->add_option("--h", cfg->h_text, "square part for harmonic sums");
  sub->add_option("--method", cfg->series_method, "series path: euler | direct");
  sub->add_flag("--diagnostic", cfg->series_diagnostic,
                "emit the shell-sum ratio table instead of raw coefficients");
  sub->add_flag("--strict", cfg->strict, "nonzero exit when cache lines were rejected");
  sub->add_flag("--no-timestamp", cfg->no_timestamp,
                "omit timestamp and wall time for byte-stable output");
}

const char* const kCommands[] = {"lpoly", "moments", "holder",  "primes",
                                 "ortho", "charsum", "count",   "afe-check",
                                 "rh-check", "series", "constants", "harmonic"};

const char* const kConfigKeys[] = {"q", "g", "n", "k", "x", "dmax", "L",
                                   "tol", "budget", "threads", "out", "format",
                                   "cache", "f", "r", "h", "method", "strict",
                                   "no-timestamp"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact L-function moments over F_q[T]"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  ffm::RunConfig cfg;
  std::string config_path;
  std::vector<CLI::App*> subs;
  for (const char* name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    add_common_flags(sub, &cfg, &config_path);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return ffm::kValidationError;
  }

  CLI::App* active = nullptr;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) active = sub;
  }
  cfg.command = active->get_name();

  if (!config_path.empty()) {
    std::vector<std::string> given;
    for (const char* key : kConfigKeys) {
      if (active->count("--" + std::string(key)) > 0) given.push_back(key);
    }
    try {
      ffm::apply_config(cfg, ffm::parse_config_file(config_path), given);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return ffm::kValidationError;
    }
  }

  return ffm::run_command_mapped(cfg, std::cout, std::cerr);
}
