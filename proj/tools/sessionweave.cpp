#include "sessionweave/cli.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#ifdef _WIN32
#else
#include <unistd.h>
#endif

namespace {

bool want_color() {
  if (std::getenv("SESSIONWEAVE_NO_COLOR")) return false;
  return isatty(fileno(stdout));
}

void add_common(CLI::App* cmd, sw::cli::RunConfig& cfg, std::string& format) {
  cmd->add_option("--guard-judgements", cfg.guard.max_judgements,
                  "max distinct judgements per typecheck");
  cmd->add_option("--guard-queue", cfg.guard.max_queue, "max queue length per typecheck");
  cmd->add_option("--depth,-k", cfg.bound.max_depth, "exploration depth bound");
  cmd->add_option("--max-states", cfg.bound.max_states, "exploration state bound");
  cmd->add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sessionweave: typechecking and verification of asynchronous "
               "multiparty sessions with input races"};
  app.require_subcommand(1);

  sw::cli::RunConfig cfg;
  std::string format = "text";

  CLI::App* check = app.add_subcommand("check", "typecheck a session against its global type");
  check->add_option("file", cfg.input, "input .mps file")->required();
  check->add_flag("--derivation", cfg.emit_derivation, "emit the derivation (json)");
  add_common(check, cfg, format);

  CLI::App* simulate = app.add_subcommand("simulate", "explore the session transition system");
  simulate->add_option("file", cfg.input, "input .mps file")->required();
  simulate->add_flag("--one", cfg.one, "print one deterministic maximal trace");
  simulate->add_flag("--types", cfg.types, "step the type configuration instead");
  add_common(simulate, cfg, format);

  CLI::App* verify = app.add_subcommand("verify", "bounded metatheory checks");
  verify->add_option("file", cfg.input, "input .mps file (or corpus dir with --corpus)")
      ->required();
  verify->add_flag("--corpus", cfg.corpus, "treat the input as a corpus directory");
  verify->add_option("--props", cfg.properties, "subset of: sr sf lf races")
      ->check(CLI::IsMember({"sr", "sf", "lf", "races"}));
  add_common(verify, cfg, format);

  CLI::App* analyze = app.add_subcommand("analyze", "players, depths and boundedness");
  analyze->add_option("file", cfg.input, "input .mps file")->required();
  add_common(analyze, cfg, format);

  CLI11_PARSE(app, argc, argv);
  cfg.json = format == "json";
  cfg.color = !cfg.json && want_color();

  if (check->parsed()) return sw::cli::run_check(cfg, std::cout, std::cerr);
  if (simulate->parsed()) return sw::cli::run_simulate(cfg, std::cout, std::cerr);
  if (verify->parsed()) return sw::cli::run_verify(cfg, std::cout, std::cerr);
  if (analyze->parsed()) return sw::cli::run_analyze(cfg, std::cout, std::cerr);
  return 3;
}
